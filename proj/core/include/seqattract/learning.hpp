#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seqattract/bipolar.hpp"
#include "seqattract/dynamics.hpp"

namespace seqattract {

struct Hyperparams {
  double eta = 1e-3;        // learning rate
  double kappa = 1.0;       // required margin
  std::size_t epochs = 500;
  std::uint64_t seed = 0;
  double init_std = 1e-3;   // std of the Gaussian weight initialisation
  double theta = 0.0;       // threshold subtracted from projected targets

  /// Throws PreconditionError unless eta > 0, kappa > 0, epochs >= 1,
  /// init_std >= 0 and theta >= 0 (all finite).
  void validate() const;
};

/// Which hidden response the visible-weight update reads within one pair.
enum class HiddenReadout {
  AfterUpdate,   // y from the hidden weights already updated on this pair
  BeforeUpdate,  // y from the hidden weights as they were before the pair
};

struct TrainOptions {
  bool stop_when_converged = false;
  HiddenReadout readout = HiddenReadout::AfterUpdate;
  /// Learn both bias vectors as weights from a clamped +1 input.
  bool learn_bias = false;
};

struct EpochErrors {
  double hidden_error = 0.0;   // (1/M) * number of violated hidden margins
  double visible_error = 0.0;  // (1/N) * number of violated visible margins
  std::size_t epoch_index = 0; // 1-based
};

struct TrainingLog {
  std::vector<EpochErrors> per_epoch;
  /// First epoch (1-based) in which no margin was violated.
  std::optional<std::size_t> converged_epoch;
  /// Number of weight updates applied to each hidden / visible row.
  std::vector<std::size_t> hidden_row_updates;
  std::vector<std::size_t> visible_row_updates;
};

/// Error indicators of one training pair: 1 where the margin was violated
/// before the update (and the row was therefore updated).
struct PairErrors {
  std::vector<std::uint8_t> hidden;
  std::vector<std::uint8_t> visible;
};

/// Hidden target sign(P x_next - theta).
BipolarVector project_target(const RowMatrix& projection, const BipolarVector& x_next, double theta = 0.0);

/// Margin-perceptron step on the hidden weights toward the projected target
/// of x_next. Every row whose margin z_i (U_i x_t + b_i) is below kappa
/// (ties included) moves by eta z_i x_t. Returns the per-row violation
/// indicators computed before the update. The projection and the visible
/// weights are not touched.
std::vector<std::uint8_t> update_hidden_weights(HiddenNetwork& net, const BipolarVector& x_t,
                                                const BipolarVector& x_next, const Hyperparams& hp,
                                                bool learn_bias = false);

/// Margin-perceptron step on the visible weights: inputs are the current
/// hidden response y = sign(U x_t + b), targets are x_next.
std::vector<std::uint8_t> update_visible_weights(HiddenNetwork& net, const BipolarVector& x_t,
                                                 const BipolarVector& x_next, const Hyperparams& hp,
                                                 bool learn_bias = false);

/// Hidden update then visible update on a single transition.
PairErrors train_pair(HiddenNetwork& net, const BipolarVector& x_t, const BipolarVector& x_next,
                      const Hyperparams& hp, const TrainOptions& opts = {});

/// Joint training of hidden and visible weights: hp.epochs passes over every
/// successive pair of every sequence, in dataset order.
TrainingLog train(HiddenNetwork& net, std::span<const PatternSequence> sequences, const Hyperparams& hp,
                  const TrainOptions& opts = {});

/// Same protocol with the hidden weights frozen; only the visible weights
/// learn, from the fixed hidden responses.
TrainingLog train_visible_only(HiddenNetwork& net, std::span<const PatternSequence> sequences,
                               const Hyperparams& hp, const TrainOptions& opts = {});

/// Replaces the visible weights by the temporal asymmetric Hebbian sum
/// V_ji = sum_t x_j(t+1) y_i(t) with y(t) the hidden response to x(t).
void hebbian_visible_weights(HiddenNetwork& net, std::span<const PatternSequence> sequences);

struct PerceptronResult {
  bool converged = false;
  std::size_t epochs_used = 0;
};

/// Margin perceptron on a visible-only network: every neuron learns to map
/// x(t) to x_i(t+1). Converges iff an epoch passes without a violated margin.
/// With learn_bias the bias is trained as a weight from a clamped +1 input.
PerceptronResult perceptron_train_visible_only(VisibleOnlyNetwork& net, const PatternSequence& sequence,
                                               double eta, double kappa, std::size_t max_epochs,
                                               bool learn_bias = true);

/// Hidden response with an extra threshold: sign(U xi + b - theta).
BipolarVector hidden_step_sparse(const HiddenNetwork& net, const BipolarVector& xi, double theta);

/// Turns a network into its sparse-input variant by lowering every hidden
/// bias by theta, so that ordinary dynamics use sign(U xi - theta).
void apply_hidden_threshold(HiddenNetwork& net, double theta);

/// One-hot network that generates `sequence` exactly: M = T - 1 hidden units,
/// hidden weights are the patterns x(1..T-1) with bias -N, visible weights
/// are the successors x(2..T) with bias sum_{t>=2} x(t).
/// Throws PreconditionError naming colliding indices if two patterns other
/// than the first and last coincide, or if the sequence has one pattern.
HiddenNetwork construct_one_hot(const PatternSequence& sequence);

}  // namespace seqattract
