#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "seqattract/bipolar.hpp"

namespace seqattract {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Rng = std::mt19937_64;

/// Recurrent network of N visible neurons with all-to-all weights.
/// weights(i, j) is the synapse from neuron j to neuron i.
class VisibleOnlyNetwork {
 public:
  explicit VisibleOnlyNetwork(RowMatrix weights, Eigen::VectorXd bias = {});
  static VisibleOnlyNetwork zeros(std::size_t n);

  std::size_t dim() const { return static_cast<std::size_t>(weights_.rows()); }
  const RowMatrix& weights() const { return weights_; }
  RowMatrix& weights() { return weights_; }
  const Eigen::VectorXd& bias() const { return bias_; }
  Eigen::VectorXd& bias() { return bias_; }

 private:
  RowMatrix weights_;
  Eigen::VectorXd bias_;
};

/// Bipartite recurrent network: N visible and M hidden binary neurons.
///
///   hidden_weights   M x N   visible -> hidden, learned
///   visible_weights  N x M   hidden -> visible, learned
///   projection       M x N   fixed random matrix producing hidden targets
///
/// The projection never changes after construction. Biases default to zero;
/// the one-hot construction and the sparse-input variant set them.
class HiddenNetwork {
 public:
  HiddenNetwork(RowMatrix hidden_weights, RowMatrix visible_weights, RowMatrix projection,
                Eigen::VectorXd hidden_bias = {}, Eigen::VectorXd visible_bias = {});

  static HiddenNetwork zeros(std::size_t n, std::size_t m);

  /// Draws hidden and visible weights i.i.d. N(0, init_std^2) and the
  /// projection i.i.d. N(0, projection_std^2), in that order, from rng.
  /// init_std = 0 yields exactly zero learned weights.
  static HiddenNetwork random(std::size_t n, std::size_t m, double init_std, Rng& rng,
                              double projection_std = 1.0);

  std::size_t visible_dim() const { return n_; }
  std::size_t hidden_dim() const { return m_; }

  const RowMatrix& hidden_weights() const { return hidden_weights_; }
  RowMatrix& hidden_weights() { return hidden_weights_; }
  const RowMatrix& visible_weights() const { return visible_weights_; }
  RowMatrix& visible_weights() { return visible_weights_; }
  const RowMatrix& projection() const { return projection_; }
  const Eigen::VectorXd& hidden_bias() const { return hidden_bias_; }
  Eigen::VectorXd& hidden_bias() { return hidden_bias_; }
  const Eigen::VectorXd& visible_bias() const { return visible_bias_; }
  Eigen::VectorXd& visible_bias() { return visible_bias_; }

  bool all_finite() const;

  friend bool operator==(const HiddenNetwork& a, const HiddenNetwork& b);

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  RowMatrix hidden_weights_;
  RowMatrix visible_weights_;
  RowMatrix projection_;
  Eigen::VectorXd hidden_bias_;
  Eigen::VectorXd visible_bias_;
};

struct StepResult {
  BipolarVector visible;
  BipolarVector hidden;
};

/// Visible states xi(1), xi(2), ... of a free run; hidden states are kept
/// only when requested (hidden_states[t] is the hidden response to states[t]).
struct Trajectory {
  std::vector<BipolarVector> states;
  std::optional<std::vector<BipolarVector>> hidden_states;
};

BipolarVector visible_only_step(const VisibleOnlyNetwork& net, const BipolarVector& xi);

/// Hidden response sign(U xi + b_hidden).
BipolarVector hidden_step(const HiddenNetwork& net, const BipolarVector& xi);

/// Visible response sign(V zeta + b_visible) to a hidden state.
BipolarVector visible_update(const HiddenNetwork& net, const BipolarVector& zeta);

StepResult network_step(const HiddenNetwork& net, const BipolarVector& xi);

/// Iterates network_step `steps` times from init; the result holds
/// steps + 1 visible states, starting with init.
Trajectory run_free(const HiddenNetwork& net, const BipolarVector& init, std::size_t steps,
                    bool record_hidden = false);

/// Smallest tau >= 0 with states[tau + t] == target[t] for every t of the
/// target (0-based here; with 1-based time this is xi(tau + t) = x(t)).
std::optional<std::size_t> detect_alignment(const Trajectory& traj, const PatternSequence& target);

}  // namespace seqattract
