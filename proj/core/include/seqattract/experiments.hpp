#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqattract/bipolar.hpp"
#include "seqattract/dynamics.hpp"
#include "seqattract/learning.hpp"

namespace seqattract {

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

/// Derives an independent 64-bit seed from a master seed and a list of
/// integer coordinates (stream id, grid value, trial index, ...). Uses the
/// SplitMix64 finaliser, so nearby inputs give unrelated outputs.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords);

/// Stream ids for derive_seed. A trial's sequence, initial weights and
/// retrieval noise come from separate streams so that methods compared on
/// the same trial see identical data.
enum class SeedStream : std::uint64_t {
  Sequence = 1,
  Init = 2,
  Noise = 3,
  FixedHidden = 4,
  Projection = 5,
  Probe = 6,
};

// ---------------------------------------------------------------------------
// Data generation and retrieval
// ---------------------------------------------------------------------------

/// Periodic sequence of T patterns in {-1,+1}^N: x(1..T-1) drawn uniformly
/// and redrawn on collision with an earlier pattern, x(T) = x(1).
/// Throws PreconditionError when T < 2 or T - 1 > 2^N.
PatternSequence gen_random_periodic_sequence(std::size_t n, std::size_t t, Rng& rng);

/// Flips exactly k distinct entries chosen uniformly without replacement.
BipolarVector salt_pepper(const BipolarVector& x, std::size_t k, Rng& rng);

struct TrialOutcome {
  bool success = false;
  std::optional<std::size_t> tau;
  std::size_t flips_applied = 0;
  std::uint64_t seed = 0;
};

/// Default free-run length used for retrieval: 2T + 10 steps.
std::size_t default_max_steps(std::size_t period);

/// Starts the network from x(1) with k flipped entries, runs max_steps steps
/// (2T + 10 when absent) and reports whether the full sequence appears.
/// `seed` seeds the noise and is echoed in the outcome.
TrialOutcome retrieval_trial(const HiddenNetwork& net, const PatternSequence& sequence, std::size_t k_flips,
                             std::optional<std::size_t> max_steps, std::uint64_t seed,
                             Trajectory* trajectory_out = nullptr);

// ---------------------------------------------------------------------------
// Methods and capacity sweeps
// ---------------------------------------------------------------------------

enum class Method {
  VisibleOnly,  // hidden weights frozen, visible weights learned by the margin rule
  Joint,        // both weight matrices learned
  Hebbian,      // hidden weights frozen, visible weights by the Hebbian sum
};

std::string_view to_string(Method m);
/// Accepts "V_only", "joint", "hebbian". Throws PreconditionError otherwise.
Method parse_method(std::string_view s);

/// Trains `net` with the given method. Returns the training log for the
/// learned methods (empty for Hebbian).
TrainingLog fit(Method method, HiddenNetwork& net, std::span<const PatternSequence> sequences,
                const Hyperparams& hp, const TrainOptions& opts = {});

/// True when one network step maps every x(t) to x(t+1).
bool transitions_stored(const HiddenNetwork& net, std::span<const PatternSequence> sequences);

enum class SweepAxis { Period, Hidden };
std::string_view to_string(SweepAxis a);

struct SweepConfig {
  SweepAxis axis = SweepAxis::Period;
  std::vector<std::size_t> values;
  std::size_t visible = 100;  // N
  std::size_t hidden = 500;   // M when sweeping the period
  std::size_t period = 70;    // T when sweeping M
  std::size_t trials = 100;
  std::vector<Method> methods{Method::VisibleOnly, Method::Joint};
  std::size_t flips = 10;
  std::optional<std::size_t> max_steps;  // 2T + 10 when absent
  Hyperparams hp;
  std::uint64_t master_seed = 0;
  unsigned jobs = 0;  // 0 = all hardware threads
};

/// Result of one trial of a sweep cell. Training convergence and retrieval
/// are recorded separately so failures can be attributed.
struct TrialRecord {
  bool success = false;
  bool converged = false;  // an epoch passed with no violated margin
  bool stored = false;     // every one-step transition reproduced
  std::optional<std::size_t> tau;
  std::optional<std::size_t> converged_epoch;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::Period;
  Method method = Method::Joint;
  std::vector<std::size_t> axis_values;
  std::vector<std::size_t> success_counts;
  std::vector<std::size_t> converged_counts;
  std::vector<std::size_t> stored_counts;
  std::size_t trials = 0;
};

/// Runs one trial of a sweep: fresh sequence, fresh network, training with
/// `method`, then noisy retrieval.
TrialRecord capacity_trial(std::size_t n, std::size_t m, std::size_t t, Method method, const Hyperparams& hp,
                           std::size_t flips, std::optional<std::size_t> max_steps, std::uint64_t master_seed,
                           std::size_t trial);

/// One SweepTable per method, cells in the order of config.values.
std::vector<SweepTable> capacity_sweep(const SweepConfig& config);

/// Retrieval successes versus period T at fixed M.
std::vector<SweepTable> capacity_sweep_T(std::size_t n, std::size_t m, std::vector<std::size_t> periods,
                                         std::size_t trials, std::vector<Method> methods,
                                         const Hyperparams& hp, std::uint64_t seed, unsigned jobs = 0);

/// Retrieval successes versus hidden size M at fixed T.
std::vector<SweepTable> capacity_sweep_M(std::size_t n, std::size_t t, std::vector<std::size_t> hidden_sizes,
                                         std::size_t trials, std::vector<Method> methods,
                                         const Hyperparams& hp, std::uint64_t seed, unsigned jobs = 0);

// ---------------------------------------------------------------------------
// Random-projection reconstruction
// ---------------------------------------------------------------------------

enum class ProjectionDistribution { Gaussian, Uniform };
enum class DecoderMethod { PseudoInverse, Transpose };
std::string_view to_string(ProjectionDistribution d);
std::string_view to_string(DecoderMethod d);
ProjectionDistribution parse_distribution(std::string_view s);
DecoderMethod parse_decoder(std::string_view s);

/// Minimum-norm least-squares pseudo-inverse via SVD; singular values below
/// rcond * sigma_max are treated as zero.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a, double rcond = 1e-10);

/// || x - sign(decoder * sign(projection * x)) ||_1
double reconstruction_error(const Eigen::MatrixXd& projection, const Eigen::MatrixXd& decoder,
                            const BipolarVector& x);

struct ReconCurve {
  ProjectionDistribution distribution = ProjectionDistribution::Gaussian;
  DecoderMethod method = DecoderMethod::PseudoInverse;
  std::vector<std::size_t> m_values;
  std::vector<double> mean_error;
  std::size_t trials = 0;
};

/// Mean reconstruction error over `trials` draws of (P, x) for each M.
/// The draws depend only on (seed, M, trial), so the two decoders and both
/// distributions can be compared on paired samples.
ReconCurve reconstruction_experiment(std::size_t n, std::span<const std::size_t> m_values,
                                     ProjectionDistribution distribution, DecoderMethod method,
                                     std::size_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Learning curves and ablations
// ---------------------------------------------------------------------------

struct ErrorCurveRow {
  std::size_t epoch = 0;
  double hidden_error = 0.0;
  double visible_error = 0.0;
};

std::vector<ErrorCurveRow> error_curves(const TrainingLog& log);

struct AblationConfig {
  std::vector<Method> methods{Method::Hebbian, Method::VisibleOnly, Method::Joint};
  std::vector<double> thetas{0.0};
  std::size_t hidden = 500;
  std::size_t flips = 10;
  std::size_t trials = 10;  // noisy retrievals per sequence
  std::optional<std::size_t> max_steps;
  Hyperparams hp;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
};

struct AblationReport {
  Method method = Method::Joint;
  double theta = 0.0;
  std::size_t successes = 0;
  std::size_t attempts = 0;
  bool converged = false;
  bool stored = false;
  double hidden_activity = 0.0;  // mean fraction of +1 hidden units on the stored patterns
  Trajectory sample;             // first retrieval of the first sequence
};

/// Trains every (method, theta) combination from the same seed on the same
/// sequences and measures noisy retrieval.
///
/// theta is applied to the projected targets for joint learning and to the
/// hidden response (as a lowered hidden bias) for the fixed-hidden methods,
/// whose hidden weights are drawn from the standard normal distribution.
std::vector<AblationReport> ablation_grid(std::span<const PatternSequence> sequences,
                                          const AblationConfig& config);

/// Runs fn(i) for i in [0, count) on up to `jobs` threads (0 = hardware
/// concurrency). Exceptions are rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace seqattract
