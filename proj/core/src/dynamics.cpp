#include "seqattract/dynamics.hpp"

#include <fmt/format.h>

#include "seqattract/errors.hpp"

namespace seqattract {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ShapeError(fmt::format("{}: dimension {} does not match expected {}", what, got, want));
  }
}

BipolarVector signs_of(const Eigen::VectorXd& pre) {
  return BipolarVector::from_signs(pre);
}

}  // namespace

VisibleOnlyNetwork::VisibleOnlyNetwork(RowMatrix weights, Eigen::VectorXd bias)
    : weights_(std::move(weights)), bias_(std::move(bias)) {
  if (weights_.rows() == 0 || weights_.rows() != weights_.cols()) {
    throw ShapeError(fmt::format("VisibleOnlyNetwork: weights must be square and non-empty, got {}x{}",
                                 weights_.rows(), weights_.cols()));
  }
  if (bias_.size() == 0) bias_ = Eigen::VectorXd::Zero(weights_.rows());
  if (bias_.size() != weights_.rows()) {
    throw ShapeError(fmt::format("VisibleOnlyNetwork: bias length {} != {}", bias_.size(), weights_.rows()));
  }
  if (!weights_.allFinite() || !bias_.allFinite()) {
    throw NumericError("VisibleOnlyNetwork: non-finite weights");
  }
}

VisibleOnlyNetwork VisibleOnlyNetwork::zeros(std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  return VisibleOnlyNetwork(RowMatrix::Zero(N, N));
}

HiddenNetwork::HiddenNetwork(RowMatrix hidden_weights, RowMatrix visible_weights, RowMatrix projection,
                             Eigen::VectorXd hidden_bias, Eigen::VectorXd visible_bias)
    : hidden_weights_(std::move(hidden_weights)),
      visible_weights_(std::move(visible_weights)),
      projection_(std::move(projection)),
      hidden_bias_(std::move(hidden_bias)),
      visible_bias_(std::move(visible_bias)) {
  const auto M = hidden_weights_.rows();
  const auto N = hidden_weights_.cols();
  if (M == 0 || N == 0) {
    throw PreconditionError(
        fmt::format("HiddenNetwork: need at least one visible and one hidden neuron, got N={} M={}", N, M));
  }
  if (visible_weights_.rows() != N || visible_weights_.cols() != M) {
    throw ShapeError(fmt::format("HiddenNetwork: visible weights are {}x{}, expected {}x{}",
                                 visible_weights_.rows(), visible_weights_.cols(), N, M));
  }
  if (projection_.rows() != M || projection_.cols() != N) {
    throw ShapeError(fmt::format("HiddenNetwork: projection is {}x{}, expected {}x{}", projection_.rows(),
                                 projection_.cols(), M, N));
  }
  if (hidden_bias_.size() == 0) hidden_bias_ = Eigen::VectorXd::Zero(M);
  if (visible_bias_.size() == 0) visible_bias_ = Eigen::VectorXd::Zero(N);
  if (hidden_bias_.size() != M || visible_bias_.size() != N) {
    throw ShapeError(fmt::format("HiddenNetwork: bias lengths {}/{} do not match M={} N={}",
                                 hidden_bias_.size(), visible_bias_.size(), M, N));
  }
  if (!all_finite()) throw NumericError("HiddenNetwork: non-finite entries");
  n_ = static_cast<std::size_t>(N);
  m_ = static_cast<std::size_t>(M);
}

HiddenNetwork HiddenNetwork::zeros(std::size_t n, std::size_t m) {
  const auto N = static_cast<Eigen::Index>(n);
  const auto M = static_cast<Eigen::Index>(m);
  return HiddenNetwork(RowMatrix::Zero(M, N), RowMatrix::Zero(N, M), RowMatrix::Zero(M, N));
}

HiddenNetwork HiddenNetwork::random(std::size_t n, std::size_t m, double init_std, Rng& rng,
                                    double projection_std) {
  if (!(init_std >= 0.0) || !(projection_std > 0.0)) {
    throw PreconditionError("HiddenNetwork::random: init_std must be >= 0 and projection_std > 0");
  }
  const auto N = static_cast<Eigen::Index>(n);
  const auto M = static_cast<Eigen::Index>(m);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto fill = [&](RowMatrix& mat, double scale) {
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      for (Eigen::Index j = 0; j < mat.cols(); ++j) mat(i, j) = scale * normal(rng);
    }
  };
  RowMatrix U(M, N), V(N, M), P(M, N);
  fill(U, init_std);
  fill(V, init_std);
  fill(P, projection_std);
  return HiddenNetwork(std::move(U), std::move(V), std::move(P));
}

bool HiddenNetwork::all_finite() const {
  return hidden_weights_.allFinite() && visible_weights_.allFinite() && projection_.allFinite() &&
         hidden_bias_.allFinite() && visible_bias_.allFinite();
}

bool operator==(const HiddenNetwork& a, const HiddenNetwork& b) {
  return a.n_ == b.n_ && a.m_ == b.m_ && a.hidden_weights_ == b.hidden_weights_ &&
         a.visible_weights_ == b.visible_weights_ && a.projection_ == b.projection_ &&
         a.hidden_bias_ == b.hidden_bias_ && a.visible_bias_ == b.visible_bias_;
}

BipolarVector visible_only_step(const VisibleOnlyNetwork& net, const BipolarVector& xi) {
  require_dim(xi.dim(), net.dim(), "visible_only_step");
  const Eigen::VectorXd pre = net.weights() * xi.as_double() + net.bias();
  return signs_of(pre);
}

BipolarVector hidden_step(const HiddenNetwork& net, const BipolarVector& xi) {
  require_dim(xi.dim(), net.visible_dim(), "hidden_step");
  const Eigen::VectorXd pre = net.hidden_weights() * xi.as_double() + net.hidden_bias();
  return signs_of(pre);
}

BipolarVector visible_update(const HiddenNetwork& net, const BipolarVector& zeta) {
  require_dim(zeta.dim(), net.hidden_dim(), "visible_update");
  const Eigen::VectorXd pre = net.visible_weights() * zeta.as_double() + net.visible_bias();
  return signs_of(pre);
}

StepResult network_step(const HiddenNetwork& net, const BipolarVector& xi) {
  BipolarVector hidden = hidden_step(net, xi);
  BipolarVector visible = visible_update(net, hidden);
  return {std::move(visible), std::move(hidden)};
}

Trajectory run_free(const HiddenNetwork& net, const BipolarVector& init, std::size_t steps,
                    bool record_hidden) {
  require_dim(init.dim(), net.visible_dim(), "run_free");
  if (steps == 0) throw PreconditionError("run_free: steps must be >= 1");
  Trajectory traj;
  traj.states.reserve(steps + 1);
  traj.states.push_back(init);
  if (record_hidden) {
    traj.hidden_states.emplace();
    traj.hidden_states->reserve(steps);
  }
  for (std::size_t s = 0; s < steps; ++s) {
    StepResult r = network_step(net, traj.states.back());
    if (record_hidden) traj.hidden_states->push_back(std::move(r.hidden));
    traj.states.push_back(std::move(r.visible));
  }
  return traj;
}

std::optional<std::size_t> detect_alignment(const Trajectory& traj, const PatternSequence& target) {
  const std::size_t L = traj.states.size();
  const std::size_t T = target.length();
  if (T > L) return std::nullopt;
  for (std::size_t tau = 0; tau + T <= L; ++tau) {
    bool match = true;
    for (std::size_t t = 0; t < T && match; ++t) {
      match = traj.states[tau + t] == target[t];
    }
    if (match) return tau;
  }
  return std::nullopt;
}

}  // namespace seqattract
