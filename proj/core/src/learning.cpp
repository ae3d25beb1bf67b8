#include "seqattract/learning.hpp"

#include <cmath>

#include <fmt/format.h>

#include "seqattract/errors.hpp"

namespace seqattract {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ShapeError(fmt::format("{}: dimension {} does not match expected {}", what, got, want));
  }
}

// One margin-perceptron step shared by every learned weight matrix.
//
// Row r is violated when kappa - target_r * pre_r >= 0, pre_r being the row's
// pre-activation before the step. Violated rows move by eta * target_r * input
// (and the bias by eta * target_r when learn_bias). `pre` receives the
// pre-update activations; `errors` the 0/1 indicators.
std::size_t margin_step(RowMatrix& weights, Eigen::VectorXd& bias, const Eigen::VectorXd& input,
                        const Eigen::VectorXd& target, double eta, double kappa, bool learn_bias,
                        Eigen::VectorXd& pre, std::vector<std::uint8_t>& errors) {
  pre.noalias() = weights * input;
  pre += bias;
  if (!pre.allFinite()) throw NumericError("margin update: non-finite pre-activation");
  const Eigen::Index rows = weights.rows();
  errors.resize(static_cast<std::size_t>(rows));
  std::size_t violated = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::uint8_t e = heaviside(kappa - target[r] * pre[r]);
    errors[static_cast<std::size_t>(r)] = e;
    if (!e) continue;
    ++violated;
    const double step = eta * target[r];
    weights.row(r) += step * input.transpose();
    if (learn_bias) bias[r] += step;
    if (!weights.row(r).allFinite() || !std::isfinite(bias[r])) {
      throw NumericError(fmt::format("margin update: row {} became non-finite", r));
    }
  }
  return violated;
}

// Recomputes the pre-activation of rows that were just updated.
void refresh_rows(const RowMatrix& weights, const Eigen::VectorXd& bias, const Eigen::VectorXd& input,
                  const std::vector<std::uint8_t>& errors, Eigen::VectorXd& pre) {
  for (Eigen::Index r = 0; r < weights.rows(); ++r) {
    if (errors[static_cast<std::size_t>(r)]) pre[r] = weights.row(r).dot(input) + bias[r];
  }
}

void signs_into(const Eigen::VectorXd& pre, Eigen::VectorXd& out) {
  out.resize(pre.size());
  for (Eigen::Index i = 0; i < pre.size(); ++i) out[i] = pre[i] >= 0.0 ? 1.0 : -1.0;
}

void count_updates(const std::vector<std::uint8_t>& errors, std::vector<std::size_t>& counts) {
  for (std::size_t i = 0; i < errors.size(); ++i) counts[i] += errors[i];
}

void validate_sequences(const HiddenNetwork& net, std::span<const PatternSequence> sequences,
                        const char* what) {
  if (sequences.empty()) throw PreconditionError(fmt::format("{}: no training sequences", what));
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    if (sequences[s].length() < 2) {
      throw PreconditionError(fmt::format("{}: sequence {} has fewer than 2 patterns", what, s));
    }
    require_dim(sequences[s].dim(), net.visible_dim(), what);
  }
}

// Projected targets sign(P x - theta) for every column of `patterns`.
Eigen::MatrixXd projected_targets(const RowMatrix& projection, const Eigen::MatrixXd& patterns, double theta) {
  Eigen::MatrixXd pre = projection * patterns;
  pre.array() -= theta;
  if (!pre.allFinite()) throw NumericError("projected targets: non-finite projection");
  return pre.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
}

struct PreparedSequence {
  Eigen::MatrixXd patterns;  // N x T
  Eigen::MatrixXd targets;   // M x T (joint training) or hidden responses (visible-only)
};

void finish_epoch(TrainingLog& log, std::size_t epoch, std::size_t hidden_violations,
                  std::size_t visible_violations, std::size_t m, std::size_t n) {
  log.per_epoch.push_back({static_cast<double>(hidden_violations) / static_cast<double>(m),
                           static_cast<double>(visible_violations) / static_cast<double>(n), epoch});
  if (!log.converged_epoch && hidden_violations == 0 && visible_violations == 0) {
    log.converged_epoch = epoch;
  }
}

}  // namespace

void Hyperparams::validate() const {
  auto bad = [](double v) { return !std::isfinite(v); };
  if (bad(eta) || eta <= 0.0) throw PreconditionError(fmt::format("eta must be > 0, got {}", eta));
  if (bad(kappa) || kappa <= 0.0) throw PreconditionError(fmt::format("kappa must be > 0, got {}", kappa));
  if (epochs < 1) throw PreconditionError("epochs must be >= 1");
  if (bad(init_std) || init_std < 0.0) {
    throw PreconditionError(fmt::format("init_std must be >= 0, got {}", init_std));
  }
  if (bad(theta) || theta < 0.0) throw PreconditionError(fmt::format("theta must be >= 0, got {}", theta));
}

BipolarVector project_target(const RowMatrix& projection, const BipolarVector& x_next, double theta) {
  require_dim(x_next.dim(), static_cast<std::size_t>(projection.cols()), "project_target");
  Eigen::VectorXd pre = projection * x_next.as_double();
  pre.array() -= theta;
  return BipolarVector::from_signs(pre);
}

std::vector<std::uint8_t> update_hidden_weights(HiddenNetwork& net, const BipolarVector& x_t,
                                                const BipolarVector& x_next, const Hyperparams& hp,
                                                bool learn_bias) {
  hp.validate();
  require_dim(x_t.dim(), net.visible_dim(), "update_hidden_weights");
  const Eigen::VectorXd z = project_target(net.projection(), x_next, hp.theta).as_double();
  Eigen::VectorXd pre;
  std::vector<std::uint8_t> mu;
  margin_step(net.hidden_weights(), net.hidden_bias(), x_t.as_double(), z, hp.eta, hp.kappa, learn_bias, pre,
              mu);
  return mu;
}

std::vector<std::uint8_t> update_visible_weights(HiddenNetwork& net, const BipolarVector& x_t,
                                                 const BipolarVector& x_next, const Hyperparams& hp,
                                                 bool learn_bias) {
  hp.validate();
  require_dim(x_next.dim(), net.visible_dim(), "update_visible_weights");
  const Eigen::VectorXd y = hidden_step(net, x_t).as_double();
  Eigen::VectorXd pre;
  std::vector<std::uint8_t> nu;
  margin_step(net.visible_weights(), net.visible_bias(), y, x_next.as_double(), hp.eta, hp.kappa, learn_bias,
              pre, nu);
  return nu;
}

PairErrors train_pair(HiddenNetwork& net, const BipolarVector& x_t, const BipolarVector& x_next,
                      const Hyperparams& hp, const TrainOptions& opts) {
  if (opts.readout == HiddenReadout::AfterUpdate) {
    PairErrors e;
    e.hidden = update_hidden_weights(net, x_t, x_next, hp, opts.learn_bias);
    e.visible = update_visible_weights(net, x_t, x_next, hp, opts.learn_bias);
    return e;
  }
  hp.validate();
  require_dim(x_t.dim(), net.visible_dim(), "train_pair");
  const Eigen::VectorXd y = hidden_step(net, x_t).as_double();
  PairErrors e;
  e.hidden = update_hidden_weights(net, x_t, x_next, hp, opts.learn_bias);
  Eigen::VectorXd pre;
  margin_step(net.visible_weights(), net.visible_bias(), y, x_next.as_double(), hp.eta, hp.kappa,
              opts.learn_bias, pre, e.visible);
  return e;
}

TrainingLog train(HiddenNetwork& net, std::span<const PatternSequence> sequences, const Hyperparams& hp,
                  const TrainOptions& opts) {
  hp.validate();
  validate_sequences(net, sequences, "train");
  const std::size_t n = net.visible_dim();
  const std::size_t m = net.hidden_dim();

  std::vector<PreparedSequence> data;
  data.reserve(sequences.size());
  for (const auto& seq : sequences) {
    PreparedSequence p;
    p.patterns = as_columns(seq);
    p.targets = projected_targets(net.projection(), p.patterns, hp.theta);
    data.push_back(std::move(p));
  }

  TrainingLog log;
  log.hidden_row_updates.assign(m, 0);
  log.visible_row_updates.assign(n, 0);
  Eigen::VectorXd x, x_next, z, hidden_pre, visible_pre, y;
  std::vector<std::uint8_t> mu, nu;
  auto& U = net.hidden_weights();
  auto& V = net.visible_weights();
  auto& bh = net.hidden_bias();
  auto& bv = net.visible_bias();

  for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    std::size_t hidden_violations = 0;
    std::size_t visible_violations = 0;
    for (const auto& seq : data) {
      for (Eigen::Index t = 0; t + 1 < seq.patterns.cols(); ++t) {
        x = seq.patterns.col(t);
        x_next = seq.patterns.col(t + 1);
        z = seq.targets.col(t + 1);
        hidden_violations += margin_step(U, bh, x, z, hp.eta, hp.kappa, opts.learn_bias, hidden_pre, mu);
        if (opts.readout == HiddenReadout::AfterUpdate) refresh_rows(U, bh, x, mu, hidden_pre);
        signs_into(hidden_pre, y);
        visible_violations += margin_step(V, bv, y, x_next, hp.eta, hp.kappa, opts.learn_bias, visible_pre, nu);
        count_updates(mu, log.hidden_row_updates);
        count_updates(nu, log.visible_row_updates);
      }
    }
    finish_epoch(log, epoch, hidden_violations, visible_violations, m, n);
    if (opts.stop_when_converged && log.converged_epoch) break;
  }
  return log;
}

TrainingLog train_visible_only(HiddenNetwork& net, std::span<const PatternSequence> sequences,
                               const Hyperparams& hp, const TrainOptions& opts) {
  hp.validate();
  validate_sequences(net, sequences, "train_visible_only");
  const std::size_t n = net.visible_dim();
  const std::size_t m = net.hidden_dim();

  std::vector<PreparedSequence> data;
  data.reserve(sequences.size());
  for (const auto& seq : sequences) {
    PreparedSequence p;
    p.patterns = as_columns(seq);
    Eigen::MatrixXd pre = net.hidden_weights() * p.patterns;
    pre.colwise() += net.hidden_bias();
    if (!pre.allFinite()) throw NumericError("train_visible_only: non-finite hidden response");
    p.targets = pre.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
    data.push_back(std::move(p));
  }

  TrainingLog log;
  log.hidden_row_updates.assign(m, 0);
  log.visible_row_updates.assign(n, 0);
  Eigen::VectorXd y, x_next, visible_pre;
  std::vector<std::uint8_t> nu;
  for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    std::size_t visible_violations = 0;
    for (const auto& seq : data) {
      for (Eigen::Index t = 0; t + 1 < seq.patterns.cols(); ++t) {
        y = seq.targets.col(t);
        x_next = seq.patterns.col(t + 1);
        visible_violations += margin_step(net.visible_weights(), net.visible_bias(), y, x_next, hp.eta,
                                          hp.kappa, opts.learn_bias, visible_pre, nu);
        count_updates(nu, log.visible_row_updates);
      }
    }
    finish_epoch(log, epoch, 0, visible_violations, m, n);
    if (opts.stop_when_converged && log.converged_epoch) break;
  }
  return log;
}

void hebbian_visible_weights(HiddenNetwork& net, std::span<const PatternSequence> sequences) {
  if (sequences.empty()) throw PreconditionError("hebbian_visible_weights: no sequences");
  RowMatrix V = RowMatrix::Zero(static_cast<Eigen::Index>(net.visible_dim()),
                                static_cast<Eigen::Index>(net.hidden_dim()));
  for (const auto& seq : sequences) {
    require_dim(seq.dim(), net.visible_dim(), "hebbian_visible_weights");
    for (std::size_t t = 0; t + 1 < seq.length(); ++t) {
      const Eigen::VectorXd y = hidden_step(net, seq[t]).as_double();
      V.noalias() += seq[t + 1].as_double() * y.transpose();
    }
  }
  net.visible_weights() = std::move(V);
}

PerceptronResult perceptron_train_visible_only(VisibleOnlyNetwork& net, const PatternSequence& sequence,
                                               double eta, double kappa, std::size_t max_epochs,
                                               bool learn_bias) {
  if (max_epochs < 1) throw PreconditionError("perceptron_train_visible_only: max_epochs must be >= 1");
  if (!(eta > 0.0) || !(kappa > 0.0)) {
    throw PreconditionError("perceptron_train_visible_only: eta and kappa must be > 0");
  }
  require_dim(sequence.dim(), net.dim(), "perceptron_train_visible_only");
  const Eigen::MatrixXd X = as_columns(sequence);
  Eigen::VectorXd x, x_next, pre;
  std::vector<std::uint8_t> errors;
  for (std::size_t epoch = 1; epoch <= max_epochs; ++epoch) {
    std::size_t violations = 0;
    for (Eigen::Index t = 0; t + 1 < X.cols(); ++t) {
      x = X.col(t);
      x_next = X.col(t + 1);
      violations += margin_step(net.weights(), net.bias(), x, x_next, eta, kappa, learn_bias, pre, errors);
    }
    if (violations == 0) return {true, epoch};
  }
  return {false, max_epochs};
}

BipolarVector hidden_step_sparse(const HiddenNetwork& net, const BipolarVector& xi, double theta) {
  require_dim(xi.dim(), net.visible_dim(), "hidden_step_sparse");
  Eigen::VectorXd pre = net.hidden_weights() * xi.as_double() + net.hidden_bias();
  pre.array() -= theta;
  return BipolarVector::from_signs(pre);
}

void apply_hidden_threshold(HiddenNetwork& net, double theta) {
  if (!std::isfinite(theta) || theta < 0.0) {
    throw PreconditionError(fmt::format("apply_hidden_threshold: theta must be >= 0, got {}", theta));
  }
  net.hidden_bias().array() -= theta;
}

}  // namespace seqattract
