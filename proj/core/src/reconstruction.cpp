#include <random>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "seqattract/errors.hpp"
#include "seqattract/experiments.hpp"

namespace seqattract {

std::string_view to_string(ProjectionDistribution d) {
  return d == ProjectionDistribution::Gaussian ? "gaussian" : "uniform";
}

std::string_view to_string(DecoderMethod d) {
  return d == DecoderMethod::PseudoInverse ? "pseudo_inverse" : "transpose";
}

ProjectionDistribution parse_distribution(std::string_view s) {
  if (s == "gaussian") return ProjectionDistribution::Gaussian;
  if (s == "uniform") return ProjectionDistribution::Uniform;
  throw PreconditionError(fmt::format("unknown distribution '{}' (expected gaussian or uniform)", s));
}

DecoderMethod parse_decoder(std::string_view s) {
  if (s == "pseudo_inverse" || s == "pinv") return DecoderMethod::PseudoInverse;
  if (s == "transpose") return DecoderMethod::Transpose;
  throw PreconditionError(fmt::format("unknown decoder '{}' (expected pseudo_inverse or transpose)", s));
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a, double rcond) {
  if (a.size() == 0) return Eigen::MatrixXd(a.cols(), a.rows());
  if (!a.allFinite()) throw NumericError("pseudo_inverse: non-finite input");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = rcond * (s.size() > 0 ? s[0] : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double reconstruction_error(const Eigen::MatrixXd& projection, const Eigen::MatrixXd& decoder,
                            const BipolarVector& x) {
  if (projection.cols() != static_cast<Eigen::Index>(x.dim()) || decoder.rows() != projection.cols() ||
      decoder.cols() != projection.rows()) {
    throw ShapeError(fmt::format("reconstruction_error: P {}x{}, V {}x{}, x {}", projection.rows(),
                                 projection.cols(), decoder.rows(), decoder.cols(), x.dim()));
  }
  const Eigen::VectorXd xd = x.as_double();
  const Eigen::VectorXd h = (projection * xd).unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
  const Eigen::VectorXd r = (decoder * h).unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
  return (xd - r).lpNorm<1>();
}

ReconCurve reconstruction_experiment(std::size_t n, std::span<const std::size_t> m_values,
                                     ProjectionDistribution distribution, DecoderMethod method,
                                     std::size_t trials, std::uint64_t seed) {
  if (n < 1 || trials < 1) throw PreconditionError("reconstruction_experiment: N and trials must be >= 1");
  if (m_values.empty()) throw PreconditionError("reconstruction_experiment: no M values");
  ReconCurve curve;
  curve.distribution = distribution;
  curve.method = method;
  curve.m_values.assign(m_values.begin(), m_values.end());
  curve.trials = trials;
  const auto N = static_cast<Eigen::Index>(n);
  for (std::size_t m : m_values) {
    if (m < 1) throw PreconditionError("reconstruction_experiment: M must be >= 1");
    const auto M = static_cast<Eigen::Index>(m);
    double total = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(SeedStream::Projection), n, m, trial}));
      Eigen::MatrixXd P(M, N);
      if (distribution == ProjectionDistribution::Gaussian) {
        std::normal_distribution<double> d(0.0, 1.0);
        for (Eigen::Index i = 0; i < M; ++i)
          for (Eigen::Index j = 0; j < N; ++j) P(i, j) = d(rng);
      } else {
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        for (Eigen::Index i = 0; i < M; ++i)
          for (Eigen::Index j = 0; j < N; ++j) P(i, j) = d(rng);
      }
      Rng probe_rng(derive_seed(seed, {static_cast<std::uint64_t>(SeedStream::Probe), n, m, trial}));
      std::vector<Bipolar> xs(n);
      std::bernoulli_distribution coin(0.5);
      for (auto& e : xs) e = coin(probe_rng) ? Bipolar{1} : Bipolar{-1};
      const BipolarVector x(std::move(xs));
      const Eigen::MatrixXd V = method == DecoderMethod::PseudoInverse ? pseudo_inverse(P)
                                                                        : Eigen::MatrixXd(P.transpose());
      total += reconstruction_error(P, V, x);
    }
    curve.mean_error.push_back(total / static_cast<double>(trials));
  }
  return curve;
}

}  // namespace seqattract
