#include <fmt/format.h>

#include "seqattract/errors.hpp"
#include "seqattract/learning.hpp"

namespace seqattract {

HiddenNetwork construct_one_hot(const PatternSequence& sequence) {
  const std::size_t T = sequence.length();
  if (T < 2) throw PreconditionError("construct_one_hot: sequence needs at least 2 patterns");
  if (const auto collisions = sequence.distinctness_violations(); !collisions.empty()) {
    std::string list;
    for (const auto& [i, j] : collisions) {
      if (!list.empty()) list += ", ";
      // reported 1-based, as sequence positions x(1)..x(T)
      list += fmt::format("({}, {})", i + 1, j + 1);
    }
    throw PreconditionError(fmt::format("construct_one_hot: repeated patterns at positions {}", list));
  }

  const auto N = static_cast<Eigen::Index>(sequence.dim());
  const auto M = static_cast<Eigen::Index>(T - 1);
  RowMatrix U(M, N);
  RowMatrix V(N, M);
  Eigen::VectorXd visible_bias = Eigen::VectorXd::Zero(N);
  for (Eigen::Index i = 0; i < M; ++i) {
    const auto t = static_cast<std::size_t>(i);
    U.row(i) = sequence[t].as_double().transpose();
    V.col(i) = sequence[t + 1].as_double();
    visible_bias += sequence[t + 1].as_double();
  }
  Eigen::VectorXd hidden_bias = Eigen::VectorXd::Constant(M, -static_cast<double>(N));
  // Unused by the dynamics; learning would need a real random projection.
  RowMatrix P = RowMatrix::Zero(M, N);
  return HiddenNetwork(std::move(U), std::move(V), std::move(P), std::move(hidden_bias),
                       std::move(visible_bias));
}

}  // namespace seqattract
