#include "seqattract/bipolar.hpp"

#include <cmath>

#include <fmt/format.h>

#include "seqattract/errors.hpp"

namespace seqattract {

Bipolar sign_threshold(double v) {
  if (!std::isfinite(v)) {
    throw NumericError(fmt::format("sign_threshold: non-finite input {}", v));
  }
  return v >= 0.0 ? Bipolar{1} : Bipolar{-1};
}

BipolarVector::BipolarVector(std::vector<Bipolar> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw PreconditionError("BipolarVector: dimension must be at least 1");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] != 1 && entries_[i] != -1) {
      throw PreconditionError(
          fmt::format("BipolarVector: entry {} is {}, expected -1 or +1", i, int{entries_[i]}));
    }
  }
}

BipolarVector::BipolarVector(std::initializer_list<int> entries)
    : BipolarVector([&] {
        std::vector<Bipolar> v;
        v.reserve(entries.size());
        for (int e : entries) {
          if (e != 1 && e != -1) {
            throw PreconditionError(fmt::format("BipolarVector: entry {} is not -1 or +1", e));
          }
          v.push_back(static_cast<Bipolar>(e));
        }
        return v;
      }()) {}

BipolarVector BipolarVector::ones(std::size_t dim) {
  return BipolarVector(std::vector<Bipolar>(dim, Bipolar{1}));
}

BipolarVector BipolarVector::from_string(std::string_view pattern) {
  std::vector<Bipolar> v;
  v.reserve(pattern.size());
  for (char c : pattern) {
    if (c == '+') {
      v.push_back(1);
    } else if (c == '-') {
      v.push_back(-1);
    } else {
      throw PreconditionError(fmt::format("BipolarVector: unexpected character '{}'", c));
    }
  }
  return BipolarVector(std::move(v));
}

BipolarVector BipolarVector::from_signs(const Eigen::Ref<const Eigen::VectorXd>& values) {
  std::vector<Bipolar> v(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    v[static_cast<std::size_t>(i)] = sign_threshold(values[i]);
  }
  return BipolarVector(std::move(v));
}

void BipolarVector::flip(std::size_t i) {
  if (i >= entries_.size()) {
    throw ShapeError(fmt::format("BipolarVector::flip: index {} out of range {}", i, entries_.size()));
  }
  entries_[i] = static_cast<Bipolar>(-entries_[i]);
}

BipolarVector BipolarVector::negated() const {
  BipolarVector out = *this;
  for (auto& e : out.entries_) e = static_cast<Bipolar>(-e);
  return out;
}

Eigen::VectorXd BipolarVector::as_double() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(entries_.size()));
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = entries_[i];
  }
  return out;
}

std::string BipolarVector::to_string() const {
  std::string s(entries_.size(), '+');
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < 0) s[i] = '-';
  }
  return s;
}

std::size_t hamming_distance(const BipolarVector& a, const BipolarVector& b) {
  if (a.dim() != b.dim()) {
    throw ShapeError(fmt::format("hamming_distance: dims {} and {}", a.dim(), b.dim()));
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) d += a[i] != b[i];
  return d;
}

PatternSequence::PatternSequence(std::vector<BipolarVector> patterns, bool periodic)
    : patterns_(std::move(patterns)), periodic_(periodic) {
  if (patterns_.empty()) {
    throw PreconditionError("PatternSequence: at least one pattern required");
  }
  dim_ = patterns_.front().dim();
  for (std::size_t t = 1; t < patterns_.size(); ++t) {
    if (patterns_[t].dim() != dim_) {
      throw ShapeError(fmt::format("PatternSequence: pattern {} has dim {}, expected {}", t,
                                   patterns_[t].dim(), dim_));
    }
  }
  if (periodic_ && !(patterns_.front() == patterns_.back())) {
    throw PreconditionError("PatternSequence: periodic flag set but first pattern != last pattern");
  }
}

PatternSequence PatternSequence::from_strings(std::initializer_list<std::string_view> rows) {
  std::vector<BipolarVector> pats;
  pats.reserve(rows.size());
  for (auto r : rows) pats.push_back(BipolarVector::from_string(r));
  const bool periodic = pats.size() > 1 && pats.front() == pats.back();
  return PatternSequence(std::move(pats), periodic);
}

std::vector<std::pair<std::size_t, std::size_t>> PatternSequence::distinctness_violations() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t T = patterns_.size();
  for (std::size_t i = 0; i < T; ++i) {
    for (std::size_t j = i + 1; j < T; ++j) {
      if (i == 0 && j == T - 1) continue;
      if (patterns_[i] == patterns_[j]) out.emplace_back(i, j);
    }
  }
  return out;
}

Eigen::MatrixXd as_columns(const PatternSequence& seq) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(seq.dim()), static_cast<Eigen::Index>(seq.length()));
  for (std::size_t t = 0; t < seq.length(); ++t) {
    out.col(static_cast<Eigen::Index>(t)) = seq[t].as_double();
  }
  return out;
}

}  // namespace seqattract
