#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace seqattract {

using Bipolar = std::int8_t;

/// Threshold nonlinearity of the network: +1 when v >= 0, otherwise -1.
/// Throws NumericError for NaN or infinite input.
Bipolar sign_threshold(double v);

/// Heaviside step with H(0) = 1, returned as 0/1.
inline std::uint8_t heaviside(double v) { return v >= 0.0 ? 1 : 0; }

/// A state or pattern vector with every entry exactly -1 or +1.
///
/// Entries are stored as signed bytes; arithmetic widens to double through
/// as_double() or the free helpers below.
class BipolarVector {
 public:
  /// Validates every entry. Throws PreconditionError on an empty input or an
  /// entry outside {-1, +1}.
  explicit BipolarVector(std::vector<Bipolar> entries);
  BipolarVector(std::initializer_list<int> entries);

  /// All-(+1) vector of the given dimension.
  static BipolarVector ones(std::size_t dim);

  /// Parses a string of '+' / '-' characters (e.g. "+-+-").
  static BipolarVector from_string(std::string_view pattern);

  /// Elementwise sign of a real vector (sign(0) = +1).
  static BipolarVector from_signs(const Eigen::Ref<const Eigen::VectorXd>& values);

  std::size_t dim() const { return entries_.size(); }
  Bipolar operator[](std::size_t i) const { return entries_[i]; }
  std::span<const Bipolar> entries() const { return entries_; }

  /// Flips entry i in place.
  void flip(std::size_t i);

  BipolarVector negated() const;
  Eigen::VectorXd as_double() const;
  std::string to_string() const;

  friend bool operator==(const BipolarVector&, const BipolarVector&) = default;

 private:
  BipolarVector() = default;
  std::vector<Bipolar> entries_;
};

std::size_t hamming_distance(const BipolarVector& a, const BipolarVector& b);

/// Ordered list of patterns of a common dimension. A periodic sequence
/// closes on itself: its first and last pattern are equal.
class PatternSequence {
 public:
  /// Throws ShapeError when dimensions disagree, PreconditionError when the
  /// list is empty or the periodic flag contradicts the endpoints.
  PatternSequence(std::vector<BipolarVector> patterns, bool periodic);

  /// Builds from '+'/'-' strings; periodic iff first == last.
  static PatternSequence from_strings(std::initializer_list<std::string_view> rows);

  std::size_t dim() const { return dim_; }
  std::size_t length() const { return patterns_.size(); }
  bool periodic() const { return periodic_; }
  const BipolarVector& operator[](std::size_t t) const { return patterns_[t]; }
  const std::vector<BipolarVector>& patterns() const { return patterns_; }

  /// Pairs (i, j), 0-based, i < j, of equal patterns that break the
  /// distinctness condition of the one-hot construction. The pair
  /// (0, length-1) is permitted and never reported.
  std::vector<std::pair<std::size_t, std::size_t>> distinctness_violations() const;
  bool construction_eligible() const { return distinctness_violations().empty(); }

  friend bool operator==(const PatternSequence&, const PatternSequence&) = default;

 private:
  std::vector<BipolarVector> patterns_;
  std::size_t dim_ = 0;
  bool periodic_ = false;
};

/// Copies a pattern sequence into an N x T column matrix of +/-1.0.
Eigen::MatrixXd as_columns(const PatternSequence& seq);

}  // namespace seqattract
