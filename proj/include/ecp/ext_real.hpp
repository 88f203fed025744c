#pragma once

#include <compare>
#include <limits>
#include <string>

namespace ecp {

/// Real number extended with +inf and -inf.
///
/// Infinities are tagged explicitly so that comparisons in safety
/// constraints never depend on sentinel magnitudes. Arithmetic is only
/// defined where the result is unambiguous; inf - inf throws.
class ExtReal {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : kind_{Kind::Finite}, value_{v} {}  // NOLINT: implicit by intent

  static constexpr ExtReal pos_inf() { return ExtReal{Kind::PosInf}; }
  static constexpr ExtReal neg_inf() { return ExtReal{Kind::NegInf}; }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::Finite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }

  /// Finite payload. Throws std::domain_error for infinities.
  double value() const;

  /// Lossy view for logging and plotting: infinities map to IEEE infinities.
  constexpr double to_double() const {
    switch (kind_) {
      case Kind::PosInf: return std::numeric_limits<double>::infinity();
      case Kind::NegInf: return -std::numeric_limits<double>::infinity();
      default: return value_;
    }
  }

  /// Inverse of to_double(); NaN is rejected.
  static ExtReal from_double(double v);

  std::string to_string() const;
  /// Parses "inf", "+inf", "-inf" or a decimal number.
  static ExtReal parse(const std::string& text);

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::Finite || a.value_ == b.value_;
  }

  friend constexpr std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (a.kind_ != Kind::Finite) return std::partial_ordering::equivalent;
    return a.value_ <=> b.value_;
  }

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a);

 private:
  explicit constexpr ExtReal(Kind k) : kind_{k} {}

  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

/// max(x, 0)
ExtReal positive_part(const ExtReal& x);

}  // namespace ecp
