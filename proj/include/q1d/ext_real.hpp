#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace q1d {

/// A value in (-inf, +inf]. Used for moment generating functions and rate
/// functions, which may legitimately be +infinity but never NaN.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  static ExtReal finite(double v) {
    if (!std::isfinite(v)) throw std::domain_error("ExtReal::finite: non-finite value");
    return ExtReal(v);
  }
  static constexpr ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  /// Maps +inf to infinity(), rejects NaN and -inf.
  static ExtReal from_double(double v) {
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
      throw std::domain_error("ExtReal::from_double: NaN or -inf");
    return ExtReal(v);
  }

  constexpr bool is_finite() const { return v_ != std::numeric_limits<double>::infinity(); }
  constexpr bool is_infinite() const { return !is_finite(); }

  double value() const {
    if (!is_finite()) throw std::domain_error("ExtReal::value: value is +infinity");
    return v_;
  }
  /// +inf for infinite values.
  constexpr double as_double() const { return v_; }

  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend constexpr bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }

 private:
  constexpr explicit ExtReal(double v) : v_(v) {}
  double v_ = 0.0;
};

/// A pair of quantities attached to the two cycle signs.
template <typename T>
struct PlusMinus {
  T minus{};
  T plus{};

  friend bool operator==(const PlusMinus&, const PlusMinus&) = default;
};

enum class Sign : int { minus = -1, plus = +1 };

constexpr int to_int(Sign s) { return static_cast<int>(s); }

}  // namespace q1d
