#pragma once

#include <cmath>
#include <compare>
#include <stdexcept>
#include <string>

namespace starksim {

// Exact half-integer (spin projections, spin quantum numbers). Stored as
// twice the value so that 5/2, -1/2, 3 etc. compare exactly.
class HalfInt {
 public:
  constexpr HalfInt() : twice_(0) {}

  static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }

  static HalfInt from_double(double v) {
    const double t = 2.0 * v;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9) {
      throw std::domain_error("value is not a half-integer: " +
                              std::to_string(v));
    }
    return HalfInt(static_cast<int>(r));
  }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }

  friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) {
    return HalfInt(a.twice_ + b.twice_);
  }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) {
    return HalfInt(a.twice_ - b.twice_);
  }
  constexpr HalfInt operator-() const { return HalfInt(-twice_); }

  // "5/2", "-1/2", "3"
  std::string str() const {
    if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

 private:
  constexpr explicit HalfInt(int twice) : twice_(twice) {}
  int twice_;
};

inline HalfInt half(int twice) { return HalfInt::from_twice(twice); }

}  // namespace starksim
