#pragma once

#include <cmath>
#include <compare>
#include <cstdlib>
#include <string>

#include "qrot/errors.hpp"

namespace qrot {

/// Exact integer or half-integer, stored as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int v) : twice_(2 * v) {}  // NOLINT: integers convert implicitly

  static constexpr HalfInt from_twice(int t) {
    HalfInt h;
    h.twice_ = t;
    return h;
  }

  /// Accepts only exact multiples of 1/2.
  static HalfInt from_double(double v) {
    const double t = 2.0 * v;
    const double r = std::round(t);
    if (!std::isfinite(v) || std::abs(t - r) > 1e-12 || std::abs(r) > 1e6) {
      throw ArgumentError("not an integer or half-integer: " + std::to_string(v));
    }
    return from_twice(static_cast<int>(r));
  }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  /// Integer part when is_integer(); caller checks.
  constexpr int as_int() const { return twice_ / 2; }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt abs() const { return from_twice(twice_ < 0 ? -twice_ : twice_); }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.twice_ + b.twice_); }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.twice_ - b.twice_); }
  constexpr HalfInt& operator+=(HalfInt o) { twice_ += o.twice_; return *this; }
  constexpr HalfInt& operator-=(HalfInt o) { twice_ -= o.twice_; return *this; }
  friend constexpr bool operator==(HalfInt, HalfInt) = default;
  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;

  /// "3/2", "-1/2", "2".
  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

  /// Exact decimal form: "1.5", "-0.5", "2".
  std::string decimal() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    const int whole = std::abs(twice_) / 2;
    return std::string(twice_ < 0 ? "-" : "") + std::to_string(whole) + ".5";
  }

 private:
  int twice_ = 0;
};

/// Same parity: a - b is an integer.
constexpr bool same_parity(HalfInt a, HalfInt b) { return ((a.twice() - b.twice()) % 2) == 0; }

constexpr HalfInt half(int twice) { return HalfInt::from_twice(twice); }

}  // namespace qrot
