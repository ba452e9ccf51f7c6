#pragma once

#include <compare>
#include <cstdlib>
#include <string>

#include "w6j/errors.hpp"

namespace w6j {

// Half-integer quantum number.  The value is stored as twice itself so that
// all arithmetic is exact integer arithmetic; j = 7/2 is stored as 7.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int whole) : t_(2 * whole) {}

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.t_ = twice;
    return h;
  }

  constexpr int twice() const { return t_; }
  constexpr bool is_integer() const { return t_ % 2 == 0; }
  constexpr bool is_negative() const { return t_ < 0; }
  double value() const { return 0.5 * t_; }

  // Exact conversion to int; the value must be a whole integer.
  int to_int() const {
    if (!is_integer()) throw DomainError("half-integer is not a whole integer: " + str());
    return t_ / 2;
  }

  std::string str() const {
    if (is_integer()) return std::to_string(t_ / 2);
    return std::to_string(t_) + "/2";
  }

  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.t_ + b.t_); }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.t_ - b.t_); }
  constexpr HalfInt operator-() const { return from_twice(-t_); }
  HalfInt& operator+=(HalfInt o) {
    t_ += o.t_;
    return *this;
  }
  HalfInt& operator-=(HalfInt o) {
    t_ -= o.t_;
    return *this;
  }
  friend constexpr HalfInt operator*(int k, HalfInt a) { return from_twice(k * a.t_); }

  constexpr auto operator<=>(const HalfInt&) const = default;

 private:
  int t_ = 0;  // twice the value
};

inline HalfInt abs(HalfInt a) { return HalfInt::from_twice(std::abs(a.twice())); }

inline HalfInt min(HalfInt a, HalfInt b) { return a < b ? a : b; }
inline HalfInt max(HalfInt a, HalfInt b) { return a < b ? b : a; }

// (-1)^e for integer e; |m| <= j style checks are the caller's business.
inline int parity_sign(HalfInt e) {
  if (!e.is_integer()) throw DomainError("(-1)^e needs integer exponent, got " + e.str());
  return (e.twice() / 2) % 2 == 0 ? 1 : -1;
}

// Triangle rule: |a-b| <= c <= a+b with integer perimeter (and all >= 0).
inline bool is_triad(HalfInt a, HalfInt b, HalfInt c) {
  if (a.is_negative() || b.is_negative() || c.is_negative()) return false;
  if (!(a + b + c).is_integer()) return false;
  return abs(a - b) <= c && c <= a + b;
}

// Validity of a (j, m) pair: j >= 0, |m| <= j, j - m integer.
inline bool is_valid_jm(HalfInt j, HalfInt m) {
  return !j.is_negative() && abs(m) <= j && (j - m).is_integer();
}

}  // namespace w6j
