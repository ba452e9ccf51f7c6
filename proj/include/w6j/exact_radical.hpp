#pragma once

#include <string>

#include "w6j/rational.hpp"

namespace w6j {

// Exact value of the form coef * sqrt(radicand).
//
// Canonical form: the radicand is a squarefree nonnegative integer (a
// rational input radicand p/q is first rewritten as (1/q)*sqrt(p*q)), and
// the zero value is stored as 0 * sqrt(1).  With that normalization two
// equal values always have identical representations, so operator== is
// exact value equality.
//
// Square extraction uses trial division by primes up to an internal bound
// (large enough to cover every radicand assembled from cached factorials)
// followed by a perfect-square test on the remaining cofactor.
class ExactRadical {
 public:
  ExactRadical() : coef_(0), radicand_(1) {}
  ExactRadical(const Rational& coef) : coef_(coef), radicand_(1) { normalize_zero(); }
  ExactRadical(long coef) : coef_(coef), radicand_(1) { normalize_zero(); }
  // coef * sqrt(radicand); throws DomainError when radicand < 0.
  ExactRadical(const Rational& coef, const Rational& radicand);

  // 1 * sqrt(r).
  static ExactRadical sqrt_of(const Rational& r) { return ExactRadical(Rational(1), r); }

  const Rational& coef() const { return coef_; }
  // Squarefree integer radicand (1 for pure rationals and for zero).
  const Integer& radicand() const { return radicand_; }

  bool is_zero() const { return coef_.is_zero(); }
  int sign() const { return coef_.sign(); }
  bool is_rational() const { return radicand_ == 1; }
  // coef^2 * radicand, always rational.
  Rational squared() const { return coef_ * coef_ * Rational(radicand_); }

  friend ExactRadical operator*(const ExactRadical& a, const ExactRadical& b);
  friend ExactRadical operator*(const Rational& a, const ExactRadical& b) {
    ExactRadical r = b;
    r.coef_ *= a;
    r.normalize_zero();
    return r;
  }
  friend ExactRadical operator*(int a, const ExactRadical& b) { return Rational(a) * b; }
  ExactRadical operator-() const {
    ExactRadical r = *this;
    r.coef_ = -r.coef_;
    return r;
  }
  // Exact addition; both operands must carry the same radicand unless one
  // side is zero (throws IncompatibleRadicands otherwise).
  friend ExactRadical operator+(const ExactRadical& a, const ExactRadical& b);
  friend ExactRadical operator-(const ExactRadical& a, const ExactRadical& b) { return a + (-b); }
  ExactRadical& operator+=(const ExactRadical& o) { return *this = *this + o; }
  ExactRadical& operator*=(const ExactRadical& o) { return *this = *this * o; }

  friend bool operator==(const ExactRadical& a, const ExactRadical& b) {
    return a.coef_ == b.coef_ && a.radicand_ == b.radicand_;
  }
  friend bool operator!=(const ExactRadical& a, const ExactRadical& b) { return !(a == b); }

  // Round to double after evaluating at the given binary precision
  // (>= 53 bits; higher precision only narrows the rounding interval).
  double to_double(unsigned precision_bits = 128) const;

  // "p/q·√r", "p·√r", or "0".
  std::string str() const;

 private:
  void normalize_zero() {
    if (coef_.is_zero()) radicand_ = 1;
  }

  Rational coef_;
  Integer radicand_;
};

inline ExactRadical operator*(const ExactRadical& a, const Rational& b) { return b * a; }

// Alias-style free functions mirroring the operator forms.
inline ExactRadical radical_mul(const ExactRadical& a, const ExactRadical& b) { return a * b; }
inline ExactRadical radical_add(const ExactRadical& a, const ExactRadical& b) { return a + b; }

// Round a radical to double at the given working precision.
inline double to_float(const ExactRadical& x, unsigned precision_bits = 128) {
  return x.to_double(precision_bits);
}

}  // namespace w6j
