#include "w6j/exact_radical.hpp"

#include <mutex>
#include <vector>

namespace w6j {

namespace {

// Trial-division bound for square extraction.  Covers every prime that can
// occur in radicands assembled from factorials at the default cache cap.
constexpr unsigned long kPrimeBound = 1024;

const std::vector<unsigned long>& small_primes() {
  static std::vector<unsigned long> primes = [] {
    std::vector<bool> composite(kPrimeBound + 1, false);
    std::vector<unsigned long> ps;
    for (unsigned long i = 2; i <= kPrimeBound; ++i) {
      if (composite[i]) continue;
      ps.push_back(i);
      for (unsigned long k = i * i; k <= kPrimeBound; k += i) composite[k] = true;
    }
    return ps;
  }();
  return primes;
}

// Splits n (> 0) into s^2 * f with f squarefree up to the trial-division
// bound; cofactors beyond the bound are only reduced when they are perfect
// squares.
void extract_square(const Integer& n, Integer& s, Integer& f) {
  s = 1;
  f = 1;
  Integer rest = n;
  for (unsigned long p : small_primes()) {
    if (rest == 1) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
    unsigned long e = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), Integer(p).get_mpz_t());
    if (e >= 2) {
      Integer pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), p, e / 2);
      s *= pk;
    }
    if (e % 2 == 1) f *= p;
  }
  if (rest > 1) {
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
      Integer r;
      mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
      s *= r;
    } else {
      f *= rest;
    }
  }
}

}  // namespace

ExactRadical::ExactRadical(const Rational& coef, const Rational& radicand)
    : coef_(coef), radicand_(1) {
  if (radicand.sign() < 0) throw DomainError("negative radicand " + radicand.str());
  if (coef_.is_zero() || radicand.is_zero()) {
    coef_ = Rational(0);
    return;
  }
  // c * sqrt(p/q) = (c/q) * sqrt(p*q): make the radicand a whole integer.
  Integer whole = radicand.num() * radicand.den();
  coef_ = coef_ / Rational(radicand.den());
  Integer square_root, squarefree;
  extract_square(whole, square_root, squarefree);
  coef_ *= Rational(square_root);
  radicand_ = squarefree;
}

ExactRadical operator*(const ExactRadical& a, const ExactRadical& b) {
  if (a.is_zero() || b.is_zero()) return ExactRadical();
  if (a.radicand_ == b.radicand_) {
    // sqrt(r)*sqrt(r) = r with r already squarefree: no refactoring needed.
    ExactRadical r;
    r.coef_ = a.coef_ * b.coef_ * Rational(a.radicand_);
    r.radicand_ = 1;
    return r;
  }
  return ExactRadical(a.coef_ * b.coef_, Rational(Integer(a.radicand_ * b.radicand_)));
}

ExactRadical operator+(const ExactRadical& a, const ExactRadical& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.radicand_ != b.radicand_)
    throw IncompatibleRadicands("cannot add sqrt(" + a.radicand_.get_str() + ") and sqrt(" +
                                b.radicand_.get_str() + ") terms");
  ExactRadical r;
  r.coef_ = a.coef_ + b.coef_;
  r.radicand_ = a.radicand_;
  r.normalize_zero();
  return r;
}

double ExactRadical::to_double(unsigned precision_bits) const {
  if (is_zero()) return 0.0;
  unsigned prec = precision_bits < 53 ? 53 : precision_bits;
  prec += 32;  // guard bits so the final rounding to double is clean
  mpf_class root(0, prec);
  mpf_class rad(radicand_, prec);
  mpf_sqrt(root.get_mpf_t(), rad.get_mpf_t());
  mpf_class c(coef_.raw(), prec);
  mpf_class out(c * root, prec);
  return out.get_d();
}

std::string ExactRadical::str() const {
  if (is_zero()) return "0";
  return coef_.str() + "·√" + radicand_.get_str();
}

}  // namespace w6j
