#include "w6j/wigner.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "w6j/factorial.hpp"

namespace w6j {

namespace {

// Triangle weight Delta(a,b,c) = (a+b-c)!(a-b+c)!(-a+b+c)! / (a+b+c+1)!.
Rational triangle_weight(HalfInt a, HalfInt b, HalfInt c) {
  Integer num = factorial(a + b - c) * factorial(a - b + c) * factorial(-a + b + c);
  return Rational(num, factorial(a + b + c + HalfInt(1)));
}

int to_int(HalfInt h) { return h.to_int(); }

}  // namespace

ExactRadical two_j_symbol(HalfInt j, HalfInt m, HalfInt mp) {
  if (!is_valid_jm(j, m) || !is_valid_jm(j, mp))
    throw DomainError("invalid (j, m) pair in 2j-symbol: j=" + j.str() + " m=" + m.str() +
                      " m'=" + mp.str());
  if ((m + mp).twice() != 0) return ExactRadical();
  Rational inv(1, (HalfInt(1) + 2 * j).to_int());
  return Rational(parity_sign(j - m)) * ExactRadical::sqrt_of(inv);
}

std::pair<int, HalfInt> time_reversal_phase(HalfInt j, HalfInt m) {
  if (!is_valid_jm(j, m))
    throw DomainError("invalid (j, m) pair: j=" + j.str() + " m=" + m.str());
  return {parity_sign(j - m), -m};
}

ExactRadical three_j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  if (!is_valid_jm(j1, m1) || !is_valid_jm(j2, m2) || !is_valid_jm(j3, m3))
    throw DomainError("invalid (j, m) pair in 3j-symbol");
  if ((m1 + m2 + m3).twice() != 0) return ExactRadical();
  if (!is_triad(j1, j2, j3)) return ExactRadical();

  int t_lo = std::max({0, to_int(j2 - j3 - m1), to_int(j1 - j3 + m2)});
  int t_hi = std::min({to_int(j1 + j2 - j3), to_int(j1 - m1), to_int(j2 + m2)});
  Rational sum(0);
  for (int t = t_lo; t <= t_hi; ++t) {
    Integer den = factorial(t) * factorial(to_int(j1 + j2 - j3) - t) *
                  factorial(to_int(j1 - m1) - t) * factorial(to_int(j2 + m2) - t) *
                  factorial(to_int(j3 - j2 + m1) + t) * factorial(to_int(j3 - j1 - m2) + t);
    sum += Rational(t % 2 == 0 ? 1 : -1, 1) * Rational(Integer(1), den);
  }
  if (sum.is_zero()) return ExactRadical();

  Rational radicand = triangle_weight(j1, j2, j3) *
                      Rational(Integer(factorial(j1 + m1) * factorial(j1 - m1) *
                                       factorial(j2 + m2) * factorial(j2 - m2) *
                                       factorial(j3 + m3) * factorial(j3 - m3)));
  Rational coef = Rational(parity_sign(j1 - j2 - m3)) * sum;
  return ExactRadical(coef, radicand);
}

namespace {

struct ThreeJKey {
  std::array<int, 6> v;
  friend bool operator==(const ThreeJKey&, const ThreeJKey&) = default;
};

struct ThreeJKeyHash {
  size_t operator()(const ThreeJKey& k) const {
    size_t h = 1469598103934665603ull;
    for (int x : k.v) {
      h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

std::shared_mutex g_three_j_mutex;
std::unordered_map<ThreeJKey, ExactRadical, ThreeJKeyHash> g_three_j_cache;

}  // namespace

const ExactRadical& three_j_cached(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2,
                                   HalfInt m3) {
  ThreeJKey key{{j1.twice(), j2.twice(), j3.twice(), m1.twice(), m2.twice(), m3.twice()}};
  {
    std::shared_lock lock(g_three_j_mutex);
    auto it = g_three_j_cache.find(key);
    if (it != g_three_j_cache.end()) return it->second;
  }
  ExactRadical value = three_j(j1, j2, j3, m1, m2, m3);
  std::unique_lock lock(g_three_j_mutex);
  return g_three_j_cache.emplace(key, std::move(value)).first->second;
}

ExactRadical six_j_msum(const SixJArgs& a) {
  if (!a.couplings_valid()) return ExactRadical();
  // Edge labels in the order (l1, l2, l3; l4, l5, l6) of the four coupled
  // triads (l1 l2 l3), (l1 l5 l6), (l2 l6 l4), (l3 l4 l5).
  const HalfInt l1 = a.j1, l2 = a.j2, l3 = a.j12, l4 = a.j3, l5 = a.j4, l6 = a.j23;

  ExactRadical acc;
  // Projections m4, m3, m6 are fixed by the triad selection rules once
  // (m1, m2, m5) are chosen; everything else in the lattice sums to zero.
  for (int m1t = -l1.twice(); m1t <= l1.twice(); m1t += 2) {
    HalfInt m1 = HalfInt::from_twice(m1t);
    for (int m2t = -l2.twice(); m2t <= l2.twice(); m2t += 2) {
      HalfInt m2 = HalfInt::from_twice(m2t);
      HalfInt m3 = -m1 - m2;
      if (abs(m3) > l3) continue;
      const ExactRadical& t1 = three_j_cached(l1, l2, l3, m1, m2, m3);
      if (t1.is_zero()) continue;
      for (int m5t = -l5.twice(); m5t <= l5.twice(); m5t += 2) {
        HalfInt m5 = HalfInt::from_twice(m5t);
        HalfInt m6 = m1 + m5;
        if (abs(m6) > l6) continue;
        HalfInt m4 = m2 + m6;
        if (abs(m4) > l4) continue;
        const ExactRadical& t2 = three_j_cached(l1, l5, l6, -m1, -m5, m6);
        if (t2.is_zero()) continue;
        const ExactRadical& t3 = three_j_cached(l2, l6, l4, -m2, -m6, m4);
        if (t3.is_zero()) continue;
        const ExactRadical& t4 = three_j_cached(l3, l4, l5, -m3, -m4, m5);
        if (t4.is_zero()) continue;
        HalfInt phase_exp = (l1 - m1) + (l2 - m2) + (l3 - m3) + (l4 - m4) + (l5 - m5) + (l6 - m6);
        ExactRadical term = Rational(parity_sign(phase_exp)) * (t1 * t2) * (t3 * t4);
        acc += term;
      }
    }
  }
  // One sqrt(2 l + 1) weight and one 1/sqrt(2 l + 1) from the 2j-symbol per
  // edge; their exact product is 1 but both factors are applied as written.
  Integer n(1);
  for (HalfInt l : {l1, l2, l3, l4, l5, l6}) n *= (HalfInt(1) + 2 * l).to_int();
  return ExactRadical::sqrt_of(Rational(n)) * ExactRadical::sqrt_of(Rational(Integer(1), n)) * acc;
}

ExactRadical six_j_racah(const SixJArgs& a) {
  if (!a.couplings_valid()) return ExactRadical();
  const HalfInt b1 = a.j1, b2 = a.j2, b3 = a.j12, b4 = a.j3, b5 = a.j4, b6 = a.j23;

  int s1 = to_int(b1 + b2 + b3);
  int s2 = to_int(b1 + b5 + b6);
  int s3 = to_int(b4 + b2 + b6);
  int s4 = to_int(b4 + b5 + b3);
  int p1 = to_int(b1 + b2 + b4 + b5);
  int p2 = to_int(b2 + b3 + b5 + b6);
  int p3 = to_int(b3 + b1 + b6 + b4);

  Rational sum(0);
  for (int t = std::max({s1, s2, s3, s4}); t <= std::min({p1, p2, p3}); ++t) {
    Integer den = factorial(t - s1) * factorial(t - s2) * factorial(t - s3) * factorial(t - s4) *
                  factorial(p1 - t) * factorial(p2 - t) * factorial(p3 - t);
    Rational term(factorial(t + 1), den);
    sum += (t % 2 == 0) ? term : -term;
  }
  if (sum.is_zero()) return ExactRadical();

  Rational radicand = triangle_weight(b1, b2, b3) * triangle_weight(b1, b5, b6) *
                      triangle_weight(b4, b2, b6) * triangle_weight(b4, b5, b3);
  return ExactRadical(sum, radicand);
}

std::pair<HalfInt, HalfInt> j12_bounds(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4) {
  if (j1.is_negative() || j2.is_negative() || j3.is_negative() || j4.is_negative())
    throw DomainError("negative angular momentum in j12_bounds");
  return {max(abs(j1 - j2), abs(j3 - j4)), min(j1 + j2, j3 + j4)};
}

std::pair<HalfInt, HalfInt> j23_bounds(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4) {
  return j12_bounds(j2, j3, j1, j4);
}

int dim_zs(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4) {
  if (!(j1 + j2 + j3 + j4).is_integer()) return 0;
  auto [lo, hi] = j12_bounds(j1, j2, j3, j4);
  if (hi < lo) return 0;
  return (hi - lo).to_int() + 1;
}

int dim_zs_symmetric(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4) {
  if (j1.is_negative() || j2.is_negative() || j3.is_negative() || j4.is_negative())
    throw DomainError("negative angular momentum in dim_zs_symmetric");
  if (!(j1 + j2 + j3 + j4).is_integer()) return 0;
  HalfInt s = HalfInt::from_twice((j1 + j2 + j3 + j4).twice() / 2);
  HalfInt m = j1;
  for (HalfInt v : {j2, j3, j4, s - j1, s - j2, s - j3, s - j4}) m = min(m, v);
  int dim = m.twice() + 1;
  return dim > 0 ? dim : 0;
}

ExactRadical scalar_product_BA(const SixJArgs& a) {
  ExactRadical sixj = six_j_racah(a);
  if (sixj.is_zero()) return sixj;
  int phase = parity_sign(a.j1 + a.j2 + a.j3 + a.j4);
  long dims = static_cast<long>((HalfInt(1) + 2 * a.j12).to_int()) * (HalfInt(1) + 2 * a.j23).to_int();
  return Rational(phase) * (ExactRadical::sqrt_of(Rational(dims)) * sixj);
}

}  // namespace w6j
