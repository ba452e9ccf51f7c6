#pragma once

#include <utility>

#include "w6j/exact_radical.hpp"
#include "w6j/half_int.hpp"

namespace w6j {

// Arguments of {j1 j2 j12; j3 j4 j23}: two binary coupling schemes of four
// angular momenta, with intermediate j12 = j1+j2 and j23 = j2+j3.  The four
// coupling triads are (j1,j2,j12), (j3,j4,j12), (j2,j3,j23), (j1,j4,j23).
struct SixJArgs {
  HalfInt j1, j2, j12, j3, j4, j23;

  bool couplings_valid() const {
    return is_triad(j1, j2, j12) && is_triad(j3, j4, j12) && is_triad(j2, j3, j23) &&
           is_triad(j1, j4, j23);
  }
  friend bool operator==(const SixJArgs&, const SixJArgs&) = default;
};

// 2j-symbol: (j, j; m, m') = (-1)^(j-m) delta_{m,-m'} / sqrt(2j+1).
// Throws DomainError when (j, m) or (j, m') is not a valid pair.
ExactRadical two_j_symbol(HalfInt j, HalfInt m, HalfInt mp);

// Time reversal of |j m>: the phase (-1)^(j-m) and the flipped projection.
std::pair<int, HalfInt> time_reversal_phase(HalfInt j, HalfInt m);

// 3j-symbol via the closed single-sum form: one rational coefficient times
// one square root.  Invalid couplings give exact zero; malformed (j, m)
// pairs throw DomainError.
ExactRadical three_j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

// Memoized 3j lookup (shared, thread-safe cache).
const ExactRadical& three_j_cached(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2,
                                   HalfInt m3);

// 6j-symbol by the magnetic sum: four 3j-symbols and six 2j-symbols summed
// over all projections, with a sqrt(2j+1) weight per edge.  This is the
// reference evaluator; it prunes the lattice with the m-selection rules but
// performs no other algebraic shortcuts.
ExactRadical six_j_msum(const SixJArgs& a);

// 6j-symbol by the single-sum (Racah) form; the production evaluator.
ExactRadical six_j_racah(const SixJArgs& a);

// Quantum range of j12 in the coupling (j1 j2) j3 j4: (max(|j1-j2|, |j3-j4|),
// min(j1+j2, j3+j4)).  The range is empty when lo > hi.
std::pair<HalfInt, HalfInt> j12_bounds(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4);

// Same for j23, i.e. the coupling (j2 j3) with (j1 j4).
std::pair<HalfInt, HalfInt> j23_bounds(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4);

// Dimension of the zero-total-spin space of four angular momenta: the number
// of admissible j12 values, clamped at zero.
int dim_zs(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4);

// The same dimension via the semiperimeter form
// D = 2 min(j1..j4, s-j1..s-j4) + 1 (s = (j1+j2+j3+j4)/2), clamped at zero.
int dim_zs_symmetric(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4);

// Overlap <(j2 j3) j23 | (j1 j2) j12> of the two zero-spin coupling bases:
// (-1)^(j1+j2+j3+j4) sqrt((2 j12+1)(2 j23+1)) {j1 j2 j12; j3 j4 j23}.
ExactRadical scalar_product_BA(const SixJArgs& a);

}  // namespace w6j
