#pragma once

// Semiclassical evaluation of the 6j-symbol: the stationary-phase formula
// cos(Psi + pi/4) / sqrt(12 pi |V|) built on the tetrahedron whose edge
// lengths are the quantized values J = j + 1/2.  Also provides the relative
// action, the volume Poisson bracket that feeds the amplitude, and the Weyl
// eigenvalue corrections for the elementary rotational observables.

#include "w6j/half_int.hpp"
#include "w6j/rational.hpp"
#include "w6j/tetra.hpp"

namespace w6j {

// The six quantum numbers of a 6j-symbol together with their geometric
// lengths J = j + 1/2.  Parity of each coupling triad (sum an integer) is
// what makes the symbol's defining 3j-symbols exist; triangle inequalities
// are deliberately not required here because the classical classification
// of (J12, J23) takes over that role.
struct QuantizedLengths {
  HalfInt j1, j2, j3, j4, j12, j23;

  bool couplings_valid() const;
  LengthSet lengths() const;
};

// Geometric length of a quantum number: J = j + 1/2.  Throws DomainError for
// negative j.
double quantize(const HalfInt& j);

struct PRResult {
  double volume = 0.0;     // |V| of the tetrahedron at the quantized lengths
  double psi = 0.0;        // phase Psi = sum_e J_e (pi - phi_e), radians
  double amplitude = 0.0;  // 1 / sqrt(12 pi |V|)
  double value = 0.0;      // amplitude * cos(psi + pi/4)
  RegionClass region = RegionClass::NotExist;
  bool reliable = true;  // false when |V| is so small the estimate diverges
};

// Phase Psi: the sum over all six edges of J_e (pi - phi_e), with interior
// dihedral angles phi_e.  Homogeneous of degree 1 in the lengths.
double pr_phase(const VectorConfig& v);

// Relative action S = 2 sum_e J_e phi_e - 2 pi (J1 + J3).  Identically equal
// to -2 Psi + 2 pi (J2 + J4 + J12 + J23); on quantized lengths the latter
// term is an integer multiple of 2 pi, so exp(iS) = exp(-2i Psi).
double relative_action(const VectorConfig& v);

// Poisson bracket {|J2+J3|, |J1+J2|} = 6V / (J12 J23).  Signed: positive on
// the V > 0 branch, flips under time reversal.  Its magnitude is what enters
// the stationary-phase amplitude.
double wigner_amplitude(const VectorConfig& v);

// The stationary-phase estimate of the 6j-symbol at quantized lengths.
// Throws DomainError when the coupling parities fail and NotAllowed when the
// point (J12, J23) is not in the classically allowed region (no decaying
// forbidden-region form is provided).  Near-flat configurations are returned
// with reliable = false instead of silently reporting a huge amplitude.
PRResult ponzano_regge(const QuantizedLengths& q);

// Observables whose Weyl symbols are simple functions of the lengths.
enum class WeylOperator { I_r, Jsq_r, Jsq_12, Jsq_23 };

// Evaluates the Weyl symbol of the operator on the quantized manifold
// J = j + 1/2, as an exact rational:
//   I_r    -> j                      (exact eigenvalue)
//   Jsq_r  -> j(j+1) - 1/8           (eigenvalue error -1/8)
//   Jsq_12 -> j(j+1) - 1/2           (symbol J^2 - 3/4)
//   Jsq_23 -> j(j+1) - 1/2
// Throws UnknownOperator for any other operator tag.
Rational weyl_eigenvalue(WeylOperator op, const HalfInt& j);

}  // namespace w6j
