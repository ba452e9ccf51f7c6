#include "w6j/semiclassical.hpp"

#include <cmath>

#include "w6j/errors.hpp"

namespace w6j {

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

bool QuantizedLengths::couplings_valid() const {
  for (const HalfInt* j : {&j1, &j2, &j3, &j4, &j12, &j23})
    if (j->is_negative()) return false;
  auto parity_ok = [](const HalfInt& a, const HalfInt& b, const HalfInt& c) {
    return (a.twice() + b.twice() + c.twice()) % 2 == 0;
  };
  return parity_ok(j1, j2, j12) && parity_ok(j3, j4, j12) &&
         parity_ok(j2, j3, j23) && parity_ok(j1, j4, j23);
}

LengthSet QuantizedLengths::lengths() const {
  return LengthSet{quantize(j1),  quantize(j2),  quantize(j3),
                   quantize(j4),  quantize(j12), quantize(j23)};
}

double quantize(const HalfInt& j) {
  if (j.is_negative()) throw DomainError("quantize: negative quantum number");
  return j.value() + 0.5;
}

double pr_phase(const VectorConfig& v) {
  LengthSet L = lengths_of(v);
  DihedralSet d = dihedral_angles(v);
  return L.J1 * (kPi - d.phi1) + L.J2 * (kPi - d.phi2) +
         L.J3 * (kPi - d.phi3) + L.J4 * (kPi - d.phi4) +
         L.J12 * (kPi - d.phi12) + L.J23 * (kPi - d.phi23);
}

double relative_action(const VectorConfig& v) {
  LengthSet L = lengths_of(v);
  DihedralSet d = dihedral_angles(v);
  double sum = L.J1 * d.phi1 + L.J2 * d.phi2 + L.J3 * d.phi3 + L.J4 * d.phi4 +
               L.J12 * d.phi12 + L.J23 * d.phi23;
  return 2.0 * sum - 2.0 * kPi * (L.J1 + L.J3);
}

double wigner_amplitude(const VectorConfig& v) {
  LengthSet L = lengths_of(v);
  return 6.0 * signed_volume(v) / (L.J12 * L.J23);
}

PRResult ponzano_regge(const QuantizedLengths& q) {
  if (!q.couplings_valid())
    throw DomainError("ponzano_regge: coupling parities fail");
  LengthSet L = q.lengths();

  PRResult r;
  r.region = classify_region(L.J1, L.J2, L.J3, L.J4, L.J12, L.J23);
  if (r.region != RegionClass::Allowed)
    throw NotAllowed(
        "ponzano_regge: point is not classically allowed (region '" +
        std::string(1, region_letter(r.region)) + "')");

  VectorConfig v = build_vectors_at_j23(L.J1, L.J2, L.J3, L.J4, L.J12, L.J23);
  double V = std::abs(signed_volume(v));
  double scale =
      std::max({L.J1, L.J2, L.J3, L.J4, L.J12, L.J23});
  r.volume = V;
  r.psi = pr_phase(v);
  r.amplitude = 1.0 / std::sqrt(12.0 * kPi * V);
  r.value = r.amplitude * std::cos(r.psi + kPi / 4.0);
  r.reliable = V >= 1e-6 * scale * scale * scale;
  return r;
}

Rational weyl_eigenvalue(WeylOperator op, const HalfInt& j) {
  if (j.is_negative())
    throw DomainError("weyl_eigenvalue: negative quantum number");
  long t = j.twice();
  switch (op) {
    case WeylOperator::I_r:
      return Rational(t, 2);
    case WeylOperator::Jsq_r:
      // (j + 1/2)^2 - 3/8 = j(j+1) - 1/8
      return Rational(2 * t * (t + 2) - 1, 8);
    case WeylOperator::Jsq_12:
    case WeylOperator::Jsq_23:
      // (j + 1/2)^2 - 3/4 = j(j+1) - 1/2
      return Rational(t * (t + 2) - 2, 4);
  }
  throw UnknownOperator("weyl_eigenvalue: unknown operator tag");
}

}  // namespace w6j
