#pragma once

#include <array>
#include <utility>

#include "w6j/half_int.hpp"
#include "w6j/vec3.hpp"

namespace w6j {

// Six edge lengths of the angular-momentum tetrahedron.  Edges 1,2,3,4 form
// the closed quadrilateral J1+J2+J3+J4 = 0; edges 12 and 23 are the two
// diagonals |J1+J2| and |J2+J3|.
struct LengthSet {
  double J1 = 0, J2 = 0, J3 = 0, J4 = 0, J12 = 0, J23 = 0;
};

// Four vectors summing to zero.  Placed head-to-tail they trace the
// quadrilateral whose vertices span the tetrahedron.
struct VectorConfig {
  Vec3 J1, J2, J3, J4;
};

// Interior dihedral angles at the six edges, each in [0, pi].
struct DihedralSet {
  double phi1 = 0, phi2 = 0, phi3 = 0, phi4 = 0, phi12 = 0, phi23 = 0;
};

// Classification of a (J12, J23) point for a fixed quad J1..J4.
enum class RegionClass { NotExist, Boundary, Caustic, Allowed, Forbidden };

// Result of driving a tetrahedron through the closed cycle of rotations
// (two hinge rotations plus the rigid closing rotation) and lifting each
// spinor's closed loop into SU(2).
struct CycleReport {
  // Max deviation of the two composed hinge rotations from the single
  // rotation about j4 by twice the dihedral angle there, plus any residual
  // axis error in the per-spinor closed loops.
  double composite_error = 0.0;
  // SU(2) values (+1 or -1) of the four per-spinor closed loops.
  std::array<int, 4> lift_signs{};
  // Accumulated rotation angle about each spinor's own axis needed to close
  // its loop: {2*phi1 - 2*pi, 2*phi2, 2*phi3 - 2*pi, 2*phi4} for spinors
  // 1..4, reported in the orientation where the cycle starts at negative
  // volume.
  std::array<double, 4> holonomy{};
};

// True iff four nonnegative lengths close into a (possibly flat) polygon:
// max <= half the perimeter.
bool polygon_inequality(double J1, double J2, double J3, double J4);

// Classical range of the diagonal |J1+J2| (triangle bounds from the pairs
// (J1,J2) and (J3,J4)).  Throws EmptyRange when the polygon inequality
// fails.
std::pair<double, double> classical_j12_range(double J1, double J2, double J3,
                                              double J4);
// Classical range of |J2+J3| (pairs (J2,J3) and (J1,J4)).
std::pair<double, double> classical_j23_range(double J1, double J2, double J3,
                                              double J4);

// 5x5 Cayley-Menger determinant of the tetrahedron with quadrilateral edges
// J1..J4, diagonal J12 and trial diagonal x = |J2+J3|.  Equals 288 V^2 on
// realizable configurations; negative beyond the flat-configuration roots.
double cayley_menger(double J1, double J2, double J3, double J4, double J12,
                     double x);

// The same determinant on quantized lengths J = j + 1/2, evaluated exactly
// in integer arithmetic after scaling all squared lengths by 4 (the result
// is 256 times the real determinant).  Throws ResourceLimit if the exact
// value leaves the 64-bit range (far beyond the lattice scans used here).
long long cayley_menger_quantized(HalfInt j1, HalfInt j2, HalfInt j3,
                                  HalfInt j4, HalfInt j12, HalfInt j23);

// Minimum and maximum of |J2+J3| over the hinge motion at fixed J12: the two
// flat configurations (wing folded onto the base plane, same side and
// opposite side).  These are the roots of the Cayley-Menger determinant as a
// quadratic in x^2.  Throws DegenerateConfig when a bounding triangle has
// zero area.
std::pair<double, double> j23_extrema(double J1, double J2, double J3,
                                      double J4, double J12);

// Deterministic gauge construction: J1+J2 along +z, the 3-4-12 triangle in
// the xz-plane with nonnegative x, and the 1-2-12 wing vertex at azimuth
// phi12 (right-hand rule about +z).  The interior dihedral angle at the
// 12-edge equals phi12 for phi12 in [0, pi] and 2*pi - phi12 otherwise; the
// signed volume is positive exactly when sin(phi12) > 0.  Throws
// DegenerateConfig when J12 <= 0 or a bounding triangle degenerates.
VectorConfig build_vectors(double J1, double J2, double J3, double J4,
                           double J12, double phi12);

// build_vectors without the nonzero-area requirement: tiny negative
// discriminants are clamped to zero so that pinch configurations (wing or
// base collapsed onto the hinge axis) yield their unique limiting shape.
VectorConfig build_vectors_clamped(double J1, double J2, double J3, double J4,
                                   double J12, double phi12);

// Gauge construction solved for the second diagonal: picks phi12 in [0, pi]
// (the nonnegative-volume branch) such that |J2+J3| = J23, by bisection.
// Throws DomainError when J23 lies outside the flat-configuration bounds.
VectorConfig build_vectors_at_j23(double J1, double J2, double J3, double J4,
                                  double J12, double J23);

// Signed volume (1/6) J1 . (J2 x J3).
double signed_volume(const VectorConfig& v);

// The six edge lengths measured from the vectors.
LengthSet lengths_of(const VectorConfig& v);

// Interior dihedral angles from the face planes meeting at each edge.
// Throws DegenerateConfig when a face has zero area.
DihedralSet dihedral_angles(const VectorConfig& v);

// Classify a (J12, J23) point: NotExist outside the classical rectangle,
// Boundary on its edge, then by the sign of the Cayley-Menger determinant
// (Caustic within |det| < 1e-9 * scale^8, the determinant being degree 8 in
// the lengths).
RegionClass classify_region(double J1, double J2, double J3, double J4,
                            double J12, double J23);

// Single-letter tag for grids: U (NotExist), B, C, A, F.
char region_letter(RegionClass r);

// Product R(a3, 2*phi3) R(a2, 2*phi2) R(a1, 2*phi1) of rotations about three
// unit axes.  When the axes are the vertices of a spherical triangle with
// interior angles phi1..phi3 and the path a1 -> a2 -> a3 keeps the interior
// on the right (clockwise seen from outside the sphere, det[a1 a2 a3] < 0),
// the product is the identity.  Counterclockwise triples satisfy the
// identity with the factors in reversed order.
Mat3 rodrigues_hamilton(const Vec3& a1, const Vec3& a2, const Vec3& a3,
                        double phi1, double phi2, double phi3);

// Drive the tetrahedron through the closed rotation cycle: hinge rotation
// about the 12-diagonal by twice its dihedral angle (which reflects the
// shape through the base plane), hinge rotation about the moved 23-diagonal,
// and the rigid rotation about -j4 that restores the original orientation.
// Verifies that the two hinge rotations compose to the rotation about j4 by
// twice its dihedral angle, and reports each spinor's closing holonomy and
// SU(2) lift sign (expected pattern -1, +1, -1, +1).  Throws
// DegenerateConfig on flat input.
CycleReport rotation_cycle(const VectorConfig& v);

}  // namespace w6j
