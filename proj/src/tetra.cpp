#include "w6j/tetra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "w6j/errors.hpp"

namespace w6j {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Determinant of a 5x5 matrix by Laplace expansion; T is double or a wide
// integer type.
template <typename T>
T det5(const std::array<std::array<T, 5>, 5>& m) {
  auto det2 = [](T a, T b, T c, T d) { return a * d - b * c; };
  auto det3 = [&](const std::array<T, 9>& e) {
    return e[0] * det2(e[4], e[5], e[7], e[8]) -
           e[1] * det2(e[3], e[5], e[6], e[8]) +
           e[2] * det2(e[3], e[4], e[6], e[7]);
  };
  auto det4 = [&](const std::array<std::array<T, 5>, 5>& a, int skip_col) {
    // rows 1..4 of m, dropping column skip_col; expand along the first row.
    std::array<int, 4> cols{};
    int n = 0;
    for (int c = 0; c < 5; ++c)
      if (c != skip_col) cols[n++] = c;
    T sum{};
    for (int k = 0; k < 4; ++k) {
      std::array<T, 9> sub{};
      int idx = 0;
      for (int r = 2; r < 5; ++r)
        for (int j = 0; j < 4; ++j)
          if (j != k) sub[idx++] = a[r][cols[j]];
      T term = a[1][cols[k]] * det3(sub);
      sum = (k % 2 == 0) ? sum + term : sum - term;
    }
    return sum;
  };
  T sum{};
  for (int c = 0; c < 5; ++c) {
    if (m[0][c] == T{}) continue;
    T term = m[0][c] * det4(m, c);
    sum = (c % 2 == 0) ? sum + term : sum - term;
  }
  return sum;
}

template <typename T>
std::array<std::array<T, 5>, 5> cm_matrix(T one, T J1sq, T J2sq, T J3sq,
                                          T J4sq, T J12sq, T xsq) {
  return {{{T{}, one, one, one, one},
           {one, T{}, J1sq, J12sq, J4sq},
           {one, J1sq, T{}, J2sq, xsq},
           {one, J12sq, J2sq, T{}, J3sq},
           {one, J4sq, xsq, J3sq, T{}}}};
}

// Hinge placement shared by the strict and clamped builders.  P0 is the
// vertex where edges 1, 4 and 12 meet; P2 = J12 * z; the base vertex P3
// lies in the xz-plane (x >= 0) and the wing vertex P1 at azimuth phi12.
VectorConfig hinge_config(double J1, double J2, double J3, double J4,
                          double J12, double phi12, bool strict) {
  if (!(J12 > 0.0))
    throw DegenerateConfig("hinge construction requires J12 > 0");
  double z3 = (J4 * J4 + J12 * J12 - J3 * J3) / (2.0 * J12);
  double x3sq = J4 * J4 - z3 * z3;
  double z1 = (J1 * J1 + J12 * J12 - J2 * J2) / (2.0 * J12);
  double r1sq = J1 * J1 - z1 * z1;
  double scale2 = std::max({J1 * J1, J2 * J2, J3 * J3, J4 * J4, J12 * J12});
  if (strict) {
    if (x3sq <= 1e-14 * scale2)
      throw DegenerateConfig("triangle (J3, J4, J12) has zero area");
    if (r1sq <= 1e-14 * scale2)
      throw DegenerateConfig("triangle (J1, J2, J12) has zero area");
  } else {
    if (x3sq < -1e-9 * scale2 || r1sq < -1e-9 * scale2)
      throw DegenerateConfig("triangle inequality violated at the hinge");
  }
  double x3 = std::sqrt(std::max(0.0, x3sq));
  double r1 = std::sqrt(std::max(0.0, r1sq));
  Vec3 P0{0, 0, 0};
  Vec3 P2{0, 0, J12};
  Vec3 P3{x3, 0, z3};
  Vec3 P1{r1 * std::cos(phi12), r1 * std::sin(phi12), z1};
  return {P1 - P0, P2 - P1, P3 - P2, P0 - P3};
}

// Interior dihedral angle at the edge A-B between the faces through C and D.
double edge_dihedral(const Vec3& A, const Vec3& B, const Vec3& C,
                     const Vec3& D, const char* edge_name) {
  Vec3 u = B - A;
  double un = norm(u);
  if (un == 0.0)
    throw DegenerateConfig(std::string("zero-length edge ") + edge_name);
  u = (1.0 / un) * u;
  Vec3 p = (C - A) - dot(C - A, u) * u;
  Vec3 q = (D - A) - dot(D - A, u) * u;
  double pn = norm(p), qn = norm(q);
  if (pn <= 1e-12 * un || qn <= 1e-12 * un)
    throw DegenerateConfig(std::string("zero-area face at edge ") + edge_name);
  double c = dot(p, q) / (pn * qn);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

// Angle accumulated about `axis` by the lifted loop X, assuming X is (up to
// sign) a rotation about that axis: X = u(axis, -h).
double closing_angle(const Quat& X, const Vec3& axis) {
  return -2.0 * std::atan2(dot(X.v, axis), X.w);
}

// Residual off-axis part of X relative to `axis`; zero when X is exactly a
// rotation about the axis.
double off_axis_error(const Quat& X, const Vec3& axis) {
  Vec3 res = X.v - dot(X.v, axis) * axis;
  return norm(res);
}

}  // namespace

bool polygon_inequality(double J1, double J2, double J3, double J4) {
  double sum = J1 + J2 + J3 + J4;
  double mx = std::max({J1, J2, J3, J4});
  return mx <= sum - mx;
}

std::pair<double, double> classical_j12_range(double J1, double J2, double J3,
                                              double J4) {
  double lo = std::max(std::abs(J1 - J2), std::abs(J3 - J4));
  double hi = std::min(J1 + J2, J3 + J4);
  if (lo > hi) throw EmptyRange("no |J1+J2| satisfies both triangle bounds");
  return {lo, hi};
}

std::pair<double, double> classical_j23_range(double J1, double J2, double J3,
                                              double J4) {
  double lo = std::max(std::abs(J2 - J3), std::abs(J1 - J4));
  double hi = std::min(J2 + J3, J1 + J4);
  if (lo > hi) throw EmptyRange("no |J2+J3| satisfies both triangle bounds");
  return {lo, hi};
}

double cayley_menger(double J1, double J2, double J3, double J4, double J12,
                     double x) {
  auto m = cm_matrix(1.0, J1 * J1, J2 * J2, J3 * J3, J4 * J4, J12 * J12,
                     x * x);
  return det5(m);
}

long long cayley_menger_quantized(HalfInt j1, HalfInt j2, HalfInt j3,
                                  HalfInt j4, HalfInt j12, HalfInt j23) {
  // 2J = 2j + 1, so 4 J^2 = (2j+1)^2 is an integer; scaling rows 1..4 of the
  // determinant by 4 turns every squared length into that integer and the
  // border ones into fours, multiplying the determinant by 256.
  auto tsq = [](HalfInt j) {
    if (j.is_negative()) throw DomainError("negative j in quantized lengths");
    __int128 t = j.twice() + 1;
    return t * t;
  };
  auto m = cm_matrix<__int128>(4, tsq(j1), tsq(j2), tsq(j3), tsq(j4),
                               tsq(j12), tsq(j23));
  m[0] = {0, 1, 1, 1, 1};
  __int128 d = det5(m);
  if (d > INT64_MAX || d < INT64_MIN)
    throw ResourceLimit("quantized determinant exceeds 64-bit range");
  return static_cast<long long>(d);
}

std::pair<double, double> j23_extrema(double J1, double J2, double J3,
                                      double J4, double J12) {
  VectorConfig same = hinge_config(J1, J2, J3, J4, J12, 0.0, true);
  VectorConfig opposite = hinge_config(J1, J2, J3, J4, J12, kPi, true);
  double a = norm(same.J2 + same.J3);
  double b = norm(opposite.J2 + opposite.J3);
  if (a > b) std::swap(a, b);
  return {a, b};
}

VectorConfig build_vectors(double J1, double J2, double J3, double J4,
                           double J12, double phi12) {
  return hinge_config(J1, J2, J3, J4, J12, phi12, true);
}

VectorConfig build_vectors_clamped(double J1, double J2, double J3, double J4,
                                   double J12, double phi12) {
  return hinge_config(J1, J2, J3, J4, J12, phi12, false);
}

VectorConfig build_vectors_at_j23(double J1, double J2, double J3, double J4,
                                  double J12, double J23) {
  auto [lo, hi] = j23_extrema(J1, J2, J3, J4, J12);
  double pad = 1e-9 * std::max(1.0, hi);
  if (J23 < lo - pad || J23 > hi + pad)
    throw DomainError("target |J2+J3| outside the hinge range");
  // |J2+J3|^2 is an increasing linear function of -cos(phi12), so it is
  // monotone on [0, pi] and bisection converges unconditionally.
  double a = 0.0, b = kPi;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (a + b);
    VectorConfig c = hinge_config(J1, J2, J3, J4, J12, mid, true);
    if (norm(c.J2 + c.J3) < J23)
      a = mid;
    else
      b = mid;
  }
  return hinge_config(J1, J2, J3, J4, J12, 0.5 * (a + b), true);
}

double signed_volume(const VectorConfig& v) {
  return dot(v.J1, cross(v.J2, v.J3)) / 6.0;
}

LengthSet lengths_of(const VectorConfig& v) {
  return {norm(v.J1),        norm(v.J2),        norm(v.J3),
          norm(v.J4),        norm(v.J1 + v.J2), norm(v.J2 + v.J3)};
}

DihedralSet dihedral_angles(const VectorConfig& v) {
  Vec3 P0{0, 0, 0};
  Vec3 P1 = v.J1;
  Vec3 P2 = P1 + v.J2;
  Vec3 P3 = P2 + v.J3;
  DihedralSet d;
  d.phi1 = edge_dihedral(P0, P1, P2, P3, "1");
  d.phi2 = edge_dihedral(P1, P2, P0, P3, "2");
  d.phi3 = edge_dihedral(P2, P3, P0, P1, "3");
  d.phi4 = edge_dihedral(P3, P0, P1, P2, "4");
  d.phi12 = edge_dihedral(P0, P2, P1, P3, "12");
  d.phi23 = edge_dihedral(P1, P3, P0, P2, "23");
  return d;
}

RegionClass classify_region(double J1, double J2, double J3, double J4,
                            double J12, double J23) {
  std::pair<double, double> r12, r23;
  try {
    r12 = classical_j12_range(J1, J2, J3, J4);
    r23 = classical_j23_range(J1, J2, J3, J4);
  } catch (const EmptyRange&) {
    return RegionClass::NotExist;
  }
  double scale = std::max({J1, J2, J3, J4, J12, J23, 1e-30});
  double edge_tol = 1e-9 * scale;
  if (J12 < r12.first - edge_tol || J12 > r12.second + edge_tol ||
      J23 < r23.first - edge_tol || J23 > r23.second + edge_tol)
    return RegionClass::NotExist;
  if (std::abs(J12 - r12.first) <= edge_tol ||
      std::abs(J12 - r12.second) <= edge_tol ||
      std::abs(J23 - r23.first) <= edge_tol ||
      std::abs(J23 - r23.second) <= edge_tol)
    return RegionClass::Boundary;
  double det = cayley_menger(J1, J2, J3, J4, J12, J23);
  double det_tol = 1e-9 * std::pow(scale, 8);
  if (std::abs(det) < det_tol) return RegionClass::Caustic;
  return det > 0 ? RegionClass::Allowed : RegionClass::Forbidden;
}

char region_letter(RegionClass r) {
  switch (r) {
    case RegionClass::NotExist: return 'U';
    case RegionClass::Boundary: return 'B';
    case RegionClass::Caustic: return 'C';
    case RegionClass::Allowed: return 'A';
    case RegionClass::Forbidden: return 'F';
  }
  return '?';
}

Mat3 rodrigues_hamilton(const Vec3& a1, const Vec3& a2, const Vec3& a3,
                        double phi1, double phi2, double phi3) {
  return rotation(a3, 2 * phi3) * rotation(a2, 2 * phi2) *
         rotation(a1, 2 * phi1);
}

CycleReport rotation_cycle(const VectorConfig& v) {
  double V = signed_volume(v);
  LengthSet L = lengths_of(v);
  double scale = std::max({L.J1, L.J2, L.J3, L.J4, L.J12, L.J23});
  if (std::abs(V) <= 1e-12 * scale * scale * scale)
    throw DegenerateConfig("rotation cycle is undefined on flat tetrahedra");
  DihedralSet d = dihedral_angles(v);
  // The cycle as described starts at negative volume: the hinge rotation by
  // +2*phi12 (right-hand rule about j12) then carries the wing through the
  // base plane.  Positive-volume input runs the mirror-image cycle, i.e. all
  // rotation senses flip.
  double s = V < 0 ? 1.0 : -1.0;

  Vec3 j1 = normalized(v.J1), j2 = normalized(v.J2), j3 = normalized(v.J3);
  Vec3 j4 = normalized(v.J4), j12 = normalized(v.J1 + v.J2);

  Mat3 R1 = rotation(j12, s * 2 * d.phi12);
  Vec3 J1p = R1.apply(v.J1), J2p = R1.apply(v.J2);
  Vec3 j23p = normalized(J2p + v.J3);
  Mat3 R2 = rotation(j23p, s * 2 * d.phi23);
  Vec3 J1pp = J1p, J2pp = R2.apply(J2p), J3pp = R2.apply(v.J3), J4pp = v.J4;

  CycleReport rep;
  Mat3 R4 = rotation(j4, s * 2 * d.phi4);
  double err = 0.0;
  err = std::max(err, norm(J1pp - R4.apply(v.J1)));
  err = std::max(err, norm(J2pp - R4.apply(v.J2)));
  err = std::max(err, norm(J3pp - R4.apply(v.J3)));
  err = std::max(err, norm(J4pp - R4.apply(v.J4)));

  // SU(2) lifts of the same rotations.  Each spinor sees the hinge rotations
  // that moved its vector, the rigid closing rotation about -j4, and finally
  // a rotation about its own (restored) axis that closes the loop.
  Quat u12 = Quat::axis_angle(j12, s * 2 * d.phi12);
  Quat u23 = Quat::axis_angle(j23p, s * 2 * d.phi23);
  Quat um4 = Quat::axis_angle(-1.0 * j4, s * 2 * d.phi4);

  const std::array<Quat, 4> accumulated = {um4 * u12, um4 * u23 * u12,
                                           um4 * u23, um4};
  const std::array<Vec3, 4> axes = {j1, j2, j3, j4};
  const std::array<double, 4> own_angle = {s * 2 * d.phi1, s * 2 * d.phi2,
                                           s * 2 * d.phi3, s * 2 * d.phi4};
  for (int r = 0; r < 4; ++r) {
    err = std::max(err, off_axis_error(accumulated[r], axes[r]));
    rep.holonomy[r] = s * closing_angle(accumulated[r], axes[r]);
    Quat closed = Quat::axis_angle(axes[r], own_angle[r]) * accumulated[r];
    rep.lift_signs[r] = closed.w > 0 ? 1 : -1;
  }
  rep.composite_error = err;
  return rep;
}

}  // namespace w6j
