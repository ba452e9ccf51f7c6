#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "w6j/errors.hpp"
#include "w6j/half_int.hpp"
#include "w6j/tetra.hpp"
#include "w6j/vec3.hpp"

using namespace w6j;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Random admissible quad + interior J12, for property tests.
struct RandomQuad {
  std::mt19937 rng;
  explicit RandomQuad(unsigned seed) : rng(seed) {}

  std::array<double, 4> quad() {
    std::uniform_real_distribution<double> U(0.3, 2.5);
    for (;;) {
      std::array<double, 4> q{U(rng), U(rng), U(rng), U(rng)};
      try {
        auto r = classical_j12_range(q[0], q[1], q[2], q[3]);
        if (r.second - r.first > 0.2) return q;
      } catch (const EmptyRange&) {
      }
    }
  }

  double interior_j12(const std::array<double, 4>& q, double margin = 0.08) {
    auto [lo, hi] = classical_j12_range(q[0], q[1], q[2], q[3]);
    std::uniform_real_distribution<double> M(lo + margin * (hi - lo),
                                             hi - margin * (hi - lo));
    return M(rng);
  }
};

}  // namespace

TEST_SUITE_BEGIN("tetra");

TEST_CASE("polygon inequality and diagonal ranges") {
  CHECK(polygon_inequality(1, 1, 1, 1));
  CHECK_FALSE(polygon_inequality(1, 1, 1, 4));
  CHECK(polygon_inequality(1, 1, 1, 3));  // saturated counts as closable

  auto r = classical_j12_range(5, 3.5, 6, 6.5);
  CHECK(r.first == doctest::Approx(1.5));
  CHECK(r.second == doctest::Approx(8.5));
  auto r23 = classical_j23_range(5, 3.5, 6, 6.5);
  CHECK(r23.first == doctest::Approx(2.5));
  CHECK(r23.second == doctest::Approx(9.5));

  auto u = classical_j12_range(1, 1, 1, 1);
  CHECK(u.first == doctest::Approx(0.0));
  CHECK(u.second == doctest::Approx(2.0));

  CHECK_THROWS_AS(classical_j12_range(2, 1, 1, 5), EmptyRange);
}

TEST_CASE("regular tetrahedron anchors") {
  double phi = std::acos(1.0 / 3.0);
  VectorConfig c = build_vectors(1, 1, 1, 1, 1, phi);

  CHECK(norm(c.J1 + c.J2 + c.J3 + c.J4) < 1e-14);
  CHECK(norm(c.J1) == doctest::Approx(1.0));
  CHECK(norm(c.J2 + c.J3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(signed_volume(c) == doctest::Approx(1.0 / (6.0 * std::sqrt(2.0))));

  DihedralSet d = dihedral_angles(c);
  for (double a : {d.phi1, d.phi2, d.phi3, d.phi4, d.phi12, d.phi23})
    CHECK(a == doctest::Approx(phi).epsilon(1e-12));

  CHECK(cayley_menger(1, 1, 1, 1, 1, 1) == doctest::Approx(4.0));
}

TEST_CASE("determinant tracks 288 V^2 and goes negative beyond the roots") {
  RandomQuad gen(2024);
  for (int it = 0; it < 500; ++it) {
    auto q = gen.quad();
    double J12 = gen.interior_j12(q);
    std::uniform_real_distribution<double> A(0.1, kPi - 0.1);
    double phi = A(gen.rng);
    VectorConfig c = build_vectors(q[0], q[1], q[2], q[3], J12, phi);
    double x = norm(c.J2 + c.J3);
    double det = cayley_menger(q[0], q[1], q[2], q[3], J12, x);
    double V = signed_volume(c);
    CHECK(det == doctest::Approx(288.0 * V * V).epsilon(1e-8));

    auto [xmin, xmax] = j23_extrema(q[0], q[1], q[2], q[3], J12);
    CHECK(cayley_menger(q[0], q[1], q[2], q[3], J12, xmax + 0.2) < 0.0);
    double below = xmin - 0.2;
    if (below > 0.0)
      CHECK(cayley_menger(q[0], q[1], q[2], q[3], J12, below) < 0.0);
    CHECK(std::abs(cayley_menger(q[0], q[1], q[2], q[3], J12, xmin)) <
          1e-9 * std::pow(std::max({q[0], q[1], q[2], q[3], J12, xmin}), 8));
  }
}

TEST_CASE("hinge extrema equal the sweep extrema of |J2+J3|") {
  RandomQuad gen(7);
  for (int it = 0; it < 200; ++it) {
    auto q = gen.quad();
    double J12 = gen.interior_j12(q);
    auto [xmin, xmax] = j23_extrema(q[0], q[1], q[2], q[3], J12);
    double smin = 1e300, smax = -1e300;
    for (int k = 0; k <= 720; ++k) {
      double phi = 2.0 * kPi * k / 720.0;
      VectorConfig c = build_vectors_clamped(q[0], q[1], q[2], q[3], J12, phi);
      double x = norm(c.J2 + c.J3);
      smin = std::min(smin, x);
      smax = std::max(smax, x);
    }
    // The sweep samples the endpoints phi = 0 and pi exactly, so the grid
    // minimum/maximum are the true extrema.
    CHECK(xmin == doctest::Approx(smin).epsilon(1e-9));
    CHECK(xmax == doctest::Approx(smax).epsilon(1e-9));
  }
}

TEST_CASE("mirror pairs and planar configurations") {
  VectorConfig flat = build_vectors(1.0, 1.2, 0.8, 1.1, 1.5, 0.0);
  CHECK(signed_volume(flat) == doctest::Approx(0.0));

  VectorConfig a = build_vectors(1.0, 1.2, 0.8, 1.1, 1.5, 0.9);
  VectorConfig b = build_vectors(1.0, 1.2, 0.8, 1.1, 1.5, 2.0 * kPi - 0.9);
  CHECK(signed_volume(a) == doctest::Approx(-signed_volume(b)));
  CHECK(norm(a.J2 + a.J3) == doctest::Approx(norm(b.J2 + b.J3)));
  CHECK(signed_volume(a) > 0.0);  // azimuths in (0, pi) are the V > 0 branch

  // Negating all four vectors is time reversal: volume flips sign.
  VectorConfig neg{-1.0 * a.J1, -1.0 * a.J2, -1.0 * a.J3, -1.0 * a.J4};
  CHECK(signed_volume(neg) == doctest::Approx(-signed_volume(a)));

  CHECK_THROWS_AS(build_vectors(1, 1, 1, 1, 2.0, 0.5), DegenerateConfig);
  CHECK_THROWS_AS(build_vectors(1, 1, 3, 1, 1.0, 0.5), DegenerateConfig);
}

TEST_CASE("solving the hinge for a target second diagonal") {
  RandomQuad gen(99);
  for (int it = 0; it < 100; ++it) {
    auto q = gen.quad();
    double J12 = gen.interior_j12(q);
    auto [xmin, xmax] = j23_extrema(q[0], q[1], q[2], q[3], J12);
    std::uniform_real_distribution<double> T(xmin + 0.02 * (xmax - xmin),
                                             xmax - 0.02 * (xmax - xmin));
    double target = T(gen.rng);
    VectorConfig c = build_vectors_at_j23(q[0], q[1], q[2], q[3], J12, target);
    CHECK(norm(c.J2 + c.J3) == doctest::Approx(target).epsilon(1e-12));
    CHECK(signed_volume(c) >= 0.0);
  }
  CHECK_THROWS_AS(build_vectors_at_j23(1, 1, 1, 1, 1.0, 2.5), DomainError);
}

TEST_CASE("butterfly flow direction matches the volume bracket") {
  // d|J2+J3| / d(phi12) along the hinge motion equals 6V/(J12 |J2+J3|).
  // This fixes the orientation convention of the hinge azimuth once: the
  // second diagonal grows on the positive-volume branch.
  RandomQuad gen(31);
  for (int it = 0; it < 50; ++it) {
    auto q = gen.quad();
    double J12 = gen.interior_j12(q);
    std::uniform_real_distribution<double> A(0.2, 2.0 * kPi - 0.2);
    double phi = A(gen.rng);
    if (std::abs(phi - kPi) < 0.2) continue;
    double h = 1e-6;
    auto at = [&](double p) {
      VectorConfig c = build_vectors(q[0], q[1], q[2], q[3], J12, p);
      return norm(c.J2 + c.J3);
    };
    VectorConfig c = build_vectors(q[0], q[1], q[2], q[3], J12, phi);
    double fd = (at(phi + h) - at(phi - h)) / (2.0 * h);
    double pb = 6.0 * signed_volume(c) / (J12 * norm(c.J2 + c.J3));
    CHECK(fd == doctest::Approx(pb).epsilon(1e-6));
  }
}

TEST_CASE("region classification over the classical rectangle") {
  double q[4] = {5, 3.5, 6, 6.5};
  CHECK(classify_region(q[0], q[1], q[2], q[3], 10.0, 5.0) ==
        RegionClass::NotExist);
  CHECK(classify_region(q[0], q[1], q[2], q[3], 5.0, 20.0) ==
        RegionClass::NotExist);
  CHECK(classify_region(q[0], q[1], q[2], q[3], 1.5, 5.0) ==
        RegionClass::Boundary);
  CHECK(classify_region(q[0], q[1], q[2], q[3], 5.0, 9.5) ==
        RegionClass::Boundary);

  auto [xmin, xmax] = j23_extrema(q[0], q[1], q[2], q[3], 5.0);
  CHECK(classify_region(q[0], q[1], q[2], q[3], 5.0, 0.5 * (xmin + xmax)) ==
        RegionClass::Allowed);
  CHECK(classify_region(q[0], q[1], q[2], q[3], 5.0, xmin) ==
        RegionClass::Caustic);
  CHECK(classify_region(q[0], q[1], q[2], q[3], 5.0, xmax) ==
        RegionClass::Caustic);
  // Between the caustic root and the rectangle edge lies the forbidden zone.
  CHECK(classify_region(q[0], q[1], q[2], q[3], 5.0, 0.5 * (xmin + 2.5)) ==
        RegionClass::Forbidden);
  CHECK(classify_region(1, 1, 1, 5, 1.0, 1.0) == RegionClass::NotExist);

  CHECK(region_letter(RegionClass::NotExist) == 'U');
  CHECK(region_letter(RegionClass::Allowed) == 'A');
  CHECK(region_letter(RegionClass::Forbidden) == 'F');
  CHECK(region_letter(RegionClass::Caustic) == 'C');
  CHECK(region_letter(RegionClass::Boundary) == 'B');
}

TEST_CASE("caustic roots stay inside the classical bounds") {
  RandomQuad gen(555);
  for (int it = 0; it < 300; ++it) {
    auto q = gen.quad();
    auto [glo, ghi] = classical_j23_range(q[0], q[1], q[2], q[3]);
    auto [lo, hi] = classical_j12_range(q[0], q[1], q[2], q[3]);
    for (int k = 1; k < 24; ++k) {
      double J12 = lo + (hi - lo) * k / 24.0;
      auto [xmin, xmax] = j23_extrema(q[0], q[1], q[2], q[3], J12);
      double tol = 1e-9 * std::max(1.0, ghi);
      CHECK(xmin >= glo - tol);
      CHECK(xmax <= ghi + tol);
    }
  }
}

TEST_CASE("no quantized point sits on a flat configuration (small scan)") {
  // Exhaustive over all half-integer spins up to 3 with valid couplings;
  // the acceptance suite runs the full scan up to 8.
  long long checked = 0;
  for (int t1 = 0; t1 <= 6; ++t1)
    for (int t2 = 0; t2 <= 6; ++t2)
      for (int t3 = 0; t3 <= 6; ++t3)
        for (int t4 = 0; t4 <= 6; ++t4) {
          if ((t1 + t2 + t3 + t4) % 2 != 0) continue;
          int lo12 = std::max(std::abs(t1 - t2), std::abs(t3 - t4));
          int hi12 = std::min(t1 + t2, t3 + t4);
          int lo23 = std::max(std::abs(t2 - t3), std::abs(t1 - t4));
          int hi23 = std::min(t2 + t3, t1 + t4);
          for (int t12 = lo12; t12 <= hi12; t12 += 2)
            for (int t23 = lo23; t23 <= hi23; t23 += 2) {
              long long det = cayley_menger_quantized(
                  HalfInt::from_twice(t1), HalfInt::from_twice(t2),
                  HalfInt::from_twice(t3), HalfInt::from_twice(t4),
                  HalfInt::from_twice(t12), HalfInt::from_twice(t23));
              CHECK(det != 0);
              ++checked;
            }
        }
  CHECK(checked > 2000);

  // The integer determinant is 256 times the floating-point one.
  long long d = cayley_menger_quantized(1, 1, 1, 1, 1, 1);
  CHECK(d == doctest::Approx(256.0 *
                             cayley_menger(1.5, 1.5, 1.5, 1.5, 1.5, 1.5)));
}

TEST_CASE("product of three rotations around a spherical triangle") {
  // Octant triangle: all interior angles are right angles.
  Vec3 x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
  Mat3 oct = rodrigues_hamilton(x, y, z, kPi / 2, kPi / 2, kPi / 2);
  CHECK(max_abs_diff(oct, Mat3::identity()) < 1e-14);

  // Collinear axes compose to a single rotation by the angle sum.
  Mat3 col = rodrigues_hamilton(z, z, z, 0.3, 0.5, 0.7);
  CHECK(max_abs_diff(col, rotation(z, 2 * (0.3 + 0.5 + 0.7))) < 1e-14);

  // Random triangles, traversed with the interior on the right.
  std::mt19937 rng(4242);
  std::normal_distribution<double> N(0, 1);
  auto unit = [&]() { return normalized(Vec3{N(rng), N(rng), N(rng)}); };
  auto interior = [](const Vec3& v, const Vec3& a, const Vec3& b) {
    Vec3 p = normalized(a - dot(a, v) * v);
    Vec3 q = normalized(b - dot(b, v) * v);
    return std::acos(std::clamp(dot(p, q), -1.0, 1.0));
  };
  int done = 0;
  while (done < 300) {
    Vec3 a1 = unit(), a2 = unit(), a3 = unit();
    if (std::abs(dot(a1, cross(a2, a3))) < 0.05) continue;
    if (dot(a1, cross(a2, a3)) > 0) std::swap(a2, a3);
    double f1 = interior(a1, a2, a3);
    double f2 = interior(a2, a3, a1);
    double f3 = interior(a3, a1, a2);
    Mat3 P = rodrigues_hamilton(a1, a2, a3, f1, f2, f3);
    CHECK(max_abs_diff(P, Mat3::identity()) < 1e-10);
    // Closure does not depend on which vertex starts the traversal.
    Mat3 Q = rodrigues_hamilton(a2, a3, a1, f2, f3, f1);
    CHECK(max_abs_diff(Q, Mat3::identity()) < 1e-10);
    ++done;
  }

  // Orientation matters: traversing a generic triangle the other way around
  // (interior on the left) does not close in this factor order.
  {
    Vec3 b1 = normalized(Vec3{1, 0.1, -0.2});
    Vec3 b2 = normalized(Vec3{-0.3, 1, 0.15});
    Vec3 b3 = normalized(Vec3{0.2, -0.1, 1});
    if (dot(b1, cross(b2, b3)) > 0) std::swap(b2, b3);
    double g1 = interior(b1, b2, b3);
    double g2 = interior(b2, b3, b1);
    double g3 = interior(b3, b1, b2);
    CHECK(max_abs_diff(rodrigues_hamilton(b1, b2, b3, g1, g2, g3),
                       Mat3::identity()) < 1e-12);
    Mat3 wrong = rodrigues_hamilton(b1, b3, b2, g1, g3, g2);
    CHECK(max_abs_diff(wrong, Mat3::identity()) > 1e-3);
  }
}

TEST_CASE("rotation cycle closes with the expected lift signs") {
  auto check_cycle = [](const VectorConfig& c) {
    CycleReport rep = rotation_cycle(c);
    CHECK(rep.composite_error < 1e-10);
    CHECK(rep.lift_signs == std::array<int, 4>{-1, 1, -1, 1});
    DihedralSet d = dihedral_angles(c);
    CHECK(rep.holonomy[0] ==
          doctest::Approx(2 * d.phi1 - 2 * kPi).epsilon(1e-9));
    CHECK(rep.holonomy[1] == doctest::Approx(2 * d.phi2).epsilon(1e-9));
    CHECK(rep.holonomy[2] ==
          doctest::Approx(2 * d.phi3 - 2 * kPi).epsilon(1e-9));
    CHECK(rep.holonomy[3] == doctest::Approx(2 * d.phi4).epsilon(1e-9));
  };

  check_cycle(build_vectors(1, 1, 1, 1, 1, std::acos(1.0 / 3.0)));

  RandomQuad gen(77);
  int done = 0;
  while (done < 250) {
    auto q = gen.quad();
    double J12 = gen.interior_j12(q);
    std::uniform_real_distribution<double> A(0.15, 2.0 * kPi - 0.15);
    double phi = A(gen.rng);
    if (std::abs(phi - kPi) < 0.15) continue;
    VectorConfig c = build_vectors(q[0], q[1], q[2], q[3], J12, phi);
    check_cycle(c);
    // Mirror image (y -> -y): the lift signs are homotopy invariants.
    VectorConfig m = c;
    for (Vec3* v : {&m.J1, &m.J2, &m.J3, &m.J4}) v->y = -v->y;
    check_cycle(m);
    ++done;
  }

  CHECK_THROWS_AS(rotation_cycle(build_vectors(1, 1.2, 0.8, 1.1, 1.5, 0.0)),
                  DegenerateConfig);
}

TEST_SUITE_END();
