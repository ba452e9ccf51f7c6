#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "w6j/errors.hpp"
#include "w6j/half_int.hpp"
#include "w6j/km_sphere.hpp"
#include "w6j/tetra.hpp"
#include "w6j/wigner.hpp"

using namespace w6j;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

TEST_SUITE_BEGIN("km_sphere");

TEST_CASE("pointwise observables and their symmetries") {
  double q[4] = {5, 3.5, 6, 6.5};

  KMObservables flat = km_observables(q[0], q[1], q[2], q[3], {5.0, 0.0});
  CHECK(flat.V == doctest::Approx(0.0));

  KMObservables a = km_observables(q[0], q[1], q[2], q[3], {5.0, 1.1});
  KMObservables b =
      km_observables(q[0], q[1], q[2], q[3], {5.0, kTwoPi - 1.1});
  CHECK(a.J23 == doctest::Approx(b.J23).epsilon(1e-12));
  CHECK(a.J13 == doctest::Approx(b.J13).epsilon(1e-12));
  CHECK(a.V == doctest::Approx(-b.V).epsilon(1e-12));

  // At the pinch circle every azimuth is the same point of the sphere.
  auto [lo, hi] = classical_j12_range(q[0], q[1], q[2], q[3]);
  KMObservables p0 = km_observables(q[0], q[1], q[2], q[3], {lo, 0.0});
  for (double phi : {0.7, 2.0, 4.4}) {
    KMObservables pk = km_observables(q[0], q[1], q[2], q[3], {lo, phi});
    CHECK(pk.J23 == doctest::Approx(p0.J23).epsilon(1e-12));
    CHECK(pk.J13 == doctest::Approx(p0.J13).epsilon(1e-12));
    CHECK(pk.V == doctest::Approx(0.0));
  }

  CHECK_THROWS_AS(km_observables(q[0], q[1], q[2], q[3], {20.0, 0.0}),
                  DomainError);
  // J12 = 0 endpoint: the limiting observables are direction-dependent.
  CHECK_THROWS_AS(km_observables(1, 1, 1, 1, {0.0, 0.3}), DegenerateConfig);
}

TEST_CASE("observable ranges over the sphere") {
  double q[4] = {5, 3.5, 6, 6.5};
  auto r12 = observable_range(q[0], q[1], q[2], q[3], KMObservable::J12);
  CHECK(r12.first == doctest::Approx(1.5));
  CHECK(r12.second == doctest::Approx(8.5));
  auto r23 = observable_range(q[0], q[1], q[2], q[3], KMObservable::J23);
  CHECK(r23.first == doctest::Approx(2.5));
  CHECK(r23.second == doctest::Approx(9.5));
  auto r13 = observable_range(q[0], q[1], q[2], q[3], KMObservable::J13);
  CHECK(r13.first == doctest::Approx(3.0));
  CHECK(r13.second == doctest::Approx(10.0));
  auto rv = observable_range(q[0], q[1], q[2], q[3], KMObservable::V);
  CHECK(rv.first == doctest::Approx(-rv.second));
  CHECK(rv.second > 0.0);

  // The sampled extremes of J23 and J13 on a dense grid stay inside the
  // reported ranges and reach them at the extremal points.
  auto [lo, hi] = r12;
  double best23 = -1e300, worst23 = 1e300;
  for (int i = 1; i < 160; ++i)
    for (int k = 0; k <= 24; ++k) {
      KMPoint p{lo + (hi - lo) * i / 160.0, kPi * k / 24.0};
      KMObservables o = km_observables(q[0], q[1], q[2], q[3], p);
      best23 = std::max(best23, o.J23);
      worst23 = std::min(worst23, o.J23);
      CHECK(o.J23 <= r23.second + 1e-9);
      CHECK(o.J23 >= r23.first - 1e-9);
      CHECK(o.J13 <= r13.second + 1e-9);
      CHECK(o.J13 >= r13.first - 1e-9);
      CHECK(std::abs(o.V) <= rv.second + 1e-9);
    }
  CHECK(best23 == doctest::Approx(r23.second).epsilon(1e-3));
  CHECK(worst23 == doctest::Approx(r23.first).epsilon(1e-3));
}

TEST_CASE("level curves lie on their level sets") {
  double q[4] = {5, 3.5, 6, 6.5};

  auto circle = level_curve(q[0], q[1], q[2], q[3], KMObservable::J12, 5.0, 32);
  CHECK(circle.size() == 32);
  for (auto& p : circle) CHECK(p.J12 == doctest::Approx(5.0));
  CHECK(circle.front().phi12 == doctest::Approx(0.0));
  CHECK(circle.back().phi12 == doctest::Approx(kTwoPi * 31 / 32));

  for (KMObservable obs : {KMObservable::J23, KMObservable::J13}) {
    auto [glo, ghi] = observable_range(q[0], q[1], q[2], q[3], obs);
    double v = glo + 0.45 * (ghi - glo);
    auto curve = level_curve(q[0], q[1], q[2], q[3], obs, v, 96);
    CHECK(curve.size() >= 24);
    for (auto& p : curve) {
      KMObservables o = km_observables(q[0], q[1], q[2], q[3], p);
      double got = obs == KMObservable::J23 ? o.J23 : o.J13;
      CHECK(got == doctest::Approx(v).epsilon(1e-9));
    }
  }

  // Signed-volume levels: generic value and the flat-plane contour.
  auto rv = observable_range(q[0], q[1], q[2], q[3], KMObservable::V);
  double v = 0.4 * rv.second;
  for (double level : {v, -v}) {
    auto curve =
        level_curve(q[0], q[1], q[2], q[3], KMObservable::V, level, 96);
    CHECK(curve.size() >= 24);
    for (auto& p : curve) {
      KMObservables o = km_observables(q[0], q[1], q[2], q[3], p);
      CHECK(o.V == doctest::Approx(level).epsilon(1e-9));
    }
  }
  auto plane = level_curve(q[0], q[1], q[2], q[3], KMObservable::V, 0.0, 64);
  for (auto& p : plane) {
    CHECK((std::abs(p.phi12) < 1e-12 || std::abs(p.phi12 - kPi) < 1e-12));
    KMObservables o = km_observables(q[0], q[1], q[2], q[3], p);
    CHECK(o.V == doctest::Approx(0.0));
  }

  // The global maximum of J23 is a single point on the phi12 = pi meridian.
  auto r23 = observable_range(q[0], q[1], q[2], q[3], KMObservable::J23);
  auto top = level_curve(q[0], q[1], q[2], q[3], KMObservable::J23,
                         r23.second, 64);
  CHECK(top.size() == 1);
  CHECK(top[0].phi12 == doctest::Approx(kPi));
  KMObservables ot = km_observables(q[0], q[1], q[2], q[3], top[0]);
  CHECK(ot.J23 == doctest::Approx(r23.second).epsilon(1e-9));

  CHECK_THROWS_AS(
      level_curve(q[0], q[1], q[2], q[3], KMObservable::J23, 100.0, 32),
      EmptyLevelSet);
}

TEST_CASE("symplectic areas of sublevel regions") {
  // Quantized quad: lengths j + 1/2 for j = (9/2, 3, 11/2, 6).
  double q[4] = {5, 3.5, 6, 6.5};
  auto [lo, hi] = classical_j12_range(q[0], q[1], q[2], q[3]);
  double D = hi - lo;
  int dim = dim_zs(HalfInt::from_twice(9), HalfInt(3), HalfInt::from_twice(11),
                   HalfInt(6));
  CHECK(dim == 7);

  // Whole sphere: 2 pi D, and D is exactly the dimension.
  double total = enclosed_area(q[0], q[1], q[2], q[3], KMObservable::J12, hi);
  CHECK(total == doctest::Approx(kTwoPi * D).epsilon(1e-12));
  CHECK(D == doctest::Approx(double(dim)).epsilon(1e-12));

  // Quantized J12 orbits: the n-th from the bottom encloses (n + 1/2) 2 pi.
  for (int n = 0; n < dim; ++n) {
    double v = lo + n + 0.5;
    double a = enclosed_area(q[0], q[1], q[2], q[3], KMObservable::J12, v);
    CHECK(a == doctest::Approx(kTwoPi * (n + 0.5)).epsilon(1e-12));
  }

  // Quantized J23 orbits measured in the (J12, phi12) chart: the areas come
  // out as (m + 1/2) 2 pi as well, because (J23, phi23) is an equally good
  // canonical chart of the same sphere.
  auto r23 = observable_range(q[0], q[1], q[2], q[3], KMObservable::J23);
  int dim23 = int(std::lround(r23.second - r23.first));
  CHECK(dim23 == dim);
  double prev = 0.0;
  for (int m = 0; m < dim23; ++m) {
    double v = r23.first + m + 0.5;
    double a = enclosed_area(q[0], q[1], q[2], q[3], KMObservable::J23, v);
    CHECK(a == doctest::Approx(kTwoPi * (m + 0.5)).epsilon(1e-6));
    // Consecutive orbits bound uniform Planck cells of area 2 pi.
    if (m > 0) CHECK(a - prev == doctest::Approx(kTwoPi).epsilon(1e-6));
    prev = a;
  }

  // The flat-plane contour halves the sphere.
  double half = enclosed_area(q[0], q[1], q[2], q[3], KMObservable::V, 0.0);
  CHECK(half == doctest::Approx(kPi * D).epsilon(1e-8));

  CHECK_THROWS_AS(
      enclosed_area(q[0], q[1], q[2], q[3], KMObservable::J23, 99.0),
      EmptyLevelSet);
}

TEST_CASE("caustic oval in the diagonal plane") {
  double q[4] = {5, 3.5, 6, 6.5};
  auto cc = caustic_curve(q[0], q[1], q[2], q[3], 256);
  CHECK(cc.size() >= 128);

  auto [lo12, hi12] = classical_j12_range(q[0], q[1], q[2], q[3]);
  auto [lo23, hi23] = classical_j23_range(q[0], q[1], q[2], q[3]);
  double mn23 = 1e300, mx23 = -1e300;
  for (auto& [J12, J23] : cc) {
    CHECK(std::abs(cayley_menger(q[0], q[1], q[2], q[3], J12, J23)) < 1e-6);
    CHECK(J12 >= lo12 - 1e-9);
    CHECK(J12 <= hi12 + 1e-9);
    CHECK(J23 >= lo23 - 1e-9);
    CHECK(J23 <= hi23 + 1e-9);
    mn23 = std::min(mn23, J23);
    mx23 = std::max(mx23, J23);
  }
  // Touches all four sides of the rectangle: the J12 endpoints are hit
  // exactly, the J23 bounds to within the slice resolution.
  CHECK(cc.front().first == doctest::Approx(lo12));
  CHECK(mn23 == doctest::Approx(lo23).epsilon(5e-3));
  CHECK(mx23 == doctest::Approx(hi23).epsilon(5e-3));

  // Exchange-symmetric quad: the oval is symmetric under J12 <-> J23.
  auto sym = caustic_curve(1, 1, 1, 1, 128);
  for (auto& [J12, J23] : sym)
    CHECK(std::abs(cayley_menger(1, 1, 1, 1, J23, J12)) < 1e-9);
}

TEST_CASE("flow direction flips with the volume sign") {
  double q[4] = {5, 3.5, 6, 6.5};
  double h = 1e-6;
  for (double J12 : {3.0, 5.0, 7.0})
    for (double phi : {0.4, 1.3, 2.6, 3.9, 5.2}) {
      KMObservables o = km_observables(q[0], q[1], q[2], q[3], {J12, phi});
      double fwd =
          km_observables(q[0], q[1], q[2], q[3], {J12, phi + h}).J23;
      double bwd =
          km_observables(q[0], q[1], q[2], q[3], {J12, phi - h}).J23;
      double slope = (fwd - bwd) / (2 * h);
      CHECK(slope * o.V > 0.0);
      CHECK(slope ==
            doctest::Approx(6.0 * o.V / (J12 * o.J23)).epsilon(1e-5));
    }
}

TEST_CASE("round-sphere coordinates invert exactly") {
  double q[4] = {5, 3.5, 6, 6.5};
  auto [lo, hi] = classical_j12_range(q[0], q[1], q[2], q[3]);

  CHECK(sphere_embed(q[0], q[1], q[2], q[3], {hi, 0.3}).theta ==
        doctest::Approx(0.0));
  CHECK(sphere_embed(q[0], q[1], q[2], q[3], {lo, 0.3}).theta ==
        doctest::Approx(kPi));
  CHECK(sphere_embed(q[0], q[1], q[2], q[3], {0.5 * (lo + hi), 0.3}).theta ==
        doctest::Approx(kPi / 2));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> UJ(lo, hi), UP(0.0, kTwoPi);
  for (int it = 0; it < 200; ++it) {
    KMPoint p{UJ(rng), UP(rng)};
    SphereEmbedding e = sphere_embed(q[0], q[1], q[2], q[3], p);
    KMPoint back = sphere_unembed(q[0], q[1], q[2], q[3], e);
    CHECK(std::abs(back.J12 - p.J12) < 1e-12 * hi);
    CHECK(std::abs(back.phi12 - p.phi12) < 1e-12);
    CHECK(e.theta >= 0.0);
    CHECK(e.theta <= kPi);
  }
}

TEST_SUITE_END();
