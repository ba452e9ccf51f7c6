#include "w6j/km_sphere.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "w6j/errors.hpp"
#include "w6j/vec3.hpp"

namespace w6j {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Slice sampling cannot sit exactly on J12 = 0, where the hinge azimuth is
// undefined; shave an area-negligible sliver off such a lower endpoint.
double slice_lo(double lo, double hi) {
  double eps = 1e-9 * std::max(1.0, hi);
  return lo < eps ? std::min(eps, hi) : lo;
}

double observable_at(double J1, double J2, double J3, double J4, double J12,
                     double phi, KMObservable obs) {
  if (obs == KMObservable::J12) return J12;
  VectorConfig v = build_vectors_clamped(J1, J2, J3, J4, J12, phi);
  switch (obs) {
    case KMObservable::J23:
      return norm(v.J2 + v.J3);
    case KMObservable::J13:
      return norm(v.J1 + v.J3);
    case KMObservable::V:
      return signed_volume(v);
    default:
      return J12;
  }
}

// Extremes of the observable over the phi12 circle at fixed J12.  J23 and
// J13 are monotone on [0, pi] (their squares are linear in cos phi) and even
// about the flat plane, so the endpoints bound them; V = Vmax(J12) sin phi.
std::pair<double, double> slice_range(double J1, double J2, double J3,
                                      double J4, double J12,
                                      KMObservable obs) {
  if (obs == KMObservable::J12) return {J12, J12};
  if (obs == KMObservable::V) {
    double c = observable_at(J1, J2, J3, J4, J12, kPi / 2, KMObservable::V);
    c = std::max(c, 0.0);
    return {-c, c};
  }
  double a = observable_at(J1, J2, J3, J4, J12, 0.0, obs);
  double b = observable_at(J1, J2, J3, J4, J12, kPi, obs);
  return {std::min(a, b), std::max(a, b)};
}

// Solves observable(J12, phi) = value for phi in [0, pi] by bisection,
// assuming the value lies between the endpoint evaluations.
double solve_phi(double J1, double J2, double J3, double J4, double J12,
                 KMObservable obs, double value) {
  double f0 = observable_at(J1, J2, J3, J4, J12, 0.0, obs) - value;
  double lo = 0.0, hi = kPi;
  bool increasing =
      observable_at(J1, J2, J3, J4, J12, kPi, obs) - value > f0;
  if ((increasing && f0 > 0) || (!increasing && f0 < 0)) return 0.0;
  double fpi = observable_at(J1, J2, J3, J4, J12, kPi, obs) - value;
  if ((increasing && fpi < 0) || (!increasing && fpi > 0)) return kPi;
  for (int it = 0; it < 64; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = observable_at(J1, J2, J3, J4, J12, mid, obs) - value;
    bool left = increasing ? (fm > 0) : (fm < 0);
    (left ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Angular measure of {phi in [0, 2pi) : observable(J12, phi) < value}.
double sublevel_measure(double J1, double J2, double J3, double J4,
                        double J12, KMObservable obs, double value) {
  if (obs == KMObservable::J12) return J12 < value ? kTwoPi : 0.0;
  if (obs == KMObservable::V) {
    double c = slice_range(J1, J2, J3, J4, J12, obs).second;
    if (c < 1e-14) return value > 0 ? kTwoPi : 0.0;
    if (value >= c) return kTwoPi;
    if (value <= -c) return 0.0;
    return kPi + 2.0 * std::asin(value / c);
  }
  auto [mn, mx] = slice_range(J1, J2, J3, J4, J12, obs);
  if (value <= mn) return 0.0;
  if (value >= mx) return kTwoPi;
  double phi = solve_phi(J1, J2, J3, J4, J12, obs, value);
  double a = observable_at(J1, J2, J3, J4, J12, 0.0, obs);
  // Mirror symmetry doubles the [0, pi] measure.
  return 2.0 * (a < value ? phi : kPi - phi);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double fa, double b, double fb, double m, double fm,
                        double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) < 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                          depth - 1) +
         adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                          depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (b <= a) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, 40);
}

// J12 values where a branch of the slice range crosses the level value;
// integrands are smooth between consecutive crossings.
std::vector<double> level_breakpoints(double J1, double J2, double J3,
                                      double J4, KMObservable obs,
                                      double value, double lo, double hi) {
  std::vector<double> out;
  lo = slice_lo(lo, hi);
  const int N = 256;
  auto branch = [&](double J12, bool upper) {
    auto r = slice_range(J1, J2, J3, J4, J12, obs);
    return (upper ? r.second : r.first) - value;
  };
  for (bool upper : {false, true}) {
    double prev = branch(lo, upper);
    for (int k = 1; k <= N; ++k) {
      double x = lo + (hi - lo) * k / N;
      double cur = branch(x, upper);
      if ((prev < 0) != (cur < 0)) {
        double a = lo + (hi - lo) * (k - 1) / N, b = x;
        for (int it = 0; it < 60; ++it) {
          double mid = 0.5 * (a + b);
          if ((branch(mid, upper) < 0) == (prev < 0))
            a = mid;
          else
            b = mid;
        }
        out.push_back(0.5 * (a + b));
      }
      prev = cur;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

KMObservables km_observables(double J1, double J2, double J3, double J4,
                             const KMPoint& p) {
  auto [lo, hi] = classical_j12_range(J1, J2, J3, J4);
  double tol = 1e-9 * std::max({1.0, J1, J2, J3, J4});
  if (p.J12 < lo - tol || p.J12 > hi + tol)
    throw DomainError("km_observables: J12 outside the classical range");
  double J12 = std::clamp(p.J12, lo, hi);
  VectorConfig v = build_vectors_clamped(J1, J2, J3, J4, J12, p.phi12);
  return KMObservables{norm(v.J2 + v.J3), norm(v.J1 + v.J3),
                       signed_volume(v)};
}

std::pair<double, double> observable_range(double J1, double J2, double J3,
                                           double J4, KMObservable obs) {
  switch (obs) {
    case KMObservable::J12:
      return classical_j12_range(J1, J2, J3, J4);
    case KMObservable::J23:
      return classical_j23_range(J1, J2, J3, J4);
    case KMObservable::J13: {
      double lo = std::max(std::abs(J1 - J3), std::abs(J2 - J4));
      double hi = std::min(J1 + J3, J2 + J4);
      if (lo > hi)
        throw EmptyRange("observable_range: empty J13 coupling range");
      return {lo, hi};
    }
    case KMObservable::V: {
      auto [lo, hi] = classical_j12_range(J1, J2, J3, J4);
      // Vmax(J12) vanishes at both endpoints; dense scan plus golden-section
      // refinement around the best sample.
      const int N = 512;
      double best = 0.0;
      int best_k = N / 2;
      for (int k = 1; k < N; ++k) {
        double x = lo + (hi - lo) * k / N;
        double c = observable_at(J1, J2, J3, J4, x, kPi / 2, obs);
        if (c > best) {
          best = c;
          best_k = k;
        }
      }
      double a = lo + (hi - lo) * std::max(0, best_k - 1) / N;
      double b = lo + (hi - lo) * std::min(N, best_k + 1) / N;
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      double f1 = observable_at(J1, J2, J3, J4, x1, kPi / 2, obs);
      double f2 = observable_at(J1, J2, J3, J4, x2, kPi / 2, obs);
      for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + gr * (b - a);
          f2 = observable_at(J1, J2, J3, J4, x2, kPi / 2, obs);
        } else {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - gr * (b - a);
          f1 = observable_at(J1, J2, J3, J4, x1, kPi / 2, obs);
        }
      }
      double vmax = std::max(best, std::max(f1, f2));
      return {-vmax, vmax};
    }
  }
  throw DomainError("observable_range: unknown observable");
}

std::vector<KMPoint> level_curve(double J1, double J2, double J3, double J4,
                                 KMObservable obs, double value,
                                 int n_points) {
  auto [lo, hi] = classical_j12_range(J1, J2, J3, J4);
  double tol = 1e-9 * std::max({1.0, J1, J2, J3, J4});
  n_points = std::max(n_points, 4);
  std::vector<KMPoint> out;

  if (obs == KMObservable::J12) {
    if (value < lo - tol || value > hi + tol)
      throw EmptyLevelSet("level_curve: J12 value outside its range");
    double J12 = std::clamp(value, lo, hi);
    for (int k = 0; k < n_points; ++k)
      out.push_back(KMPoint{J12, kTwoPi * k / n_points});
    return out;
  }

  auto [glo, ghi] = observable_range(J1, J2, J3, J4, obs);
  if (value < glo - tol || value > ghi + tol)
    throw EmptyLevelSet("level_curve: value outside the observable's range");

  double los = slice_lo(lo, hi);
  if (obs == KMObservable::V && std::abs(value) <= tol) {
    // The flat-plane contour: both meridians, traced as one closed loop
    // through the two poles.
    int half = std::max(2, n_points / 2);
    for (int k = 0; k < half; ++k)
      out.push_back(KMPoint{los + (hi - los) * k / (half - 1), 0.0});
    for (int k = half - 1; k >= 0; --k)
      out.push_back(KMPoint{los + (hi - los) * k / (half - 1), kPi});
    return out;
  }

  // Two phi-branches over the attainable J12 interval.
  int slices = std::max(24, n_points / 2);
  std::vector<KMPoint> forward, backward;
  for (int k = 0; k <= slices; ++k) {
    double J12 = los + (hi - los) * k / slices;
    auto [mn, mx] = slice_range(J1, J2, J3, J4, J12, obs);
    if (value < mn - tol || value > mx + tol) continue;
    if (obs == KMObservable::V) {
      double c = mx;
      double s = std::clamp(value / std::max(c, 1e-300), -1.0, 1.0);
      double alpha = std::asin(std::abs(s));
      if (value >= 0) {
        forward.push_back(KMPoint{J12, alpha});
        backward.push_back(KMPoint{J12, kPi - alpha});
      } else {
        forward.push_back(KMPoint{J12, kPi + alpha});
        backward.push_back(KMPoint{J12, kTwoPi - alpha});
      }
    } else {
      double phi = solve_phi(J1, J2, J3, J4, J12, obs,
                             std::clamp(value, mn, mx));
      forward.push_back(KMPoint{J12, phi});
      backward.push_back(KMPoint{J12, phi == 0.0 ? 0.0 : kTwoPi - phi});
    }
  }

  if (forward.empty()) {
    // The level set degenerates to the observable's extremal point (for
    // example the global maximum of J23); locate it by golden section on
    // the matching slice branch.
    bool top = std::abs(value - ghi) < std::abs(value - glo);
    auto branch = [&](double J12) {
      auto r = slice_range(J1, J2, J3, J4, J12, obs);
      return top ? r.second : -r.first;
    };
    double a = lo, b = hi;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = branch(x1), f2 = branch(x2);
    for (int it = 0; it < 120; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = branch(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = branch(x1);
      }
    }
    double J12 = 0.5 * (a + b);
    double phi;
    if (obs == KMObservable::V)
      phi = value >= 0 ? kPi / 2 : 3 * kPi / 2;
    else if (obs == KMObservable::J23)
      phi = top ? kPi : 0.0;
    else
      phi = top ? 0.0 : kPi;
    out.push_back(KMPoint{J12, phi});
    return out;
  }

  out = forward;
  for (auto it = backward.rbegin(); it != backward.rend(); ++it)
    out.push_back(*it);
  return out;
}

double enclosed_area(double J1, double J2, double J3, double J4,
                     KMObservable obs, double value) {
  auto [lo, hi] = classical_j12_range(J1, J2, J3, J4);
  double tol = 1e-9 * std::max({1.0, J1, J2, J3, J4});
  auto [glo, ghi] = observable_range(J1, J2, J3, J4, obs);
  if (value < glo - tol || value > ghi + tol)
    throw EmptyLevelSet("enclosed_area: value outside the observable's range");

  if (obs == KMObservable::J12)
    return kTwoPi * (std::clamp(value, lo, hi) - lo);

  auto f = [&](double J12) {
    return sublevel_measure(J1, J2, J3, J4, J12, obs, value);
  };
  std::vector<double> cuts =
      level_breakpoints(J1, J2, J3, J4, obs, value, lo, hi);
  cuts.insert(cuts.begin(), slice_lo(lo, hi));
  cuts.push_back(hi);
  double area = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    double seg = cuts[k + 1] - cuts[k];
    if (seg <= 0) continue;
    area += integrate(f, cuts[k], cuts[k + 1],
                      1e-8 * std::max(1.0, seg / (hi - lo)));
  }
  return area;
}

std::vector<std::pair<double, double>> caustic_curve(double J1, double J2,
                                                     double J3, double J4,
                                                     int n_points) {
  auto [lo, hi] = classical_j12_range(J1, J2, J3, J4);
  lo = slice_lo(lo, hi);
  int slices = std::max(4, n_points / 2);
  std::vector<std::pair<double, double>> out;
  auto branches = [&](double J12) {
    return slice_range(J1, J2, J3, J4, J12, KMObservable::J23);
  };
  for (int k = 0; k <= slices; ++k)
    out.emplace_back(lo + (hi - lo) * k / slices,
                     branches(lo + (hi - lo) * k / slices).first);
  for (int k = slices - 1; k >= 1; --k)
    out.emplace_back(lo + (hi - lo) * k / slices,
                     branches(lo + (hi - lo) * k / slices).second);
  return out;
}

SphereEmbedding sphere_embed(double J1, double J2, double J3, double J4,
                             const KMPoint& p) {
  auto [lo, hi] = classical_j12_range(J1, J2, J3, J4);
  double D = hi - lo;
  if (D <= 0) throw DegenerateConfig("sphere_embed: zero-size phase space");
  double c = std::clamp(2.0 * (p.J12 - lo) / D - 1.0, -1.0, 1.0);
  return SphereEmbedding{std::acos(c), p.phi12};
}

KMPoint sphere_unembed(double J1, double J2, double J3, double J4,
                       const SphereEmbedding& e) {
  auto [lo, hi] = classical_j12_range(J1, J2, J3, J4);
  double D = hi - lo;
  return KMPoint{lo + 0.5 * D * (1.0 + std::cos(e.theta)), e.phi};
}

}  // namespace w6j
