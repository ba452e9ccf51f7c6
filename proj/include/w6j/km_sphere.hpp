#pragma once

// The reduced phase space of four angular-momentum vectors with fixed
// lengths and zero total: a sphere coordinatized by (J12, phi12), carrying
// the symplectic form dJ12 ^ dphi12 (this orientation is fixed once here).
// Provides the rotationally invariant observables as functions on the
// sphere, their level curves, enclosed symplectic areas, the caustic curve
// in the (J12, J23) plane, and the round embedding into standard spherical
// angles.

#include <utility>
#include <vector>

#include "w6j/tetra.hpp"

namespace w6j {

// A point of the reduced phase space: the inner diagonal length and the
// hinge azimuth, phi12 in [0, 2pi).  Both endpoint circles J12 = J12_min and
// J12 = J12_max collapse to single points (the poles).
struct KMPoint {
  double J12 = 0.0;
  double phi12 = 0.0;
};

// Standard spherical angles of the round embedding: J12 = J12_min +
// (D/2)(1 + cos theta) with D = J12_max - J12_min, phi = phi12.  theta = 0
// is the J12_max pole.
struct SphereEmbedding {
  double theta = 0.0;
  double phi = 0.0;
};

enum class KMObservable { J12, J23, J13, V };

struct KMObservables {
  double J23 = 0.0;
  double J13 = 0.0;
  double V = 0.0;
};

// Rotationally invariant observables at a point of the sphere: the two other
// diagonals and the signed volume.  Works at the pinch circles (the limiting
// values there are unique); throws DegenerateConfig when J12 = 0 is itself
// an endpoint, where no unique limit exists.
KMObservables km_observables(double J1, double J2, double J3, double J4,
                             const KMPoint& p);

// Global range of an observable over the sphere.
std::pair<double, double> observable_range(double J1, double J2, double J3,
                                           double J4, KMObservable obs);

// Ordered polyline sampling of the level set {observable = value} with about
// n_points vertices.  J12 level sets are the coordinate circles; J23 and J13
// level sets are closed curves symmetric under phi12 -> 2pi - phi12; V level
// sets live in one open hemisphere (or on the dividing plane when value = 0).
// Throws EmptyLevelSet when the value is not attained.
std::vector<KMPoint> level_curve(double J1, double J2, double J3, double J4,
                                 KMObservable obs, double value,
                                 int n_points);

// Symplectic area of the sublevel region {observable < value} in the
// dJ12 ^ dphi12 measure.  The region grows from the observable's minimum
// point; the total sphere area 2 pi (J12_max - J12_min) is the wrap modulus
// for any other interior choice.  Throws EmptyLevelSet when the value is
// outside the observable's closed range.
double enclosed_area(double J1, double J2, double J3, double J4,
                     KMObservable obs, double value);

// The flat-configuration locus mapped to the (J12, J23) plane: a closed oval
// traced with about n_points vertices, touching the classical rectangle at
// four points.
std::vector<std::pair<double, double>> caustic_curve(double J1, double J2,
                                                     double J3, double J4,
                                                     int n_points);

// Round-sphere coordinates and their inverse; round trips are identities to
// machine precision away from the poles.
SphereEmbedding sphere_embed(double J1, double J2, double J3, double J4,
                             const KMPoint& p);
KMPoint sphere_unembed(double J1, double J2, double J3, double J4,
                       const SphereEmbedding& e);

}  // namespace w6j
