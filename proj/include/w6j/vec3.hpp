#pragma once

#include <array>
#include <cmath>

namespace w6j {

// Minimal double-precision 3-vector with the handful of operations the
// geometry code needs.  Deliberately not a general linear-algebra library.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend Vec3 operator*(double s, const Vec3& a) {
    return {s * a.x, s * a.y, s * a.z};
  }
};

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(const Vec3& a) {
  double n = norm(a);
  return {a.x / n, a.y / n, a.z / n};
}

// Row-major 3x3 matrix, used for rotations.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static Mat3 identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
  }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r.m[i][j] += a.m[i][k] * b.m[k][j];
    return r;
  }

  Vec3 apply(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
};

// Largest absolute entry difference, as a simple matrix metric.
inline double max_abs_diff(const Mat3& a, const Mat3& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      d = std::max(d, std::abs(a.m[i][j] - b.m[i][j]));
  return d;
}

// Rotation about the unit axis `a` by `angle` (right-hand rule), via the
// Rodrigues formula.
inline Mat3 rotation(const Vec3& a, double angle) {
  double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  Mat3 r;
  r.m = {{{t * a.x * a.x + c, t * a.x * a.y - s * a.z,
           t * a.x * a.z + s * a.y},
          {t * a.x * a.y + s * a.z, t * a.y * a.y + c,
           t * a.y * a.z - s * a.x},
          {t * a.x * a.z - s * a.y, t * a.y * a.z + s * a.x,
           t * a.z * a.z + c}}};
  return r;
}

// Unit quaternion (w, v), composing like rotations: (q1*q2) acts as q1
// after q2.  axis_angle(a, t) covers rotation(a, t); the double cover makes
// the spinor lift signs of composed rotation sequences observable.
struct Quat {
  double w = 1.0;
  Vec3 v{};

  static Quat axis_angle(const Vec3& a, double angle) {
    return {std::cos(angle / 2.0), std::sin(angle / 2.0) * a};
  }

  friend Quat operator*(const Quat& a, const Quat& b) {
    return {a.w * b.w - dot(a.v, b.v),
            a.w * b.v + b.w * a.v + cross(a.v, b.v)};
  }

  Mat3 to_matrix() const {
    Mat3 r;
    double xx = v.x * v.x, yy = v.y * v.y, zz = v.z * v.z;
    double xy = v.x * v.y, xz = v.x * v.z, yz = v.y * v.z;
    double wx = w * v.x, wy = w * v.y, wz = w * v.z;
    r.m = {{{1 - 2 * (yy + zz), 2 * (xy - wz), 2 * (xz + wy)},
            {2 * (xy + wz), 1 - 2 * (xx + zz), 2 * (yz - wx)},
            {2 * (xz - wy), 2 * (yz + wx), 1 - 2 * (xx + yy)}}};
    return r;
  }
};

}  // namespace w6j
