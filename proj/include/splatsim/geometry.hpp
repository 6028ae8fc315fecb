// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Rigid-body math used everywhere else: 3-vectors, 3x3 matrices, unit
// quaternions (Hamilton convention, w first), poses, and constant-velocity
// motion evaluation. Double precision throughout; all types are immutable
// values and all functions are pure.

#include <algorithm>
#include <cmath>

namespace splatsim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kTinyAngle = 1e-8;  // series-expansion threshold

struct Vec3 {
  double x{}, y{}, z{};

  constexpr Vec3() = default;
  constexpr Vec3(double xx, double yy, double zz) : x(xx), y(yy), z(zz) {}

  constexpr Vec3 operator+(const Vec3& b) const { return {x + b.x, y + b.y, z + b.z}; }
  constexpr Vec3 operator-(const Vec3& b) const { return {x - b.x, y - b.y, z - b.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& b) {
    x += b.x;
    y += b.y;
    z += b.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& b) {
    x -= b.x;
    y -= b.y;
    z -= b.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return n > 0 ? a / n : Vec3{0, 0, 0};
}

inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Row-major 3x3 matrix.
struct Mat3 {
  double m[3][3]{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  static constexpr Mat3 zero() {
    Mat3 z;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) z.m[i][j] = 0;
    return z;
  }
  static constexpr Mat3 identity() { return Mat3{}; }
  static constexpr Mat3 diagonal(double a, double b, double c) {
    Mat3 d = zero();
    d.m[0][0] = a;
    d.m[1][1] = b;
    d.m[2][2] = c;
    return d;
  }
};

inline constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 c = Mat3::zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j] + a.m[i][2] * b.m[2][j];
  return c;
}

inline constexpr Vec3 operator*(const Mat3& a, const Vec3& v) {
  return {a.m[0][0] * v.x + a.m[0][1] * v.y + a.m[0][2] * v.z,
          a.m[1][0] * v.x + a.m[1][1] * v.y + a.m[1][2] * v.z,
          a.m[2][0] * v.x + a.m[2][1] * v.y + a.m[2][2] * v.z};
}

inline constexpr Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 c = Mat3::zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = a.m[i][j] + b.m[i][j];
  return c;
}

inline constexpr Mat3 operator*(const Mat3& a, double s) {
  Mat3 c = Mat3::zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = a.m[i][j] * s;
  return c;
}

inline constexpr Mat3 transpose(const Mat3& a) {
  Mat3 t = Mat3::zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.m[i][j] = a.m[j][i];
  return t;
}

// v applied from the left through the transpose: R^T * v.
inline constexpr Vec3 transposed_mul(const Mat3& a, const Vec3& v) {
  return {a.m[0][0] * v.x + a.m[1][0] * v.y + a.m[2][0] * v.z,
          a.m[0][1] * v.x + a.m[1][1] * v.y + a.m[2][1] * v.z,
          a.m[0][2] * v.x + a.m[1][2] * v.y + a.m[2][2] * v.z};
}

inline constexpr Mat3 outer(const Vec3& a, const Vec3& b) {
  Mat3 o = Mat3::zero();
  o.m[0][0] = a.x * b.x;
  o.m[0][1] = a.x * b.y;
  o.m[0][2] = a.x * b.z;
  o.m[1][0] = a.y * b.x;
  o.m[1][1] = a.y * b.y;
  o.m[1][2] = a.y * b.z;
  o.m[2][0] = a.z * b.x;
  o.m[2][1] = a.z * b.y;
  o.m[2][2] = a.z * b.z;
  return o;
}

inline constexpr Mat3 skew(const Vec3& w) {
  Mat3 s = Mat3::zero();
  s.m[0][1] = -w.z;
  s.m[0][2] = w.y;
  s.m[1][0] = w.z;
  s.m[1][2] = -w.x;
  s.m[2][0] = -w.y;
  s.m[2][1] = w.x;
  return s;
}

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
// Returns false when the input is not numerically positive definite.
inline bool cholesky(const Mat3& a, Mat3& l) {
  l = Mat3::zero();
  double d0 = a.m[0][0];
  if (d0 <= 0) return false;
  l.m[0][0] = std::sqrt(d0);
  l.m[1][0] = a.m[1][0] / l.m[0][0];
  l.m[2][0] = a.m[2][0] / l.m[0][0];
  double d1 = a.m[1][1] - l.m[1][0] * l.m[1][0];
  if (d1 <= 0) return false;
  l.m[1][1] = std::sqrt(d1);
  l.m[2][1] = (a.m[2][1] - l.m[2][0] * l.m[1][0]) / l.m[1][1];
  double d2 = a.m[2][2] - l.m[2][0] * l.m[2][0] - l.m[2][1] * l.m[2][1];
  if (d2 <= 0) return false;
  l.m[2][2] = std::sqrt(d2);
  return true;
}

inline double determinant(const Mat3& a) {
  return a.m[0][0] * (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) -
         a.m[0][1] * (a.m[1][0] * a.m[2][2] - a.m[1][2] * a.m[2][0]) +
         a.m[0][2] * (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]);
}

// Inverse via adjugate; returns false for near-singular input.
inline bool inverse(const Mat3& a, Mat3& inv) {
  const double det = determinant(a);
  if (!(std::abs(det) > 0) || !std::isfinite(det)) return false;
  const double id = 1.0 / det;
  inv.m[0][0] = (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) * id;
  inv.m[0][1] = (a.m[0][2] * a.m[2][1] - a.m[0][1] * a.m[2][2]) * id;
  inv.m[0][2] = (a.m[0][1] * a.m[1][2] - a.m[0][2] * a.m[1][1]) * id;
  inv.m[1][0] = (a.m[1][2] * a.m[2][0] - a.m[1][0] * a.m[2][2]) * id;
  inv.m[1][1] = (a.m[0][0] * a.m[2][2] - a.m[0][2] * a.m[2][0]) * id;
  inv.m[1][2] = (a.m[0][2] * a.m[1][0] - a.m[0][0] * a.m[1][2]) * id;
  inv.m[2][0] = (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]) * id;
  inv.m[2][1] = (a.m[0][1] * a.m[2][0] - a.m[0][0] * a.m[2][1]) * id;
  inv.m[2][2] = (a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0]) * id;
  return true;
}

// Unit quaternion, Hamilton convention, scalar part first.
struct Quat {
  double w{1}, x{}, y{}, z{};

  constexpr Quat() = default;
  constexpr Quat(double ww, double xx, double yy, double zz) : w(ww), x(xx), y(yy), z(zz) {}
};

inline double norm(const Quat& q) {
  return std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
}

inline Quat normalized(const Quat& q) {
  const double n = norm(q);
  if (!(n > 0)) return Quat{1, 0, 0, 0};
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

inline constexpr Quat conjugate(const Quat& q) { return {q.w, -q.x, -q.y, -q.z}; }

// Hamilton product a (x) b.
inline constexpr Quat operator*(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

// q (x) v (x) q^-1 for unit q, expanded form.
inline constexpr Vec3 rotate_point(const Quat& q, const Vec3& v) {
  const Vec3 u{q.x, q.y, q.z};
  const Vec3 t = cross(u, v) * 2.0;
  return v + t * q.w + cross(u, t);
}

inline Mat3 rotation_matrix(const Quat& q) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  Mat3 r;
  r.m[0][0] = 1 - 2 * (y * y + z * z);
  r.m[0][1] = 2 * (x * y - z * w);
  r.m[0][2] = 2 * (x * z + y * w);
  r.m[1][0] = 2 * (x * y + z * w);
  r.m[1][1] = 1 - 2 * (x * x + z * z);
  r.m[1][2] = 2 * (y * z - x * w);
  r.m[2][0] = 2 * (x * z - y * w);
  r.m[2][1] = 2 * (y * z + x * w);
  r.m[2][2] = 1 - 2 * (x * x + y * y);
  return r;
}

// exp(u) for a pure-vector quaternion argument u; u = angle_axis / 2 yields
// the rotation by |angle_axis|. Sinc-stable below the small-angle threshold.
inline Quat quat_exp(const Vec3& u) {
  const double angle = norm(u);
  double s;
  if (angle < kTinyAngle) {
    s = 1.0 - angle * angle / 6.0;
  } else {
    s = std::sin(angle) / angle;
  }
  return {std::cos(angle), u.x * s, u.y * s, u.z * s};
}

inline Quat quat_from_axis_angle(const Vec3& axis, double angle) {
  return quat_exp(normalized(axis) * (0.5 * angle));
}

struct RigidPose {
  Quat rotation;     // local -> world
  Vec3 translation;  // meters

  Vec3 apply(const Vec3& p_local) const { return rotate_point(rotation, p_local) + translation; }
  Vec3 apply_inverse(const Vec3& p_world) const {
    return rotate_point(conjugate(rotation), p_world - translation);
  }
};

struct MotionState {
  RigidPose pose_mid;     // pose at mid-exposure (eta = 0)
  Vec3 linear_velocity;   // m/s, world frame
  Vec3 angular_velocity;  // rad/s, world frame
};

// Constant-velocity pose at time offset eta from mid-exposure:
//   rotation = exp(w * eta / 2) (x) q_mid,  translation = t_mid + eta * v.
// eta = 0 returns pose_mid bit-exactly.
inline RigidPose pose_at_time(const MotionState& m, double eta) {
  if (eta == 0.0) return m.pose_mid;
  RigidPose p;
  p.rotation = normalized(quat_exp(m.angular_velocity * (0.5 * eta)) * m.pose_mid.rotation);
  p.translation = m.pose_mid.translation + m.linear_velocity * eta;
  return p;
}

// Constant-velocity point motion with torque correction:
//   x(eta) = x_mid + (v_a + w_a x r) * eta.
inline constexpr Vec3 point_at_time(const Vec3& x_mid, const Vec3& v_a, const Vec3& w_a,
                                    const Vec3& r, double eta) {
  return x_mid + (v_a + cross(w_a, r)) * eta;
}

}  // namespace splatsim
