// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "splatsim/sensor.hpp"

#include <cmath>
#include <stdexcept>

namespace splatsim {

SensorModel SensorModel::perspective(int width, int height, double fx, double fy, double cx,
                                     double cy, ShutterSpec shutter, MotionState motion) {
  if (width < 1 || height < 1) throw std::invalid_argument("sensor resolution must be >= 1");
  if (!(fx > 0) || !(fy > 0)) throw std::invalid_argument("focal lengths must be positive");
  SensorModel m;
  m.kind = SensorKind::perspective;
  m.width = width;
  m.height = height;
  m.fx = fx;
  m.fy = fy;
  m.cx = cx;
  m.cy = cy;
  m.shutter = shutter;
  m.motion = motion;
  return m;
}

SensorModel SensorModel::spherical(int width, int height, double elev_first, double elev_last,
                                   ShutterSpec shutter, MotionState motion) {
  if (width < 1 || height < 1) throw std::invalid_argument("sensor resolution must be >= 1");
  if (height > 1 && elev_first == elev_last)
    throw std::invalid_argument("elevation table must be strictly monotone");
  SensorModel m;
  m.kind = SensorKind::spherical;
  m.width = width;
  m.height = height;
  m.elevation.resize(height);
  for (int r = 0; r < height; ++r) {
    const double t = height > 1 ? static_cast<double>(r) / (height - 1) : 0.5;
    m.elevation[r] = elev_first + t * (elev_last - elev_first);
  }
  m.shutter = shutter;
  m.motion = motion;
  return m;
}

// Piecewise-linear map between elevation and continuous v with row r centered
// at v = (r + 0.5) / H; edge segments extrapolate so the map is a bijection.
// Single-row sensors fall back to unit slope.
double SensorModel::v_of_theta(double theta) const {
  const int h = height;
  if (h == 1) return 0.5 + (theta - elevation[0]) * -1.0;  // arbitrary unit slope, descending
  const bool increasing = elevation[h - 1] > elevation[0];
  // Find segment [r, r+1] bracketing theta; clamp to edge segments for
  // extrapolation.
  int lo = 0, hi = h - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    const bool left = increasing ? (theta < elevation[mid]) : (theta > elevation[mid]);
    if (left)
      hi = mid;
    else
      lo = mid;
  }
  const double t0 = elevation[lo], t1 = elevation[lo + 1];
  const double frac = (theta - t0) / (t1 - t0);
  const double v0 = (lo + 0.5) / h;
  return v0 + frac / h;
}

double SensorModel::theta_of_v(double v) const {
  const int h = height;
  if (h == 1) return elevation[0] + (0.5 - v);
  double row = v * h - 0.5;
  int lo = static_cast<int>(std::floor(row));
  lo = std::max(0, std::min(h - 2, lo));
  const double frac = row - lo;
  return elevation[lo] + frac * (elevation[lo + 1] - elevation[lo]);
}

double SensorModel::dv_dtheta(double theta) const {
  const int h = height;
  if (h == 1) return -1.0;
  const bool increasing = elevation[h - 1] > elevation[0];
  int lo = 0, hi = h - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    const bool left = increasing ? (theta < elevation[mid]) : (theta > elevation[mid]);
    if (left)
      hi = mid;
    else
      lo = mid;
  }
  return (1.0 / h) / (elevation[lo + 1] - elevation[lo]);
}

SphericalAngles spherical_angles(const SensorModel& m, const Vec3& x_c) {
  SphericalAngles a;
  a.range = norm(x_c);
  if (!(a.range > 0) || !std::isfinite(a.range)) return a;
  a.phi = std::atan2(x_c.y, x_c.x);
  if (a.phi >= kPi) a.phi -= kTwoPi;  // atan2 may return +pi exactly
  const double s = std::clamp(x_c.z / a.range, -1.0, 1.0);
  a.theta = std::asin(s);
  a.valid = true;
  return a;
}

StaticProjection project_static(const SensorModel& m, const Vec3& x_c) {
  StaticProjection p;
  if (!is_finite(x_c)) return p;
  if (m.kind == SensorKind::perspective) {
    p.depth = x_c.z;
    if (!(x_c.z > 0)) return p;
    p.u = m.fx * x_c.x / x_c.z + m.cx;
    p.v = m.fy * x_c.y / x_c.z + m.cy;
    p.valid = std::isfinite(p.u) && std::isfinite(p.v);
    return p;
  }
  const SphericalAngles a = spherical_angles(m, x_c);
  if (!a.valid) return p;
  p.u = (a.phi + kPi) / kTwoPi;
  p.v = m.v_of_theta(a.theta);
  p.depth = a.range;
  p.valid = p.v >= 0.0 && p.v <= 1.0;
  return p;
}

ProjectionJacobian jacobian_static(const SensorModel& m, const Vec3& x_c) {
  ProjectionJacobian out;
  const double x = x_c.x, y = x_c.y, z = x_c.z;
  if (m.kind == SensorKind::perspective) {
    if (!(std::abs(z) > 0)) return out;
    out.j[0][0] = m.fx / z;
    out.j[0][2] = -m.fx * x / (z * z);
    out.j[1][1] = m.fy / z;
    out.j[1][2] = -m.fy * y / (z * z);
    out.valid = true;
    return out;
  }
  const double xy2 = x * x + y * y;
  const double r2 = xy2 + z * z;
  if (!(xy2 > 0) || !(r2 > 0)) return out;  // pole axis or origin
  const double rho = std::sqrt(xy2);
  out.j[0][0] = -y / xy2;
  out.j[0][1] = x / xy2;
  out.j[0][2] = 0;
  out.j[1][0] = -x * z / (r2 * rho);
  out.j[1][1] = -y * z / (r2 * rho);
  out.j[1][2] = rho / r2;
  out.valid = true;
  return out;
}

Vec3 pixel_direction_local(const SensorModel& m, double u, double v) {
  if (m.kind == SensorKind::perspective) {
    return normalized({(u - m.cx) / m.fx, (v - m.cy) / m.fy, 1.0});
  }
  const double phi = u * kTwoPi - kPi;
  const double theta = m.theta_of_v(v);
  const double ct = std::cos(theta);
  return {ct * std::cos(phi), ct * std::sin(phi), std::sin(theta)};
}

Ray pixel_ray(const SensorModel& m, double u, double v) {
  Ray ray;
  ray.eta = m.shutter.time_at(u, v);
  const RigidPose pose = pose_at_time(m.motion, ray.eta);
  ray.origin = pose.translation;
  ray.direction = rotate_point(pose.rotation, pixel_direction_local(m, u, v));
  return ray;
}

}  // namespace splatsim
