// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Static projection functions and analytic Jacobians for perspective and
// spherical cameras, the linear rolling-shutter time function, and pixel ray
// generation. All image coordinates are normalized to [0,1]^2; pixel indices
// appear only at buffer-write time (pixel (ix,iy) center = ((ix+.5)/W,(iy+.5)/H)).

#include <cstdint>
#include <vector>

#include "splatsim/geometry.hpp"

namespace splatsim {

// tau(u, v) = tau_start + u * tau_u + v * tau_v, seconds relative to
// mid-exposure; tau(0.5, 0.5) = 0 by construction.
struct ShutterSpec {
  double tau_start = 0;
  double tau_u = 0;
  double tau_v = 0;

  static ShutterSpec centered(double tau_u, double tau_v) {
    return {-0.5 * (tau_u + tau_v), tau_u, tau_v};
  }

  double time_at(double u, double v) const { return tau_start + u * tau_u + v * tau_v; }
  double span() const { return std::abs(tau_u) + std::abs(tau_v); }
};

inline double shutter_time(const ShutterSpec& s, double u, double v) { return s.time_at(u, v); }

enum class SensorKind { perspective, spherical };

// Spherical convention: azimuth phi = atan2(y, x) in [-pi, pi) with
// u = (phi + pi) / 2pi; elevation theta = asin(z / |x|) mapped to v through a
// strictly monotone per-row beam table (piecewise linear, extrapolated at the
// edges so the theta <-> v map is a bijection).
struct SensorModel {
  SensorKind kind = SensorKind::perspective;
  int width = 1;
  int height = 1;
  // Perspective intrinsics in normalized-image units.
  double fx = 1, fy = 1, cx = 0.5, cy = 0.5;
  // Spherical: per-row beam elevations (radians), size == height.
  std::vector<double> elevation;
  ShutterSpec shutter;
  MotionState motion;

  static SensorModel perspective(int width, int height, double fx, double fy, double cx,
                                 double cy, ShutterSpec shutter, MotionState motion);
  // Row elevations linearly spaced from elev_first (row 0) to elev_last.
  static SensorModel spherical(int width, int height, double elev_first, double elev_last,
                               ShutterSpec shutter, MotionState motion);

  double theta_of_v(double v) const;
  double v_of_theta(double theta) const;
  double dv_dtheta(double theta) const;
};

struct StaticProjection {
  double u = 0, v = 0;
  double depth = 0;  // z for perspective, range for spherical
  bool valid = false;
};

// Raw projection angles for a spherical sensor; phi in [-pi, pi).
struct SphericalAngles {
  double phi = 0, theta = 0;
  double range = 0;
  bool valid = false;
};

SphericalAngles spherical_angles(const SensorModel& m, const Vec3& x_c);

StaticProjection project_static(const SensorModel& m, const Vec3& x_c);

// d(u,v)/dx_c for the perspective model (normalized-image units) or
// d(phi,theta)/dx_c for the spherical one (radians). Degenerate on the
// spherical pole axis (x = y = 0).
struct ProjectionJacobian {
  double j[2][3] = {{0, 0, 0}, {0, 0, 0}};
  bool valid = false;
};

ProjectionJacobian jacobian_static(const SensorModel& m, const Vec3& x_c);

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit, world frame
  double eta = 0;  // this pixel's shutter time
};

// World-frame ray through normalized pixel (u, v), built at that pixel's
// shutter time with the sensor's own motion.
Ray pixel_ray(const SensorModel& m, double u, double v);

// Camera-frame unit direction for (u, v); pixel_ray = pose(eta) applied to it.
Vec3 pixel_direction_local(const SensorModel& m, double u, double v);

}  // namespace splatsim
