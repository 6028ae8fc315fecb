// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Rolling-shutter point projection: solve eta = tau(u(eta), v(eta)) for a
// moving world point seen by a moving sensor, by Newton-Raphson with a
// fixed-point fallback.

#include "splatsim/geometry.hpp"
#include "splatsim/sensor.hpp"

namespace splatsim {

inline constexpr double kEtaThreshold = 1e-9;  // seconds
inline constexpr int kMaxSolverIterations = 10;

enum class SolveMethod { newton, fixed_point };

// Azimuth branch for spherical solves. The shift is part of the projection
// function fed to the solver: `negative` maps azimuths >= 0 down by 2pi
// (left-edge interval), `positive` maps azimuths < 0 up by 2pi (right-edge
// interval). Perspective sensors always use `none`.
enum class PhaseShift : std::uint8_t { none = 0, negative = 1, positive = 2 };

struct RollingProjection {
  double u = 0, v = 0;  // normalized; may leave [0,1] for shifted phases
  double depth = 0;
  double eta = 0;
  bool valid = false;
  int iterations = 0;  // eta updates performed
};

// Time derivative of the camera-frame point, combining point and sensor
// motion: d/d_eta [ R(eta)^T (x_w(eta) - t(eta)) ].
Vec3 dxc_deta(const SensorModel& m, const Vec3& x_w, const Vec3& point_velocity, double eta);

// Projects the world point x_w_mid (position at mid-exposure) moving at
// point_velocity. Converged solutions satisfy |eta - tau(u, v)| < threshold
// and are valid iff depth > 0. eta_0 selects the root basin; phase selects
// the azimuth branch.
RollingProjection project_rolling(const SensorModel& m, const Vec3& x_w_mid,
                                  const Vec3& point_velocity, double eta_0, SolveMethod method,
                                  PhaseShift phase = PhaseShift::none);

}  // namespace splatsim
