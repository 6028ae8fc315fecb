// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Unscented-transform projection of 3D Gaussians through the rolling-shutter
// projector, and the phase-modeling mechanism that yields up to two
// projections for particles straddling the spherical azimuth boundary.

#include <array>
#include <cstddef>

#include "splatsim/geometry.hpp"
#include "splatsim/rolling_shutter.hpp"
#include "splatsim/sensor.hpp"

namespace splatsim {

// Classic symmetric 2n+1 set for n = 3 with sqrt(n + lambda) = sqrt(3):
// the mean point carries zero weight, the six +/- points 1/6 each.
struct SigmaPointSet {
  std::array<Vec3, 7> points;
  std::array<double, 7> mean_weights;
  std::array<double, 7> cov_weights;
  bool valid = false;  // false when the covariance is not numerically PSD
};

SigmaPointSet sigma_points(const Vec3& mu, const Mat3& sigma);

// A UT-approximated 2D Gaussian. Means/extents are in normalized (u, v) for
// perspective sensors and in (phi, theta) radians for spherical ones; shifted
// phases keep azimuth means outside [-pi, pi) rather than re-wrapping.
struct Projection2D {
  double mean_u = 0, mean_v = 0;
  double conic[3] = {0, 0, 0};  // inverse covariance: c00, c01, c11
  double ext_u = 0, ext_v = 0;  // 3 * sqrt(marginal variance)
  double depth = 0;
  PhaseShift phase = PhaseShift::none;
  bool valid = false;

  // Azimuth mean in raw normalized-u units (continuous, may leave [0,1]).
  double mean_u_normalized(const SensorModel& m) const {
    return m.kind == SensorKind::spherical ? (mean_u + kPi) / kTwoPi : mean_u;
  }
};

// Projects the sigma points of (mu, Sigma) through project_rolling with the
// given init time and phase interval; moment-matches the valid points.
// Valid iff the mean point projects validly and the 3-sigma extent rectangle
// intersects the visible image range.
Projection2D ut_project(const Vec3& mu, const Mat3& sigma, const SensorModel& m,
                        const Vec3& point_velocity, double eta_0,
                        PhaseShift phase = PhaseShift::none,
                        SolveMethod method = SolveMethod::newton);

struct PhaseProjections {
  std::array<Projection2D, 2> proj;
  int count = 0;  // 0 when the central projection misses the image entirely

  void push(const Projection2D& p) { proj[count++] = p; }
};

// Spherical-sensor projection with phase modeling: a central pass initialized
// at mid-exposure, then negative/positive passes initialized at sweep
// start/end with azimuths shifted by -/+2pi into their intervals. Returns
// both shifted projections when both are valid with azimuth extent < pi, a
// single valid one otherwise, or the central projection as fallback.
PhaseProjections phase_project(const Vec3& mu, const Mat3& sigma, const SensorModel& m,
                               const Vec3& point_velocity,
                               SolveMethod method = SolveMethod::newton);

}  // namespace splatsim
