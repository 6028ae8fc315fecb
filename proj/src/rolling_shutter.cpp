// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "splatsim/rolling_shutter.hpp"

#include <cmath>

namespace splatsim {

Vec3 dxc_deta(const SensorModel& m, const Vec3& x_w, const Vec3& point_velocity, double eta) {
  const RigidPose pose = pose_at_time(m.motion, eta);
  // x_c = R^T (x_w - t); Rdot = [w]x R, so
  // xdot_c = R^T (v_pt - v_c - w_c x (x_w - t)).
  const Vec3 rel = x_w - pose.translation;
  const Vec3 v = point_velocity - m.motion.linear_velocity - cross(m.motion.angular_velocity, rel);
  return rotate_point(conjugate(pose.rotation), v);
}

namespace {

struct PhasedProjection {
  double u = 0, v = 0, depth = 0;
  double dv_dtheta = 0;  // spherical only
  bool finite = false;
  bool depth_positive = false;
};

// Static projection with the phase's azimuth shift folded in; u may leave
// [0,1] for shifted branches.
PhasedProjection project_phase(const SensorModel& m, const Vec3& x_c, PhaseShift phase) {
  PhasedProjection p;
  if (!is_finite(x_c)) return p;
  if (m.kind == SensorKind::perspective) {
    if (x_c.z == 0) return p;
    p.u = m.fx * x_c.x / x_c.z + m.cx;
    p.v = m.fy * x_c.y / x_c.z + m.cy;
    p.depth = x_c.z;
    p.finite = std::isfinite(p.u) && std::isfinite(p.v);
    p.depth_positive = x_c.z > 0;
    return p;
  }
  const SphericalAngles a = spherical_angles(m, x_c);
  if (!a.valid) return p;
  double phi = a.phi;
  if (phase == PhaseShift::negative && phi >= 0) phi -= kTwoPi;
  if (phase == PhaseShift::positive && phi < 0) phi += kTwoPi;
  p.u = (phi + kPi) / kTwoPi;
  p.v = m.v_of_theta(a.theta);
  p.dv_dtheta = m.dv_dtheta(a.theta);
  p.depth = a.range;
  p.finite = std::isfinite(p.u) && std::isfinite(p.v);
  p.depth_positive = true;
  return p;
}

}  // namespace

RollingProjection project_rolling(const SensorModel& m, const Vec3& x_w_mid,
                                  const Vec3& point_velocity, double eta_0, SolveMethod method,
                                  PhaseShift phase) {
  RollingProjection out;
  if (!std::isfinite(eta_0)) return out;

  double eta = eta_0;
  for (int i = 0; i <= kMaxSolverIterations; ++i) {
    const Vec3 x_w = x_w_mid + point_velocity * eta;
    const RigidPose pose = pose_at_time(m.motion, eta);
    const Vec3 x_c = rotate_point(conjugate(pose.rotation), x_w - pose.translation);
    const PhasedProjection p = project_phase(m, x_c, phase);
    if (!p.finite) return out;

    const double delta = eta - m.shutter.time_at(p.u, p.v);
    if (!std::isfinite(delta)) return out;
    if (std::abs(delta) < kEtaThreshold) {
      out.u = p.u;
      out.v = p.v;
      out.depth = p.depth;
      out.eta = eta;
      out.iterations = i;
      out.valid = p.depth_positive;
      return out;
    }
    if (i == kMaxSolverIterations) break;

    double step = delta;  // fixed-point: eta <- tau(u, v)
    if (method == SolveMethod::newton) {
      const ProjectionJacobian jac = jacobian_static(m, x_c);
      if (jac.valid) {
        const Vec3 xdot = dxc_deta(m, x_w, point_velocity, eta);
        double du = jac.j[0][0] * xdot.x + jac.j[0][1] * xdot.y + jac.j[0][2] * xdot.z;
        double dv = jac.j[1][0] * xdot.x + jac.j[1][1] * xdot.y + jac.j[1][2] * xdot.z;
        if (m.kind == SensorKind::spherical) {
          du /= kTwoPi;          // radians -> normalized u
          dv *= p.dv_dtheta;     // radians -> normalized v
        }
        const double deriv = 1.0 - m.shutter.tau_u * du - m.shutter.tau_v * dv;
        // Degenerate Newton slope falls back to a fixed-point step.
        if (std::abs(deriv) >= 1e-12 && std::isfinite(deriv)) step = delta / deriv;
      }
    }
    eta -= step;
    if (!std::isfinite(eta)) return out;
  }
  return out;  // not converged
}

}  // namespace splatsim
