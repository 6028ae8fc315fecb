// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "splatsim/projection.hpp"

#include <algorithm>
#include <cmath>

namespace splatsim {

namespace {
constexpr double kSqrt3 = 1.7320508075688772;
}

SigmaPointSet sigma_points(const Vec3& mu, const Mat3& sigma) {
  SigmaPointSet set;
  Mat3 l;
  Mat3 jittered = sigma;
  bool ok = false;
  for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
    ok = cholesky(jittered, l);
    if (!ok) {
      const double tr = sigma.m[0][0] + sigma.m[1][1] + sigma.m[2][2];
      const double eps = std::max(tr, 1e-12) * 1e-12 * std::pow(10.0, attempt);
      jittered = sigma + Mat3::diagonal(eps, eps, eps);
    }
  }
  if (!ok) return set;

  set.points[0] = mu;
  for (int c = 0; c < 3; ++c) {
    const Vec3 col{l.m[0][c] * kSqrt3, l.m[1][c] * kSqrt3, l.m[2][c] * kSqrt3};
    set.points[1 + c] = mu + col;
    set.points[4 + c] = mu - col;
  }
  set.mean_weights[0] = 0.0;
  set.cov_weights[0] = 0.0;
  for (int i = 1; i < 7; ++i) {
    set.mean_weights[i] = 1.0 / 6.0;
    set.cov_weights[i] = 1.0 / 6.0;
  }
  set.valid = true;
  return set;
}

namespace {

struct Projected2 {
  double a = 0, b = 0;  // (u,v) or (phi,theta)
  double depth = 0;
  bool valid = false;
};

Projected2 to_plane(const SensorModel& m, const RollingProjection& rp) {
  Projected2 p;
  if (!rp.valid) return p;
  if (m.kind == SensorKind::spherical) {
    p.a = rp.u * kTwoPi - kPi;  // back to (shifted) radians
    p.b = m.theta_of_v(rp.v);
  } else {
    p.a = rp.u;
    p.b = rp.v;
  }
  p.depth = rp.depth;
  p.valid = true;
  return p;
}

bool intervals_overlap(double lo1, double hi1, double lo2, double hi2) {
  return lo1 <= hi2 && lo2 <= hi1;
}

// Visible-range test for the 3-sigma extent rectangle.
bool intersects_image(const SensorModel& m, double mean_a, double mean_b, double ext_a,
                      double ext_b) {
  if (m.kind == SensorKind::perspective) {
    return intervals_overlap(mean_a - ext_a, mean_a + ext_a, 0.0, 1.0) &&
           intervals_overlap(mean_b - ext_b, mean_b + ext_b, 0.0, 1.0);
  }
  const double th0 = m.theta_of_v(0.0), th1 = m.theta_of_v(1.0);
  return intervals_overlap(mean_a - ext_a, mean_a + ext_a, -kPi, kPi) &&
         intervals_overlap(mean_b - ext_b, mean_b + ext_b, std::min(th0, th1),
                           std::max(th0, th1));
}

}  // namespace

Projection2D ut_project(const Vec3& mu, const Mat3& sigma, const SensorModel& m,
                        const Vec3& point_velocity, double eta_0, PhaseShift phase,
                        SolveMethod method) {
  Projection2D out;
  out.phase = phase;

  const SigmaPointSet set = sigma_points(mu, sigma);
  if (!set.valid) return out;

  Projected2 proj[7];
  for (int i = 0; i < 7; ++i) {
    proj[i] = to_plane(m, project_rolling(m, set.points[i], point_velocity, eta_0, method, phase));
  }
  if (!proj[0].valid) return out;  // the mean point must project

  // Moment-match over the surviving +/- points (the mean point carries zero
  // weight); weights renormalize when some sigma points fail.
  double wsum = 0;
  for (int i = 1; i < 7; ++i)
    if (proj[i].valid) wsum += set.mean_weights[i];
  if (!(wsum > 0)) return out;

  double ma = 0, mb = 0, md = 0;
  for (int i = 1; i < 7; ++i) {
    if (!proj[i].valid) continue;
    const double w = set.mean_weights[i] / wsum;
    ma += w * proj[i].a;
    mb += w * proj[i].b;
    md += w * proj[i].depth;
  }
  double caa = 0, cab = 0, cbb = 0;
  for (int i = 1; i < 7; ++i) {
    if (!proj[i].valid) continue;
    const double w = set.cov_weights[i] / wsum;
    const double da = proj[i].a - ma, db = proj[i].b - mb;
    caa += w * da * da;
    cab += w * da * db;
    cbb += w * db * db;
  }

  out.mean_u = ma;
  out.mean_v = mb;
  out.depth = md;
  out.ext_u = 3.0 * std::sqrt(std::max(caa, 0.0));
  out.ext_v = 3.0 * std::sqrt(std::max(cbb, 0.0));

  const double det = caa * cbb - cab * cab;
  if (det > 1e-300) {
    out.conic[0] = cbb / det;
    out.conic[1] = -cab / det;
    out.conic[2] = caa / det;
  } else {
    // Degenerate (point-like) footprint: keep a PSD placeholder.
    out.conic[0] = 1.0 / std::max(caa, 1e-30);
    out.conic[1] = 0.0;
    out.conic[2] = 1.0 / std::max(cbb, 1e-30);
  }

  out.valid = intersects_image(m, ma, mb, out.ext_u, out.ext_v);
  return out;
}

PhaseProjections phase_project(const Vec3& mu, const Mat3& sigma, const SensorModel& m,
                               const Vec3& point_velocity, SolveMethod method) {
  PhaseProjections out;
  const Projection2D central = ut_project(mu, sigma, m, point_velocity, 0.0, PhaseShift::none,
                                          method);
  if (!central.valid) return out;

  // Particles whose azimuth support cannot reach the +/-pi seam during the
  // sweep resolve to the central projection directly.
  const double seam_dist = kPi - (std::abs(central.mean_u) + central.ext_u);
  const double depth_floor = std::max(0.25 * central.depth, 0.05);
  const double drift = (norm(m.motion.linear_velocity) + norm(point_velocity)) / depth_floor *
                           m.shutter.span() +
                       norm(m.motion.angular_velocity) * m.shutter.span();
  if (seam_dist > drift + 0.5 * central.ext_u + 0.1) {
    out.push(central);
    return out;
  }

  const double tau_start = m.shutter.time_at(0.0, 0.0);
  const double tau_end = m.shutter.time_at(1.0, 1.0);
  const Projection2D neg =
      ut_project(mu, sigma, m, point_velocity, tau_start, PhaseShift::negative, method);
  const Projection2D pos =
      ut_project(mu, sigma, m, point_velocity, tau_end, PhaseShift::positive, method);

  const bool neg_ok = neg.valid && neg.ext_u < kPi;
  const bool pos_ok = pos.valid && pos.ext_u < kPi;
  if (neg_ok && pos_ok) {
    out.push(neg);
    out.push(pos);
    return out;
  }
  if (neg_ok) {
    out.push(neg);
    return out;
  }
  if (pos_ok) {
    out.push(pos);
    return out;
  }
  out.push(central);
  return out;
}

}  // namespace splatsim
