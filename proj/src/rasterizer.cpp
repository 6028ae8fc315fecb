// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "splatsim/rasterizer.hpp"

#include <algorithm>
#include <cmath>

#include "splatsim/parallel.hpp"

namespace splatsim {

MaxResponse max_response(const Vec3& o, const Vec3& d, const Vec3& mu, const Mat3& sigma) {
  Mat3 w;
  if (!inverse(sigma, w)) {
    return {o, 0.0};
  }
  const Vec3 delta = mu - o;
  const Vec3 a = w * d;
  const double den = dot(d, a);
  const double tau = den != 0 ? dot(a, delta) / den : 0.0;
  return {o + d * tau, tau};
}

namespace {

// Packed symmetric inverse of a 3x3 SPD matrix; false when not invertible.
bool packed_inverse(const Mat3& s, double w[6]) {
  Mat3 inv;
  if (!inverse(s, inv)) return false;
  w[0] = inv.m[0][0];
  w[1] = inv.m[0][1];
  w[2] = inv.m[0][2];
  w[3] = inv.m[1][1];
  w[4] = inv.m[1][2];
  w[5] = inv.m[2][2];
  for (int i = 0; i < 6; ++i)
    if (!std::isfinite(w[i])) return false;
  return true;
}

struct HitEval {
  double alpha = 0;
  double tau = 0;
  bool ok = false;
};

inline HitEval eval_hit(const PreparedParticle& pp, const Vec3& o, const Vec3& d, double eta) {
  HitEval h;
  const Vec3 mu = pp.position + pp.velocity * eta;
  const Vec3 delta = mu - o;
  const double ax = pp.w[0] * d.x + pp.w[1] * d.y + pp.w[2] * d.z;
  const double ay = pp.w[1] * d.x + pp.w[3] * d.y + pp.w[4] * d.z;
  const double az = pp.w[2] * d.x + pp.w[4] * d.y + pp.w[5] * d.z;
  const double den = d.x * ax + d.y * ay + d.z * az;
  if (!(den > 0)) return h;
  const double num = delta.x * ax + delta.y * ay + delta.z * az;
  const double tau = num / den;
  if (!(tau > 0)) return h;
  const double bx = pp.w[0] * delta.x + pp.w[1] * delta.y + pp.w[2] * delta.z;
  const double by = pp.w[1] * delta.x + pp.w[3] * delta.y + pp.w[4] * delta.z;
  const double bz = pp.w[2] * delta.x + pp.w[4] * delta.y + pp.w[5] * delta.z;
  const double g = delta.x * bx + delta.y * by + delta.z * bz;
  const double rho = std::max(g - tau * tau * den, 0.0);
  if (rho > pp.rho_cut) return h;
  const double alpha = std::min(pp.opacity * std::exp(-0.5 * rho), kAlphaMax);
  if (alpha < kAlphaMin) return h;
  h.alpha = alpha;
  h.tau = tau;
  h.ok = true;
  return h;
}

// For particles with two phase entries, a pixel composites only the entry
// whose azimuth mean is nearest (raw normalized-u distance; ties favor the
// first-listed entry). Identical rule in tiled and oracle paths.
inline bool entry_wins(const FramePrep& prep, std::uint32_t eid, double u_px) {
  const ProjEntry& e = prep.entries[eid];
  const auto& ids = prep.entry_of[e.particle];
  if (ids[1] < 0) return true;
  const std::int32_t other = ids[0] == static_cast<std::int32_t>(eid) ? ids[1] : ids[0];
  const double d_self = std::abs(u_px - e.u_mean_raw);
  const double d_other = std::abs(u_px - prep.entries[other].u_mean_raw);
  if (d_self != d_other) return d_self < d_other;
  return ids[0] == static_cast<std::int32_t>(eid);
}

int clamp_int(int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); }

}  // namespace

void compute_footprint(const Projection2D& proj, const SensorModel& m, ProjEntry& entry) {
  entry.px1 = -1;
  entry.py1 = -1;
  const double k = kFootprintSigma / 3.0;  // extents are 3 sigma
  double u_lo, u_hi, v_lo, v_hi;
  if (m.kind == SensorKind::perspective) {
    u_lo = proj.mean_u - k * proj.ext_u;
    u_hi = proj.mean_u + k * proj.ext_u;
    v_lo = proj.mean_v - k * proj.ext_v;
    v_hi = proj.mean_v + k * proj.ext_v;
  } else {
    // Azimuth box clipped to the visible period (phase modeling guarantees
    // extents < pi, so a single projection never wraps).
    double phi_lo = std::max(proj.mean_u - k * proj.ext_u, -kPi);
    double phi_hi = std::min(proj.mean_u + k * proj.ext_u, kPi);
    if (phi_lo > phi_hi) return;
    u_lo = (phi_lo + kPi) / kTwoPi;
    u_hi = (phi_hi + kPi) / kTwoPi;
    const double va = m.v_of_theta(proj.mean_v - k * proj.ext_v);
    const double vb = m.v_of_theta(proj.mean_v + k * proj.ext_v);
    v_lo = std::min(va, vb);
    v_hi = std::max(va, vb);
  }
  if (!(u_lo <= u_hi) || !(v_lo <= v_hi)) return;
  // Pixel centers inside the box, plus the pad.
  int px0 = static_cast<int>(std::ceil(u_lo * m.width - 0.5)) - kFootprintPadPixels;
  int px1 = static_cast<int>(std::floor(u_hi * m.width - 0.5)) + kFootprintPadPixels;
  int py0 = static_cast<int>(std::ceil(v_lo * m.height - 0.5)) - kFootprintPadPixels;
  int py1 = static_cast<int>(std::floor(v_hi * m.height - 0.5)) + kFootprintPadPixels;
  px0 = clamp_int(px0, 0, m.width - 1);
  px1 = clamp_int(px1, 0, m.width - 1);
  py0 = clamp_int(py0, 0, m.height - 1);
  py1 = clamp_int(py1, 0, m.height - 1);
  if (px0 > px1 || py0 > py1) return;
  entry.px0 = px0;
  entry.px1 = px1;
  entry.py0 = py0;
  entry.py1 = py1;
}

FramePrep prepare_frame(const Scene& scene, const SensorModel& sensor, Channel channel,
                        const RenderOptions& options) {
  FramePrep prep;
  const std::size_t total = scene.total_particles();
  prep.particles.resize(total);
  prep.node_of.resize(total);
  prep.entry_of.assign(total, {-1, -1});
  prep.entries.reserve(total);
  prep.projections.reserve(total);

  std::size_t flat = 0;
  for (std::uint32_t n = 0; n < scene.nodes.size(); ++n) {
    const SceneNode& node = scene.nodes[n];
    for (std::uint32_t i = 0; i < node.particles.size(); ++i, ++flat) {
      prep.node_of[flat] = {n, i};
      PreparedParticle& pp = prep.particles[flat];
      const WorldParticle wp = world_particle_at(scene, n, i, 0.0);
      pp.position = wp.position;
      pp.velocity = wp.velocity;
      pp.color = node.particles[i].color;
      pp.opacity = std::clamp(node.particles[i].opacity(channel), 0.0, 1.0);
      pp.usable = pp.opacity >= kAlphaMin && packed_inverse(wp.covariance, pp.w);
      if (!pp.usable) continue;
      pp.rho_cut = 2.0 * std::log(pp.opacity / kAlphaMin);

      PhaseProjections phases;
      if (sensor.kind == SensorKind::spherical && options.phase_modeling) {
        phases = phase_project(wp.position, wp.covariance, sensor, wp.velocity, options.method);
      } else {
        const Projection2D c = ut_project(wp.position, wp.covariance, sensor, wp.velocity, 0.0,
                                          PhaseShift::none, options.method);
        if (c.valid) phases.push(c);
      }
      for (int k = 0; k < phases.count; ++k) {
        const Projection2D& proj = phases.proj[k];
        if (!proj.valid) continue;
        ProjEntry entry;
        entry.particle = static_cast<std::uint32_t>(flat);
        entry.phase = proj.phase;
        entry.depth = proj.depth;
        entry.u_mean_raw = proj.mean_u_normalized(sensor);
        compute_footprint(proj, sensor, entry);
        if (entry.px1 < entry.px0 || entry.py1 < entry.py0) continue;
        const std::int32_t eid = static_cast<std::int32_t>(prep.entries.size());
        auto& ids = prep.entry_of[flat];
        if (ids[0] < 0)
          ids[0] = eid;
        else
          ids[1] = eid;
        prep.entries.push_back(entry);
        prep.projections.push_back(proj);
      }
    }
  }
  return prep;
}

namespace {

bool entry_order(const FramePrep& prep, std::uint32_t a, std::uint32_t b) {
  const ProjEntry& ea = prep.entries[a];
  const ProjEntry& eb = prep.entries[b];
  if (ea.depth != eb.depth) return ea.depth < eb.depth;
  if (ea.particle != eb.particle) return ea.particle < eb.particle;
  return static_cast<int>(ea.phase) < static_cast<int>(eb.phase);
}

}  // namespace

TileGrid tile_assign(const std::vector<ProjEntry>& entries, const FramePrep& prep, int width,
                     int height, int tile_size) {
  TileGrid grid;
  grid.tile_size = tile_size;
  grid.tiles_x = (width + tile_size - 1) / tile_size;
  grid.tiles_y = (height + tile_size - 1) / tile_size;
  grid.lists.assign(static_cast<std::size_t>(grid.tiles_x) * grid.tiles_y, {});
  for (std::uint32_t eid = 0; eid < entries.size(); ++eid) {
    const ProjEntry& e = entries[eid];
    if (e.px1 < e.px0 || e.py1 < e.py0) continue;
    const int tx0 = e.px0 / tile_size, tx1 = e.px1 / tile_size;
    const int ty0 = e.py0 / tile_size, ty1 = e.py1 / tile_size;
    for (int ty = ty0; ty <= ty1; ++ty)
      for (int tx = tx0; tx <= tx1; ++tx)
        grid.lists[static_cast<std::size_t>(ty) * grid.tiles_x + tx].push_back(eid);
  }
  for (auto& list : grid.lists) {
    std::sort(list.begin(), list.end(),
              [&prep](std::uint32_t a, std::uint32_t b) { return entry_order(prep, a, b); });
  }
  return grid;
}

RayCache make_ray_cache(const SensorModel& m) {
  RayCache cache;
  cache.rays.resize(static_cast<std::size_t>(m.width) * m.height);
  for (int iy = 0; iy < m.height; ++iy) {
    const double v = (iy + 0.5) / m.height;
    for (int ix = 0; ix < m.width; ++ix) {
      const double u = (ix + 0.5) / m.width;
      cache.rays[static_cast<std::size_t>(iy) * m.width + ix] = pixel_ray(m, u, v);
    }
  }
  return cache;
}

namespace {

RenderResult render_common(const Scene& scene, const SensorModel& sensor, Channel channel,
                           const RenderOptions& options, const RayCache* ray_cache,
                           bool use_tiles) {
  RenderResult result;
  result.prep = prepare_frame(scene, sensor, channel, options);
  const FramePrep& prep = result.prep;
  const int w = sensor.width, h = sensor.height;
  result.buffers.resize(w, h);
  FrameBuffers& fb = result.buffers;

  RayCache local_rays;
  if (ray_cache == nullptr) {
    local_rays = make_ray_cache(sensor);
    ray_cache = &local_rays;
  }

  TileGrid grid;
  std::vector<std::uint32_t> global_list;
  if (use_tiles) {
    grid = tile_assign(prep.entries, prep, w, h, kTileSize);
  } else {
    global_list.resize(prep.entries.size());
    for (std::uint32_t i = 0; i < global_list.size(); ++i) global_list[i] = i;
    std::sort(global_list.begin(), global_list.end(),
              [&prep](std::uint32_t a, std::uint32_t b) { return entry_order(prep, a, b); });
  }

  const int blocks = (h + kTileSize - 1) / kTileSize;
  if (options.record_hits) result.block_hits.resize(blocks);

  parallel_blocks(blocks, resolve_threads(options.threads), [&](int block, int /*thread*/) {
    const int y0 = block * kTileSize;
    const int y1 = std::min(y0 + kTileSize, h);
    BlockHits* rec = options.record_hits ? &result.block_hits[block] : nullptr;
    if (rec) rec->counts.reserve(static_cast<std::size_t>(y1 - y0) * w);

    for (int iy = y0; iy < y1; ++iy) {
      for (int ix = 0; ix < w; ++ix) {
        const std::size_t pix = static_cast<std::size_t>(iy) * w + ix;
        const double u_px = (ix + 0.5) / w;
        const Ray& ray = ray_cache->rays[pix];
        const std::vector<std::uint32_t>* list;
        if (use_tiles) {
          list = &grid.at(ix / kTileSize, iy / kTileSize);
        } else {
          list = &global_list;
        }

        double t_acc = 1.0;
        Vec3 c_acc{0, 0, 0};
        double r_acc = 0;
        std::uint32_t hit_count = 0;
        for (const std::uint32_t eid : *list) {
          const ProjEntry& e = prep.entries[eid];
          if (use_tiles && (ix < e.px0 || ix > e.px1 || iy < e.py0 || iy > e.py1)) continue;
          if (!entry_wins(prep, eid, u_px)) continue;
          const PreparedParticle& pp = prep.particles[e.particle];
          const HitEval hit = eval_hit(pp, ray.origin, ray.direction, ray.eta);
          if (!hit.ok) continue;
          const double weight = hit.alpha * t_acc;
          c_acc += pp.color * weight;
          r_acc += hit.tau * weight;
          if (rec) {
            rec->hits.push_back({e.particle, hit.alpha, hit.tau});
            ++hit_count;
          }
          t_acc *= 1.0 - hit.alpha;
          if (t_acc < kTransmittanceMin) break;
        }
        if (rec) rec->counts.push_back(hit_count);
        fb.set_color(ix, iy, c_acc + options.background * t_acc);
        fb.range[pix] = r_acc;
        fb.alpha[pix] = 1.0 - t_acc;
        fb.eta[pix] = ray.eta;
      }
    }
  });
  return result;
}

}  // namespace

RenderResult render_frame(const Scene& scene, const SensorModel& sensor, Channel channel,
                          const RenderOptions& options, const RayCache* rays) {
  return render_common(scene, sensor, channel, options, rays, /*use_tiles=*/true);
}

RenderResult render_oracle(const Scene& scene, const SensorModel& sensor, Channel channel,
                           const RenderOptions& options, const RayCache* rays) {
  return render_common(scene, sensor, channel, options, rays, /*use_tiles=*/false);
}

IntegrationResult integrate_pixel(const std::vector<PixelHit>& hits,
                                  const std::vector<Vec3>& hit_colors, const Vec3& background) {
  IntegrationResult out;
  double t_acc = 1.0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const PixelHit& h = hits[i];
    if (h.alpha < kAlphaMin || h.tau <= 0) continue;
    const double weight = h.alpha * t_acc;
    out.color += hit_colors[i] * weight;
    out.range += h.tau * weight;
    t_acc *= 1.0 - h.alpha;
    if (t_acc < kTransmittanceMin) break;
  }
  out.color += background * t_acc;
  out.alpha = 1.0 - t_acc;
  return out;
}

}  // namespace splatsim
