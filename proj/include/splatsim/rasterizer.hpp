// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Tile-based rendering of a Gaussian scene through a rolling-shutter sensor:
// particles are UT-projected to 2D conics for tile assignment, sorted per
// tile by projection depth, and integrated per pixel with responses evaluated
// at the 3D maximum along each ray. render_oracle is the tiling-free
// reference: every valid projection entry is considered at every pixel.

#include <array>
#include <cstdint>
#include <vector>

#include "splatsim/framebuffers.hpp"
#include "splatsim/gaussian.hpp"
#include "splatsim/projection.hpp"
#include "splatsim/sensor.hpp"

namespace splatsim {

inline constexpr double kAlphaMin = 1.0 / 255.0;
inline constexpr double kAlphaMax = 0.9999;
inline constexpr double kTransmittanceMin = 1e-4;
inline constexpr int kTileSize = 16;
// Tile footprints cover k-sigma of the projected marginals plus a pixel pad;
// k is sized so responses >= kAlphaMin cannot fall outside the footprint.
inline constexpr double kFootprintSigma = 5.0;
inline constexpr int kFootprintPadPixels = 2;

struct MaxResponse {
  Vec3 x_max;
  double tau_max = 0;
};

// tau_max = d^T Sigma^-1 (mu - o) / d^T Sigma^-1 d; x_max = o + tau_max d.
MaxResponse max_response(const Vec3& o, const Vec3& d, const Vec3& mu, const Mat3& sigma);

struct RenderOptions {
  bool phase_modeling = true;
  bool record_hits = false;
  SolveMethod method = SolveMethod::newton;
  Vec3 background{0, 0, 0};
  int threads = 0;  // 0 = hardware concurrency
};

// One sorted compositing hit; alpha/tau as composited, enough to replay the
// blend chain in the backward pass.
struct PixelHit {
  std::uint32_t particle;  // flat scene index
  double alpha;
  double tau;
};

struct PreparedParticle {
  Vec3 position;       // world, mid-exposure
  Vec3 velocity;       // world
  double w[6];         // packed symmetric world Sigma^-1 (00,01,02,11,12,22)
  double opacity;      // channel-selected, in [0,1]
  double rho_cut;      // responses with rho > rho_cut fall below kAlphaMin
  Vec3 color;
  bool usable;
};

struct ProjEntry {
  std::uint32_t particle;  // flat scene index
  PhaseShift phase = PhaseShift::none;
  double depth = 0;
  double u_mean_raw = 0;  // azimuth mean in raw normalized u (dedupe key)
  int px0 = 0, px1 = -1, py0 = 0, py1 = -1;  // inclusive pixel footprint
};

struct FramePrep {
  std::vector<PreparedParticle> particles;             // flat scene order
  std::vector<std::array<std::uint32_t, 2>> node_of;   // flat -> (node, local)
  std::vector<ProjEntry> entries;                      // valid projections only
  std::vector<std::array<std::int32_t, 2>> entry_of;   // flat -> entry ids (-1 none)
  std::vector<Projection2D> projections;               // parallel to entries
};

FramePrep prepare_frame(const Scene& scene, const SensorModel& sensor, Channel channel,
                        const RenderOptions& options);

// Pixel footprint of one projection: the padded extent rectangle converted
// through the azimuth and elevation row mappings.
void compute_footprint(const Projection2D& proj, const SensorModel& m, ProjEntry& entry);

struct TileGrid {
  int tiles_x = 0, tiles_y = 0, tile_size = kTileSize;
  std::vector<std::vector<std::uint32_t>> lists;  // entry ids per tile, depth-sorted

  const std::vector<std::uint32_t>& at(int tx, int ty) const {
    return lists[static_cast<std::size_t>(ty) * tiles_x + tx];
  }
};

// Entries land in every tile their footprint rectangle intersects; per-tile
// lists are sorted by (depth, particle, phase) for deterministic compositing.
TileGrid tile_assign(const std::vector<ProjEntry>& entries, const FramePrep& prep, int width,
                     int height, int tile_size = kTileSize);

// Per-sensor ray cache; frames re-rendered with the same sensor reuse it.
struct RayCache {
  std::vector<Ray> rays;  // W * H
};

RayCache make_ray_cache(const SensorModel& m);

// Fixed 16-row blocks; hit records (when requested) are stored per block in
// row-major pixel order so the backward pass can replay them.
struct BlockHits {
  std::vector<std::uint32_t> counts;  // per pixel in block scan order
  std::vector<PixelHit> hits;
};

struct RenderResult {
  FrameBuffers buffers;
  FramePrep prep;
  std::vector<BlockHits> block_hits;  // filled when options.record_hits
};

RenderResult render_frame(const Scene& scene, const SensorModel& sensor, Channel channel,
                          const RenderOptions& options = {}, const RayCache* rays = nullptr);

RenderResult render_oracle(const Scene& scene, const SensorModel& sensor, Channel channel,
                           const RenderOptions& options = {}, const RayCache* rays = nullptr);

// Front-to-back volumetric integration of presorted hits (exposed for tests;
// the render paths inline the same arithmetic). Hits below kAlphaMin or with
// tau <= 0 are skipped; integration stops once transmittance < kTransmittanceMin;
// the remaining transmittance backs the background color in.
struct IntegrationResult {
  Vec3 color{0, 0, 0};
  double range = 0;
  double alpha = 0;
};

IntegrationResult integrate_pixel(const std::vector<PixelHit>& hits,
                                  const std::vector<Vec3>& hit_colors, const Vec3& background);

}  // namespace splatsim
