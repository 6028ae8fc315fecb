// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "splatsim/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace splatsim {

Mat3 covariance_of(const GaussianParticle& p) {
  const Mat3 r = rotation_matrix(normalized(p.rotation));
  const Mat3 d = Mat3::diagonal(p.scale.x * p.scale.x, p.scale.y * p.scale.y,
                                p.scale.z * p.scale.z);
  return r * d * transpose(r);
}

WorldParticle world_particle_at(const Scene& scene, std::size_t node_index,
                                std::size_t particle_index, double eta) {
  if (node_index >= scene.nodes.size()) throw std::out_of_range("node index out of range");
  const SceneNode& node = scene.nodes[node_index];
  if (particle_index >= node.particles.size())
    throw std::out_of_range("particle index out of range");
  const GaussianParticle& p = node.particles[particle_index];

  WorldParticle wp;
  const Mat3 r_node = rotation_matrix(node.motion.pose_mid.rotation);
  const Vec3 x_mid = node.motion.pose_mid.apply(p.position);
  if (node.kind == NodeKind::static_node) {
    wp.velocity = {0, 0, 0};
  } else {
    // Radius vector measured from the actor origin at mid-exposure.
    const Vec3 radius = r_node * p.position;
    wp.velocity = node.motion.linear_velocity + cross(node.motion.angular_velocity, radius);
  }
  wp.position = x_mid + wp.velocity * eta;
  wp.covariance = r_node * covariance_of(p) * transpose(r_node);
  return wp;
}

namespace {

struct VoxelKey {
  long long x, y, z;
  bool operator==(const VoxelKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct VoxelHash {
  std::size_t operator()(const VoxelKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.x) * 73856093u;
    h ^= static_cast<std::size_t>(k.y) * 19349663u;
    h ^= static_cast<std::size_t>(k.z) * 83492791u;
    return h;
  }
};

VoxelKey voxel_of(const Vec3& p, double cell) {
  return {static_cast<long long>(std::floor(p.x / cell)),
          static_cast<long long>(std::floor(p.y / cell)),
          static_cast<long long>(std::floor(p.z / cell))};
}

std::size_t occupied_voxels(const std::vector<Vec3>& pts, double cell) {
  std::unordered_map<VoxelKey, int, VoxelHash> seen;
  seen.reserve(pts.size());
  for (const Vec3& p : pts) seen.emplace(voxel_of(p, cell), 0);
  return seen.size();
}

// One representative per occupied voxel: the point nearest the voxel center,
// ties resolved by lowest index.
std::vector<std::size_t> voxel_representatives(const std::vector<Vec3>& pts, double cell) {
  struct Best {
    std::size_t index;
    double dist2;
  };
  std::unordered_map<VoxelKey, Best, VoxelHash> best;
  best.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const VoxelKey key = voxel_of(pts[i], cell);
    const Vec3 center{(key.x + 0.5) * cell, (key.y + 0.5) * cell, (key.z + 0.5) * cell};
    const double d2 = dot(pts[i] - center, pts[i] - center);
    auto it = best.find(key);
    if (it == best.end() || d2 < it->second.dist2) {
      best[key] = {i, d2};
    }
  }
  std::vector<std::size_t> kept;
  kept.reserve(best.size());
  for (const auto& [key, b] : best) kept.push_back(b.index);
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace

std::vector<GaussianParticle> init_from_pointcloud(const PointCloud& cloud,
                                                   std::size_t target_count) {
  const std::vector<Vec3>& pts = cloud.positions;
  if (pts.empty()) throw std::invalid_argument("init_from_pointcloud: empty cloud");
  if (target_count < 1) throw std::invalid_argument("init_from_pointcloud: target_count < 1");

  std::vector<std::size_t> kept;
  if (pts.size() <= target_count) {
    kept.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) kept[i] = i;
  } else {
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi = lo * -1.0;
    for (const Vec3& p : pts) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const double diag = std::max(norm(hi - lo), 1e-6);
    // Smallest cell size whose occupied-voxel count fits the budget.
    double cell_lo = diag * 1e-6, cell_hi = diag * 2.0;
    for (int it = 0; it < 48; ++it) {
      const double mid = 0.5 * (cell_lo + cell_hi);
      if (occupied_voxels(pts, mid) <= target_count)
        cell_hi = mid;
      else
        cell_lo = mid;
    }
    kept = voxel_representatives(pts, cell_hi);
    if (kept.size() > target_count) kept.resize(target_count);
  }

  // Isotropic scale from the mean distance to the 3 nearest retained neighbors.
  const std::size_t n = kept.size();
  std::vector<GaussianParticle> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d3[3] = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                    std::numeric_limits<double>::max()};
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Vec3 diff = pts[kept[j]] - pts[kept[i]];
      double d2 = dot(diff, diff);
      for (int k = 0; k < 3; ++k) {
        if (d2 < d3[k]) std::swap(d2, d3[k]);
      }
    }
    double sum = 0;
    int cnt = 0;
    for (double d2 : d3) {
      if (d2 < std::numeric_limits<double>::max()) {
        sum += std::sqrt(d2);
        ++cnt;
      }
    }
    const double s = cnt > 0 ? std::max(sum / cnt, 1e-4) : 0.1;
    GaussianParticle& g = out[i];
    g.position = pts[kept[i]];
    g.scale = {s, s, s};
    g.rotation = Quat{};
    g.opacity_camera = 0.5;
    g.opacity_lidar = 0.5;
    g.color = kept[i] < cloud.colors.size() ? cloud.colors[kept[i]] : Vec3{0.5, 0.5, 0.5};
  }
  return out;
}

std::vector<GaussianParticle> prune_by_opacity(const std::vector<GaussianParticle>& particles,
                                               double threshold) {
  std::vector<GaussianParticle> out;
  out.reserve(particles.size());
  for (const GaussianParticle& p : particles) {
    if (std::max(p.opacity_camera, p.opacity_lidar) >= threshold) out.push_back(p);
  }
  return out;
}

}  // namespace splatsim
