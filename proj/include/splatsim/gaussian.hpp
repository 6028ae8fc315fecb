// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Dual-opacity Gaussian particles, a minimal scene graph of static and
// rigid-actor nodes, point-cloud initialization, and opacity pruning.

#include <cstddef>
#include <vector>

#include "splatsim/geometry.hpp"

namespace splatsim {

// Which sensor modality a render pass serves; selects the opacity used.
enum class Channel { camera, lidar };

struct GaussianParticle {
  Vec3 position;                 // node frame, meters
  Vec3 scale{1, 1, 1};           // per-axis std dev, meters, > 0
  Quat rotation;                 // unit
  double opacity_camera = 0.5;   // sigma_c in [0, 1]
  double opacity_lidar = 0.5;    // sigma_L in [0, 1]
  Vec3 color{0.5, 0.5, 0.5};     // diffuse rgb in [0, 1]

  double opacity(Channel c) const { return c == Channel::camera ? opacity_camera : opacity_lidar; }
};

// Sigma = R S S^T R^T with S = diag(scale); symmetric positive definite.
Mat3 covariance_of(const GaussianParticle& p);

enum class NodeKind { static_node, rigid_actor };

struct SceneNode {
  NodeKind kind = NodeKind::static_node;
  std::vector<GaussianParticle> particles;
  MotionState motion;  // identity pose / zero velocities for static nodes
  Vec3 bbox_min{0, 0, 0};  // node-frame extents, actors only
  Vec3 bbox_max{0, 0, 0};
};

struct Scene {
  std::vector<SceneNode> nodes;

  std::size_t total_particles() const {
    std::size_t n = 0;
    for (const auto& node : nodes) n += node.particles.size();
    return n;
  }
};

// A particle lifted into the world frame at mid-exposure, with the effective
// constant point velocity v_a + w_a x r (zero for static nodes).
struct WorldParticle {
  Vec3 position;    // world, at eta (meters)
  Vec3 velocity;    // world (m/s)
  Mat3 covariance;  // world frame
};

// Throws std::out_of_range for bad indices.
WorldParticle world_particle_at(const Scene& scene, std::size_t node_index,
                                std::size_t particle_index, double eta);

struct PointCloud {
  std::vector<Vec3> positions;
  std::vector<Vec3> colors;  // empty or same size as positions

  void append(const PointCloud& other) {
    positions.insert(positions.end(), other.positions.begin(), other.positions.end());
    colors.insert(colors.end(), other.colors.begin(), other.colors.end());
  }
};

// Seeds at most target_count particles on a voxel-grid subsample of the
// cloud: isotropic scale from the mean distance to the 3 nearest retained
// neighbors, both opacities 0.5, color carried from the point.
// Throws std::invalid_argument on an empty cloud or target_count < 1.
std::vector<GaussianParticle> init_from_pointcloud(const PointCloud& cloud,
                                                   std::size_t target_count);

// Keeps particles with max(sigma_c, sigma_L) >= threshold.
std::vector<GaussianParticle> prune_by_opacity(const std::vector<GaussianParticle>& particles,
                                               double threshold);

}  // namespace splatsim
