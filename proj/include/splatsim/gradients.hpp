// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Reverse-mode gradients of the rendered buffers with respect to particle
// parameters. The discrete structure fixed by the forward pass (tiling,
// phase selection, sort order, recorded hit lists) is treated as constant;
// gradients flow through the 3D max-response evaluation and the blending
// chain only.

#include <array>
#include <vector>

#include "splatsim/rasterizer.hpp"

namespace splatsim {

// Flat per-particle partials, scene order (node-major). Rotation gradients
// live in the tangent of the unit sphere (normalization folded in).
struct ParticleGradients {
  std::vector<Vec3> position;
  std::vector<Vec3> scale;
  std::vector<std::array<double, 4>> rotation;  // w, x, y, z
  std::vector<double> opacity_camera;
  std::vector<double> opacity_lidar;
  std::vector<Vec3> color;

  void resize_zero(std::size_t n) {
    position.assign(n, Vec3{});
    scale.assign(n, Vec3{});
    rotation.assign(n, {0, 0, 0, 0});
    opacity_camera.assign(n, 0.0);
    opacity_lidar.assign(n, 0.0);
    color.assign(n, Vec3{});
  }
  std::size_t size() const { return position.size(); }
};

// Accumulates gradients from one rendered frame into `grads` (sized to the
// scene's flat particle count). `render` must have been produced with
// record_hits = true; d_color (3*W*H) and d_range (W*H) are the loss
// gradients with respect to that frame's buffers, either may be null.
void backward(const Scene& scene, const SensorModel& sensor, Channel channel,
              const RenderResult& render, const RayCache& rays,
              const std::vector<double>* d_color, const std::vector<double>* d_range,
              const RenderOptions& options, ParticleGradients& grads);

// d(loss)/d(raw quaternion) from d(loss)/d(rotation matrix); exposed for the
// finite-difference gate.
std::array<double, 4> rotation_gradient(const Mat3& d_rotation, const Quat& q_unit);

}  // namespace splatsim
