// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "splatsim/loss.hpp"

#include <cmath>
#include <stdexcept>

#include "splatsim/metrics.hpp"

namespace splatsim {

namespace {

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

ImageRef color_ref(const FrameBuffers& fb) {
  return {fb.color.data(), fb.width, fb.height, 3};
}

void check_pair(const FrameBuffers& a, const FrameBuffers& b) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("frame resolution mismatch");
}

}  // namespace

double opacity_consistency_loss(const Scene& scene) {
  double sum = 0;
  for (const SceneNode& node : scene.nodes)
    for (const GaussianParticle& p : node.particles)
      sum += std::abs(p.opacity_camera - p.opacity_lidar);
  return sum;
}

double camera_loss_with_grad(const FrameBuffers& rendered, const FrameBuffers& gt,
                             const LossWeights& w, std::vector<double>& d_color) {
  check_pair(rendered, gt);
  const std::size_t n = rendered.color.size();
  std::vector<double> ssim_grad;
  const double s = ssim_with_grad(color_ref(rendered), color_ref(gt), ssim_grad);
  double l1 = 0;
  d_color.assign(n, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = rendered.color[i] - gt.color[i];
    l1 += std::abs(diff);
    d_color[i] = w.lambda_rgb * sign_of(diff) * inv_n - (1.0 - w.lambda_rgb) * ssim_grad[i];
  }
  l1 *= inv_n;
  return w.lambda_rgb * l1 + (1.0 - w.lambda_rgb) * (1.0 - s);
}

double depth_loss_with_grad(const FrameBuffers& rendered, const FrameBuffers& gt,
                            const LossWeights& w, std::vector<double>& d_range) {
  check_pair(rendered, gt);
  const std::size_t n = rendered.range.size();
  d_range.assign(n, 0.0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (gt.range[i] > 0) ++count;
  if (count == 0) return 0.0;
  double l1 = 0;
  const double scale = w.w_depth / static_cast<double>(count);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(gt.range[i] > 0)) continue;
    const double diff = rendered.range[i] - gt.range[i];
    l1 += std::abs(diff);
    d_range[i] = scale * sign_of(diff);
  }
  return w.w_depth * l1 / static_cast<double>(count);
}

LossBreakdown loss_total(const FrameBuffers* cam_rendered, const FrameBuffers* cam_gt,
                         const FrameBuffers* lidar_rendered, const FrameBuffers* lidar_gt,
                         const Scene& scene, const LossWeights& w) {
  LossBreakdown out;
  if (cam_rendered && cam_gt) {
    check_pair(*cam_rendered, *cam_gt);
    const std::size_t n = cam_rendered->color.size();
    double l1 = 0;
    for (std::size_t i = 0; i < n; ++i) l1 += std::abs(cam_rendered->color[i] - cam_gt->color[i]);
    out.l1_color = l1 / static_cast<double>(n);
    out.ssim_term = 1.0 - ssim(color_ref(*cam_rendered), color_ref(*cam_gt));
  }
  if (lidar_rendered && lidar_gt) {
    check_pair(*lidar_rendered, *lidar_gt);
    const std::size_t n = lidar_rendered->range.size();
    double l1 = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(lidar_gt->range[i] > 0)) continue;
      l1 += std::abs(lidar_rendered->range[i] - lidar_gt->range[i]);
      ++count;
    }
    out.depth_l1 = count > 0 ? l1 / static_cast<double>(count) : 0.0;
  }
  out.opacity = opacity_consistency_loss(scene);
  out.total = w.lambda_rgb * out.l1_color + (1.0 - w.lambda_rgb) * out.ssim_term +
              w.w_depth * out.depth_l1 + w.w_opacity * out.opacity;
  return out;
}

}  // namespace splatsim
