// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Loss terms: camera guidance (L1 + SSIM), masked LiDAR range L1, and the
// opacity-consistency regularizer, with gradients with respect to the
// rendered buffers for the backward pass.

#include <vector>

#include "splatsim/framebuffers.hpp"
#include "splatsim/gaussian.hpp"

namespace splatsim {

struct LossWeights {
  double lambda_rgb = 0.2;  // L1 share of the camera-guidance term
  double w_depth = 1.0;
  double w_opacity = 1.0;
};

struct LossBreakdown {
  double l1_color = 0;    // mean absolute color error
  double ssim_term = 0;   // 1 - SSIM
  double depth_l1 = 0;    // masked mean absolute range error
  double opacity = 0;     // sum |sigma_c - sigma_L|
  double total = 0;
};

// sum_i |sigma_c,i - sigma_L,i| over every particle in the scene.
double opacity_consistency_loss(const Scene& scene);

// lambda * L1 + (1 - lambda) * (1 - SSIM) on the camera pair, w_depth * L1 on
// the lidar range pair masked to pixels with ground-truth returns, plus the
// opacity term. Either pair may be null. Throws on resolution mismatch.
LossBreakdown loss_total(const FrameBuffers* cam_rendered, const FrameBuffers* cam_gt,
                         const FrameBuffers* lidar_rendered, const FrameBuffers* lidar_gt,
                         const Scene& scene, const LossWeights& w);

// Camera-guidance value and gradient with respect to the rendered color
// buffer (3*W*H). Returns lambda*L1 + (1-lambda)*(1-SSIM).
double camera_loss_with_grad(const FrameBuffers& rendered, const FrameBuffers& gt,
                             const LossWeights& w, std::vector<double>& d_color);

// Masked range L1 (already scaled by w_depth) and its gradient (W*H).
double depth_loss_with_grad(const FrameBuffers& rendered, const FrameBuffers& gt,
                            const LossWeights& w, std::vector<double>& d_range);

}  // namespace splatsim
