// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Image and geometry quality metrics: PSNR, SSIM (11x11 Gaussian window,
// sigma 1.5, valid region), and symmetric Chamfer distance.

#include <vector>

#include "splatsim/gaussian.hpp"

namespace splatsim {

struct ImageRef {
  const double* data = nullptr;  // interleaved, `channels` per pixel, [0,1]
  int width = 0;
  int height = 0;
  int channels = 3;

  std::size_t size() const {
    return static_cast<std::size_t>(width) * height * channels;
  }
};

// 10 log10(1 / MSE), capped at 99 dB. Throws std::invalid_argument on shape
// mismatch.
double psnr(const ImageRef& a, const ImageRef& b);

// Mean local SSIM over the valid window region; both sides of each image
// must be >= 11 pixels.
double ssim(const ImageRef& a, const ImageRef& b);

// As ssim(), also writing d(mean SSIM)/d(a) into grad_a (same layout as a).
double ssim_with_grad(const ImageRef& a, const ImageRef& b, std::vector<double>& grad_a);

// Symmetric mean nearest-neighbor distance in meters; brute force for small
// clouds, grid-accelerated above 10^4 points (identical results). Throws on
// an empty cloud.
double chamfer(const std::vector<Vec3>& p, const std::vector<Vec3>& q);

struct MetricReport {
  double psnr_db = 0;
  double ssim_mean = 0;
  double chamfer_m = 0;
  std::vector<double> psnr_per_image;
  std::vector<double> ssim_per_image;
};

}  // namespace splatsim
