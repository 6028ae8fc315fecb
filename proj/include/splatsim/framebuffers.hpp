// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "splatsim/geometry.hpp"

namespace splatsim {

// Per-frame outputs: color / range / alpha planes plus the per-pixel shutter
// time. Pixel (ix, iy) center maps to normalized (u, v) =
// ((ix+0.5)/W, (iy+0.5)/H); range is ray length in meters, 0 where alpha = 0.
struct FrameBuffers {
  int width = 0;
  int height = 0;
  std::vector<double> color;  // 3 * W * H, rgb interleaved
  std::vector<double> range;  // W * H
  std::vector<double> alpha;  // W * H
  std::vector<double> eta;    // W * H, seconds relative to mid-exposure

  FrameBuffers() = default;
  FrameBuffers(int w, int h) { resize(w, h); }

  void resize(int w, int h) {
    width = w;
    height = h;
    color.assign(static_cast<std::size_t>(3) * w * h, 0.0);
    range.assign(static_cast<std::size_t>(w) * h, 0.0);
    alpha.assign(static_cast<std::size_t>(w) * h, 0.0);
    eta.assign(static_cast<std::size_t>(w) * h, 0.0);
  }

  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * width + ix; }
  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }

  Vec3 color_at(int ix, int iy) const {
    const std::size_t i = index(ix, iy) * 3;
    return {color[i], color[i + 1], color[i + 2]};
  }
  void set_color(int ix, int iy, const Vec3& c) {
    const std::size_t i = index(ix, iy) * 3;
    color[i] = c.x;
    color[i + 1] = c.y;
    color[i + 2] = c.z;
  }
};

}  // namespace splatsim
