// Copyright 2026 The splatsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "splatsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace splatsim {

namespace {

constexpr int kWindow = 11;
constexpr int kHalf = kWindow / 2;
constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

void check_shapes(const ImageRef& a, const ImageRef& b) {
  if (a.width != b.width || a.height != b.height || a.channels != b.channels)
    throw std::invalid_argument("image shape mismatch");
  if (a.data == nullptr || b.data == nullptr) throw std::invalid_argument("null image");
}

std::array<double, kWindow> gaussian_window() {
  std::array<double, kWindow> w{};
  double sum = 0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kHalf;
    w[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

// Separable valid convolution: (H x W) -> (H - 10) x (W - 10).
void conv_valid(const std::vector<double>& in, int h, int w,
                const std::array<double, kWindow>& g, std::vector<double>& out,
                std::vector<double>& tmp) {
  const int wv = w - kWindow + 1;
  const int hv = h - kWindow + 1;
  tmp.assign(static_cast<std::size_t>(h) * wv, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < wv; ++x) {
      double s = 0;
      for (int k = 0; k < kWindow; ++k) s += g[k] * in[static_cast<std::size_t>(y) * w + x + k];
      tmp[static_cast<std::size_t>(y) * wv + x] = s;
    }
  }
  out.assign(static_cast<std::size_t>(hv) * wv, 0.0);
  for (int y = 0; y < hv; ++y) {
    for (int x = 0; x < wv; ++x) {
      double s = 0;
      for (int k = 0; k < kWindow; ++k) s += g[k] * tmp[static_cast<std::size_t>(y + k) * wv + x];
      out[static_cast<std::size_t>(y) * wv + x] = s;
    }
  }
}

// Adjoint of conv_valid: scatters a valid-size field back to image size.
void scatter_full(const std::vector<double>& in, int h, int w,
                  const std::array<double, kWindow>& g, std::vector<double>& out) {
  const int wv = w - kWindow + 1;
  const int hv = h - kWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(h) * wv, 0.0);
  for (int y = 0; y < hv; ++y)
    for (int k = 0; k < kWindow; ++k)
      for (int x = 0; x < wv; ++x)
        tmp[static_cast<std::size_t>(y + k) * wv + x] +=
            g[k] * in[static_cast<std::size_t>(y) * wv + x];
  out.assign(static_cast<std::size_t>(h) * w, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < wv; ++x)
      for (int k = 0; k < kWindow; ++k)
        out[static_cast<std::size_t>(y) * w + x + k] +=
            g[k] * tmp[static_cast<std::size_t>(y) * wv + x];
}

double ssim_impl(const ImageRef& a, const ImageRef& b, std::vector<double>* grad_a) {
  check_shapes(a, b);
  const int h = a.height, w = a.width, ch = a.channels;
  if (h < kWindow || w < kWindow)
    throw std::invalid_argument("image smaller than the SSIM window");
  const auto g = gaussian_window();
  const int wv = w - kWindow + 1, hv = h - kWindow + 1;
  const std::size_t npix = static_cast<std::size_t>(h) * w;
  const std::size_t nvalid = static_cast<std::size_t>(hv) * wv;
  const double denom = static_cast<double>(nvalid) * ch;

  if (grad_a) grad_a->assign(npix * ch, 0.0);

  std::vector<double> pa(npix), pb(npix), paa(npix), pbb(npix), pab(npix);
  std::vector<double> m1, m2, ra, rb, rab, tmp;
  std::vector<double> q1, q2, q3, s1, s2, s3;
  double total = 0;

  for (int c = 0; c < ch; ++c) {
    for (std::size_t i = 0; i < npix; ++i) {
      const double va = a.data[i * ch + c];
      const double vb = b.data[i * ch + c];
      pa[i] = va;
      pb[i] = vb;
      paa[i] = va * va;
      pbb[i] = vb * vb;
      pab[i] = va * vb;
    }
    conv_valid(pa, h, w, g, m1, tmp);
    conv_valid(pb, h, w, g, m2, tmp);
    conv_valid(paa, h, w, g, ra, tmp);
    conv_valid(pbb, h, w, g, rb, tmp);
    conv_valid(pab, h, w, g, rab, tmp);

    if (grad_a) {
      q1.assign(nvalid, 0.0);
      q2.assign(nvalid, 0.0);
      q3.assign(nvalid, 0.0);
    }
    for (std::size_t i = 0; i < nvalid; ++i) {
      const double mu1 = m1[i], mu2 = m2[i];
      const double s11 = ra[i] - mu1 * mu1;
      const double s22 = rb[i] - mu2 * mu2;
      const double s12 = rab[i] - mu1 * mu2;
      const double a1 = 2 * mu1 * mu2 + kSsimC1;
      const double a2 = 2 * s12 + kSsimC2;
      const double b1 = mu1 * mu1 + mu2 * mu2 + kSsimC1;
      const double b2 = s11 + s22 + kSsimC2;
      const double s = (a1 * a2) / (b1 * b2);
      total += s;
      if (grad_a) {
        const double ds_dm1 = 2 * mu2 * a2 / (b1 * b2) - 2 * mu1 * s / b1;
        const double ds_ds11 = -s / b2;
        const double ds_ds12 = 2 * a1 / (b1 * b2);
        q1[i] = ds_dm1 - 2 * mu1 * ds_ds11 - mu2 * ds_ds12;
        q2[i] = ds_ds11;
        q3[i] = ds_ds12;
      }
    }
    if (grad_a) {
      scatter_full(q1, h, w, g, s1);
      scatter_full(q2, h, w, g, s2);
      scatter_full(q3, h, w, g, s3);
      for (std::size_t i = 0; i < npix; ++i) {
        (*grad_a)[i * ch + c] = (s1[i] + 2 * pa[i] * s2[i] + pb[i] * s3[i]) / denom;
      }
    }
  }
  return total / denom;
}

}  // namespace

double psnr(const ImageRef& a, const ImageRef& b) {
  check_shapes(a, b);
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("empty image");
  double sq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a.data[i] - b.data[i];
    sq += d * d;
  }
  const double mse = sq / static_cast<double>(n);
  if (mse <= 0) return 99.0;
  return std::min(99.0, 10.0 * std::log10(1.0 / mse));
}

double ssim(const ImageRef& a, const ImageRef& b) { return ssim_impl(a, b, nullptr); }

double ssim_with_grad(const ImageRef& a, const ImageRef& b, std::vector<double>& grad_a) {
  return ssim_impl(a, b, &grad_a);
}

namespace {

constexpr std::size_t kBruteForceLimit = 10000;

struct CellKey {
  long long x, y, z;
  bool operator==(const CellKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.x) * 73856093u;
    h ^= static_cast<std::size_t>(k.y) * 19349663u;
    h ^= static_cast<std::size_t>(k.z) * 83492791u;
    return h;
  }
};

double nearest_sq_brute(const Vec3& p, const std::vector<Vec3>& pts) {
  double best = std::numeric_limits<double>::max();
  for (const Vec3& q : pts) {
    const Vec3 d = p - q;
    best = std::min(best, dot(d, d));
  }
  return best;
}

class PointGrid {
 public:
  explicit PointGrid(const std::vector<Vec3>& pts) : pts_(pts) {
    Vec3 lo = pts[0], hi = pts[0];
    for (const Vec3& p : pts) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const double diag = std::max(norm(hi - lo), 1e-9);
    cell_ = std::max(diag / std::cbrt(static_cast<double>(pts.size())), 1e-9);
    cells_.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cells_[key_of(pts[i])].push_back(i);
    }
  }

  double nearest_sq(const Vec3& p) const {
    const CellKey center = key_of(p);
    // Seed with an arbitrary point so the ring bound always terminates.
    const Vec3 seed = p - pts_[0];
    double best = dot(seed, seed);
    for (int ring = 0;; ++ring) {
      // A cell at Chebyshev ring r is at least (r-1)*cell away from p, so no
      // farther ring can beat the current best once that bound passes it.
      const double safe = (ring - 1) * cell_;
      if (ring >= 2 && safe * safe >= best) break;
      for (long long dx = -ring; dx <= ring; ++dx) {
        for (long long dy = -ring; dy <= ring; ++dy) {
          for (long long dz = -ring; dz <= ring; ++dz) {
            if (std::max({std::llabs(dx), std::llabs(dy), std::llabs(dz)}) != ring) continue;
            const auto it = cells_.find({center.x + dx, center.y + dy, center.z + dz});
            if (it == cells_.end()) continue;
            for (const std::size_t i : it->second) {
              const Vec3 d = p - pts_[i];
              best = std::min(best, dot(d, d));
            }
          }
        }
      }
    }
    return best;
  }

 private:
  CellKey key_of(const Vec3& p) const {
    return {static_cast<long long>(std::floor(p.x / cell_)),
            static_cast<long long>(std::floor(p.y / cell_)),
            static_cast<long long>(std::floor(p.z / cell_))};
  }

  const std::vector<Vec3>& pts_;
  double cell_;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells_;
};

double directed_mean_nn(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
  double sum = 0;
  if (std::max(from.size(), to.size()) <= kBruteForceLimit) {
    for (const Vec3& p : from) sum += std::sqrt(nearest_sq_brute(p, to));
  } else {
    const PointGrid grid(to);
    for (const Vec3& p : from) sum += std::sqrt(grid.nearest_sq(p));
  }
  return sum / static_cast<double>(from.size());
}

}  // namespace

double chamfer(const std::vector<Vec3>& p, const std::vector<Vec3>& q) {
  if (p.empty() || q.empty()) throw std::invalid_argument("chamfer: empty cloud");
  return 0.5 * (directed_mean_nn(p, q) + directed_mean_nn(q, p));
}

}  // namespace splatsim
