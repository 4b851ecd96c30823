#include "unroll/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace unroll {

void DegradeSpec::validate() const {
  if (!(illum_scale > 0.0 && illum_scale <= 1.0)) throw ValueError("illum_scale must lie in (0,1]");
  if (!(illum_gamma >= 1.0)) throw ValueError("illum_gamma must be >= 1");
  if (!(noise_sigma >= 0.0)) throw ValueError("noise_sigma must be >= 0");
  if (kernel.size < 1 || kernel.size % 2 == 0) throw ValueError("kernel size must be odd and positive");
}

namespace {

Kernel gaussian_kernel(const GaussianBlur& g, int size) {
  if (!(g.sigma > 0.0)) throw ValueError("gaussian sigma must be > 0");
  const int r = size / 2;
  std::vector<double> w(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
  const double denom = 2.0 * g.sigma * g.sigma;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dy = y - r;
      const double dx = x - r;
      w[static_cast<std::size_t>(y * size + x)] = std::exp(-(dx * dx + dy * dy) / denom);
    }
  }
  return Kernel::normalized(size, std::move(w));
}

Kernel motion_kernel(const MotionBlur& m, int size) {
  if (!(m.length >= 1.0)) throw ValueError("motion length must be >= 1");
  if (m.length > size) {
    throw ValueError("motion length " + std::to_string(m.length) + " exceeds kernel size " +
                     std::to_string(size));
  }
  const int r = size / 2;
  const double theta = m.angle_deg * std::numbers::pi / 180.0;
  const double cx = std::cos(theta);
  const double sy = -std::sin(theta);  // image rows grow downward
  const double half = (m.length - 1.0) / 2.0;
  const int samples = static_cast<int>(std::ceil(m.length)) * 8 + 1;
  std::vector<double> w(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0.0);
  for (int s = 0; s < samples; ++s) {
    const double t = samples == 1 ? 0.0 : -half + 2.0 * half * s / (samples - 1);
    const int x = r + static_cast<int>(std::lround(t * cx));
    const int y = r + static_cast<int>(std::lround(t * sy));
    if (x < 0 || y < 0 || x >= size || y >= size) continue;
    w[static_cast<std::size_t>(y * size + x)] = 1.0;
  }
  return Kernel::normalized(size, std::move(w));
}

}  // namespace

Kernel make_kernel(const KernelSpec& spec) {
  if (spec.size < 1 || spec.size % 2 == 0) throw ValueError("kernel size must be odd and positive");
  return std::visit(
      [&](const auto& kind) -> Kernel {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, DeltaBlur>) {
          return Kernel::delta(spec.size);
        } else if constexpr (std::is_same_v<T, GaussianBlur>) {
          return gaussian_kernel(kind, spec.size);
        } else {
          return motion_kernel(kind, spec.size);
        }
      },
      spec.kind);
}

Image synthetic_scene(int height, int width, int channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Image img(height, width, channels);
  std::vector<double> base(static_cast<std::size_t>(channels)), slope_y(base.size()), slope_x(base.size());
  for (std::size_t c = 0; c < base.size(); ++c) {
    base[c] = 0.3 + 0.4 * unit(rng);
    slope_y[c] = 0.3 * (unit(rng) - 0.5);
    slope_x[c] = 0.3 * (unit(rng) - 0.5);
  }
  for (int c = 0; c < channels; ++c) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        img.at(c, y, x) = base[static_cast<std::size_t>(c)] +
                          slope_y[static_cast<std::size_t>(c)] * (y / static_cast<double>(height) - 0.5) +
                          slope_x[static_cast<std::size_t>(c)] * (x / static_cast<double>(width) - 0.5);
      }
    }
  }
  const int shapes = 6 + static_cast<int>(unit(rng) * 6.0);
  std::vector<double> colour(static_cast<std::size_t>(channels));
  for (int s = 0; s < shapes; ++s) {
    for (double& v : colour) v = unit(rng);
    const bool disk = unit(rng) < 0.5;
    const double cy = unit(rng) * height;
    const double cx = unit(rng) * width;
    const double ry = (0.05 + 0.2 * unit(rng)) * height;
    const double rx = disk ? ry : (0.05 + 0.2 * unit(rng)) * width;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double dy = (y - cy) / ry;
        const double dx = (x - cx) / rx;
        const bool inside = disk ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
        if (!inside) continue;
        for (int c = 0; c < channels; ++c) img.at(c, y, x) = colour[static_cast<std::size_t>(c)];
      }
    }
  }
  for (double& v : img.data()) v = std::clamp(v, 0.05, 0.95);
  return img;
}

Image checkerboard(int height, int width, int channels, int cell) {
  if (cell < 1) throw ValueError("checkerboard cell must be >= 1");
  Image img(height, width, channels);
  for (int c = 0; c < channels; ++c) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) img.at(c, y, x) = ((y / cell + x / cell) % 2) ? 0.9 : 0.1;
    }
  }
  return img;
}

Degraded degrade(const Image& gt, const DegradeSpec& spec) {
  require_pipeline_image(gt, "degrade");
  spec.validate();

  Kernel k = make_kernel(spec.kernel);
  Illuminance lmap = luma(gt);
  for (double& v : lmap.data()) v = spec.illum_scale * std::pow(std::max(v, 0.0), spec.illum_gamma - 1.0);
  Image dark = hadamard(gt, lmap);
  Image x = conv2d_circular(dark, k);

  if (spec.noise_sigma > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (double& v : x.data()) v += noise(rng);
  }
  x = clamp01(x);
  return Degraded{std::move(x), std::move(k), std::move(lmap), std::move(dark)};
}

}  // namespace unroll
