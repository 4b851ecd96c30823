#pragma once

#include <cstdint>
#include <variant>

#include "unroll/image.hpp"

namespace unroll {

struct DeltaBlur {
  friend bool operator==(const DeltaBlur&, const DeltaBlur&) = default;
};

struct GaussianBlur {
  double sigma = 1.5;
  friend bool operator==(const GaussianBlur&, const GaussianBlur&) = default;
};

/// Uniform line segment of `length` pixels through the kernel centre, `angle_deg`
/// measured counter-clockwise from the +x axis.
struct MotionBlur {
  double length = 9.0;
  double angle_deg = 0.0;
  friend bool operator==(const MotionBlur&, const MotionBlur&) = default;
};

using KernelKind = std::variant<DeltaBlur, GaussianBlur, MotionBlur>;

/// Default point-spread-function support.
inline constexpr int kDefaultKernelSize = 31;

struct KernelSpec {
  KernelKind kind = DeltaBlur{};
  int size = kDefaultKernelSize;
  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Synthetic low-light blurry capture model.
///
/// The dark scene is gt * Lmap with Lmap = illum_scale * luma(gt)^(illum_gamma - 1),
/// so luma of the dark image follows illum_scale * luma^illum_gamma. The dark scene is
/// blurred, Gaussian noise with standard deviation noise_sigma is added, and the result
/// is clamped to [0,1].
struct DegradeSpec {
  KernelSpec kernel;
  double illum_scale = 1.0;
  double illum_gamma = 1.0;
  double noise_sigma = 0.01;
  std::uint64_t seed = 0;

  /// Throws ValueError on out-of-range parameters.
  void validate() const;
  friend bool operator==(const DegradeSpec&, const DegradeSpec&) = default;
};

Kernel make_kernel(const KernelSpec& spec);

struct Degraded {
  Image degraded;      ///< blurred, noisy, clamped observation
  Kernel kernel;       ///< blur actually applied
  Illuminance illuminance;  ///< true attenuation map Lmap
  Image dark;          ///< gt * Lmap before blurring
};

/// Piecewise-smooth test scene: a soft colour gradient with random axis-aligned
/// rectangles and disks, values in [0.05, 0.95]. Deterministic in `seed`.
Image synthetic_scene(int height, int width, int channels, std::uint64_t seed);

/// Two-level checkerboard (0.1 / 0.9) with square cells of `cell` pixels.
Image checkerboard(int height, int width, int channels, int cell);

/// Deterministic for a fixed spec (including seed) on a given build.
Degraded degrade(const Image& gt, const DegradeSpec& spec);

}  // namespace unroll
