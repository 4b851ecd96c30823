#pragma once

#include <variant>

#include "unroll/image.hpp"
#include "unroll/priors.hpp"

namespace unroll {

/// Fixed power curve l -> l^gamma; gamma in (0,1] brightens.
struct GammaCurve {
  double gamma = 1.0;
  friend bool operator==(const GammaCurve&, const GammaCurve&) = default;
};

/// Power curve whose exponent is chosen so the mean of the output equals `mean`.
struct TargetMean {
  double mean = 0.5;
  friend bool operator==(const TargetMean&, const TargetMean&) = default;
};

using EnhanceMode = std::variant<GammaCurve, TargetMean>;

struct EnhanceSpec {
  EnhanceMode mode = TargetMean{0.5};
  DataOperator denoise = DataOperator::gaussian_smooth(0.5);
  /// Subtract an estimated noise residual r - denoise(r) instead of using denoise(r) directly.
  bool residual = true;

  void validate() const;
  friend bool operator==(const EnhanceSpec&, const EnhanceSpec&) = default;
};

/// Values are clamped to [kMinIlluminance, 1] before the curve is applied.
inline constexpr double kMinIlluminance = 1e-6;

/// Exponent gamma such that mean(clamp(l)^gamma) == target, by bisection on log(gamma).
double solve_target_gamma(const Illuminance& l, double target);

/// Throws ValueError for an all-zero map.
Illuminance enhance_illuminance(const Illuminance& l, const EnhanceSpec& spec);
Image denoise_reflectance(const Image& r, const EnhanceSpec& spec);
/// Elementwise r . l with l broadcast over channels; no clamping.
Image recompose(const Image& r, const Illuminance& l);

}  // namespace unroll
