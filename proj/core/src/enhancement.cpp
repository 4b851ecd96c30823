#include "unroll/enhancement.hpp"

#include <algorithm>
#include <cmath>

namespace unroll {

void EnhanceSpec::validate() const {
  if (const auto* g = std::get_if<GammaCurve>(&mode)) {
    if (!(g->gamma > 0.0 && g->gamma <= 1.0)) throw ValueError("enhancement gamma must lie in (0,1]");
  } else {
    const double m = std::get<TargetMean>(mode).mean;
    if (!(m > 0.0 && m < 1.0)) throw ValueError("target mean must lie in (0,1)");
  }
}

namespace {

double powered_mean(std::span<const double> l, double gamma) {
  double acc = 0.0;
  for (double v : l) acc += std::pow(v, gamma);
  return acc / static_cast<double>(l.size());
}

Illuminance clamp_illuminance(const Illuminance& l) {
  if (l.channels() != 1) throw DimensionError("illuminance must be single-channel");
  require_finite(l, "illuminance");
  if (std::ranges::all_of(l.data(), [](double v) { return v <= 0.0; })) {
    throw ValueError("illuminance is identically zero");
  }
  Illuminance out = l;
  for (double& v : out.data()) v = std::clamp(v, kMinIlluminance, 1.0);
  return out;
}

}  // namespace

double solve_target_gamma(const Illuminance& l, double target) {
  const Illuminance c = clamp_illuminance(l);
  // mean(l^gamma) is non-increasing in gamma for l in (0,1].
  double lo = std::log(1e-3);
  double hi = std::log(1e3);
  double mid = 0.0;
  for (int it = 0; it < 60; ++it) {
    mid = 0.5 * (lo + hi);
    const double m = powered_mean(c.data(), std::exp(mid));
    if (std::abs(m - target) <= 1e-6) break;
    if (m > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(mid);
}

Illuminance enhance_illuminance(const Illuminance& l, const EnhanceSpec& spec) {
  Illuminance out = clamp_illuminance(l);
  double gamma = 1.0;
  if (const auto* g = std::get_if<GammaCurve>(&spec.mode)) {
    gamma = g->gamma;
  } else {
    gamma = solve_target_gamma(out, std::get<TargetMean>(spec.mode).mean);
  }
  if (gamma == 1.0) return out;
  for (double& v : out.data()) v = std::pow(v, gamma);
  return out;
}

Image denoise_reflectance(const Image& r, const EnhanceSpec& spec) {
  Image smooth = spec.denoise.apply(r);
  if (!spec.residual) return smooth;
  const Image noise_estimate = r - smooth;
  return r - noise_estimate;
}

Image recompose(const Image& r, const Illuminance& l) {
  if (l.channels() != 1 || !r.same_extent(l)) {
    throw DimensionError("recompose: illuminance must be single-channel with the reflectance extent");
  }
  return hadamard(r, l);
}

}  // namespace unroll
