#include "unroll/pipeline.hpp"

#include <algorithm>

namespace unroll {

Restoration restore(const Image& x, const Kernel& k, const HyperParams& h,
                    const DataOperators& ops, const EnhanceSpec& enhance,
                    const BlockObserver& observer) {
  enhance.validate();
  Restoration out;
  out.solve = run(x, k, h, ops, observer);
  out.enhanced_illuminance = enhance_illuminance(out.solve.state.illuminance, enhance);
  out.denoised_reflectance = denoise_reflectance(out.solve.state.reflectance, enhance);
  out.output = recompose(out.denoised_reflectance, out.enhanced_illuminance);
  return out;
}

Image brighten_only(const Image& x, const EnhanceSpec& spec) {
  Illuminance l = luma(x);
  for (double& v : l.data()) v = std::max(v, kIlluminanceFloor);
  const Illuminance enhanced = enhance_illuminance(l, spec);
  return recompose(divide(x, l), enhanced);
}

}  // namespace unroll
