#pragma once

#include "unroll/alm_solver.hpp"
#include "unroll/enhancement.hpp"

namespace unroll {

struct Restoration {
  Image output;  ///< enhanced recomposition, not clamped
  Illuminance enhanced_illuminance;
  Image denoised_reflectance;
  SolveResult solve;
};

/// Unrolled solve, then illuminance enhancement, reflectance denoising and recomposition.
Restoration restore(const Image& x, const Kernel& k, const HyperParams& h,
                    const DataOperators& ops, const EnhanceSpec& enhance,
                    const BlockObserver& observer = {});

/// Reference without deblurring: treat luma(x) as the illuminance, enhance it with
/// `spec`, and rescale x by enhanced / original luma.
Image brighten_only(const Image& x, const EnhanceSpec& spec);

}  // namespace unroll
