#pragma once

#include <limits>

#include "unroll/image.hpp"

namespace unroll {

/// Weight of the frequency-domain term in combined_loss().
inline constexpr double kDefaultFftLossWeight = 0.1;

/// Mean absolute difference (l1 normalized by element count).
double mae_loss(const Image& a, const Image& b);

/// Mean over all DFT coefficients of |Re(Fa - Fb)| + |Im(Fa - Fb)| (unnormalized forward DFT).
double fft_loss(const Image& a, const Image& b);

/// mae_loss + sigma * fft_loss.
double combined_loss(const Image& a, const Image& b, double sigma = kDefaultFftLossWeight);

/// 10 log10(1 / MSE) for unit data range; +infinity when the images are identical.
double psnr(const Image& a, const Image& b);

/// Mean SSIM over valid 11x11 Gaussian (sigma 1.5) windows and channels, K1 = 0.01,
/// K2 = 0.03, unit data range. Images smaller than the window use the largest odd
/// window that fits.
double ssim(const Image& a, const Image& b);

struct ScoreReport {
  double psnr = std::numeric_limits<double>::infinity();
  double ssim = 1.0;
  double mae = 0.0;
  double fft_loss = 0.0;
  double combined = 0.0;
};

ScoreReport score(const Image& prediction, const Image& ground_truth,
                  double sigma = kDefaultFftLossWeight);

}  // namespace unroll
