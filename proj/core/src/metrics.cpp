#include "unroll/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "unroll/fft.hpp"

namespace unroll {

double mae_loss(const Image& a, const Image& b) {
  require_same_shape(a, b, "mae_loss");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a.data()[i] - b.data()[i]);
  return acc / static_cast<double>(a.size());
}

double fft_loss(const Image& a, const Image& b) {
  require_same_shape(a, b, "fft_loss");
  const Spectrum d = forward_fft(a - b);
  double acc = 0.0;
  for (const Complex& z : d.data()) acc += std::abs(z.real()) + std::abs(z.imag());
  return acc / static_cast<double>(d.data().size());
}

double combined_loss(const Image& a, const Image& b, double sigma) {
  return mae_loss(a, b) + sigma * fft_loss(a, b);
}

double psnr(const Image& a, const Image& b) {
  require_same_shape(a, b, "psnr");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

namespace {

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> w(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
  const int r = size / 2;
  double total = 0.0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double v = std::exp(-((x - r) * (x - r) + (y - r) * (y - r)) / (2.0 * sigma * sigma));
      w[static_cast<std::size_t>(y * size + x)] = v;
      total += v;
    }
  }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

double ssim(const Image& a, const Image& b) {
  require_same_shape(a, b, "ssim");
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  int size = std::min({11, a.height(), a.width()});
  if (size % 2 == 0) --size;
  const auto window = gaussian_window(size, 1.5);
  const int out_h = a.height() - size + 1;
  const int out_w = a.width() - size + 1;

  double acc = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    for (int y0 = 0; y0 < out_h; ++y0) {
      for (int x0 = 0; x0 < out_w; ++x0) {
        double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
        for (int i = 0; i < size; ++i) {
          for (int j = 0; j < size; ++j) {
            const double wgt = window[static_cast<std::size_t>(i * size + j)];
            const double va = a.at(c, y0 + i, x0 + j);
            const double vb = b.at(c, y0 + i, x0 + j);
            mx += wgt * va;
            my += wgt * vb;
            sxx += wgt * va * va;
            syy += wgt * vb * vb;
            sxy += wgt * va * vb;
          }
        }
        const double vx = sxx - mx * mx;
        const double vy = syy - my * my;
        const double cov = sxy - mx * my;
        acc += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      }
    }
  }
  return acc / (static_cast<double>(out_h) * out_w * a.channels());
}

ScoreReport score(const Image& prediction, const Image& ground_truth, double sigma) {
  ScoreReport r;
  r.psnr = psnr(prediction, ground_truth);
  r.ssim = ssim(prediction, ground_truth);
  r.mae = mae_loss(prediction, ground_truth);
  r.fft_loss = fft_loss(prediction, ground_truth);
  r.combined = r.mae + sigma * r.fft_loss;
  return r;
}

}  // namespace unroll
