#include "unroll/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace unroll {

namespace {

// FFTW's planner is not re-entrant; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Transform one plane in place. `sign` is FFTW_FORWARD or FFTW_BACKWARD.
void transform_plane(std::span<Complex> plane, int height, int width, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(plane.data());
  PlanPtr plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_2d(height, width, buf, buf, sign, FFTW_ESTIMATE));
  }
  if (!plan) throw std::runtime_error("FFTW failed to create a plan");
  fftw_execute(plan.get());
}

}  // namespace

Dct2d::Dct2d(int height, int width)
    : height_(height), width_(width), buffer_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
  if (height < 1 || width < 1) throw DimensionError("dct extent must be positive");
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_r2r_2d(height, width, buffer_.data(), buffer_.data(), FFTW_REDFT10, FFTW_REDFT10,
                                   FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_r2r_2d(height, width, buffer_.data(), buffer_.data(), FFTW_REDFT01, FFTW_REDFT01,
                                   FFTW_ESTIMATE);
  if (!forward_plan_ || !inverse_plan_) throw std::runtime_error("FFTW failed to create a plan");
}

Dct2d::~Dct2d() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void Dct2d::forward(std::span<double> plane) {
  if (plane.size() != buffer_.size()) throw DimensionError("dct plane size mismatch");
  std::ranges::copy(plane, buffer_.begin());
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::ranges::copy(buffer_, plane.begin());
}

void Dct2d::inverse(std::span<double> plane) {
  if (plane.size() != buffer_.size()) throw DimensionError("dct plane size mismatch");
  std::ranges::copy(plane, buffer_.begin());
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  const double scale = 1.0 / (4.0 * height_ * width_);
  for (std::size_t i = 0; i < buffer_.size(); ++i) plane[i] = buffer_[i] * scale;
}

Spectrum::Spectrum(int height, int width, int channels, Complex fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 1 || width < 1 || channels < 1) {
    throw DimensionError("spectrum dimensions must be positive");
  }
  coeffs_.assign(static_cast<std::size_t>(channels) * plane_size(), fill);
}

std::span<Complex> Spectrum::plane(int c) {
  return std::span<Complex>(coeffs_).subspan(static_cast<std::size_t>(c) * plane_size(),
                                             plane_size());
}

std::span<const Complex> Spectrum::plane(int c) const {
  return std::span<const Complex>(coeffs_).subspan(static_cast<std::size_t>(c) * plane_size(),
                                                   plane_size());
}

Spectrum forward_fft(const Image& img) {
  Spectrum s(img.height(), img.width(), img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    auto src = img.plane(c);
    auto dst = s.plane(c);
    std::ranges::transform(src, dst.begin(), [](double v) { return Complex(v, 0.0); });
    transform_plane(dst, img.height(), img.width(), FFTW_FORWARD);
  }
  return s;
}

Image inverse_fft(const Spectrum& s) {
  Image out(s.height(), s.width(), s.channels());
  std::vector<Complex> work(s.plane_size());
  const double scale = 1.0 / static_cast<double>(s.plane_size());
  for (int c = 0; c < s.channels(); ++c) {
    std::ranges::copy(s.plane(c), work.begin());
    transform_plane(work, s.height(), s.width(), FFTW_BACKWARD);
    auto dst = out.plane(c);
    for (std::size_t i = 0; i < work.size(); ++i) dst[i] = work[i].real() * scale;
  }
  return out;
}

Spectrum kernel_to_otf(const Kernel& k, int height, int width) {
  if (k.size() > std::min(height, width)) {
    throw DimensionError("kernel of size " + std::to_string(k.size()) +
                         " is larger than the OTF grid");
  }
  Image padded(height, width, 1);
  const int r = k.radius();
  for (int i = 0; i < k.size(); ++i) {
    for (int j = 0; j < k.size(); ++j) {
      const int y = ((i - r) % height + height) % height;
      const int x = ((j - r) % width + width) % width;
      padded.at(0, y, x) += k.at(i, j);
    }
  }
  return forward_fft(padded);
}

Spectrum multiply(const Spectrum& s, const Spectrum& filter) {
  if (filter.channels() != 1 || filter.height() != s.height() || filter.width() != s.width()) {
    throw DimensionError("spectral filter must be single-channel with matching extent");
  }
  Spectrum out = s;
  auto f = filter.plane(0);
  for (int c = 0; c < out.channels(); ++c) {
    auto p = out.plane(c);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] *= f[i];
  }
  return out;
}

}  // namespace unroll
