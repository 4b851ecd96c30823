#pragma once

#include <complex>
#include <span>
#include <vector>

#include "unroll/image.hpp"

namespace unroll {

using Complex = std::complex<double>;

/// Per-channel 2-D DFT coefficients in the standard (unshifted) layout:
/// coefficient (u, v) of channel c is at index (c * height + u) * width + v.
///
/// The forward transform is unnormalized and the inverse carries 1/(height*width),
/// so a unit impulse transforms to all ones and sum|x|^2 == sum|X|^2 / (height*width).
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(int height, int width, int channels, Complex fill = {});

  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int channels() const noexcept { return channels_; }
  [[nodiscard]] std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }

  Complex& at(int c, int u, int v) { return coeffs_[index(c, u, v)]; }
  [[nodiscard]] Complex at(int c, int u, int v) const { return coeffs_[index(c, u, v)]; }

  [[nodiscard]] std::span<Complex> plane(int c);
  [[nodiscard]] std::span<const Complex> plane(int c) const;
  [[nodiscard]] std::span<Complex> data() noexcept { return coeffs_; }
  [[nodiscard]] std::span<const Complex> data() const noexcept { return coeffs_; }

 private:
  [[nodiscard]] std::size_t index(int c, int u, int v) const noexcept {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height_) +
            static_cast<std::size_t>(u)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(v);
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<Complex> coeffs_;
};

Spectrum forward_fft(const Image& img);
/// Real part of the normalized inverse transform, one plane per spectrum channel.
Image inverse_fft(const Spectrum& s);

/// Optical transfer function of `k` on an h-by-w periodic grid: the kernel is
/// zero-padded and circularly shifted so its centre tap sits at (0,0), then transformed.
/// Multiplying by it in the frequency domain equals conv2d_circular with `k`.
Spectrum kernel_to_otf(const Kernel& k, int height, int width);

/// Multiply every channel of `s` by the single-channel spectrum `filter`.
Spectrum multiply(const Spectrum& s, const Spectrum& filter);

/// Planned 2-D DCT-II of row-major h-by-w planes, reusable across calls. The DCT-II
/// diagonalizes the Neumann-boundary Laplacian with eigenvalue
/// (2 - 2 cos(pi u / h)) + (2 - 2 cos(pi v / w)). Not safe for concurrent use of one instance.
class Dct2d {
 public:
  Dct2d(int height, int width);
  ~Dct2d();
  Dct2d(const Dct2d&) = delete;
  Dct2d& operator=(const Dct2d&) = delete;

  /// Unnormalized forward transform, in place.
  void forward(std::span<double> plane);
  /// Exact inverse of forward(), in place.
  void inverse(std::span<double> plane);

 private:
  int height_;
  int width_;
  std::vector<double> buffer_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace unroll
