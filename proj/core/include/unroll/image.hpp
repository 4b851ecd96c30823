#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace unroll {

/// Raised when tensor shapes are incompatible or a size constraint is violated.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a value-level precondition (finite input, positive weight, ...) fails.
class ValueError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Smallest side accepted at the pipeline boundary (solver entry, degradation, file I/O).
inline constexpr int kMinPipelineSide = 8;

/// Planar floating-point image: `channels` planes of `height * width` samples, row-major.
///
/// Values are unconstrained reals while inside the solver; quantization to
/// [0,1] happens only on export. A single-channel Image doubles as an
/// illuminance map and broadcasts over colour channels in the helpers below.
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels, double fill = 0.0);

  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int channels() const noexcept { return channels_; }
  [[nodiscard]] std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  double& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  [[nodiscard]] double at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  [[nodiscard]] std::span<double> plane(int c);
  [[nodiscard]] std::span<const double> plane(int c) const;
  [[nodiscard]] std::span<double> data() noexcept { return data_; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  [[nodiscard]] bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }
  [[nodiscard]] bool same_extent(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  Image& operator+=(const Image& rhs);
  Image& operator-=(const Image& rhs);
  Image& operator*=(double s);

  friend bool operator==(const Image&, const Image&) = default;

 private:
  [[nodiscard]] std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height_) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Illuminance maps are single-channel images broadcast across colour channels.
using Illuminance = Image;

Image operator+(Image lhs, const Image& rhs);
Image operator-(Image lhs, const Image& rhs);
Image operator*(double s, Image img);

/// Elementwise product; `b` may be single-channel and is then broadcast over `a`'s channels.
Image hadamard(const Image& a, const Image& b);
/// Elementwise quotient `a / (b + eps)` with the same broadcasting rule as hadamard().
Image divide(const Image& a, const Image& b, double eps = 0.0);
/// Repeat a single-channel map to `channels` planes.
Image broadcast(const Image& single, int channels);

Image channel_mean(const Image& img);
Image channel_max(const Image& img);
/// Rec. 601 luma for RGB; the plane itself for grayscale.
Image luma(const Image& img);

double sum(const Image& img);
double mean(const Image& img);
double dot(const Image& a, const Image& b);
double squared_norm(const Image& img);
double norm(const Image& img);
double max_abs(const Image& img);
double max_abs_diff(const Image& a, const Image& b);
bool all_finite(const Image& img);
Image clamp01(const Image& img);

/// Throws DimensionError unless channels is 1 or 3 and both sides are at least kMinPipelineSide.
void require_pipeline_image(const Image& img, const std::string& what);
void require_same_shape(const Image& a, const Image& b, const std::string& what);
void require_finite(const Image& img, const std::string& what);

/// Square, odd-sized, nonnegative point-spread function whose taps sum to one.
class Kernel {
 public:
  /// Validates and stores taps (row-major, size*size). Throws ValueError/DimensionError.
  Kernel(int size, std::vector<double> taps);

  static Kernel delta(int size = 1);
  /// Normalizes nonnegative weights to unit sum; throws ValueError if they sum to zero.
  static Kernel normalized(int size, std::vector<double> weights);

  [[nodiscard]] int size() const noexcept { return size_; }
  [[nodiscard]] int radius() const noexcept { return size_ / 2; }
  [[nodiscard]] double at(int y, int x) const {
    return taps_[static_cast<std::size_t>(y) * static_cast<std::size_t>(size_) +
                 static_cast<std::size_t>(x)];
  }
  [[nodiscard]] std::span<const double> taps() const noexcept { return taps_; }

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  int size_;
  std::vector<double> taps_;
};

/// Tap-sum tolerance used when validating a kernel.
inline constexpr double kKernelSumTolerance = 1e-9;

/// Kernel with taps reversed in both axes; convolution with it is the adjoint of convolution with `k`.
Kernel flip_kernel(const Kernel& k);

/// Circular (periodic-boundary) 2-D convolution applied per channel.
/// out(y,x) = sum_{i,j} k(i,j) * img((y - i + r) mod H, (x - j + r) mod W), r = k.radius().
Image conv2d_circular(const Image& img, const Kernel& k);

}  // namespace unroll
