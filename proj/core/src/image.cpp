#include "unroll/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace unroll {

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 1 || width < 1 || channels < 1) {
    throw DimensionError("image dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(channels) * plane_size(), fill);
}

std::span<double> Image::plane(int c) {
  return std::span<double>(data_).subspan(static_cast<std::size_t>(c) * plane_size(), plane_size());
}

std::span<const double> Image::plane(int c) const {
  return std::span<const double>(data_).subspan(static_cast<std::size_t>(c) * plane_size(),
                                                plane_size());
}

Image& Image::operator+=(const Image& rhs) {
  require_same_shape(*this, rhs, "image addition");
  std::transform(data_.begin(), data_.end(), rhs.data_.begin(), data_.begin(), std::plus<>());
  return *this;
}

Image& Image::operator-=(const Image& rhs) {
  require_same_shape(*this, rhs, "image subtraction");
  std::transform(data_.begin(), data_.end(), rhs.data_.begin(), data_.begin(), std::minus<>());
  return *this;
}

Image& Image::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Image operator+(Image lhs, const Image& rhs) { return lhs += rhs; }
Image operator-(Image lhs, const Image& rhs) { return lhs -= rhs; }
Image operator*(double s, Image img) { return img *= s; }

namespace {

void require_broadcastable(const Image& a, const Image& b, const std::string& what) {
  if (!a.same_extent(b) || (b.channels() != a.channels() && b.channels() != 1)) {
    throw DimensionError(what + ": shapes are not broadcast-compatible");
  }
}

template <typename Op>
Image broadcast_binary(const Image& a, const Image& b, const std::string& what, Op op) {
  require_broadcastable(a, b, what);
  Image out(a.height(), a.width(), a.channels());
  for (int c = 0; c < a.channels(); ++c) {
    auto pa = a.plane(c);
    auto pb = b.plane(b.channels() == 1 ? 0 : c);
    auto po = out.plane(c);
    for (std::size_t i = 0; i < po.size(); ++i) po[i] = op(pa[i], pb[i]);
  }
  return out;
}

}  // namespace

Image hadamard(const Image& a, const Image& b) {
  return broadcast_binary(a, b, "hadamard", [](double x, double y) { return x * y; });
}

Image divide(const Image& a, const Image& b, double eps) {
  return broadcast_binary(a, b, "divide", [eps](double x, double y) { return x / (y + eps); });
}

Image broadcast(const Image& single, int channels) {
  if (single.channels() != 1) throw DimensionError("broadcast expects a single-channel map");
  Image out(single.height(), single.width(), channels);
  for (int c = 0; c < channels; ++c) std::ranges::copy(single.plane(0), out.plane(c).begin());
  return out;
}

Image channel_mean(const Image& img) {
  Image out(img.height(), img.width(), 1);
  auto po = out.plane(0);
  for (int c = 0; c < img.channels(); ++c) {
    auto pc = img.plane(c);
    for (std::size_t i = 0; i < po.size(); ++i) po[i] += pc[i];
  }
  for (double& v : po) v /= img.channels();
  return out;
}

Image channel_max(const Image& img) {
  Image out(img.height(), img.width(), 1);
  auto po = out.plane(0);
  std::ranges::copy(img.plane(0), po.begin());
  for (int c = 1; c < img.channels(); ++c) {
    auto pc = img.plane(c);
    for (std::size_t i = 0; i < po.size(); ++i) po[i] = std::max(po[i], pc[i]);
  }
  return out;
}

Image luma(const Image& img) {
  if (img.channels() == 1) return img;
  if (img.channels() != 3) throw DimensionError("luma expects 1 or 3 channels");
  Image out(img.height(), img.width(), 1);
  auto r = img.plane(0);
  auto g = img.plane(1);
  auto b = img.plane(2);
  auto po = out.plane(0);
  for (std::size_t i = 0; i < po.size(); ++i) po[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  return out;
}

double sum(const Image& img) {
  return std::accumulate(img.data().begin(), img.data().end(), 0.0);
}

double mean(const Image& img) { return sum(img) / static_cast<double>(img.size()); }

double dot(const Image& a, const Image& b) {
  require_same_shape(a, b, "dot");
  return std::inner_product(a.data().begin(), a.data().end(), b.data().begin(), 0.0);
}

double squared_norm(const Image& img) { return dot(img, img); }
double norm(const Image& img) { return std::sqrt(squared_norm(img)); }

double max_abs(const Image& img) {
  double m = 0.0;
  for (double v : img.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Image& a, const Image& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

bool all_finite(const Image& img) {
  return std::ranges::all_of(img.data(), [](double v) { return std::isfinite(v); });
}

Image clamp01(const Image& img) {
  Image out = img;
  for (double& v : out.data()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

void require_pipeline_image(const Image& img, const std::string& what) {
  if (img.channels() != 1 && img.channels() != 3) {
    throw DimensionError(what + ": expected 1 or 3 channels, got " +
                         std::to_string(img.channels()));
  }
  if (img.height() < kMinPipelineSide || img.width() < kMinPipelineSide) {
    throw DimensionError(what + ": image must be at least " + std::to_string(kMinPipelineSide) +
                         "x" + std::to_string(kMinPipelineSide));
  }
  require_finite(img, what);
}

void require_same_shape(const Image& a, const Image& b, const std::string& what) {
  if (!a.same_shape(b)) throw DimensionError(what + ": shape mismatch");
}

void require_finite(const Image& img, const std::string& what) {
  if (!all_finite(img)) throw ValueError(what + ": non-finite value");
}

Kernel::Kernel(int size, std::vector<double> taps) : size_(size), taps_(std::move(taps)) {
  if (size < 1 || size % 2 == 0) throw DimensionError("kernel size must be odd and positive");
  if (taps_.size() != static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {
    throw DimensionError("kernel tap count does not match size*size");
  }
  double total = 0.0;
  for (double t : taps_) {
    if (!std::isfinite(t) || t < 0.0) throw ValueError("kernel taps must be finite and >= 0");
    total += t;
  }
  if (std::abs(total - 1.0) > kKernelSumTolerance) {
    throw ValueError("kernel taps must sum to 1 (got " + std::to_string(total) + ")");
  }
}

Kernel Kernel::delta(int size) {
  std::vector<double> taps(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0.0);
  if (size >= 1 && size % 2 == 1) taps[taps.size() / 2] = 1.0;
  return Kernel(size, std::move(taps));
}

Kernel Kernel::normalized(int size, std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ValueError("kernel weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw ValueError("kernel weights sum to zero");
  for (double& w : weights) w /= total;
  return Kernel(size, std::move(weights));
}

Kernel flip_kernel(const Kernel& k) {
  std::vector<double> taps(k.taps().rbegin(), k.taps().rend());
  return Kernel(k.size(), std::move(taps));
}

Image conv2d_circular(const Image& img, const Kernel& k) {
  if (k.size() > std::min(img.height(), img.width())) {
    throw DimensionError("kernel of size " + std::to_string(k.size()) +
                         " is larger than the image");
  }
  const int h = img.height();
  const int w = img.width();
  const int r = k.radius();
  Image out(h, w, img.channels());
  // Index tables map a shifted coordinate i in [0, n + 2r) to (i - r) mod n.
  std::vector<std::size_t> row_of(static_cast<std::size_t>(h + 2 * r));
  std::vector<std::size_t> col_of(static_cast<std::size_t>(w + 2 * r));
  for (int i = 0; i < h + 2 * r; ++i) {
    row_of[static_cast<std::size_t>(i)] = static_cast<std::size_t>(((i - r) % h + h) % h);
  }
  for (int j = 0; j < w + 2 * r; ++j) {
    col_of[static_cast<std::size_t>(j)] = static_cast<std::size_t>(((j - r) % w + w) % w);
  }
  const auto uw = static_cast<std::size_t>(w);

  for (int c = 0; c < img.channels(); ++c) {
    auto src = img.plane(c);
    auto dst = out.plane(c);
    for (int ky = 0; ky < k.size(); ++ky) {
      for (int kx = 0; kx < k.size(); ++kx) {
        const double tap = k.at(ky, kx);
        if (tap == 0.0) continue;
        // Tap (ky, kx) reads source (y + r - ky, x + r - kx), i.e. table slot y + 2r - ky.
        const auto oy = static_cast<std::size_t>(2 * r - ky);
        const auto ox = static_cast<std::size_t>(2 * r - kx);
        for (std::size_t y = 0; y < static_cast<std::size_t>(h); ++y) {
          const std::size_t src_row = row_of[y + oy] * uw;
          double* out_row = dst.data() + y * uw;
          for (std::size_t x = 0; x < uw; ++x) out_row[x] += tap * src[src_row + col_of[x + ox]];
        }
      }
    }
  }
  return out;
}

}  // namespace unroll
