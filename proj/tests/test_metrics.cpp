#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "unroll/metrics.hpp"

using namespace unroll;
using oracle::Rng;

namespace {

// Fixtures shared with an external SSIM reference (gaussian window, sigma 1.5,
// population covariance, unit data range).
Image fixture_a(int channels) {
  Image img(16, 16, channels);
  for (int c = 0; c < channels; ++c)
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x)
        img.at(c, y, x) = 0.1 + 0.8 * (std::sin(0.9 * x + 0.4 * y + (channels == 1 ? 0 : c)) + 1.0) / 2.0;
  return img;
}

Image fixture_b(const Image& a) {
  Image img = a;
  for (int c = 0; c < a.channels(); ++c)
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        double v = a.at(c, y, x) + 0.05 * std::cos(1.3 * x - 0.7 * y);
        if (a.channels() == 1) v += 0.02 * std::sin(0.5 * x * y);
        img.at(c, y, x) = std::clamp(v, 0.0, 1.0);
      }
  return img;
}

Image shifted(const Image& a) {
  Image out(a.height(), a.width(), a.channels());
  for (int c = 0; c < a.channels(); ++c)
    for (int y = 0; y < a.height(); ++y)
      for (int x = 0; x < a.width(); ++x) out.at(c, y, (x + 1) % a.width()) = a.at(c, y, x);
  return out;
}

Image permuted(const Image& a) {
  Image out(a.height(), a.width(), 3);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < a.height(); ++y)
      for (int x = 0; x < a.width(); ++x) out.at(c, y, x) = a.at((c + 1) % 3, y, x);
  return out;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("mae examples and elementwise recomputation") {
    Rng rng(1);
    const Image a = oracle::random_image(rng, 8, 8, 3);
    CHECK(mae_loss(a, a) == 0.0);
    const Image b = a + Image(8, 8, 3, 0.1);
    CHECK(mae_loss(b, a) == doctest::Approx(0.1).epsilon(1e-12));
    const Image c = oracle::random_image(rng, 8, 8, 3);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a.data()[i] - c.data()[i]);
    CHECK(std::abs(mae_loss(a, c) - acc / static_cast<double>(a.size())) <= 1e-12);
    CHECK_THROWS_AS((void)mae_loss(a, Image(8, 8, 1)), DimensionError);
  }

  TEST_CASE("fft loss against the direct DFT oracle") {
    Rng rng(2);
    const Image a = oracle::random_image(rng, 8, 8, 1);
    CHECK(fft_loss(a, a) == 0.0);
    const Image b = shifted(a);
    const auto fa = oracle::naive_dft(a, 0);
    const auto fb = oracle::naive_dft(b, 0);
    double acc = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
      const auto d = fa[i] - fb[i];
      acc += std::abs(d.real()) + std::abs(d.imag());
    }
    const double expected = acc / static_cast<double>(fa.size());
    CHECK(fft_loss(a, b) > 0.0);
    CHECK(std::abs(fft_loss(a, b) - expected) <= 1e-10);

    const Image c3 = oracle::random_image(rng, 6, 10, 3);
    const Image d3 = oracle::random_image(rng, 6, 10, 3);
    double acc3 = 0.0;
    for (int ch = 0; ch < 3; ++ch) {
      const auto x = oracle::naive_dft(c3, ch);
      const auto y = oracle::naive_dft(d3, ch);
      for (std::size_t i = 0; i < x.size(); ++i) acc3 += std::abs((x[i] - y[i]).real()) + std::abs((x[i] - y[i]).imag());
    }
    CHECK(std::abs(fft_loss(c3, d3) - acc3 / 180.0) <= 1e-10);
    CHECK_THROWS_AS((void)fft_loss(a, Image(8, 9, 1)), DimensionError);
  }

  TEST_CASE("fft loss scales linearly") {
    Rng rng(3);
    const Image a = oracle::random_image(rng, 12, 12, 3);
    const Image b = oracle::random_image(rng, 12, 12, 3);
    for (double s : {0.5, 2.0, 7.0}) CHECK(std::abs(fft_loss(s * a, s * b) - s * fft_loss(a, b)) <= 1e-9);
  }

  TEST_CASE("combined loss") {
    Rng rng(4);
    const Image a = oracle::random_image(rng, 10, 10, 3);
    const Image b = oracle::random_image(rng, 10, 10, 3);
    CHECK(kDefaultFftLossWeight == 0.1);
    CHECK(combined_loss(a, b, 0.0) == mae_loss(a, b));
    CHECK(std::abs(combined_loss(a, b) - (mae_loss(a, b) + 0.1 * fft_loss(a, b))) <= 1e-12);
    CHECK(combined_loss(a, a) == 0.0);
    for (int t = 0; t < 20; ++t) {
      const Image x = oracle::random_image(rng, 6, 6, 1);
      const Image y = oracle::random_image(rng, 6, 6, 1);
      CHECK(combined_loss(x, y) > 0.0);
    }
  }

  TEST_CASE("psnr examples") {
    Rng rng(5);
    const Image a = oracle::random_image(rng, 16, 16, 3, 0.0, 0.8);
    CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());
    CHECK(psnr(a + Image(16, 16, 3, 0.1), a) == doctest::Approx(20.0).epsilon(1e-10));
    const Image b = oracle::random_image(rng, 16, 16, 3);
    CHECK(psnr(a, b) == psnr(b, a));
    CHECK_THROWS_AS((void)psnr(a, Image(16, 16, 1)), DimensionError);
  }

  TEST_CASE("ssim of identical images is 1") {
    Rng rng(6);
    for (int size : {5, 11, 24}) {
      const Image a = oracle::random_image(rng, size, size, 3);
      CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("ssim matches frozen external reference values") {
    const Image ga = fixture_a(1);
    CHECK(std::abs(ssim(ga, fixture_b(ga)) - 0.9898533527563141) <= 1e-4);
    const Image ca = fixture_a(3);
    CHECK(std::abs(ssim(ca, fixture_b(ca)) - 0.9913153882104314) <= 1e-4);
  }

  TEST_CASE("ssim matches the brute-force reference on random pairs") {
    Rng rng(7);
    for (int t = 0; t < 5; ++t) {
      const Image a = oracle::random_image(rng, 16 + t, 20, 1 + 2 * (t % 2));
      const Image b = clamp01(a + 0.2 * oracle::random_image(rng, 16 + t, 20, a.channels(), -1, 1));
      CHECK(std::abs(ssim(a, b) - oracle::reference_ssim(a, b)) <= 1e-10);
    }
    const Image small_a = oracle::random_image(rng, 7, 9, 1);
    const Image small_b = oracle::random_image(rng, 7, 9, 1);
    CHECK(std::abs(ssim(small_a, small_b) - oracle::reference_ssim(small_a, small_b)) <= 1e-10);
  }

  TEST_CASE("psnr and ssim are symmetric and channel-permutation invariant") {
    Rng rng(8);
    const Image a = oracle::random_image(rng, 16, 16, 3);
    const Image b = clamp01(a + 0.1 * oracle::random_image(rng, 16, 16, 3, -1, 1));
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-14));
    CHECK(psnr(a, b) == doctest::Approx(psnr(permuted(a), permuted(b))).epsilon(1e-12));
    CHECK(ssim(a, b) == doctest::Approx(ssim(permuted(a), permuted(b))).epsilon(1e-12));
  }

  TEST_CASE("score bundles every metric") {
    Rng rng(9);
    const Image a = oracle::random_image(rng, 16, 16, 3);
    const Image b = oracle::random_image(rng, 16, 16, 3);
    const ScoreReport r = score(a, b);
    CHECK(r.psnr == psnr(a, b));
    CHECK(r.ssim == ssim(a, b));
    CHECK(r.mae == mae_loss(a, b));
    CHECK(r.fft_loss == fft_loss(a, b));
    CHECK(r.combined == doctest::Approx(combined_loss(a, b)).epsilon(1e-14));
    const ScoreReport same = score(a, a);
    CHECK(std::isinf(same.psnr));
    CHECK(same.combined == 0.0);
  }
}
