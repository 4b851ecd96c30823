#pragma once

#include <string>
#include <variant>

#include "unroll/image.hpp"

namespace unroll {

struct IdentityPrior {
  friend bool operator==(const IdentityPrior&, const IdentityPrior&) = default;
};

/// Approximate proximal map of weight * TV: argmin_u 1/2 ||u - x||^2 + weight * TV(u),
/// isotropic TV with forward differences and Neumann boundary, solved by a fixed
/// number of projected-gradient steps on the dual.
struct TotalVariationPrior {
  double weight = 0.02;
  int iterations = 30;
  friend bool operator==(const TotalVariationPrior&, const TotalVariationPrior&) = default;
};

/// Circular Gaussian filter, support 2*ceil(3 sigma)+1 capped at the image side.
struct GaussianSmoothPrior {
  double sigma = 1.0;
  friend bool operator==(const GaussianSmoothPrior&, const GaussianSmoothPrior&) = default;
};

/// Per-channel (2r+1)^2 median with periodic boundary.
struct MedianPrior {
  int radius = 1;
  friend bool operator==(const MedianPrior&, const MedianPrior&) = default;
};

using PriorKind = std::variant<IdentityPrior, TotalVariationPrior, GaussianSmoothPrior, MedianPrior>;

/// Classical stand-in for a learned data operator. Immutable; apply() is pure.
class DataOperator {
 public:
  DataOperator() = default;
  DataOperator(PriorKind kind);  // NOLINT(google-explicit-constructor)

  static DataOperator identity() { return DataOperator(IdentityPrior{}); }
  static DataOperator tv(double weight, int iterations = 30) {
    return DataOperator(TotalVariationPrior{weight, iterations});
  }
  static DataOperator gaussian_smooth(double sigma) { return DataOperator(GaussianSmoothPrior{sigma}); }
  static DataOperator median(int radius) { return DataOperator(MedianPrior{radius}); }

  /// Same-shape output. Throws ValueError on non-finite input.
  [[nodiscard]] Image apply(const Image& x) const;

  [[nodiscard]] const PriorKind& kind() const noexcept { return kind_; }
  [[nodiscard]] std::string name() const;

  friend bool operator==(const DataOperator&, const DataOperator&) = default;

 private:
  PriorKind kind_ = IdentityPrior{};
};

/// Isotropic discrete total variation (forward differences, Neumann boundary), summed over channels.
double total_variation(const Image& u);

/// 1/2 ||u - x||^2 + weight * TV(u).
double tv_objective(const Image& u, const Image& x, double weight);

}  // namespace unroll
