#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "unroll/image.hpp"
#include "unroll/priors.hpp"

namespace unroll {

/// Which form of the closed-form updates to execute.
///
/// `Rederived` uses the stationary points of the augmented Lagrangian's
/// sub-objectives. `PaperLiteral` reproduces the formulas as originally
/// typeset, including their sign and symbol inconsistencies:
///  - split updates feed `prev - input/denominator` to the operator,
///  - reflectance = (split + dual) / lambda3, illuminance = (split + dual) / lambda4,
///  - the illuminance dual replaces the latent dual in the latent numerator,
///  - the illuminance split uses the previous reflectance split as its base and denominator.
enum class UpdateMode { Rederived, PaperLiteral };

/// Starting point of the unrolled iteration. Multipliers start at zero in every mode.
///  - `LumaSeeded`: latent and its split equal the input, illuminance and its split equal
///    the luma of the input (floored at kIlluminanceFloor); reflectance and its split zero.
///  - `Retinex`: as LumaSeeded, plus reflectance and its split equal input / illuminance.
///  - `InputOnly`: latent equals the input, everything else zero. The reflectance and
///    illuminance splits then stay zero for good, since each update needs the other nonzero.
///  - `Zeros`: every variable zero.
enum class InitMode { LumaSeeded, Retinex, InputOnly, Zeros };

std::string_view to_string(UpdateMode m);
std::string_view to_string(InitMode m);
UpdateMode parse_update_mode(std::string_view s);
InitMode parse_init_mode(std::string_view s);

/// Penalty weights, safeguards and block count.
///
///   lambda1  data fidelity  ||k * latent - x||^2
///   lambda2  Retinex coupling ||latent_split - reflectance_split . illuminance_split||^2
///   lambda3  reflectance = reflectance_split penalty
///   lambda4  illuminance = illuminance_split penalty
///   lambda5  latent = latent_split penalty
struct HyperParams {
  double lambda1 = 3.0;
  double lambda2 = 1.0;
  double lambda3 = 0.001;
  double lambda4 = 0.5;
  double lambda5 = 0.5;
  double eps = 1e-6;
  int blocks = 5;
  UpdateMode mode = UpdateMode::Rederived;
  InitMode init = InitMode::LumaSeeded;

  /// Throws ValueError unless every lambda > 0, eps > 0 and blocks >= 1.
  void validate() const;
  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// Everything carried from one unrolled block to the next.
struct SolverState {
  Image latent;                 ///< sharp low-light image
  Image reflectance;
  Illuminance illuminance;
  Image latent_split;           ///< auxiliary copy of latent
  Image reflectance_split;      ///< auxiliary copy of reflectance
  Illuminance illuminance_split;  ///< auxiliary copy of illuminance
  Image reflectance_dual;       ///< multiplier on reflectance - reflectance_split
  Illuminance illuminance_dual;   ///< multiplier on illuminance - illuminance_split
  Image latent_dual;            ///< multiplier on latent - latent_split
  Image previous_reflectance_split;  ///< reflectance_split before the current block; literal mode only

  [[nodiscard]] bool all_finite() const;
};

/// Data operators standing in for the three regularizers.
struct DataOperators {
  DataOperator reflectance = DataOperator::tv(0.02, 30);
  DataOperator illuminance = DataOperator::gaussian_smooth(16.0);
  DataOperator latent = DataOperator::tv(0.001, 30);

  static DataOperators identity() {
    return {DataOperator::identity(), DataOperator::identity(), DataOperator::identity()};
  }
  friend bool operator==(const DataOperators&, const DataOperators&) = default;
};

/// Illuminance initialisation floor for the luma-seeded modes.
inline constexpr double kIlluminanceFloor = 1e-3;

SolverState init_state(const Image& x, InitMode mode = InitMode::LumaSeeded);

Image update_reflectance_split(const SolverState& s, const HyperParams& h, const DataOperator& d);
Image update_reflectance(const SolverState& s, const HyperParams& h);
Illuminance update_illuminance_split(const SolverState& s, const HyperParams& h, const DataOperator& d);
Illuminance update_illuminance(const SolverState& s, const HyperParams& h);
Image update_latent_split(const SolverState& s, const HyperParams& h, const DataOperator& d);
/// FFT-domain solve of (lambda1 K^T K + lambda5 Id) latent = lambda1 K^T x + lambda5 latent_split - latent_dual.
/// Throws ValueError when the spectral denominator vanishes (e.g. lambda1 = lambda5 = 0).
Image update_latent(const SolverState& s, const Image& x, const Kernel& k, const HyperParams& h);

struct Multipliers {
  Image reflectance_dual;
  Illuminance illuminance_dual;
  Image latent_dual;
};
Multipliers update_multipliers(const SolverState& s, const HyperParams& h);

/// Augmented Lagrangian without the regularizer terms (they exist only as operators).
double energy(const SolverState& s, const Image& x, const Kernel& k, const HyperParams& h);

struct BlockDiagnostics {
  int block = 0;  ///< 1-based
  double energy = 0.0;
  /// Constraint violation after the block: ||R - P||, ||L - Q||, ||I - Z||.
  double residual_reflectance = 0.0;
  double residual_illuminance = 0.0;
  double residual_latent = 0.0;
  /// Violation opened by the split updates before their twins catch up:
  /// ||R_prev - P_new||, ||L_prev - Q_new||, ||I_prev - Z_new||.
  double gap_reflectance = 0.0;
  double gap_illuminance = 0.0;
  double gap_latent = 0.0;
};

struct SolveResult {
  SolverState state;
  std::vector<BlockDiagnostics> trace;
};

using BlockObserver = std::function<void(int block, const SolverState&)>;

/// One unrolled block: the seven updates in order, in place. Returns its diagnostics.
BlockDiagnostics run_block(SolverState& s, const Image& x, const Kernel& k, const HyperParams& h,
                           const DataOperators& ops, int block_index);

/// init_state followed by h.blocks blocks.
SolveResult run(const Image& x, const Kernel& k, const HyperParams& h,
                const DataOperators& ops = {}, const BlockObserver& observer = {});

/// Continue from an existing state for `blocks` more blocks; numbering starts at first_block.
SolveResult run_from(SolverState state, const Image& x, const Kernel& k, const HyperParams& h,
                     const DataOperators& ops, int blocks, int first_block = 1,
                     const BlockObserver& observer = {});

}  // namespace unroll
