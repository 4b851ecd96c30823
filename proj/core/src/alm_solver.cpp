#include "unroll/alm_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "unroll/fft.hpp"

namespace unroll {

std::string_view to_string(UpdateMode m) {
  return m == UpdateMode::Rederived ? "rederived" : "paper_literal";
}

std::string_view to_string(InitMode m) {
  switch (m) {
    case InitMode::LumaSeeded: return "luma_seeded";
    case InitMode::Retinex: return "retinex";
    case InitMode::InputOnly: return "input_only";
    case InitMode::Zeros: return "zeros";
  }
  return "luma_seeded";
}

UpdateMode parse_update_mode(std::string_view s) {
  if (s == "rederived") return UpdateMode::Rederived;
  if (s == "paper_literal") return UpdateMode::PaperLiteral;
  throw ValueError("unknown update mode '" + std::string(s) + "'");
}

InitMode parse_init_mode(std::string_view s) {
  if (s == "luma_seeded") return InitMode::LumaSeeded;
  if (s == "retinex") return InitMode::Retinex;
  if (s == "input_only") return InitMode::InputOnly;
  if (s == "zeros") return InitMode::Zeros;
  throw ValueError("unknown init mode '" + std::string(s) + "'");
}

void HyperParams::validate() const {
  for (double l : {lambda1, lambda2, lambda3, lambda4, lambda5}) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ValueError("every lambda must be finite and > 0");
  }
  if (!(eps > 0.0)) throw ValueError("eps must be > 0");
  if (blocks < 1) throw ValueError("blocks must be >= 1");
}

bool SolverState::all_finite() const {
  return unroll::all_finite(latent) && unroll::all_finite(reflectance) &&
         unroll::all_finite(illuminance) && unroll::all_finite(latent_split) &&
         unroll::all_finite(reflectance_split) && unroll::all_finite(illuminance_split) &&
         unroll::all_finite(reflectance_dual) && unroll::all_finite(illuminance_dual) &&
         unroll::all_finite(latent_dual);
}

SolverState init_state(const Image& x, InitMode mode) {
  const int h = x.height();
  const int w = x.width();
  const int c = x.channels();
  SolverState s;
  s.latent = x;
  s.reflectance = Image(h, w, c);
  s.illuminance = Image(h, w, 1);
  s.latent_split = Image(h, w, c);
  s.reflectance_split = Image(h, w, c);
  s.illuminance_split = Image(h, w, 1);
  s.reflectance_dual = Image(h, w, c);
  s.illuminance_dual = Image(h, w, 1);
  s.latent_dual = Image(h, w, c);

  switch (mode) {
    case InitMode::LumaSeeded:
    case InitMode::Retinex: {
      Illuminance l = luma(x);
      for (double& v : l.data()) v = std::max(v, kIlluminanceFloor);
      s.latent_split = x;
      s.illuminance = l;
      s.illuminance_split = l;
      if (mode == InitMode::Retinex) {
        s.reflectance = divide(x, l);
        s.reflectance_split = s.reflectance;
      }
      break;
    }
    case InitMode::InputOnly:
      break;
    case InitMode::Zeros:
      s.latent = Image(h, w, c);
      break;
  }
  s.previous_reflectance_split = s.reflectance_split;
  return s;
}

Image update_reflectance_split(const SolverState& s, const HyperParams& h, const DataOperator& d) {
  const Image& z = s.latent_split;
  const Image& q = s.illuminance_split;
  // psi = lambda2 Z Q + lambda3 R + Gamma ; denominator lambda2 Q^2 + lambda3 + eps
  Image psi = h.lambda2 * hadamard(z, q) + h.lambda3 * s.reflectance + s.reflectance_dual;
  Illuminance den = q;
  for (double& v : den.data()) v = h.lambda2 * v * v + h.lambda3 + h.eps;
  Image ratio = divide(psi, den);
  if (h.mode == UpdateMode::PaperLiteral) return d.apply(s.reflectance_split - ratio);
  return d.apply(ratio);
}

Image update_reflectance(const SolverState& s, const HyperParams& h) {
  if (h.mode == UpdateMode::PaperLiteral) {
    return (1.0 / h.lambda3) * (s.reflectance_split + s.reflectance_dual);
  }
  return s.reflectance_split - (1.0 / h.lambda3) * s.reflectance_dual;
}

Illuminance update_illuminance_split(const SolverState& s, const HyperParams& h,
                                     const DataOperator& d) {
  const Image& z = s.latent_split;
  const Image& p = s.reflectance_split;
  const int channels = p.channels();
  Illuminance out(p.height(), p.width(), 1);
  auto o = out.plane(0);
  auto l = s.illuminance.plane(0);
  auto omega = s.illuminance_dual.plane(0);

  if (h.mode == UpdateMode::PaperLiteral) {
    // Per-channel printed form with the previous reflectance split, then channel mean.
    const Image& base = s.previous_reflectance_split;
    for (int c = 0; c < channels; ++c) {
      auto zc = z.plane(c);
      auto pc = p.plane(c);
      auto bc = base.plane(c);
      for (std::size_t i = 0; i < o.size(); ++i) {
        const double upsilon = h.lambda2 * zc[i] * pc[i] + h.lambda4 * l[i] + omega[i];
        o[i] += bc[i] - upsilon / (h.lambda2 * bc[i] * bc[i] + h.lambda4 + h.eps);
      }
    }
    for (double& v : o) v /= channels;
    return d.apply(out);
  }

  // The illuminance is shared by every channel, so the exact minimizer pools the
  // channel terms: (lambda2 sum_c Z_c P_c + lambda4 L + Omega) / (lambda2 sum_c P_c^2 + lambda4 + eps).
  std::vector<double> zp(o.size(), 0.0), pp(o.size(), 0.0);
  for (int c = 0; c < channels; ++c) {
    auto zc = z.plane(c);
    auto pc = p.plane(c);
    for (std::size_t i = 0; i < o.size(); ++i) {
      zp[i] += zc[i] * pc[i];
      pp[i] += pc[i] * pc[i];
    }
  }
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] = (h.lambda2 * zp[i] + h.lambda4 * l[i] + omega[i]) / (h.lambda2 * pp[i] + h.lambda4 + h.eps);
  }
  return d.apply(out);
}

Illuminance update_illuminance(const SolverState& s, const HyperParams& h) {
  if (h.mode == UpdateMode::PaperLiteral) {
    return (1.0 / h.lambda4) * (s.illuminance_split + s.illuminance_dual);
  }
  return s.illuminance_split - (1.0 / h.lambda4) * s.illuminance_dual;
}

Image update_latent_split(const SolverState& s, const HyperParams& h, const DataOperator& d) {
  const double den = h.lambda2 + h.lambda5;
  if (!(den > 0.0)) throw ValueError("latent split update needs lambda2 + lambda5 > 0");
  Image pi = h.lambda2 * hadamard(s.reflectance_split, s.illuminance_split) +
             h.lambda5 * s.latent + s.latent_dual;
  Image ratio = (1.0 / den) * std::move(pi);
  if (h.mode == UpdateMode::PaperLiteral) return d.apply(s.latent_split - ratio);
  return d.apply(ratio);
}

Image update_latent(const SolverState& s, const Image& x, const Kernel& k, const HyperParams& h) {
  require_same_shape(x, s.latent_split, "latent update");
  const Image dual = h.mode == UpdateMode::PaperLiteral
                         ? broadcast(s.illuminance_dual, x.channels())
                         : s.latent_dual;

  const Spectrum otf = kernel_to_otf(k, x.height(), x.width());
  // F(K^T x) = conj(OTF) . F(x) on the periodic grid.
  Spectrum rhs = forward_fft(h.lambda5 * s.latent_split - dual);
  const Spectrum fx = forward_fft(x);
  auto o = otf.plane(0);
  std::vector<double> den(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) {
    den[i] = h.lambda1 * std::norm(o[i]) + h.lambda5;
    if (!(den[i] > 0.0)) {
      throw ValueError("latent update has a vanishing spectral denominator (lambda1, lambda5 too small)");
    }
  }
  for (int c = 0; c < x.channels(); ++c) {
    auto r = rhs.plane(c);
    auto f = fx.plane(c);
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] = (r[i] + h.lambda1 * std::conj(o[i]) * f[i]) / den[i];
    }
  }
  return inverse_fft(rhs);
}

Multipliers update_multipliers(const SolverState& s, const HyperParams& h) {
  Multipliers m{s.reflectance_dual, s.illuminance_dual, s.latent_dual};
  auto step = [](Image& dual, const Image& a, const Image& b, double lambda) {
    auto d = dual.data();
    auto pa = a.data();
    auto pb = b.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = d[i] + lambda * (pa[i] - pb[i]);
  };
  require_same_shape(s.reflectance, s.reflectance_split, "multiplier update");
  require_same_shape(s.illuminance, s.illuminance_split, "multiplier update");
  require_same_shape(s.latent, s.latent_split, "multiplier update");
  step(m.reflectance_dual, s.reflectance, s.reflectance_split, h.lambda3);
  step(m.illuminance_dual, s.illuminance, s.illuminance_split, h.lambda4);
  step(m.latent_dual, s.latent, s.latent_split, h.lambda5);
  return m;
}

double energy(const SolverState& s, const Image& x, const Kernel& k, const HyperParams& h) {
  const Image blur_residual = conv2d_circular(s.latent, k) - x;
  const Image retinex_residual =
      s.latent_split - hadamard(s.reflectance_split, s.illuminance_split);
  const Image rp = s.reflectance - s.reflectance_split;
  const Image lq = s.illuminance - s.illuminance_split;
  const Image iz = s.latent - s.latent_split;
  return 0.5 * h.lambda1 * squared_norm(blur_residual) +
         0.5 * h.lambda2 * squared_norm(retinex_residual) +
         dot(s.reflectance_dual, rp) + 0.5 * h.lambda3 * squared_norm(rp) +
         dot(s.illuminance_dual, lq) + 0.5 * h.lambda4 * squared_norm(lq) +
         dot(s.latent_dual, iz) + 0.5 * h.lambda5 * squared_norm(iz);
}

BlockDiagnostics run_block(SolverState& s, const Image& x, const Kernel& k, const HyperParams& h,
                           const DataOperators& ops, int block_index) {
  BlockDiagnostics d;
  d.block = block_index;

  const Image previous_split = s.reflectance_split;
  s.reflectance_split = update_reflectance_split(s, h, ops.reflectance);
  d.gap_reflectance = norm(s.reflectance - s.reflectance_split);
  s.previous_reflectance_split = previous_split;
  s.reflectance = update_reflectance(s, h);

  s.illuminance_split = update_illuminance_split(s, h, ops.illuminance);
  d.gap_illuminance = norm(s.illuminance - s.illuminance_split);
  s.illuminance = update_illuminance(s, h);

  s.latent_split = update_latent_split(s, h, ops.latent);
  d.gap_latent = norm(s.latent - s.latent_split);
  s.latent = update_latent(s, x, k, h);

  Multipliers m = update_multipliers(s, h);
  s.reflectance_dual = std::move(m.reflectance_dual);
  s.illuminance_dual = std::move(m.illuminance_dual);
  s.latent_dual = std::move(m.latent_dual);

  if (!s.all_finite()) {
    throw ValueError("solver state became non-finite in block " + std::to_string(block_index));
  }
  d.residual_reflectance = norm(s.reflectance - s.reflectance_split);
  d.residual_illuminance = norm(s.illuminance - s.illuminance_split);
  d.residual_latent = norm(s.latent - s.latent_split);
  d.energy = energy(s, x, k, h);
  return d;
}

SolveResult run_from(SolverState state, const Image& x, const Kernel& k, const HyperParams& h,
                     const DataOperators& ops, int blocks, int first_block,
                     const BlockObserver& observer) {
  SolveResult result{std::move(state), {}};
  result.trace.reserve(static_cast<std::size_t>(std::max(blocks, 0)));
  for (int b = 0; b < blocks; ++b) {
    result.trace.push_back(run_block(result.state, x, k, h, ops, first_block + b));
    if (observer) observer(first_block + b, result.state);
  }
  return result;
}

SolveResult run(const Image& x, const Kernel& k, const HyperParams& h, const DataOperators& ops,
                const BlockObserver& observer) {
  require_pipeline_image(x, "solver input");
  h.validate();
  if (k.size() > std::min(x.height(), x.width())) {
    throw DimensionError("kernel is larger than the input image");
  }
  return run_from(init_state(x, h.init), x, k, h, ops, h.blocks, 1, observer);
}

}  // namespace unroll
