#include "unroll_cli/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>

namespace unroll::cli {

using nlohmann::json;

namespace {

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double get_number(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::int64_t get_integer(const json& j, const char* key, std::int64_t fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<std::int64_t>();
}

bool get_bool(const json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(where + "." + key + ": expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& j, const char* key, const std::string& fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

json kernel_to_json(const KernelSpec& k) {
  return std::visit(
      [&](const auto& kind) -> json {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, DeltaBlur>) {
          return {{"kind", "delta"}, {"size", k.size}};
        } else if constexpr (std::is_same_v<T, GaussianBlur>) {
          return {{"kind", "gaussian"}, {"sigma", kind.sigma}, {"size", k.size}};
        } else {
          return {{"kind", "motion"}, {"length", kind.length}, {"angle_deg", kind.angle_deg}, {"size", k.size}};
        }
      },
      k.kind);
}

KernelSpec kernel_from_json(const json& j, const std::string& where) {
  expect_object(j, where);
  KernelSpec k;
  const std::string kind = get_string(j, "kind", "delta", where);
  k.size = static_cast<int>(get_integer(j, "size", kDefaultKernelSize, where));
  if (kind == "delta") {
    reject_unknown(j, where, {"kind", "size"});
    k.kind = DeltaBlur{};
  } else if (kind == "gaussian") {
    reject_unknown(j, where, {"kind", "size", "sigma"});
    k.kind = GaussianBlur{get_number(j, "sigma", GaussianBlur{}.sigma, where)};
  } else if (kind == "motion") {
    reject_unknown(j, where, {"kind", "size", "length", "angle_deg"});
    k.kind = MotionBlur{get_number(j, "length", MotionBlur{}.length, where),
                        get_number(j, "angle_deg", MotionBlur{}.angle_deg, where)};
  } else {
    throw ConfigError(where + ".kind: unknown kernel kind '" + kind + "'");
  }
  return k;
}

std::string_view to_string(KernelSource s) {
  switch (s) {
    case KernelSource::FromDegradation: return "from_degradation";
    case KernelSource::File: return "file";
    case KernelSource::Parametric: return "parametric";
  }
  return "from_degradation";
}

KernelSource parse_kernel_source(const std::string& s) {
  if (s == "from_degradation") return KernelSource::FromDegradation;
  if (s == "file") return KernelSource::File;
  if (s == "parametric") return KernelSource::Parametric;
  throw ConfigError("kernel_source: unknown value '" + s + "'");
}

}  // namespace

json operator_to_json(const DataOperator& op) {
  return std::visit(
      [](const auto& kind) -> json {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, IdentityPrior>) {
          return {{"kind", "identity"}};
        } else if constexpr (std::is_same_v<T, TotalVariationPrior>) {
          return {{"kind", "tv"}, {"weight", kind.weight}, {"iterations", kind.iterations}};
        } else if constexpr (std::is_same_v<T, GaussianSmoothPrior>) {
          return {{"kind", "gaussian_smooth"}, {"sigma", kind.sigma}};
        } else {
          return {{"kind", "median"}, {"radius", kind.radius}};
        }
      },
      op.kind());
}

DataOperator operator_from_json(const json& j, const std::string& where) {
  expect_object(j, where);
  if (!j.contains("kind")) throw ConfigError(where + ": missing 'kind'");
  const std::string kind = get_string(j, "kind", "", where);
  DataOperator op;
  if (kind == "identity") {
    reject_unknown(j, where, {"kind"});
    op = DataOperator::identity();
  } else if (kind == "tv") {
    reject_unknown(j, where, {"kind", "weight", "iterations"});
    const TotalVariationPrior d;
    op = DataOperator::tv(get_number(j, "weight", d.weight, where),
                          static_cast<int>(get_integer(j, "iterations", d.iterations, where)));
  } else if (kind == "gaussian_smooth") {
    reject_unknown(j, where, {"kind", "sigma"});
    op = DataOperator::gaussian_smooth(get_number(j, "sigma", GaussianSmoothPrior{}.sigma, where));
  } else if (kind == "median") {
    reject_unknown(j, where, {"kind", "radius"});
    op = DataOperator::median(static_cast<int>(get_integer(j, "radius", MedianPrior{}.radius, where)));
  } else {
    throw ConfigError(where + ".kind: unknown operator kind '" + kind + "'");
  }
  // Parameter checks live in apply(); run one on a constant probe so bad values fail at load time.
  try {
    (void)op.apply(Image(kMinPipelineSide, kMinPipelineSide, 1, 0.5));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return op;
}

json to_json(const RunConfig& cfg) {
  json enhance_mode;
  if (const auto* g = std::get_if<GammaCurve>(&cfg.enhance.mode)) {
    enhance_mode = {{"kind", "gamma"}, {"gamma", g->gamma}};
  } else {
    enhance_mode = {{"kind", "target_mean"}, {"mean", std::get<TargetMean>(cfg.enhance.mode).mean}};
  }
  return {
      {"input", cfg.input.generic_string()},
      {"output_dir", cfg.output_dir.generic_string()},
      {"seed", cfg.seed},
      {"degrade",
       {{"kernel", kernel_to_json(cfg.degrade.kernel)},
        {"illum_scale", cfg.degrade.illum_scale},
        {"illum_gamma", cfg.degrade.illum_gamma},
        {"noise_sigma", cfg.degrade.noise_sigma}}},
      {"solver",
       {{"lambda1", cfg.solver.lambda1},
        {"lambda2", cfg.solver.lambda2},
        {"lambda3", cfg.solver.lambda3},
        {"lambda4", cfg.solver.lambda4},
        {"lambda5", cfg.solver.lambda5},
        {"eps", cfg.solver.eps},
        {"blocks", cfg.solver.blocks},
        {"mode", std::string(to_string(cfg.solver.mode))},
        {"init", std::string(to_string(cfg.solver.init))}}},
      {"operators",
       {{"reflectance", operator_to_json(cfg.operators.reflectance)},
        {"illuminance", operator_to_json(cfg.operators.illuminance)},
        {"latent", operator_to_json(cfg.operators.latent)}}},
      {"enhance",
       {{"mode", enhance_mode},
        {"denoise", operator_to_json(cfg.enhance.denoise)},
        {"residual", cfg.enhance.residual}}},
      {"kernel_source", std::string(to_string(cfg.kernel_source))},
      {"kernel_file", cfg.kernel_file.generic_string()},
      {"dump_diagnostics", cfg.dump_diagnostics},
  };
}

RunConfig config_from_json(const json& j) {
  expect_object(j, "config");
  reject_unknown(j, "config", {"input", "output_dir", "seed", "degrade", "solver", "operators", "enhance",
                               "kernel_source", "kernel_file", "dump_diagnostics"});
  RunConfig cfg;
  cfg.input = get_string(j, "input", "", "config");
  cfg.output_dir = get_string(j, "output_dir", "", "config");
  const std::int64_t seed = get_integer(j, "seed", 0, "config");
  if (seed < 0) throw ConfigError("config.seed: must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.kernel_source = parse_kernel_source(get_string(j, "kernel_source", "from_degradation", "config"));
  cfg.kernel_file = get_string(j, "kernel_file", "", "config");
  cfg.dump_diagnostics = get_bool(j, "dump_diagnostics", false, "config");

  if (j.contains("degrade")) {
    const json& d = j.at("degrade");
    expect_object(d, "degrade");
    reject_unknown(d, "degrade", {"kernel", "illum_scale", "illum_gamma", "noise_sigma"});
    if (d.contains("kernel")) cfg.degrade.kernel = kernel_from_json(d.at("kernel"), "degrade.kernel");
    cfg.degrade.illum_scale = get_number(d, "illum_scale", cfg.degrade.illum_scale, "degrade");
    cfg.degrade.illum_gamma = get_number(d, "illum_gamma", cfg.degrade.illum_gamma, "degrade");
    cfg.degrade.noise_sigma = get_number(d, "noise_sigma", cfg.degrade.noise_sigma, "degrade");
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    expect_object(s, "solver");
    reject_unknown(s, "solver",
                   {"lambda1", "lambda2", "lambda3", "lambda4", "lambda5", "eps", "blocks", "mode", "init"});
    HyperParams& h = cfg.solver;
    h.lambda1 = get_number(s, "lambda1", h.lambda1, "solver");
    h.lambda2 = get_number(s, "lambda2", h.lambda2, "solver");
    h.lambda3 = get_number(s, "lambda3", h.lambda3, "solver");
    h.lambda4 = get_number(s, "lambda4", h.lambda4, "solver");
    h.lambda5 = get_number(s, "lambda5", h.lambda5, "solver");
    h.eps = get_number(s, "eps", h.eps, "solver");
    h.blocks = static_cast<int>(get_integer(s, "blocks", h.blocks, "solver"));
    try {
      h.mode = parse_update_mode(get_string(s, "mode", std::string(to_string(h.mode)), "solver"));
      h.init = parse_init_mode(get_string(s, "init", std::string(to_string(h.init)), "solver"));
    } catch (const ValueError& e) {
      throw ConfigError(std::string("solver: ") + e.what());
    }
  }

  if (j.contains("operators")) {
    const json& o = j.at("operators");
    expect_object(o, "operators");
    reject_unknown(o, "operators", {"reflectance", "illuminance", "latent"});
    if (o.contains("reflectance"))
      cfg.operators.reflectance = operator_from_json(o.at("reflectance"), "operators.reflectance");
    if (o.contains("illuminance"))
      cfg.operators.illuminance = operator_from_json(o.at("illuminance"), "operators.illuminance");
    if (o.contains("latent")) cfg.operators.latent = operator_from_json(o.at("latent"), "operators.latent");
  }

  if (j.contains("enhance")) {
    const json& e = j.at("enhance");
    expect_object(e, "enhance");
    reject_unknown(e, "enhance", {"mode", "denoise", "residual"});
    if (e.contains("mode")) {
      const json& m = e.at("mode");
      expect_object(m, "enhance.mode");
      const std::string kind = get_string(m, "kind", "target_mean", "enhance.mode");
      if (kind == "gamma") {
        reject_unknown(m, "enhance.mode", {"kind", "gamma"});
        cfg.enhance.mode = GammaCurve{get_number(m, "gamma", GammaCurve{}.gamma, "enhance.mode")};
      } else if (kind == "target_mean") {
        reject_unknown(m, "enhance.mode", {"kind", "mean"});
        cfg.enhance.mode = TargetMean{get_number(m, "mean", TargetMean{}.mean, "enhance.mode")};
      } else {
        throw ConfigError("enhance.mode.kind: unknown value '" + kind + "'");
      }
    }
    if (e.contains("denoise")) cfg.enhance.denoise = operator_from_json(e.at("denoise"), "enhance.denoise");
    cfg.enhance.residual = get_bool(e, "residual", cfg.enhance.residual, "enhance");
  }

  try {
    cfg.degrade.validate();
    cfg.solver.validate();
    cfg.enhance.validate();
    (void)make_kernel(cfg.degrade.kernel);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.kernel_source == KernelSource::File && cfg.kernel_file.empty()) {
    throw ConfigError("kernel_source 'file' needs kernel_file");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  RunConfig cfg = config_from_json(j);
  if (cfg.input.empty()) throw ConfigError("config.input is required");
  if (cfg.output_dir.empty()) throw ConfigError("config.output_dir is required");
  if (!std::filesystem::exists(cfg.input)) {
    throw ConfigError("input '" + cfg.input.string() + "' does not exist");
  }
  if (cfg.kernel_source == KernelSource::File && !std::filesystem::exists(cfg.kernel_file)) {
    throw ConfigError("kernel_file '" + cfg.kernel_file.string() + "' does not exist");
  }
  return cfg;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace unroll::cli
