#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "unroll/alm_solver.hpp"
#include "unroll/degradation.hpp"
#include "unroll/enhancement.hpp"

namespace unroll::cli {

/// Bad config content: unknown key, wrong type, out-of-range value, missing path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Where `solve` gets its blur kernel.
///  - FromDegradation: `<stem>.kernel.txt` next to each input image (as written by `degrade`).
///  - File: the single kernel file at `kernel_file`.
///  - Parametric: built from `degrade.kernel`.
enum class KernelSource { FromDegradation, File, Parametric };

struct RunConfig {
  std::filesystem::path input;       ///< PNG file or directory of PNGs
  std::filesystem::path output_dir;  ///< created if missing
  DegradeSpec degrade;               ///< `degrade.seed` is unused; see `seed`
  HyperParams solver;
  DataOperators operators;
  EnhanceSpec enhance;
  KernelSource kernel_source = KernelSource::FromDegradation;
  std::filesystem::path kernel_file;
  bool dump_diagnostics = false;
  /// Noise seed for the first input in sorted order; input i uses seed + i.
  std::uint64_t seed = 0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys and bad values throw ConfigError.
RunConfig config_from_json(const nlohmann::json& j);
/// Parses the file and checks that referenced inputs exist. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json operator_to_json(const DataOperator& op);
DataOperator operator_from_json(const nlohmann::json& j, const std::string& where);

/// 64-bit FNV-1a of the canonical (compact, key-sorted) JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace unroll::cli
