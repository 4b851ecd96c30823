#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "unroll_cli/config.hpp"

namespace unroll::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;     ///< unexpected internal error
inline constexpr int kExitInputError = 2;  ///< usage, config, I/O or image errors
inline constexpr int kExitBadKernel = 3;   ///< malformed kernel file

/// Worker count: UNROLL_THREADS if it holds a positive integer, else the hardware concurrency.
int thread_cap();

/// Runs `task(i)` for i in [0, n) on at most thread_cap() threads. Rethrows the
/// exception of the lowest failing index after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

/// `input` itself if it is a file; otherwise the *.png files in it (excluding
/// `*.illum.png` companions), sorted by name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& input);

struct SolveOverrides {
  bool paper_literal = false;
  int blocks = 0;  ///< 0 keeps the config value
  bool dump = false;
};

void cmd_degrade(const RunConfig& cfg, std::ostream& log);
void cmd_solve(RunConfig cfg, const SolveOverrides& overrides, std::ostream& log);
/// Returns the number of scored pairs.
std::size_t cmd_eval(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                     const std::filesystem::path& out_file, double sigma, std::ostream& log);

/// Full command-line entry point; args[0] is the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unroll::cli
