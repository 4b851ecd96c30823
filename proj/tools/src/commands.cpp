#include "unroll_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "unroll/io.hpp"
#include "unroll/metrics.hpp"
#include "unroll/pipeline.hpp"

namespace unroll::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int thread_cap() {
  if (const char* env = std::getenv("UNROLL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(thread_cap()));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

bool is_companion(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.size() > 10 && name.ends_with(".illum.png");
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

json diagnostics_json(const BlockDiagnostics& d) {
  return {{"block", d.block},
          {"energy", d.energy},
          {"residual_reflectance", d.residual_reflectance},
          {"residual_illuminance", d.residual_illuminance},
          {"residual_latent", d.residual_latent},
          {"gap_reflectance", d.gap_reflectance},
          {"gap_illuminance", d.gap_illuminance},
          {"gap_latent", d.gap_latent}};
}

void write_trace_csv(const fs::path& path, const std::vector<BlockDiagnostics>& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "block,energy,residual_reflectance,residual_illuminance,residual_latent,"
         "gap_reflectance,gap_illuminance,gap_latent\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& d : trace) {
    out << d.block << ',' << d.energy << ',' << d.residual_reflectance << ',' << d.residual_illuminance
        << ',' << d.residual_latent << ',' << d.gap_reflectance << ',' << d.gap_illuminance << ','
        << d.gap_latent << '\n';
  }
}

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

Kernel kernel_for(const RunConfig& cfg, const fs::path& image) {
  switch (cfg.kernel_source) {
    case KernelSource::File: return read_kernel(cfg.kernel_file);
    case KernelSource::Parametric: return make_kernel(cfg.degrade.kernel);
    case KernelSource::FromDegradation: break;
  }
  const fs::path path = image.parent_path() / (stem_of(image) + ".kernel.txt");
  if (!fs::exists(path)) throw IoError("kernel file '" + path.string() + "' not found");
  return read_kernel(path);
}

}  // namespace

std::vector<fs::path> list_images(const fs::path& input) {
  if (fs::is_regular_file(input)) return {input};
  if (!fs::is_directory(input)) throw IoError("input '" + input.string() + "' does not exist");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (p.extension() != ".png" || is_companion(p)) continue;
    out.push_back(p);
  }
  std::ranges::sort(out);
  return out;
}

void cmd_degrade(const RunConfig& cfg, std::ostream& log) {
  const auto inputs = list_images(cfg.input);
  ensure_dir(cfg.output_dir);
  std::vector<json> items(inputs.size());
  parallel_for(inputs.size(), [&](std::size_t i) {
    const Image gt = read_png(inputs[i]);
    DegradeSpec spec = cfg.degrade;
    spec.seed = cfg.seed + i;
    const Degraded d = degrade(gt, spec);
    const std::string stem = stem_of(inputs[i]);
    const fs::path image = cfg.output_dir / (stem + ".png");
    const fs::path kernel = cfg.output_dir / (stem + ".kernel.txt");
    const fs::path illum = cfg.output_dir / (stem + ".illum.png");
    write_png(image, d.degraded);
    write_kernel(kernel, d.kernel);
    write_png(illum, d.illuminance);
    items[i] = {{"input", inputs[i].generic_string()},
                {"seed", spec.seed},
                {"degraded", image.generic_string()},
                {"kernel", kernel.generic_string()},
                {"illuminance", illum.generic_string()}};
  });
  write_json(cfg.output_dir / "manifest.json", {{"command", "degrade"},
                                                {"config", to_json(cfg)},
                                                {"config_hash", config_hash(cfg)},
                                                {"items", items}});
  log << "degraded " << inputs.size() << " image(s) into " << cfg.output_dir.string() << '\n';
}

void cmd_solve(RunConfig cfg, const SolveOverrides& overrides, std::ostream& log) {
  if (overrides.paper_literal) cfg.solver.mode = UpdateMode::PaperLiteral;
  if (overrides.blocks > 0) cfg.solver.blocks = overrides.blocks;
  if (overrides.dump) cfg.dump_diagnostics = true;
  cfg.solver.validate();

  const auto inputs = list_images(cfg.input);
  ensure_dir(cfg.output_dir);
  std::vector<json> items(inputs.size());
  parallel_for(inputs.size(), [&](std::size_t i) {
    const Image x = read_png(inputs[i]);
    const Kernel k = kernel_for(cfg, inputs[i]);
    const std::string stem = stem_of(inputs[i]);

    BlockObserver observer;
    fs::path diag_dir;
    if (cfg.dump_diagnostics) {
      diag_dir = cfg.output_dir / (stem + ".diag");
      ensure_dir(diag_dir);
      observer = [&diag_dir](int block, const SolverState& s) {
        const std::string prefix = "block" + std::to_string(block) + "_";
        write_png(diag_dir / (prefix + "latent.png"), s.latent);
        write_png(diag_dir / (prefix + "reflectance.png"), s.reflectance);
        write_png(diag_dir / (prefix + "illuminance.png"), s.illuminance);
        write_png(diag_dir / (prefix + "latent_split.png"), s.latent_split);
      };
    }

    const Restoration r = restore(x, k, cfg.solver, cfg.operators, cfg.enhance, observer);
    const fs::path image = cfg.output_dir / (stem + ".png");
    const fs::path illum = cfg.output_dir / (stem + ".illum.png");
    write_png(image, r.output);
    write_png(illum, r.enhanced_illuminance);
    if (cfg.dump_diagnostics) write_trace_csv(diag_dir / "trace.csv", r.solve.trace);

    json trace = json::array();
    for (const auto& d : r.solve.trace) trace.push_back(diagnostics_json(d));
    items[i] = {{"input", inputs[i].generic_string()},
                {"restored", image.generic_string()},
                {"illuminance", illum.generic_string()},
                {"trace", trace}};
  });
  write_json(cfg.output_dir / "manifest.json",
             {{"command", "solve"},
              {"config", to_json(cfg)},
              {"config_hash", config_hash(cfg)},
              {"energy", "augmented Lagrangian without regularizer terms"},
              {"items", items}});
  log << "restored " << inputs.size() << " image(s) into " << cfg.output_dir.string() << '\n';
}

std::size_t cmd_eval(const fs::path& pred_dir, const fs::path& gt_dir, const fs::path& out_file,
                     double sigma, std::ostream& log) {
  auto names = [](const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
    std::set<std::string> out;
    for (const auto& p : list_images(dir)) out.insert(p.filename().string());
    return out;
  };
  const auto pred = names(pred_dir);
  const auto gt = names(gt_dir);
  std::vector<std::string> paired;
  for (const auto& n : pred) {
    if (gt.contains(n)) {
      paired.push_back(n);
    } else {
      log << "warning: " << n << " has no ground truth; skipped\n";
    }
  }
  for (const auto& n : gt) {
    if (!pred.contains(n)) log << "warning: " << n << " has no prediction; skipped\n";
  }
  if (paired.empty()) log << "warning: no image pairs to evaluate\n";

  std::vector<ScoreReport> reports(paired.size());
  parallel_for(paired.size(), [&](std::size_t i) {
    const Image p = read_png(pred_dir / paired[i]);
    const Image g = read_png(gt_dir / paired[i]);
    if (!p.same_shape(g)) throw DimensionError("shape mismatch for pair '" + paired[i] + "'");
    reports[i] = score(p, g, sigma);
  });

  if (out_file.has_parent_path()) ensure_dir(out_file.parent_path());
  std::ofstream out(out_file);
  if (!out) throw IoError("cannot write '" + out_file.string() + "'");
  ScoreReport mean{0.0, 0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < paired.size(); ++i) {
    const ScoreReport& r = reports[i];
    out << json{{"name", paired[i]},
                {"psnr", number_or_inf(r.psnr)},
                {"ssim", r.ssim},
                {"mae", r.mae},
                {"fft_loss", r.fft_loss},
                {"combined", r.combined}}
               .dump()
        << '\n';
    mean.psnr += r.psnr;
    mean.ssim += r.ssim;
    mean.mae += r.mae;
    mean.fft_loss += r.fft_loss;
    mean.combined += r.combined;
  }
  if (!paired.empty()) {
    const double n = static_cast<double>(paired.size());
    out << json{{"aggregate", true},
                {"count", paired.size()},
                {"psnr", number_or_inf(mean.psnr / n)},
                {"ssim", mean.ssim / n},
                {"mae", mean.mae / n},
                {"fft_loss", mean.fft_loss / n},
                {"combined", mean.combined / n}}
               .dump()
        << '\n';
  }
  if (!out) throw IoError("failed writing '" + out_file.string() + "'");
  log << "evaluated " << paired.size() << " pair(s) into " << out_file.string() << '\n';
  return paired.size();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Low-light deblurring by an unrolled augmented Lagrangian solver", "unroll"};
  app.require_subcommand(1);

  std::string config_path;
  auto* degrade_cmd = app.add_subcommand("degrade", "Synthesize degraded images, kernels and illuminance maps");
  degrade_cmd->add_option("--config", config_path, "JSON run configuration")->required();

  SolveOverrides overrides;
  auto* solve_cmd = app.add_subcommand("solve", "Restore degraded images");
  solve_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  solve_cmd->add_flag("--paper-literal", overrides.paper_literal, "Use the update formulas as typeset");
  solve_cmd->add_option("--blocks", overrides.blocks, "Number of unrolled blocks (default from config, 5)")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--dump", overrides.dump, "Write per-block snapshots and trace.csv");

  std::string pred_dir, gt_dir, out_file;
  double sigma = kDefaultFftLossWeight;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against ground truth, paired by filename");
  eval_cmd->add_option("--pred", pred_dir, "Directory of restored images")->required();
  eval_cmd->add_option("--gt", gt_dir, "Directory of ground-truth images")->required();
  eval_cmd->add_option("--out", out_file, "JSON-lines report")->required();
  eval_cmd->add_option("--sigma", sigma, "Weight of the frequency term in the combined loss");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (degrade_cmd->parsed()) {
      cmd_degrade(load_config(config_path), out);
    } else if (solve_cmd->parsed()) {
      cmd_solve(load_config(config_path), overrides, out);
    } else {
      cmd_eval(pred_dir, gt_dir, out_file, sigma, err);
    }
  } catch (const KernelFormatError& e) {
    err << "error: malformed kernel file: " << e.what() << '\n';
    return kExitBadKernel;
  } catch (const ConfigError& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitInputError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {  // DimensionError, ValueError
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace unroll::cli
