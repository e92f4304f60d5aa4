// acce: command line front end for the enhancement pipeline.
//
//   acce enhance <in> -o <out> [options]
//   acce batch <dir> -o <dir> [options] [--jobs N]
//   acce metrics <a> <b>
//
// Exit codes: 0 success, 1 a file failed, 2 usage error.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acce/io.hpp"
#include "acce/metrics.hpp"
#include "acce/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kUsage = 2;

bool is_image_name(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".ppm" || ext == ".pnm";
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (!name.empty() && name.front() == '.') continue;
    if (is_image_name(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Options {
  acce::PipelineConfig cfg;
  acce::KernelKind kernel = acce::KernelKind::inverse_distance;
  acce::SpreadMode spread = acce::SpreadMode::stddev;
  acce::InitMode init = acce::InitMode::guide;
  acce::SsimMode ssim = acce::SsimMode::luma;
  double threshold = -1.0;
  bool no_denoise = false;
  std::string dump;
  int jobs = 1;

  std::string input;
  std::string output;
  std::string other;
};

void add_pipeline_flags(CLI::App& app, Options& o) {
  auto& s = o.cfg.solver;
  auto& f = o.cfg.filters;
  const auto nonneg = CLI::NonNegativeNumber;
  const auto pos = CLI::PositiveNumber;

  app.add_option("--alpha", s.alpha, "saturation contrast weight")->check(nonneg);
  app.add_option("--beta", s.beta, "intensity contrast weight")->check(nonneg);
  app.add_option("--sigma", s.sigma, "width of the mid-tone weight")->check(pos);
  app.add_option("--dt", s.dt, "time step, (0, 1]")->check(CLI::Range(0.0, 1.0) & pos);
  app.add_option("--tau", s.tau, "relative energy change that stops the solver")->check(pos);
  app.add_option("--max-iters", s.max_iters, "iteration cap")->check(CLI::Range(1, 1000000));
  app.add_option("--window-radius", s.kernel.window_radius, "nonlocal window half-width")
      ->check(CLI::Range(1, 1000));
  const std::map<std::string, acce::KernelKind> kernels{
      {"inverse", acce::KernelKind::inverse_distance}, {"gaussian", acce::KernelKind::gaussian}};
  app.add_option("--kernel", o.kernel, "distance weight: inverse|gaussian")
      ->transform(CLI::CheckedTransformer(kernels, CLI::ignore_case));
  app.add_option("--kernel-sigma", s.kernel.spatial_sigma, "gaussian kernel width in pixels")
      ->check(pos);
  app.add_flag("--exact", s.exact_mode, "brute-force nonlocal sums (slow)");
  app.add_option("--lambda", o.cfg.lambda, "guide clip factor")->check(pos);
  const std::map<std::string, acce::SpreadMode> spreads{{"stddev", acce::SpreadMode::stddev},
                                                        {"variance", acce::SpreadMode::variance}};
  app.add_option("--spread", o.spread, "guide spread measure: stddev|variance")
      ->transform(CLI::CheckedTransformer(spreads, CLI::ignore_case));
  app.add_flag("--no-denoise", o.no_denoise, "keep the high-frequency residual as is");
  app.add_option("--threshold", o.threshold, "fixed shrinkage threshold (default: automatic)")
      ->check(nonneg);
  app.add_option("--gain", f.gain, "weight of the high-frequency residual")->check(nonneg);
  app.add_option("--bilateral-spatial", f.bilateral_spatial_sigma)->check(pos);
  app.add_option("--bilateral-range", f.bilateral_range_sigma)->check(pos);
  app.add_option("--bilateral-radius", f.bilateral_radius)->check(CLI::Range(0, 1000));
  app.add_option("--dog-sigma1", f.dog_sigma1)->check(pos);
  app.add_option("--dog-sigma2", f.dog_sigma2)->check(pos);
  const std::map<std::string, acce::InitMode> inits{{"guide", acce::InitMode::guide},
                                                    {"lowfreq", acce::InitMode::lowfreq}};
  app.add_option("--init", o.init, "solver start: guide|lowfreq")
      ->transform(CLI::CheckedTransformer(inits, CLI::ignore_case));
  app.add_option("--dump", o.dump, "directory for intermediate planes and run.json");
  app.add_flag("--trace", o.cfg.trace, "write <output>.trace.csv with the energy per iteration");
}

void finish_config(Options& o) {
  o.cfg.solver.kernel.kind = o.kernel;
  o.cfg.spread = o.spread;
  o.cfg.init = o.init;
  o.cfg.denoise_enabled = !o.no_denoise;
  if (o.threshold >= 0.0) {
    o.cfg.threshold = {acce::ThresholdSpec::Mode::fixed, o.threshold};
  }
  if (!o.dump.empty()) o.cfg.dump_dir = o.dump;
  o.cfg.validate();
}

int run_enhance(Options& o) {
  try {
    acce::process_file(o.input, o.output, o.cfg);
  } catch (const std::exception& e) {
    std::cerr << "acce: " << o.input << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run_batch(Options& o) {
  const fs::path in_dir = o.input;
  const fs::path out_dir = o.output;
  if (!fs::is_directory(in_dir)) {
    std::cerr << "acce: not a directory: " << in_dir << '\n';
    return kUsage;
  }
  std::error_code ec;
  if (fs::exists(out_dir) && fs::equivalent(in_dir, out_dir, ec)) {
    std::cerr << "acce: output directory must differ from the input directory\n";
    return kUsage;
  }
  const auto summary = acce::run_batch(list_images(in_dir), o.cfg, out_dir, o.jobs);
  std::cout << summary.to_json() << '\n';
  for (const auto& f : summary.files) {
    if (!f.ok) std::cerr << "acce: " << f.input.string() << ": " << f.error << '\n';
  }
  return summary.exit_code();
}

int run_metrics(Options& o) {
  try {
    const auto a = acce::load_image(o.input);
    const auto b = acce::load_image(o.other);
    std::cout << acce::compare(a, b, o.ssim).to_json() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "acce: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Underwater image enhancement"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value file; command line flags take precedence");
  app.allow_config_extras(false);
  add_pipeline_flags(app, o);

  auto* enhance = app.add_subcommand("enhance", "enhance one image");
  enhance->add_option("input", o.input)->required();
  enhance->add_option("-o,--output", o.output)->required();

  auto* batch = app.add_subcommand("batch", "enhance every .png/.ppm/.pnm in a directory");
  batch->add_option("input", o.input)->required();
  batch->add_option("-o,--output", o.output)->required();
  batch->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1, 256));

  auto* metrics = app.add_subcommand("metrics", "MSE, PSNR and SSIM of two images as JSON");
  metrics->add_option("a", o.input)->required();
  metrics->add_option("b", o.other)->required();
  const std::map<std::string, acce::SsimMode> ssim_modes{{"luma", acce::SsimMode::luma},
                                                         {"rgb", acce::SsimMode::rgb_average}};
  metrics->add_option("--ssim", o.ssim, "SSIM channel handling: luma|rgb")
      ->transform(CLI::CheckedTransformer(ssim_modes, CLI::ignore_case));

  try {
    app.parse(argc, argv);
    finish_config(o);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const acce::ContractError& e) {
    std::cerr << "acce: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*enhance) return run_enhance(o);
    if (*batch) return run_batch(o);
    return run_metrics(o);
  } catch (const std::exception& e) {
    std::cerr << "acce: " << e.what() << '\n';
    return 1;
  }
}
