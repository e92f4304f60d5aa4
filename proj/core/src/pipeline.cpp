#include "acce/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <chrono>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "acce/color.hpp"
#include "acce/io.hpp"

namespace fs = std::filesystem;

namespace acce {

void PipelineConfig::validate() const {
  solver.validate();
  filters.validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ContractError("lambda must be > 0");
  if (threshold.mode == ThresholdSpec::Mode::fixed && !(threshold.value >= 0.0)) {
    throw ContractError("fixed threshold must be >= 0");
  }
}

namespace {

const char* kernel_name(KernelKind k) {
  return k == KernelKind::gaussian ? "gaussian" : "inverse";
}

nlohmann::ordered_json config_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  const auto& s = cfg.solver;
  j["alpha"] = s.alpha;
  j["beta"] = s.beta;
  j["sigma"] = s.sigma;
  j["dt"] = s.dt;
  j["tau"] = s.tau;
  j["max_iters"] = s.max_iters;
  j["kernel"] = kernel_name(s.kernel.kind);
  j["kernel_sigma"] = s.kernel.spatial_sigma;
  j["window_radius"] = s.kernel.window_radius;
  j["exact"] = s.exact_mode;
  j["normalize_weights"] = s.normalize_weights;
  const auto& f = cfg.filters;
  j["bilateral_spatial"] = f.bilateral_spatial_sigma;
  j["bilateral_range"] = f.bilateral_range_sigma;
  j["bilateral_radius"] = f.bilateral_radius;
  j["dog_sigma1"] = f.dog_sigma1;
  j["dog_sigma2"] = f.dog_sigma2;
  j["gain"] = f.gain;
  if (cfg.threshold.mode == ThresholdSpec::Mode::fixed) {
    j["threshold"] = cfg.threshold.value;
  } else {
    j["threshold"] = "auto";
  }
  j["lambda"] = cfg.lambda;
  j["spread"] = cfg.spread == SpreadMode::stddev ? "stddev" : "variance";
  j["denoise"] = cfg.denoise_enabled;
  j["init"] = cfg.init == InitMode::guide ? "guide" : "lowfreq";
  return j;
}

template <class Image>
void dump_image(const fs::path& path, const Image& img) {
  write_pfm(path, {&img[0], &img[1], &img[2]});
}

void write_trace_file(const fs::path& path, const std::vector<double>& history) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_trace_csv(out, history);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

EnhanceResult enhance_detailed(const RgbImage& img, const PipelineConfig& cfg) {
  cfg.validate();
  const RgbImage low = bilateral_filter(img, cfg.filters);
  const RgbResidual high = dog_filter(img, cfg.filters);

  EnhanceResult result;
  RgbResidual high_used;
  if (cfg.denoise_enabled) {
    high_used = denoise(high, cfg.threshold, &result.thresholds);
  } else {
    high_used = high;
  }

  const GuideImage guide = build_guide(low, cfg.lambda, cfg.spread);
  const HsiImage init = cfg.init == InitMode::guide ? guide : rgb_to_hsi(low);
  SolveResult solved = solve(guide, init, cfg.solver);
  const RgbImage enhanced_low = hsi_to_rgb(solved.image);

  result.image = recombine(enhanced_low, high_used, cfg.filters.gain);
  result.iterations = solved.iterations;
  result.stop_reason = solved.reason;
  result.energy_history = std::move(solved.energy_history);

  if (cfg.dump_dir) {
    const fs::path& dir = *cfg.dump_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    dump_image(dir / "low.pfm", low);
    dump_image(dir / "high.pfm", high);
    dump_image(dir / "high_denoised.pfm", high_used);
    dump_image(dir / "guide.pfm", guide);
    dump_image(dir / "enhanced_low.pfm", enhanced_low);
    write_trace_file(dir / "trace.csv", result.energy_history);

    nlohmann::ordered_json run;
    run["width"] = img.width();
    run["height"] = img.height();
    run["config"] = config_json(cfg);
    run["thresholds"] = result.thresholds;
    run["iterations"] = result.iterations;
    run["stop_reason"] = to_string(result.stop_reason);
    std::ofstream out(dir / "run.json");
    if (!out) throw IoError("cannot write " + (dir / "run.json").string());
    out << run.dump(2) << '\n';
  }
  return result;
}

RgbImage enhance(const RgbImage& img, const PipelineConfig& cfg) {
  return enhance_detailed(img, cfg).image;
}

EnhanceResult process_file(const fs::path& input, const fs::path& output,
                           const PipelineConfig& cfg) {
  const RgbImage img = load_image(input);
  EnhanceResult r = enhance_detailed(img, cfg);
  save_image(r.image, output);
  if (cfg.trace) {
    fs::path trace = output;
    trace += ".trace.csv";
    write_trace_file(trace, r.energy_history);
  }
  return r;
}

std::size_t BatchSummary::failures() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(files.begin(), files.end(), [](const FileOutcome& f) { return !f.ok; }));
}

int BatchSummary::exit_code() const noexcept { return failures() == 0 ? 0 : 1; }

std::string BatchSummary::to_json() const {
  nlohmann::ordered_json j;
  j["processed"] = files.size();
  j["failed"] = failures();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    nlohmann::ordered_json e;
    e["input"] = f.input.string();
    e["output"] = f.output.string();
    e["status"] = f.ok ? "ok" : "failed";
    if (!f.ok) e["error"] = f.error;
    e["seconds"] = f.seconds;
    e["iterations"] = f.iterations;
    arr.push_back(std::move(e));
  }
  j["files"] = std::move(arr);
  return j.dump(2);
}

fs::path batch_output_path(const fs::path& input, const fs::path& out_dir) {
  fs::path name = input.filename();
  std::string ext = name.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext != ".png" && ext != ".ppm" && ext != ".pnm") name += ".png";
  return out_dir / name;
}

BatchSummary run_batch(const std::vector<fs::path>& inputs, const PipelineConfig& cfg,
                       const fs::path& out_dir, int jobs) {
  cfg.validate();
  BatchSummary summary;
  summary.files.resize(inputs.size());
  if (inputs.empty()) return summary;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < inputs.size(); k = next++) {
      FileOutcome& o = summary.files[k];
      o.input = inputs[k];
      o.output = batch_output_path(inputs[k], out_dir);
      PipelineConfig local = cfg;
      if (cfg.dump_dir) local.dump_dir = *cfg.dump_dir / o.output.filename();
      const auto t0 = std::chrono::steady_clock::now();
      try {
        o.iterations = process_file(o.input, o.output, local).iterations;
        o.ok = true;
      } catch (const std::exception& e) {
        o.error = e.what();
      }
      o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  const auto n = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(n, inputs.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return summary;
}

}  // namespace acce
