#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "acce/decompose.hpp"
#include "acce/denoise.hpp"
#include "acce/guide.hpp"
#include "acce/solver.hpp"

namespace acce {

enum class InitMode {
  guide,    ///< start the solver from the guide itself
  lowfreq,  ///< start from the HSI of the low-frequency image
};

struct PipelineConfig {
  SolverParams solver{};
  FilterParams filters{};
  ThresholdSpec threshold{};
  double lambda = 2.3;
  SpreadMode spread = SpreadMode::stddev;
  bool denoise_enabled = true;
  InitMode init = InitMode::guide;
  /// Intermediates are written here when set (see enhance_detailed).
  std::optional<std::filesystem::path> dump_dir;
  /// process_file writes "<output>.trace.csv" with the energy per iteration.
  bool trace = false;

  void validate() const;
};

struct EnhanceResult {
  RgbImage image;
  int iterations = 0;
  StopReason stop_reason = StopReason::max_iters;
  std::vector<double> energy_history;
  std::array<double, 3> thresholds{};  ///< per channel, zero when denoising is off
};

/// Bilateral low-frequency image, DoG high-frequency residual, shrinkage of
/// the residual, guide from the low-frequency image, variational solve in
/// HSI, back to RGB and recombination with the residual.
///
/// With cfg.dump_dir set the directory receives low.pfm, high.pfm,
/// high_denoised.pfm, guide.pfm (HSI), enhanced_low.pfm, trace.csv and
/// run.json (configuration, thresholds, iterations).
EnhanceResult enhance_detailed(const RgbImage& img, const PipelineConfig& cfg);
RgbImage enhance(const RgbImage& img, const PipelineConfig& cfg);

/// Loads, enhances and saves one file, plus the trace file when cfg.trace.
EnhanceResult process_file(const std::filesystem::path& input, const std::filesystem::path& output,
                           const PipelineConfig& cfg);

struct FileOutcome {
  std::filesystem::path input;
  std::filesystem::path output;
  bool ok = false;
  std::string error;
  double seconds = 0.0;
  int iterations = 0;
};

struct BatchSummary {
  std::vector<FileOutcome> files;  ///< same order as the inputs

  std::size_t failures() const noexcept;
  /// 0 when every file succeeded, 1 otherwise.
  int exit_code() const noexcept;
  std::string to_json() const;
};

/// Output path used by run_batch: the input file name inside out_dir, with
/// ".png" appended unless the extension is already .png, .ppm or .pnm.
std::filesystem::path batch_output_path(const std::filesystem::path& input,
                                        const std::filesystem::path& out_dir);

/// Enhances every input on `jobs` worker threads. A failing file is recorded
/// in the summary and does not stop the others. With cfg.dump_dir set, each
/// file dumps into a subdirectory named after its output file.
BatchSummary run_batch(const std::vector<std::filesystem::path>& inputs, const PipelineConfig& cfg,
                       const std::filesystem::path& out_dir, int jobs = 1);

}  // namespace acce
