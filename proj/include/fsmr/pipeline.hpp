#pragma once

// Test-time preprocessing pipelines: corrupt an image with a loss pattern,
// then either reconstruct and resize in two steps (lin, cub, fsr) or do both
// in one joint resampling step (fsmr).

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsmr/classical.hpp"
#include "fsmr/image.hpp"
#include "fsmr/patterns.hpp"
#include "fsmr/resampler.hpp"

namespace fsmr {

enum class Method { lin, cub, fsr, fsmr };

[[nodiscard]] Method parse_method(std::string_view name);
[[nodiscard]] std::string_view to_string(Method method);

struct PipelineConfig {
    PatternSpec pattern;
    Method method = Method::fsmr;
    Size target{224, 224};
    ResamplerConfig resampler;
    double bicubic_a = -0.5;
    /// Second-stage resize kernel of the sequential path; must be empty for fsmr.
    std::optional<KernelSpec> resize_kernel;

    /// Config for `method` with its canonical resize kernel: bilinear for lin,
    /// bicubic for cub and fsr, none for fsmr.
    static PipelineConfig for_method(Method method);
    /// Switches method and resets the resize kernel to that method's default.
    void set_method(Method m);
    void validate() const;
};

/// Reconstruct on the source grid, then resize. `corrupted` already has the loss applied.
[[nodiscard]] Image run_sequential(const Image& corrupted, const LossMask& mask, const PipelineConfig& config);
/// Joint reconstruction and resizing with FSMR.
[[nodiscard]] Image run_joint(const Image& corrupted, const LossMask& mask, const PipelineConfig& config);

/// Applies the configured pattern to a clean image and runs the configured pipeline.
[[nodiscard]] Image run_pipeline(const Image& clean, const PipelineConfig& config);
/// Same with an explicit mask.
[[nodiscard]] Image run_pipeline(const Image& clean, const LossMask& mask, const PipelineConfig& config);

/// Shared ground truth: the clean image resized with bicubic align-corners.
[[nodiscard]] Image reference_image(const Image& clean, const PipelineConfig& config);

struct QualityRow {
    std::string filename;
    PatternKind pattern = PatternKind::none;
    Method method = Method::fsmr;
    double psnr = 0.0;
    double ssim = 0.0;
    std::optional<double> ms;
};

struct QualityReport {
    std::vector<QualityRow> rows;
    std::size_t skipped = 0;

    struct Mean {
        PatternKind pattern;
        Method method;
        double psnr;
        double ssim;
        std::size_t count;
    };
    /// Per (pattern, method) means in first-appearance order.
    [[nodiscard]] std::vector<Mean> means() const;
};

struct BatchOptions {
    std::vector<PatternKind> patterns{PatternKind::block};
    std::vector<Method> methods{Method::fsmr};
    /// When false the ms column is written as NA so reports are reproducible byte for byte.
    bool record_timing = true;
    bool write_images = true;
};

/// Runs every pattern x method over the images in `corpus_dir` (sorted by filename),
/// writes outputs and `report.csv` into `out_dir`.
[[nodiscard]] QualityReport batch_run(const std::filesystem::path& corpus_dir, const PipelineConfig& config,
                                      const BatchOptions& options, const std::filesystem::path& out_dir);

inline constexpr std::string_view kReportHeader = "filename,pattern,method,psnr_db,ssim,ms";

/// Locale-independent number formatting; infinities print as "inf".
[[nodiscard]] std::string format_number(double value, int decimals);

void write_report_csv(std::ostream& out, const QualityReport& report);

}  // namespace fsmr
