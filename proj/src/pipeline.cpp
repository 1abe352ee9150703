#include "fsmr/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <ostream>

#include "fsmr/errors.hpp"
#include "fsmr/image_io.hpp"
#include "fsmr/metrics.hpp"

namespace fsmr {

Method parse_method(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "lin") return Method::lin;
    if (lower == "cub") return Method::cub;
    if (lower == "fsr") return Method::fsr;
    if (lower == "fsmr") return Method::fsmr;
    throw InvalidArgument("unknown method '" + std::string(name) + "' (expected lin, cub, fsr or fsmr)");
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::lin: return "lin";
        case Method::cub: return "cub";
        case Method::fsr: return "fsr";
        case Method::fsmr: return "fsmr";
    }
    return "?";
}

PipelineConfig PipelineConfig::for_method(Method method) {
    PipelineConfig c;
    c.set_method(method);
    return c;
}

void PipelineConfig::set_method(Method m) {
    method = m;
    switch (m) {
        case Method::lin: resize_kernel = KernelSpec::bilinear(); break;
        case Method::cub:
        case Method::fsr: resize_kernel = KernelSpec::bicubic(bicubic_a); break;
        case Method::fsmr: resize_kernel.reset(); break;
    }
}

void PipelineConfig::validate() const {
    if (target.width < 2 || target.height < 2) {
        throw InvalidArgument("target size must be at least 2x2");
    }
    if (method == Method::fsmr && resize_kernel) {
        throw InvalidArgument("the joint fsmr path takes no second-stage resize kernel");
    }
    if (method != Method::fsmr && !resize_kernel) {
        throw InvalidArgument("sequential methods need a second-stage resize kernel");
    }
    resampler.validate();
}

namespace {

KernelSpec reconstruction_kernel(const PipelineConfig& config) {
    return config.method == Method::lin ? KernelSpec::bilinear() : KernelSpec::bicubic(config.bicubic_a);
}

}  // namespace

Image run_sequential(const Image& corrupted, const LossMask& mask, const PipelineConfig& config) {
    config.validate();
    if (config.method == Method::fsmr) {
        throw InvalidArgument("fsmr runs on the joint path");
    }
    Image reconstructed = config.method == Method::fsr
                              ? fsr_reconstruct(corrupted, mask, config.resampler).image
                              : interp_reconstruct(corrupted, mask, reconstruction_kernel(config)).image;
    if (reconstructed.size() == config.target) {
        return reconstructed;
    }
    return resize(reconstructed, config.target, *config.resize_kernel, config.resampler.convention);
}

Image run_joint(const Image& corrupted, const LossMask& mask, const PipelineConfig& config) {
    config.validate();
    if (config.method != Method::fsmr) {
        throw InvalidArgument("only fsmr runs on the joint path");
    }
    return fsmr_resample(corrupted, mask, config.target, config.resampler).image;
}

Image run_pipeline(const Image& clean, const LossMask& mask, const PipelineConfig& config) {
    const Image corrupted = apply_mask(clean, mask);
    return config.method == Method::fsmr ? run_joint(corrupted, mask, config)
                                         : run_sequential(corrupted, mask, config);
}

Image run_pipeline(const Image& clean, const PipelineConfig& config) {
    return run_pipeline(clean, make_mask(clean.size(), config.pattern), config);
}

Image reference_image(const Image& clean, const PipelineConfig& config) {
    if (clean.size() == config.target) {
        return clean;
    }
    return resize(clean, config.target, KernelSpec::bicubic(config.bicubic_a), Convention::align_corners);
}

std::vector<QualityReport::Mean> QualityReport::means() const {
    std::vector<Mean> out;
    for (const auto& row : rows) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const Mean& m) { return m.pattern == row.pattern && m.method == row.method; });
        if (it == out.end()) {
            out.push_back({row.pattern, row.method, 0.0, 0.0, 0});
            it = std::prev(out.end());
        }
        it->psnr += row.psnr;
        it->ssim += row.ssim;
        ++it->count;
    }
    for (auto& m : out) {
        m.psnr /= static_cast<double>(m.count);
        m.ssim /= static_cast<double>(m.count);
    }
    return out;
}

std::string format_number(double value, int decimals) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

void write_report_csv(std::ostream& out, const QualityReport& report) {
    out << kReportHeader << '\n';
    for (const auto& row : report.rows) {
        out << row.filename << ',' << to_string(row.pattern) << ',' << to_string(row.method) << ','
            << format_number(row.psnr, 6) << ',' << format_number(row.ssim, 6) << ','
            << (row.ms ? format_number(*row.ms, 3) : std::string("NA")) << '\n';
    }
}

namespace {

bool is_image_file(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

}  // namespace

QualityReport batch_run(const std::filesystem::path& corpus_dir, const PipelineConfig& config,
                        const BatchOptions& options, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(corpus_dir)) {
        throw InvalidArgument("corpus '" + corpus_dir.string() + "' is not a directory");
    }
    if (options.patterns.empty() || options.methods.empty()) {
        throw InvalidArgument("batch needs at least one pattern and one method");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    if (files.empty()) {
        throw InvalidArgument("corpus '" + corpus_dir.string() + "' holds no images");
    }
    fs::create_directories(out_dir);

    QualityReport report;
    for (const auto& file : files) {
        Image clean;
        try {
            clean = read_image(file);
        } catch (const IoError& e) {
            std::cerr << "warning: skipping " << file.filename().string() << ": " << e.what() << '\n';
            ++report.skipped;
            continue;
        }
        PipelineConfig base = config;
        const Image reference = quantize8(reference_image(clean, base));
        for (const PatternKind pattern : options.patterns) {
            base.pattern.kind = pattern;
            const LossMask mask = make_mask(clean.size(), base.pattern);
            for (const Method method : options.methods) {
                PipelineConfig run = base;
                run.set_method(method);
                const auto start = std::chrono::steady_clock::now();
                const Image output = quantize8(run_pipeline(clean, mask, run));
                const auto stop = std::chrono::steady_clock::now();

                QualityRow row;
                row.filename = file.filename().string();
                row.pattern = pattern;
                row.method = method;
                row.psnr = psnr(output, reference);
                row.ssim = ssim(output, reference);
                if (options.record_timing) {
                    row.ms = std::chrono::duration<double, std::milli>(stop - start).count();
                }
                report.rows.push_back(row);
                if (options.write_images) {
                    write_image(out_dir / (file.stem().string() + "__" + std::string(to_string(pattern)) + "__" +
                                           std::string(to_string(method)) + ".png"),
                                output);
                }
            }
        }
    }
    std::ofstream csv(out_dir / "report.csv", std::ios::binary);
    if (!csv) {
        throw IoError("cannot write report.csv in '" + out_dir.string() + "'");
    }
    write_report_csv(csv, report);
    return report;
}

}  // namespace fsmr
