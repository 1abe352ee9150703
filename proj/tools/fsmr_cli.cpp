// fsmr command-line front end.
//
// Exit codes: 0 success, 2 invalid arguments or unreadable files, 3 degenerate input.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fsmr/classical.hpp"
#include "fsmr/errors.hpp"
#include "fsmr/image_io.hpp"
#include "fsmr/metrics.hpp"
#include "fsmr/pipeline.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitDegenerate = 3;

struct Options {
    std::string config_path;
    std::string method = "fsmr";
    std::string pattern = "block";
    std::string target = "224x224";
    std::string convention = "align_corners";
    std::uint64_t seed = 1;
    int threads = 1;
    bool no_keep_valid = false;
    fsmr::PipelineConfig base;
};

fsmr::Size parse_size(const std::string& text) {
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos) {
        throw fsmr::InvalidArgument("size '" + text + "' is not of the form WxH");
    }
    try {
        std::size_t used_w = 0, used_h = 0;
        const int w = std::stoi(text.substr(0, x), &used_w);
        const int h = std::stoi(text.substr(x + 1), &used_h);
        if (used_w != x || used_h != text.size() - x - 1) throw std::invalid_argument("trailing");
        return {w, h};
    } catch (const std::logic_error&) {
        throw fsmr::InvalidArgument("size '" + text + "' is not of the form WxH");
    }
}

fsmr::Convention parse_convention(const std::string& text) {
    if (text == "align_corners") return fsmr::Convention::align_corners;
    if (text == "half_pixel") return fsmr::Convention::half_pixel;
    throw fsmr::InvalidArgument("unknown convention '" + text + "' (expected align_corners or half_pixel)");
}

// Folds the string-typed flags into the pipeline config.
fsmr::PipelineConfig resolve(const Options& o) {
    fsmr::PipelineConfig c = o.base;
    c.pattern.kind = fsmr::parse_pattern(o.pattern);
    c.pattern.seed = o.seed;
    c.target = parse_size(o.target);
    c.resampler.threads = o.threads;
    c.resampler.keep_valid = !o.no_keep_valid;
    c.resampler.convention = parse_convention(o.convention);
    c.set_method(fsmr::parse_method(o.method));
    c.validate();
    return c;
}

void add_shared_options(CLI::App& app, Options& o) {
    auto& c = o.base;
    app.set_config("--config", "", "Key = value config file; command-line flags override it");
    app.add_option("--method", o.method, "lin, cub, fsr or fsmr")->capture_default_str();
    app.add_option("--pattern", o.pattern, "none, block, line or rand")->capture_default_str();
    app.add_option("--seed", o.seed, "Seed for the rand pattern")->capture_default_str();
    app.add_option("--threads", o.threads, "Worker threads for block processing")->capture_default_str();
    app.add_option("--target", o.target, "Output size WxH")->capture_default_str();
    app.add_option("--convention", o.convention, "align_corners or half_pixel")->capture_default_str();

    app.add_option("--block-size", c.resampler.block_size, "Block interior S")->capture_default_str();
    app.add_option("--border", c.resampler.border, "Block border B")->capture_default_str();
    app.add_option("--iterations", c.resampler.model.iterations, "Model iterations")->capture_default_str();
    app.add_option("--window-decay", c.resampler.model.window_decay, "Spatial window decay")->capture_default_str();
    app.add_option("--spectral-decay", c.resampler.model.spectral_decay, "Spectral weight decay")->capture_default_str();
    app.add_option("--compensation", c.resampler.model.compensation, "Orthogonality compensation")->capture_default_str();
    app.add_option("--energy-floor", c.resampler.model.energy_floor, "Relative stopping energy")->capture_default_str();
    app.add_flag("--no-keep-valid", o.no_keep_valid, "Model pixels even where a sample lands on the grid");
    app.add_option("--bicubic-a", c.bicubic_a, "Bicubic sharpness")->capture_default_str();

    app.add_option("--block", c.pattern.block, "Lost square side")->capture_default_str();
    app.add_option("--block-stride", c.pattern.block_stride, "Square period")->capture_default_str();
    app.add_option("--block-offset", c.pattern.block_offset, "First square offset")->capture_default_str();
    app.add_option("--line-height", c.pattern.line_height, "Lost band height")->capture_default_str();
    app.add_option("--line-stride", c.pattern.line_stride, "Band period")->capture_default_str();
    app.add_option("--line-offset", c.pattern.line_offset, "First band offset")->capture_default_str();
    app.add_option("--probability", c.pattern.probability, "Loss probability of the rand pattern")->capture_default_str();
}

std::vector<std::string> read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw fsmr::IoError("cannot open label file '" + path + "'");
    }
    std::vector<std::string> labels;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream tokens(line);
        std::string token, last;
        while (tokens >> token) last = token;
        if (!last.empty()) labels.push_back(last);
    }
    return labels;
}

void print_quality(const fsmr::Image& out, const fsmr::Image& reference) {
    std::cout << "psnr_db " << fsmr::format_number(fsmr::psnr(out, reference), 4) << "\nssim "
              << fsmr::format_number(fsmr::ssim(out, reference), 6) << '\n';
}

template <class T>
std::vector<T> parse_list(const std::vector<std::string>& names, T (*parse)(std::string_view)) {
    std::vector<T> out;
    for (const auto& n : names) out.push_back(parse(n));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint loss reconstruction and resampling of images"};
    app.set_version_flag("--version", FSMR_VERSION);
    app.require_subcommand(1);
    Options opts;
    add_shared_options(app, opts);

    std::string input, output, mask_path, mask_out, second, kernel = "bicubic";
    std::vector<std::string> methods{"lin", "cub", "fsr", "fsmr"}, patterns{"block", "line", "rand"};
    bool no_timing = false, no_images = false;

    auto* corrupt = app.add_subcommand("corrupt", "Apply a loss pattern; writes the corrupted image and its mask");
    corrupt->add_option("input", input, "Clean image")->required();
    corrupt->add_option("output", output, "Corrupted image")->required();
    corrupt->add_option("--mask-out", mask_out, "Where to write the mask (1-bit PNG or PGM)");

    auto* reconstruct = app.add_subcommand("reconstruct", "Fill lost pixels on the source grid (lin, cub or fsr)");
    reconstruct->add_option("input", input, "Clean image, or corrupted image when --mask is given")->required();
    reconstruct->add_option("output", output, "Reconstructed image")->required();
    reconstruct->add_option("--mask", mask_path, "Mask file; otherwise the configured pattern is applied");

    auto* resize_cmd = app.add_subcommand("resize", "Resize to the target size");
    resize_cmd->add_option("input", input)->required();
    resize_cmd->add_option("output", output)->required();
    resize_cmd->add_option("--kernel", kernel, "bilinear or bicubic")->capture_default_str();

    auto* pipeline = app.add_subcommand("pipeline", "Corrupt, reconstruct and resize one image; prints quality");
    pipeline->add_option("input", input, "Clean image, or corrupted image when --mask is given")->required();
    pipeline->add_option("output", output)->required();
    pipeline->add_option("--mask", mask_path, "Mask file; the input is then taken as already corrupted");
    pipeline->add_option("--reference", second, "Reference image for the quality printout");

    auto* batch = app.add_subcommand("batch", "Sweep methods and patterns over a directory; writes report.csv");
    batch->add_option("corpus", input, "Directory of clean images")->required();
    batch->add_option("out", output, "Output directory")->required();
    batch->add_option("--methods", methods, "Methods to sweep")->capture_default_str();
    batch->add_option("--patterns", patterns, "Patterns to sweep")->capture_default_str();
    batch->add_flag("--no-timing", no_timing, "Write NA in the ms column for reproducible reports");
    batch->add_flag("--no-images", no_images, "Only write report.csv");

    auto* metrics = app.add_subcommand("metrics", "PSNR and SSIM between two images");
    metrics->add_option("a", input)->required();
    metrics->add_option("b", second)->required();

    auto* acc = app.add_subcommand("accuracy", "Classification accuracy from two label files");
    acc->add_option("predicted", input)->required();
    acc->add_option("truth", second)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*metrics) {
            print_quality(fsmr::read_image(input), fsmr::read_image(second));
            return 0;
        }
        if (*acc) {
            const auto report = fsmr::accuracy(read_labels(input), read_labels(second));
            std::cout << "correct " << report.correct << "\nincorrect " << report.incorrect << "\nacc "
                      << fsmr::format_number(report.acc(), 6) << '\n';
            return 0;
        }

        fsmr::PipelineConfig config = resolve(opts);

        if (*corrupt) {
            const fsmr::Image clean = fsmr::read_image(input);
            const fsmr::LossMask mask = fsmr::make_mask(clean.size(), config.pattern);
            fsmr::write_image(output, fsmr::apply_mask(clean, mask));
            if (!mask_out.empty()) fsmr::write_mask(mask_out, mask);
            std::cout << "loss_fraction " << fsmr::format_number(mask.loss_fraction(), 6) << '\n';
            return 0;
        }
        if (*resize_cmd) {
            const fsmr::KernelSpec k = kernel == "bilinear" ? fsmr::KernelSpec::bilinear()
                                       : kernel == "bicubic"
                                           ? fsmr::KernelSpec::bicubic(config.bicubic_a)
                                           : throw fsmr::InvalidArgument("unknown kernel '" + kernel + "'");
            fsmr::write_image(output, fsmr::resize(fsmr::read_image(input), config.target, k, config.resampler.convention));
            return 0;
        }
        if (*batch) {
            fsmr::BatchOptions o;
            o.methods = parse_list(methods, &fsmr::parse_method);
            o.patterns = parse_list(patterns, &fsmr::parse_pattern);
            o.record_timing = !no_timing;
            o.write_images = !no_images;
            const auto report = fsmr::batch_run(input, config, o, output);
            std::cout << "pattern,method,mean_psnr_db,mean_ssim,images\n";
            for (const auto& m : report.means()) {
                std::cout << fsmr::to_string(m.pattern) << ',' << fsmr::to_string(m.method) << ','
                          << fsmr::format_number(m.psnr, 4) << ',' << fsmr::format_number(m.ssim, 6) << ','
                          << m.count << '\n';
            }
            if (report.skipped) std::cout << "skipped " << report.skipped << '\n';
            return 0;
        }

        // reconstruct and pipeline take either a clean image or a corrupted one plus its mask.
        fsmr::Image image = fsmr::read_image(input);
        const fsmr::LossMask mask =
            mask_path.empty() ? fsmr::make_mask(image.size(), config.pattern) : fsmr::read_mask(mask_path);
        if (mask.size() != image.size()) {
            throw fsmr::InvalidArgument("mask and image differ in size");
        }
        const fsmr::Image corrupted = fsmr::apply_mask(image, mask);

        if (*reconstruct) {
            fsmr::Image out;
            if (config.method == fsmr::Method::fsr) {
                out = fsmr::fsr_reconstruct(corrupted, mask, config.resampler).image;
            } else if (config.method == fsmr::Method::fsmr) {
                throw fsmr::InvalidArgument("reconstruct runs lin, cub or fsr; use pipeline for fsmr");
            } else {
                const auto r = fsmr::interp_reconstruct(
                    corrupted, mask,
                    config.method == fsmr::Method::lin ? fsmr::KernelSpec::bilinear() : fsmr::KernelSpec::bicubic(config.bicubic_a));
                out = r.image;
                if (r.fallback_pixels) std::cerr << "note: " << r.fallback_pixels << " pixels filled from the nearest valid pixel\n";
            }
            fsmr::write_image(output, out);
            return 0;
        }

        const fsmr::Image out = fsmr::quantize8(config.method == fsmr::Method::fsmr
                                                    ? fsmr::run_joint(corrupted, mask, config)
                                                    : fsmr::run_sequential(corrupted, mask, config));
        fsmr::write_image(output, out);
        if (!second.empty()) {
            print_quality(out, fsmr::read_image(second));
        } else if (mask_path.empty()) {
            print_quality(out, fsmr::quantize8(fsmr::reference_image(image, config)));
        }
        return 0;
    } catch (const fsmr::DegenerateInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const fsmr::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const fsmr::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
