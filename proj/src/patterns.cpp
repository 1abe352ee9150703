#include "fsmr/patterns.hpp"

#include <algorithm>
#include <cctype>

#include "fsmr/errors.hpp"

namespace fsmr {

namespace {

void check_size(Size size) {
    if (size.width < 1 || size.height < 1) {
        throw InvalidArgument("mask dimensions must be positive");
    }
}

bool in_periodic_band(int pos, int width, int stride, int offset) {
    return pos >= offset && (pos - offset) % stride < width;
}

}  // namespace

LossMask::LossMask(Size size, std::vector<std::uint8_t> valid) : size_(size), valid_(std::move(valid)) {
    check_size(size);
    if (valid_.size() != size.area()) {
        throw InvalidArgument("mask plane length does not match its dimensions");
    }
    for (auto& v : valid_) {
        v = v ? 1 : 0;
    }
    lost_ = static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{0}));
    if (lost_ == valid_.size()) {
        throw DegenerateInput("loss mask has no valid pixel");
    }
}

LossMask LossMask::all_valid(Size size) {
    check_size(size);
    return LossMask(size, std::vector<std::uint8_t>(size.area(), 1));
}

double LossMask::loss_fraction() const {
    return static_cast<double>(lost_) / static_cast<double>(valid_.size());
}

LossMask make_block_mask(Size size, int lost_block, int stride, int offset) {
    check_size(size);
    if (lost_block <= 0 || lost_block >= stride) {
        throw InvalidArgument("block pattern needs 0 < block < stride");
    }
    if (offset < 0) {
        throw InvalidArgument("pattern offset must be non-negative");
    }
    std::vector<std::uint8_t> valid(size.area(), 1);
    for (int y = 0; y < size.height; ++y) {
        if (!in_periodic_band(y, lost_block, stride, offset)) {
            continue;
        }
        for (int x = 0; x < size.width; ++x) {
            if (in_periodic_band(x, lost_block, stride, offset)) {
                valid[static_cast<std::size_t>(y) * static_cast<std::size_t>(size.width) +
                      static_cast<std::size_t>(x)] = 0;
            }
        }
    }
    return LossMask(size, std::move(valid));
}

LossMask make_line_mask(Size size, int line_height, int stride, int offset) {
    check_size(size);
    if (line_height <= 0 || line_height >= stride) {
        throw InvalidArgument("line pattern needs 0 < height < stride");
    }
    if (offset < 0) {
        throw InvalidArgument("pattern offset must be non-negative");
    }
    std::vector<std::uint8_t> valid(size.area(), 1);
    const auto w = static_cast<std::size_t>(size.width);
    for (int y = 0; y < size.height; ++y) {
        if (in_periodic_band(y, line_height, stride, offset)) {
            std::fill_n(valid.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(y) * w),
                        static_cast<std::ptrdiff_t>(w), std::uint8_t{0});
        }
    }
    return LossMask(size, std::move(valid));
}

LossMask make_rand_mask(Size size, double p, std::uint64_t seed) {
    check_size(size);
    if (!(p >= 0.0 && p < 1.0)) {
        throw InvalidArgument("random loss probability must lie in [0, 1)");
    }
    SplitMix64 rng(seed);
    std::vector<std::uint8_t> valid(size.area(), 1);
    for (auto& v : valid) {
        v = rng.uniform() < p ? 0 : 1;
    }
    return LossMask(size, std::move(valid));
}

LossMask make_mask(Size size, const PatternSpec& spec) {
    switch (spec.kind) {
        case PatternKind::none:
            return LossMask::all_valid(size);
        case PatternKind::block:
            return make_block_mask(size, spec.block, spec.block_stride, spec.block_offset);
        case PatternKind::line:
            return make_line_mask(size, spec.line_height, spec.line_stride, spec.line_offset);
        case PatternKind::rand:
            return make_rand_mask(size, spec.probability, spec.seed);
    }
    throw InvalidArgument("unknown pattern kind");
}

PatternKind parse_pattern(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "none") return PatternKind::none;
    if (lower == "block") return PatternKind::block;
    if (lower == "line") return PatternKind::line;
    if (lower == "rand") return PatternKind::rand;
    throw InvalidArgument("unknown pattern '" + std::string(name) + "' (expected none, block, line or rand)");
}

std::string_view to_string(PatternKind kind) {
    switch (kind) {
        case PatternKind::none: return "none";
        case PatternKind::block: return "block";
        case PatternKind::line: return "line";
        case PatternKind::rand: return "rand";
    }
    return "?";
}

Image apply_mask(const Image& image, const LossMask& mask) {
    if (image.size() != mask.size()) {
        throw InvalidArgument("mask and image differ in size");
    }
    Image out = image;
    const auto& valid = mask.plane();
    for (int c = 0; c < out.channels(); ++c) {
        auto data = out.channel(c).data();
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (!valid[i]) {
                data[i] = 0.0;
            }
        }
    }
    return out;
}

}  // namespace fsmr
