#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fsmr/image.hpp"

namespace fsmr {

/// Per-pixel validity plane of a transmission-loss pattern. Always holds at
/// least one valid pixel.
class LossMask {
public:
    /// `valid` is row-major, nonzero = received.
    LossMask(Size size, std::vector<std::uint8_t> valid);

    /// Every pixel valid.
    static LossMask all_valid(Size size);

    [[nodiscard]] Size size() const { return size_; }
    [[nodiscard]] bool valid(int x, int y) const {
        return valid_[static_cast<std::size_t>(y) * static_cast<std::size_t>(size_.width) +
                      static_cast<std::size_t>(x)] != 0;
    }
    [[nodiscard]] const std::vector<std::uint8_t>& plane() const { return valid_; }
    [[nodiscard]] std::size_t lost_count() const { return lost_; }
    /// Lost pixels over all pixels, counted from the plane.
    [[nodiscard]] double loss_fraction() const;

    friend bool operator==(const LossMask&, const LossMask&) = default;

private:
    Size size_;
    std::vector<std::uint8_t> valid_;
    std::size_t lost_ = 0;
};

/// SplitMix64 (Steele, Lea, Flood 2014). The mask generator depends on its
/// exact output sequence:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// b x b lost squares every `stride` pixels in both axes, first one at (offset, offset).
[[nodiscard]] LossMask make_block_mask(Size size, int lost_block, int stride, int offset);

/// Full-width lost bands `line_height` rows tall every `stride` rows, first one at row `offset`.
[[nodiscard]] LossMask make_line_mask(Size size, int line_height, int stride, int offset);

/// Each pixel lost independently with probability p; one SplitMix64 draw per pixel in row-major order.
[[nodiscard]] LossMask make_rand_mask(Size size, double p, std::uint64_t seed);

enum class PatternKind { none, block, line, rand };

struct PatternSpec {
    PatternKind kind = PatternKind::block;
    int block = 16;
    int block_stride = 32;
    int block_offset = 8;
    int line_height = 4;
    int line_stride = 16;
    int line_offset = 6;
    double probability = 0.25;
    std::uint64_t seed = 1;
};

[[nodiscard]] LossMask make_mask(Size size, const PatternSpec& spec);

[[nodiscard]] PatternKind parse_pattern(std::string_view name);
[[nodiscard]] std::string_view to_string(PatternKind kind);

/// Copy of `image` with lost pixels set to 0.
[[nodiscard]] Image apply_mask(const Image& image, const LossMask& mask);

}  // namespace fsmr
