#pragma once

// Geometry around the frequency-selective model: where source pixels land in
// the target plane, how that plane is cut into blocks, and how per-block
// models are stitched back into an image.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "fsmr/geometry.hpp"
#include "fsmr/image.hpp"
#include "fsmr/model.hpp"
#include "fsmr/patterns.hpp"

namespace fsmr {

/// Maps source pixel (m, n) to a real position in the target plane.
class MeshMap {
public:
    enum class Kind { resize, affine };

    /// Resize map; requires every dimension >= 2 under align_corners.
    static MeshMap resize(Size source, Size target, Convention convention = Convention::align_corners);

    /// x = a m + b n + c, y = d m + e n + f for matrix {a, b, c, d, e, f}.
    static MeshMap affine(Size source, Size target, const std::array<double, 6>& matrix);

    [[nodiscard]] Point forward(int m, int n) const;
    [[nodiscard]] Size source_size() const { return source_; }
    [[nodiscard]] Size target_size() const { return target_; }
    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] const std::array<double, 6>& matrix() const { return matrix_; }

private:
    MeshMap(Size source, Size target, Kind kind, Convention convention, const std::array<double, 6>& matrix)
        : source_(source), target_(target), kind_(kind), convention_(convention), matrix_(matrix) {}

    Size source_;
    Size target_;
    Kind kind_;
    Convention convention_;
    std::array<double, 6> matrix_;
};

[[nodiscard]] inline MeshMap build_mesh(Size source, Size target) { return MeshMap::resize(source, target); }

struct Block {
    int x0 = 0;  // interior origin in the target plane
    int y0 = 0;
    Size interior;  // S x S, cut short at the right and bottom edges
    int block_size = 0;
    int border = 0;

    [[nodiscard]] int support() const { return block_size + 2 * border; }
    [[nodiscard]] int support_x0() const { return x0 - border; }
    [[nodiscard]] int support_y0() const { return y0 - border; }
    [[nodiscard]] bool support_contains(Point p) const {
        return p.x >= support_x0() && p.x < support_x0() + support() && p.y >= support_y0() &&
               p.y < support_y0() + support();
    }
    [[nodiscard]] Block widened(int extra) const {
        Block b = *this;
        b.border += extra;
        return b;
    }
};

/// Square S x S interiors tiling the target plane, each with a (S + 2B)^2 support
/// centred on it. Supports may reach past the plane; they simply hold no samples there.
class BlockLayout {
public:
    BlockLayout(Size target, int block_size, int border);

    [[nodiscard]] Size target() const { return target_; }
    [[nodiscard]] int block_size() const { return block_size_; }
    [[nodiscard]] int border() const { return border_; }
    [[nodiscard]] int columns() const { return columns_; }
    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] const std::vector<Block>& blocks() const { return blocks_; }

private:
    Size target_;
    int block_size_;
    int border_;
    int columns_;
    int rows_;
    std::vector<Block> blocks_;
};

/// Per-block sample sets for one channel. Sample coordinates are local to the
/// block support, in source row-major order.
[[nodiscard]] std::vector<SampleSet> scatter_valid_pixels(const Plane& image, const LossMask& mask,
                                                          const MeshMap& mesh, const BlockLayout& layout);

struct ResamplerConfig {
    ModelConfig model;
    int block_size = 4;
    int border = 8;
    /// Samples landing exactly on a target pixel are copied instead of modelled.
    bool keep_valid = true;
    int threads = 1;
    Convention convention = Convention::align_corners;

    void validate() const;
};

struct ResampleStats {
    std::size_t blocks = 0;
    std::size_t modelled_blocks = 0;
    /// Blocks whose support held no sample and had to be widened.
    std::size_t widened_blocks = 0;
    /// How often each target pixel was written; all ones for a correct tiling.
    std::vector<std::uint16_t> write_count;
};

struct ResampleResult {
    Image image;
    ResampleStats stats;
};

/// Joint reconstruction and resampling of the valid pixels onto the target grid.
[[nodiscard]] ResampleResult fsmr_resample(const Image& image, const LossMask& mask, Size target,
                                           const ResamplerConfig& config);

/// Same for an arbitrary mesh (e.g. affine).
[[nodiscard]] ResampleResult fsmr_resample(const Image& image, const LossMask& mask, const MeshMap& mesh,
                                           const ResamplerConfig& config);

/// Grid-to-grid special case: fills lost pixels, source size in and out.
[[nodiscard]] ResampleResult fsr_reconstruct(const Image& image, const LossMask& mask,
                                             const ResamplerConfig& config);

}  // namespace fsmr
