#include "fsmr/resampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "fsmr/detail/projector.hpp"
#include "fsmr/errors.hpp"
#include "fsmr/parallel.hpp"

namespace fsmr {

MeshMap MeshMap::resize(Size source, Size target, Convention convention) {
    const int min_side = convention == Convention::align_corners ? 2 : 1;
    if (source.width < min_side || source.height < min_side || target.width < min_side ||
        target.height < min_side) {
        throw InvalidArgument("resize mesh needs every dimension >= 2");
    }
    return MeshMap(source, target, Kind::resize, convention, {});
}

MeshMap MeshMap::affine(Size source, Size target, const std::array<double, 6>& matrix) {
    if (source.width < 1 || source.height < 1 || target.width < 1 || target.height < 1) {
        throw InvalidArgument("affine mesh needs positive dimensions");
    }
    const double det = matrix[0] * matrix[4] - matrix[1] * matrix[3];
    if (std::abs(det) < 1e-12) {
        throw InvalidArgument("affine mesh matrix is singular");
    }
    return MeshMap(source, target, Kind::affine, Convention::align_corners, matrix);
}

Point MeshMap::forward(int m, int n) const {
    if (kind_ == Kind::affine) {
        return {matrix_[0] * m + matrix_[1] * n + matrix_[2], matrix_[3] * m + matrix_[4] * n + matrix_[5]};
    }
    return {map_coordinate(m, source_.width, target_.width, convention_),
            map_coordinate(n, source_.height, target_.height, convention_)};
}

BlockLayout::BlockLayout(Size target, int block_size, int border)
    : target_(target), block_size_(block_size), border_(border) {
    if (target.width < 1 || target.height < 1) {
        throw InvalidArgument("layout target must be non-empty");
    }
    if (block_size < 1 || border < 0) {
        throw InvalidArgument("block size must be positive and border non-negative");
    }
    columns_ = (target.width + block_size - 1) / block_size;
    rows_ = (target.height + block_size - 1) / block_size;
    blocks_.reserve(static_cast<std::size_t>(columns_) * static_cast<std::size_t>(rows_));
    for (int by = 0; by < rows_; ++by) {
        for (int bx = 0; bx < columns_; ++bx) {
            Block b;
            b.x0 = bx * block_size;
            b.y0 = by * block_size;
            b.interior = {std::min(block_size, target.width - b.x0), std::min(block_size, target.height - b.y0)};
            b.block_size = block_size;
            b.border = border;
            blocks_.push_back(b);
        }
    }
}

void ResamplerConfig::validate() const {
    model.validate();
    if (block_size < 1) {
        throw InvalidArgument("block size must be positive");
    }
    if (border < 0) {
        throw InvalidArgument("border must be non-negative");
    }
    if (threads < 1) {
        throw InvalidArgument("thread count must be positive");
    }
}

namespace {

struct MeshSample {
    std::size_t source;  // row-major source pixel index
    Point pos;           // target-plane position
};

std::vector<MeshSample> valid_mesh_samples(const LossMask& mask, const MeshMap& mesh) {
    const Size src = mesh.source_size();
    if (mask.size() != src) {
        throw InvalidArgument("mask size differs from the mesh source size");
    }
    std::vector<MeshSample> out;
    out.reserve(src.area() - mask.lost_count());
    for (int n = 0; n < src.height; ++n) {
        for (int m = 0; m < src.width; ++m) {
            if (mask.valid(m, n)) {
                out.push_back({static_cast<std::size_t>(n) * static_cast<std::size_t>(src.width) +
                                   static_cast<std::size_t>(m),
                               mesh.forward(m, n)});
            }
        }
    }
    return out;
}

// Index range of blocks along one axis whose support may contain `pos`.
std::pair<int, int> candidate_range(double pos, int block_size, int border, int count) {
    const int lo = static_cast<int>(std::floor((pos - block_size - border) / block_size));
    const int hi = static_cast<int>(std::floor((pos + border) / block_size)) + 1;
    return {std::max(lo, 0), std::min(hi, count - 1)};
}

std::vector<std::vector<std::size_t>> assign_to_blocks(const std::vector<MeshSample>& samples,
                                                       const BlockLayout& layout) {
    std::vector<std::vector<std::size_t>> members(layout.blocks().size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Point p = samples[i].pos;
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            continue;
        }
        const auto [bx0, bx1] = candidate_range(p.x, layout.block_size(), layout.border(), layout.columns());
        const auto [by0, by1] = candidate_range(p.y, layout.block_size(), layout.border(), layout.rows());
        for (int by = by0; by <= by1; ++by) {
            for (int bx = bx0; bx <= bx1; ++bx) {
                const auto b = static_cast<std::size_t>(by) * static_cast<std::size_t>(layout.columns()) +
                               static_cast<std::size_t>(bx);
                if (layout.blocks()[b].support_contains(p)) {
                    members[b].push_back(i);
                }
            }
        }
    }
    return members;
}

constexpr std::size_t kMinWidenedSamples = 4;

struct Extent {
    double x0 = std::numeric_limits<double>::max();
    double y0 = std::numeric_limits<double>::max();
    double x1 = std::numeric_limits<double>::lowest();
    double y1 = std::numeric_limits<double>::lowest();
};

bool covers(const Block& b, const Extent& e) {
    return b.support_x0() <= e.x0 && b.support_y0() <= e.y0 && b.support_x0() + b.support() > e.x1 &&
           b.support_y0() + b.support() > e.y1;
}

// Grows the support by `step` until it holds enough samples or covers every sample.
std::vector<std::size_t> widen(Block& block, int step, const std::vector<MeshSample>& samples, const Extent& extent) {
    std::vector<std::size_t> members;
    while (members.size() < kMinWidenedSamples && !covers(block, extent)) {
        block = block.widened(step);
        members.clear();
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (block.support_contains(samples[i].pos)) {
                members.push_back(i);
            }
        }
    }
    return members;
}

ResampleResult resample(const Image& image, const LossMask& mask, const MeshMap& mesh, const ResamplerConfig& config) {
    config.validate();
    if (image.size() != mesh.source_size() || mask.size() != mesh.source_size()) {
        throw InvalidArgument("image, mask and mesh source size must agree");
    }
    const Size target = mesh.target_size();
    const BlockLayout layout(target, config.block_size, config.border);
    const auto samples = valid_mesh_samples(mask, mesh);
    const auto members = assign_to_blocks(samples, layout);

    Extent extent;
    for (const auto& s : samples) {
        extent.x0 = std::min(extent.x0, s.pos.x);
        extent.y0 = std::min(extent.y0, s.pos.y);
        extent.x1 = std::max(extent.x1, s.pos.x);
        extent.y1 = std::max(extent.y1, s.pos.y);
    }

    ResampleResult result{Image(target, image.channels()), {}};
    result.stats.blocks = layout.blocks().size();
    result.stats.write_count.assign(target.area(), 0);
    std::atomic<std::size_t> widened{0};
    std::atomic<std::size_t> modelled{0};
    const int step = config.border > 0 ? config.border : config.block_size;

    parallel_for(layout.blocks().size(), config.threads, [&](std::size_t b) {
        Block block = layout.blocks()[b];
        std::vector<std::size_t> local_members = members[b];
        if (local_members.empty()) {
            local_members = widen(block, step, samples, extent);
            if (local_members.empty()) {
                throw DegenerateInput("no valid sample reaches the target plane");
            }
            ++widened;
        }

        const Size interior = block.interior;
        const std::size_t interior_area = interior.area();
        std::vector<std::size_t> copy_from(interior_area, std::numeric_limits<std::size_t>::max());
        std::size_t copied = 0;
        if (config.keep_valid) {
            for (const std::size_t i : local_members) {
                const Point p = samples[i].pos;
                if (p.x != std::floor(p.x) || p.y != std::floor(p.y)) {
                    continue;
                }
                const double ix = p.x - block.x0;
                const double iy = p.y - block.y0;
                if (ix < 0 || iy < 0 || ix >= interior.width || iy >= interior.height) {
                    continue;
                }
                auto& slot = copy_from[static_cast<std::size_t>(iy) * static_cast<std::size_t>(interior.width) +
                                       static_cast<std::size_t>(ix)];
                if (slot == std::numeric_limits<std::size_t>::max()) {
                    slot = samples[i].source;
                    ++copied;
                }
            }
        }

        const bool needs_model = copied < interior_area;
        std::vector<double> grid_xs, grid_ys;
        std::optional<BasisDictionary> dict;
        std::optional<detail::AtomProjector> projector;
        if (needs_model) {
            dict.emplace(block.support(), block.support());
            const auto window = SpatialWindow::centered(*dict, config.model.window_decay);
            std::vector<double> xs, ys, ws;
            xs.reserve(local_members.size());
            ys.reserve(local_members.size());
            ws.reserve(local_members.size());
            for (const std::size_t i : local_members) {
                const double x = samples[i].pos.x - block.support_x0();
                const double y = samples[i].pos.y - block.support_y0();
                xs.push_back(x);
                ys.push_back(y);
                ws.push_back(window.weight(x, y));
            }
            projector.emplace(xs, ys, ws, *dict);
            for (int x = 0; x < interior.width; ++x) grid_xs.push_back(block.x0 + x - block.support_x0());
            for (int y = 0; y < interior.height; ++y) grid_ys.push_back(block.y0 + y - block.support_y0());
            ++modelled;
        }

        std::vector<double> values(local_members.size());
        for (int c = 0; c < image.channels(); ++c) {
            const auto src = image.channel(c).data();
            Plane& dst = result.image.channel(c);
            std::vector<double> modelled_values;
            if (needs_model) {
                for (std::size_t j = 0; j < local_members.size(); ++j) {
                    values[j] = src[samples[local_members[j]].source];
                }
                const auto fit = detail::run_greedy(*projector, *dict, values, config.model);
                modelled_values = detail::evaluate_grid(fit.model, *dict, grid_xs, grid_ys);
            }
            for (int y = 0; y < interior.height; ++y) {
                for (int x = 0; x < interior.width; ++x) {
                    const std::size_t k = static_cast<std::size_t>(y) * static_cast<std::size_t>(interior.width) +
                                          static_cast<std::size_t>(x);
                    dst(block.x0 + x, block.y0 + y) =
                        copy_from[k] != std::numeric_limits<std::size_t>::max() ? src[copy_from[k]]
                                                                                : modelled_values[k];
                }
            }
        }
        for (int y = 0; y < interior.height; ++y) {
            for (int x = 0; x < interior.width; ++x) {
                ++result.stats.write_count[static_cast<std::size_t>(block.y0 + y) *
                                               static_cast<std::size_t>(target.width) +
                                           static_cast<std::size_t>(block.x0 + x)];
            }
        }
    });

    result.stats.widened_blocks = widened;
    result.stats.modelled_blocks = modelled;
    return result;
}

}  // namespace

std::vector<SampleSet> scatter_valid_pixels(const Plane& image, const LossMask& mask, const MeshMap& mesh,
                                            const BlockLayout& layout) {
    if (image.size() != mesh.source_size()) {
        throw InvalidArgument("image size differs from the mesh source size");
    }
    if (layout.target() != mesh.target_size()) {
        throw InvalidArgument("layout does not cover the mesh target plane");
    }
    const auto samples = valid_mesh_samples(mask, mesh);
    const auto members = assign_to_blocks(samples, layout);
    const auto values = image.data();

    std::vector<SampleSet> sets(layout.blocks().size());
    for (std::size_t b = 0; b < sets.size(); ++b) {
        const Block& block = layout.blocks()[b];
        SampleSet& set = sets[b];
        set.block_size = block.block_size;
        set.border = block.border;
        set.points.reserve(members[b].size());
        for (const std::size_t i : members[b]) {
            const auto& s = samples[i];
            set.points.push_back({s.pos.x - block.support_x0(), s.pos.y - block.support_y0(), values[s.source], 1.0});
        }
    }
    return sets;
}

ResampleResult fsmr_resample(const Image& image, const LossMask& mask, Size target, const ResamplerConfig& config) {
    if (target.width < 2 || target.height < 2) {
        throw InvalidArgument("target must be at least 2x2");
    }
    return resample(image, mask, MeshMap::resize(image.size(), target, config.convention), config);
}

ResampleResult fsmr_resample(const Image& image, const LossMask& mask, const MeshMap& mesh,
                             const ResamplerConfig& config) {
    return resample(image, mask, mesh, config);
}

ResampleResult fsr_reconstruct(const Image& image, const LossMask& mask, const ResamplerConfig& config) {
    if (image.size() != mask.size()) {
        throw InvalidArgument("mask and image differ in size");
    }
    // Identity mesh: every sample sits on its own grid point.
    const Size s = image.size();
    const auto mesh = MeshMap::affine(s, s, {1.0, 0.0, 0.0, 0.0, 1.0, 0.0});
    return resample(image, mask, mesh, config);
}

}  // namespace fsmr
