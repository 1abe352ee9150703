#pragma once

// Shared machinery behind select_basis / generate_model. Kept out of the
// public API; the resampler reuses one projector for every channel of a block
// because it only depends on sample geometry.

#include <cstddef>
#include <span>
#include <vector>

#include "fsmr/model.hpp"

namespace fsmr::detail {

/// Sorted distinct coordinate values plus, for every input coordinate, the
/// position of its value in that list.
struct CoordinateAxis {
    std::vector<double> values;
    std::vector<std::size_t> slot;

    static CoordinateAxis from(std::span<const double> coords);
};

/// Correlates per-sample signals against every atom of a dictionary.
///
/// Cosine factors are tabulated per distinct x and per distinct y. When the
/// samples sit on (a subset of) a product grid, as they do after a resize, the
/// correlation is done as two dense matrix products over that grid instead of
/// per sample. The choice depends only on the geometry, so identical inputs
/// always take the same path.
class AtomProjector {
public:
    AtomProjector(std::span<const double> xs, std::span<const double> ys, std::span<const double> weights,
                  const BasisDictionary& dict);

    [[nodiscard]] std::size_t sample_count() const { return weights_.size(); }
    [[nodiscard]] std::span<const double> weights() const { return weights_; }
    [[nodiscard]] bool uses_grid() const { return grid_; }

    /// out[flat(k,l)] = sum_i w_i v_i phi_{k,l}(x_i, y_i)
    void correlate(std::span<const double> values, std::vector<double>& out) const;

    /// sum_i w_i phi_{k,l}(x_i, y_i)^2 for every atom, flat indexed.
    [[nodiscard]] const std::vector<double>& atom_energy() const { return atom_energy_; }

    [[nodiscard]] double atom_at(std::size_t sample, FrequencyIndex index) const {
        return x_table_[x_axis_.slot[sample] * width_ + static_cast<std::size_t>(index.k)] *
               y_table_[y_axis_.slot[sample] * height_ + static_cast<std::size_t>(index.l)];
    }

    [[nodiscard]] double weighted_energy(std::span<const double> residuals) const;

private:
    void accumulate(std::span<const double> scaled, const std::vector<double>& xt, const std::vector<double>& yt,
                    std::vector<double>& out) const;

    std::size_t width_;
    std::size_t height_;
    std::vector<double> weights_;
    CoordinateAxis x_axis_;
    CoordinateAxis y_axis_;
    std::vector<double> x_table_;  // [slot][k]
    std::vector<double> y_table_;  // [slot][l]
    std::vector<double> atom_energy_;
    bool grid_ = false;
};

/// Picks the best atom given correlations and atom energies; nullopt if none is observable.
[[nodiscard]] std::optional<Selection> pick_atom(const BasisDictionary& dict, std::span<const double> correlation,
                                                 std::span<const double> atom_energy,
                                                 std::span<const double> spectral);

/// Runs the greedy loop on prepared geometry.
[[nodiscard]] ModelResult run_greedy(const AtomProjector& projector, const BasisDictionary& dict,
                                     std::span<const double> values, const ModelConfig& config);

/// Evaluates the model on the product grid xs x ys; result is row-major [y][x].
[[nodiscard]] std::vector<double> evaluate_grid(const SparseModel& model, const BasisDictionary& dict,
                                                std::span<const double> xs, std::span<const double> ys);

}  // namespace fsmr::detail
