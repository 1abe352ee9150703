#pragma once

// Frequency-selective approximation engine.
//
// A block is modelled as a sparse superposition of separable cosine atoms that
// can be evaluated at arbitrary real coordinates. The model is grown greedily:
// each iteration picks the atom whose weighted least-squares fit removes the
// most (spectrally weighted) residual energy, adds a damped copy of it to the
// model and subtracts it from the residual.
//
// Coordinates are local to the model support: a support of M x N pixels spans
// [0, M) x [0, N), and the block interior is centred in it.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fsmr/image.hpp"

namespace fsmr {

/// Horizontal (k) and vertical (l) frequency index of an atom.
struct FrequencyIndex {
    int k = 0;
    int l = 0;

    friend auto operator<=>(const FrequencyIndex&, const FrequencyIndex&) = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct SamplePoint {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
    /// Multiplier on the spatial window; 1 for original (non-synthesized) samples.
    double support_weight = 1.0;
};

/// Known samples of one block. Point order is part of the contract: every sum
/// runs in this order, so callers must fill it deterministically.
struct SampleSet {
    std::vector<SamplePoint> points;
    int block_size = 0;
    int border = 0;

    [[nodiscard]] int support() const { return block_size + 2 * border; }
    [[nodiscard]] bool empty() const { return points.empty(); }
};

/// Orthonormal separable DCT-II atoms over an M x N support.
///
///   phi_{k,l}(x, y) = a_k cos(pi (2x + 1) k / 2M) * a_l cos(pi (2y + 1) l / 2N)
///
/// with a_0 = sqrt(1/M), a_k = sqrt(2/M). Real x, y are substituted directly,
/// which is what allows evaluation on mesh positions.
class BasisDictionary {
public:
    BasisDictionary(int width, int height);

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] Size size() const { return {width_, height_}; }
    [[nodiscard]] std::size_t atom_count() const {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    [[nodiscard]] double horizontal(int k, double x) const;
    [[nodiscard]] double vertical(int l, double y) const;
    [[nodiscard]] double evaluate(FrequencyIndex index, double x, double y) const;

    /// Flat atom numbering used by the dense score tables: k * height + l.
    [[nodiscard]] std::size_t flat(FrequencyIndex index) const {
        return static_cast<std::size_t>(index.k) * static_cast<std::size_t>(height_) +
               static_cast<std::size_t>(index.l);
    }
    [[nodiscard]] FrequencyIndex unflat(std::size_t i) const {
        return {static_cast<int>(i / static_cast<std::size_t>(height_)),
                static_cast<int>(i % static_cast<std::size_t>(height_))};
    }

    /// All atoms in selection tie-break order: ascending k + l, then ascending k.
    [[nodiscard]] const std::vector<FrequencyIndex>& tie_order() const { return tie_order_; }

private:
    int width_;
    int height_;
    double norm_x0_, norm_x_, norm_y0_, norm_y_;
    std::vector<FrequencyIndex> tie_order_;
};

[[nodiscard]] BasisDictionary build_dictionary(Size size);

/// Isotropic window decay^distance around a centre. decay = 1 gives a uniform window.
class SpatialWindow {
public:
    SpatialWindow(Point center, double decay);

    /// Window centred in the support of `dict`.
    static SpatialWindow centered(const BasisDictionary& dict, double decay);

    [[nodiscard]] Point center() const { return center_; }
    [[nodiscard]] double decay() const { return decay_; }
    [[nodiscard]] double weight(double x, double y) const;

private:
    Point center_;
    double decay_;
};

/// Radial low-frequency prior decay^sqrt(k^2 + l^2); weight(0,0) = 1.
class SpectralWeight {
public:
    SpectralWeight(Size size, double decay);

    [[nodiscard]] double decay() const { return decay_; }
    [[nodiscard]] double weight(FrequencyIndex index) const;
    [[nodiscard]] std::span<const double> table() const { return table_; }

private:
    Size size_;
    double decay_;
    std::vector<double> table_;  // flat k * height + l
};

/// Accumulated expansion coefficients; zero coefficients are never stored.
class SparseModel {
public:
    SparseModel() = default;
    explicit SparseModel(Size dictionary_size) : dictionary_size_(dictionary_size) {}

    void add(FrequencyIndex index, double coefficient);
    [[nodiscard]] double coefficient(FrequencyIndex index) const;
    [[nodiscard]] const std::map<FrequencyIndex, double>& coefficients() const { return coefficients_; }
    [[nodiscard]] Size dictionary_size() const { return dictionary_size_; }
    [[nodiscard]] bool empty() const { return coefficients_.empty(); }

    friend bool operator==(const SparseModel&, const SparseModel&) = default;

private:
    std::map<FrequencyIndex, double> coefficients_;
    Size dictionary_size_{};
};

struct IterationState {
    int iteration = 0;
    std::vector<double> residuals;  // aligned with SampleSet::points
    double weighted_energy = 0.0;

    /// Residuals equal to the sample values, nu = 0.
    static IterationState initial(const SampleSet& samples, const SpatialWindow& window);
};

/// Sum_i window(x_i, y_i) * support_weight_i * residual_i^2, computed from scratch.
[[nodiscard]] double weighted_energy(const SampleSet& samples, std::span<const double> residuals,
                                     const SpatialWindow& window);

struct CoefficientEstimate {
    double coefficient = 0.0;
    double energy_reduction = 0.0;
};

/// Weighted one-atom least-squares fit of `index` to the residual. Returns {0, 0}
/// when the atom is unobservable (sum of w phi^2 below 1e-12).
[[nodiscard]] CoefficientEstimate estimate_coefficient(const SampleSet& samples,
                                                       std::span<const double> residuals,
                                                       const SpatialWindow& window,
                                                       const BasisDictionary& dict, FrequencyIndex index);

struct Selection {
    FrequencyIndex index;
    double coefficient = 0.0;
    double score = 0.0;  // energy reduction times spectral weight
};

/// Best atom for the current residual, or nullopt when no atom is observable.
[[nodiscard]] std::optional<Selection> select_basis(const SampleSet& samples, const IterationState& state,
                                                    const SpatialWindow& window, const BasisDictionary& dict,
                                                    const SpectralWeight& spectral);

struct ModelConfig {
    int iterations = 100;
    double window_decay = 0.6;
    double spectral_decay = 0.85;
    /// Orthogonality-deficiency compensation applied to each accumulated coefficient.
    double compensation = 0.5;
    /// Stop once the weighted energy falls below this fraction of the initial energy.
    double energy_floor = 1e-8;

    void validate() const;
};

struct ModelResult {
    SparseModel model;
    IterationState state;
    /// Weighted energy before the first and after every executed iteration.
    std::vector<double> energy_trace;
    /// Set when the sample set was empty; the model is then all-zero.
    bool unsupported = false;
};

/// Greedy model generation over a square support of samples.support() pixels.
[[nodiscard]] ModelResult generate_model(const SampleSet& samples, const ModelConfig& config);

/// Same, with an explicit (possibly non-square) dictionary.
[[nodiscard]] ModelResult generate_model(const SampleSet& samples, const BasisDictionary& dict,
                                         const ModelConfig& config);

[[nodiscard]] std::vector<double> evaluate_model(const SparseModel& model, const BasisDictionary& dict,
                                                 std::span<const Point> targets);

}  // namespace fsmr
