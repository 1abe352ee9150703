#include "fsmr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fsmr/detail/projector.hpp"
#include "fsmr/errors.hpp"

namespace fsmr {

namespace {

constexpr double kUnobservable = 1e-12;

std::vector<double> sample_weights(const SampleSet& samples, const SpatialWindow& window) {
    std::vector<double> w;
    w.reserve(samples.points.size());
    for (const auto& p : samples.points) {
        w.push_back(window.weight(p.x, p.y) * p.support_weight);
    }
    return w;
}

detail::AtomProjector make_projector(const SampleSet& samples, const SpatialWindow& window,
                                     const BasisDictionary& dict) {
    std::vector<double> xs, ys;
    xs.reserve(samples.points.size());
    ys.reserve(samples.points.size());
    for (const auto& p : samples.points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    const auto w = sample_weights(samples, window);
    return detail::AtomProjector(xs, ys, w, dict);
}

std::vector<double> sample_values(const SampleSet& samples) {
    std::vector<double> v;
    v.reserve(samples.points.size());
    for (const auto& p : samples.points) {
        v.push_back(p.value);
    }
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dictionary, windows

BasisDictionary::BasisDictionary(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("dictionary dimensions must be positive");
    }
    norm_x0_ = std::sqrt(1.0 / width);
    norm_x_ = std::sqrt(2.0 / width);
    norm_y0_ = std::sqrt(1.0 / height);
    norm_y_ = std::sqrt(2.0 / height);

    tie_order_.reserve(atom_count());
    for (int k = 0; k < width; ++k) {
        for (int l = 0; l < height; ++l) {
            tie_order_.push_back({k, l});
        }
    }
    std::stable_sort(tie_order_.begin(), tie_order_.end(), [](FrequencyIndex a, FrequencyIndex b) {
        if (a.k + a.l != b.k + b.l) {
            return a.k + a.l < b.k + b.l;
        }
        return a.k < b.k;
    });
}

double BasisDictionary::horizontal(int k, double x) const {
    if (k == 0) {
        return norm_x0_;
    }
    return norm_x_ * std::cos(std::numbers::pi * (2.0 * x + 1.0) * k / (2.0 * width_));
}

double BasisDictionary::vertical(int l, double y) const {
    if (l == 0) {
        return norm_y0_;
    }
    return norm_y_ * std::cos(std::numbers::pi * (2.0 * y + 1.0) * l / (2.0 * height_));
}

double BasisDictionary::evaluate(FrequencyIndex index, double x, double y) const {
    return horizontal(index.k, x) * vertical(index.l, y);
}

BasisDictionary build_dictionary(Size size) { return BasisDictionary(size.width, size.height); }

SpatialWindow::SpatialWindow(Point center, double decay) : center_(center), decay_(decay) {
    if (!(decay > 0.0 && decay <= 1.0)) {
        throw InvalidArgument("window decay must lie in (0, 1]");
    }
}

SpatialWindow SpatialWindow::centered(const BasisDictionary& dict, double decay) {
    return SpatialWindow({(dict.width() - 1) / 2.0, (dict.height() - 1) / 2.0}, decay);
}

double SpatialWindow::weight(double x, double y) const {
    return std::pow(decay_, std::hypot(x - center_.x, y - center_.y));
}

SpectralWeight::SpectralWeight(Size size, double decay) : size_(size), decay_(decay) {
    if (size.width < 1 || size.height < 1) {
        throw InvalidArgument("spectral weight dimensions must be positive");
    }
    if (!(decay > 0.0 && decay <= 1.0)) {
        throw InvalidArgument("spectral decay must lie in (0, 1]");
    }
    table_.resize(size.area());
    for (int k = 0; k < size.width; ++k) {
        for (int l = 0; l < size.height; ++l) {
            table_[static_cast<std::size_t>(k) * static_cast<std::size_t>(size.height) +
                   static_cast<std::size_t>(l)] = std::pow(decay, std::hypot(k, l));
        }
    }
}

double SpectralWeight::weight(FrequencyIndex index) const {
    return table_.at(static_cast<std::size_t>(index.k) * static_cast<std::size_t>(size_.height) +
                     static_cast<std::size_t>(index.l));
}

// ---------------------------------------------------------------------------
// Model bookkeeping

void SparseModel::add(FrequencyIndex index, double coefficient) {
    if (coefficient == 0.0) {
        return;
    }
    auto [it, inserted] = coefficients_.try_emplace(index, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0.0) {
            coefficients_.erase(it);
        }
    }
}

double SparseModel::coefficient(FrequencyIndex index) const {
    auto it = coefficients_.find(index);
    return it == coefficients_.end() ? 0.0 : it->second;
}

IterationState IterationState::initial(const SampleSet& samples, const SpatialWindow& window) {
    IterationState s;
    s.residuals = sample_values(samples);
    s.weighted_energy = fsmr::weighted_energy(samples, s.residuals, window);
    return s;
}

double weighted_energy(const SampleSet& samples, std::span<const double> residuals, const SpatialWindow& window) {
    if (residuals.size() != samples.points.size()) {
        throw InvalidArgument("residuals are not aligned with the sample set");
    }
    double e = 0.0;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        const auto& p = samples.points[i];
        e += window.weight(p.x, p.y) * p.support_weight * residuals[i] * residuals[i];
    }
    return e;
}

void ModelConfig::validate() const {
    if (iterations < 0) {
        throw InvalidArgument("iteration count must be non-negative");
    }
    if (!(window_decay > 0.0 && window_decay <= 1.0)) {
        throw InvalidArgument("window decay must lie in (0, 1]");
    }
    if (!(spectral_decay > 0.0 && spectral_decay <= 1.0)) {
        throw InvalidArgument("spectral decay must lie in (0, 1]");
    }
    if (!(compensation > 0.0 && compensation <= 1.0)) {
        throw InvalidArgument("compensation factor must lie in (0, 1]");
    }
    if (!(energy_floor >= 0.0)) {
        throw InvalidArgument("energy floor must be non-negative");
    }
}

// ---------------------------------------------------------------------------
// Estimation and selection

CoefficientEstimate estimate_coefficient(const SampleSet& samples, std::span<const double> residuals,
                                         const SpatialWindow& window, const BasisDictionary& dict,
                                         FrequencyIndex index) {
    if (residuals.size() != samples.points.size()) {
        throw InvalidArgument("residuals are not aligned with the sample set");
    }
    if (index.k < 0 || index.k >= dict.width() || index.l < 0 || index.l >= dict.height()) {
        throw InvalidArgument("atom index outside the dictionary");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        const auto& p = samples.points[i];
        const double w = window.weight(p.x, p.y) * p.support_weight;
        const double phi = dict.evaluate(index, p.x, p.y);
        num += w * residuals[i] * phi;
        den += w * phi * phi;
    }
    if (den < kUnobservable) {
        return {};
    }
    const double c = num / den;
    return {c, c * c * den};
}

std::optional<Selection> select_basis(const SampleSet& samples, const IterationState& state,
                                      const SpatialWindow& window, const BasisDictionary& dict,
                                      const SpectralWeight& spectral) {
    if (state.residuals.size() != samples.points.size()) {
        throw InvalidArgument("residuals are not aligned with the sample set");
    }
    if (spectral.table().size() != dict.atom_count()) {
        throw InvalidArgument("spectral weight does not match the dictionary");
    }
    if (samples.empty()) {
        return std::nullopt;
    }
    const auto projector = make_projector(samples, window, dict);
    std::vector<double> correlation;
    projector.correlate(state.residuals, correlation);
    return detail::pick_atom(dict, correlation, projector.atom_energy(), spectral.table());
}

ModelResult generate_model(const SampleSet& samples, const ModelConfig& config) {
    if (samples.block_size < 1 || samples.border < 0) {
        throw InvalidArgument("sample set needs a positive block size and non-negative border");
    }
    return generate_model(samples, BasisDictionary(samples.support(), samples.support()), config);
}

ModelResult generate_model(const SampleSet& samples, const BasisDictionary& dict, const ModelConfig& config) {
    config.validate();
    if (samples.empty()) {
        ModelResult r;
        r.model = SparseModel(dict.size());
        r.energy_trace.push_back(0.0);
        r.unsupported = true;
        return r;
    }
    const auto window = SpatialWindow::centered(dict, config.window_decay);
    const auto projector = make_projector(samples, window, dict);
    return detail::run_greedy(projector, dict, sample_values(samples), config);
}

std::vector<double> evaluate_model(const SparseModel& model, const BasisDictionary& dict,
                                   std::span<const Point> targets) {
    std::vector<double> out(targets.size(), 0.0);
    for (const auto& [index, c] : model.coefficients()) {
        for (std::size_t j = 0; j < targets.size(); ++j) {
            out[j] += c * dict.evaluate(index, targets[j].x, targets[j].y);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// detail

namespace detail {

CoordinateAxis CoordinateAxis::from(std::span<const double> coords) {
    CoordinateAxis axis;
    axis.values.assign(coords.begin(), coords.end());
    std::sort(axis.values.begin(), axis.values.end());
    axis.values.erase(std::unique(axis.values.begin(), axis.values.end()), axis.values.end());
    axis.slot.reserve(coords.size());
    for (double c : coords) {
        axis.slot.push_back(static_cast<std::size_t>(
            std::lower_bound(axis.values.begin(), axis.values.end(), c) - axis.values.begin()));
    }
    return axis;
}

AtomProjector::AtomProjector(std::span<const double> xs, std::span<const double> ys,
                             std::span<const double> weights, const BasisDictionary& dict)
    : width_(static_cast<std::size_t>(dict.width())),
      height_(static_cast<std::size_t>(dict.height())),
      weights_(weights.begin(), weights.end()),
      x_axis_(CoordinateAxis::from(xs)),
      y_axis_(CoordinateAxis::from(ys)) {
    if (xs.size() != ys.size() || xs.size() != weights.size()) {
        throw InvalidArgument("sample coordinate and weight lists differ in length");
    }
    x_table_.resize(x_axis_.values.size() * width_);
    for (std::size_t s = 0; s < x_axis_.values.size(); ++s) {
        for (std::size_t k = 0; k < width_; ++k) {
            x_table_[s * width_ + k] = dict.horizontal(static_cast<int>(k), x_axis_.values[s]);
        }
    }
    y_table_.resize(y_axis_.values.size() * height_);
    for (std::size_t s = 0; s < y_axis_.values.size(); ++s) {
        for (std::size_t l = 0; l < height_; ++l) {
            y_table_[s * height_ + l] = dict.vertical(static_cast<int>(l), y_axis_.values[s]);
        }
    }

    const double n = static_cast<double>(weights_.size());
    const double ux = static_cast<double>(x_axis_.values.size());
    const double uy = static_cast<double>(y_axis_.values.size());
    const double direct_cost = n * static_cast<double>(width_ * height_);
    const double grid_cost = ux * uy * static_cast<double>(height_) + ux * static_cast<double>(width_ * height_);
    grid_ = grid_cost < direct_cost;

    auto squared = [](std::vector<double> t) {
        for (double& v : t) {
            v *= v;
        }
        return t;
    };
    accumulate(weights_, squared(x_table_), squared(y_table_), atom_energy_);
}

void AtomProjector::correlate(std::span<const double> values, std::vector<double>& out) const {
    if (values.size() != weights_.size()) {
        throw InvalidArgument("values are not aligned with the samples");
    }
    std::vector<double> scaled(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        scaled[i] = weights_[i] * values[i];
    }
    accumulate(scaled, x_table_, y_table_, out);
}

void AtomProjector::accumulate(std::span<const double> scaled, const std::vector<double>& xt,
                               const std::vector<double>& yt, std::vector<double>& out) const {
    out.assign(width_ * height_, 0.0);
    if (!grid_) {
        for (std::size_t i = 0; i < scaled.size(); ++i) {
            const double s = scaled[i];
            const double* xrow = &xt[x_axis_.slot[i] * width_];
            const double* yrow = &yt[y_axis_.slot[i] * height_];
            for (std::size_t k = 0; k < width_; ++k) {
                const double a = s * xrow[k];
                double* dst = &out[k * height_];
                for (std::size_t l = 0; l < height_; ++l) {
                    dst[l] += a * yrow[l];
                }
            }
        }
        return;
    }

    const std::size_t ux = x_axis_.values.size();
    const std::size_t uy = y_axis_.values.size();
    std::vector<double> grid(ux * uy, 0.0);
    std::vector<char> occupied(ux * uy, 0);
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        const std::size_t cell = x_axis_.slot[i] * uy + y_axis_.slot[i];
        grid[cell] += scaled[i];
        occupied[cell] = 1;
    }
    // partial[x][l] = sum_y grid[x][y] * yt[y][l]
    std::vector<double> partial(ux * height_, 0.0);
    for (std::size_t x = 0; x < ux; ++x) {
        double* dst = &partial[x * height_];
        for (std::size_t y = 0; y < uy; ++y) {
            if (!occupied[x * uy + y]) {
                continue;
            }
            const double g = grid[x * uy + y];
            const double* yrow = &yt[y * height_];
            for (std::size_t l = 0; l < height_; ++l) {
                dst[l] += g * yrow[l];
            }
        }
    }
    // out[k][l] = sum_x xt[x][k] * partial[x][l]
    for (std::size_t x = 0; x < ux; ++x) {
        const double* xrow = &xt[x * width_];
        const double* src = &partial[x * height_];
        for (std::size_t k = 0; k < width_; ++k) {
            const double a = xrow[k];
            double* dst = &out[k * height_];
            for (std::size_t l = 0; l < height_; ++l) {
                dst[l] += a * src[l];
            }
        }
    }
}

double AtomProjector::weighted_energy(std::span<const double> residuals) const {
    double e = 0.0;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        e += weights_[i] * residuals[i] * residuals[i];
    }
    return e;
}

std::optional<Selection> pick_atom(const BasisDictionary& dict, std::span<const double> correlation,
                                   std::span<const double> atom_energy, std::span<const double> spectral) {
    std::optional<Selection> best;
    for (const auto index : dict.tie_order()) {
        const std::size_t f = dict.flat(index);
        const double den = atom_energy[f];
        if (den < kUnobservable) {
            continue;
        }
        const double c = correlation[f] / den;
        const double score = c * c * den * spectral[f];
        if (!best || score > best->score) {
            best = Selection{index, c, score};
        }
    }
    return best;
}

ModelResult run_greedy(const AtomProjector& projector, const BasisDictionary& dict, std::span<const double> values,
                       const ModelConfig& config) {
    config.validate();
    const SpectralWeight spectral(dict.size(), config.spectral_decay);

    ModelResult result;
    result.model = SparseModel(dict.size());
    result.state.residuals.assign(values.begin(), values.end());
    result.state.weighted_energy = projector.weighted_energy(result.state.residuals);
    result.energy_trace.push_back(result.state.weighted_energy);
    if (values.empty()) {
        result.unsupported = true;
        return result;
    }

    const double floor = config.energy_floor * result.state.weighted_energy;
    auto& residuals = result.state.residuals;
    std::vector<double> correlation;
    for (int it = 0; it < config.iterations; ++it) {
        if (result.state.weighted_energy <= 0.0 || result.state.weighted_energy < floor) {
            break;
        }
        projector.correlate(residuals, correlation);
        const auto pick = pick_atom(dict, correlation, projector.atom_energy(), spectral.table());
        if (!pick || !(pick->score > 0.0)) {
            break;
        }
        const double added = config.compensation * pick->coefficient;
        result.model.add(pick->index, added);
        for (std::size_t i = 0; i < residuals.size(); ++i) {
            residuals[i] -= added * projector.atom_at(i, pick->index);
        }
        result.state.weighted_energy = projector.weighted_energy(residuals);
        result.state.iteration = it + 1;
        result.energy_trace.push_back(result.state.weighted_energy);
    }
    return result;
}

std::vector<double> evaluate_grid(const SparseModel& model, const BasisDictionary& dict, std::span<const double> xs,
                                  std::span<const double> ys) {
    const std::size_t nx = xs.size();
    const std::size_t ny = ys.size();
    std::vector<double> out(nx * ny, 0.0);
    std::vector<double> hx(nx);
    std::vector<double> vy(ny);
    for (const auto& [index, c] : model.coefficients()) {
        for (std::size_t x = 0; x < nx; ++x) {
            hx[x] = c * dict.horizontal(index.k, xs[x]);
        }
        for (std::size_t y = 0; y < ny; ++y) {
            vy[y] = dict.vertical(index.l, ys[y]);
        }
        for (std::size_t y = 0; y < ny; ++y) {
            double* row = &out[y * nx];
            for (std::size_t x = 0; x < nx; ++x) {
                row[x] += hx[x] * vy[y];
            }
        }
    }
    return out;
}

}  // namespace detail

}  // namespace fsmr
