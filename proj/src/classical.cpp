#include "fsmr/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "fsmr/errors.hpp"

namespace fsmr {

double KernelSpec::weight(double t) const {
    const double x = std::abs(t);
    if (kind == KernelKind::bilinear) {
        return x < 1.0 ? 1.0 - x : 0.0;
    }
    const double a = bicubic_a;
    if (x <= 1.0) {
        return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    }
    if (x < 2.0) {
        return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    }
    return 0.0;
}

namespace {

struct Taps {
    std::vector<int> index;    // [target][tap]
    std::vector<double> weight;
    int per_target = 0;
};

Taps make_taps(int from, int to, const KernelSpec& kernel, Convention convention) {
    Taps taps;
    const int r = kernel.radius();
    taps.per_target = 2 * r;
    taps.index.resize(static_cast<std::size_t>(to) * static_cast<std::size_t>(taps.per_target));
    taps.weight.resize(taps.index.size());
    for (int t = 0; t < to; ++t) {
        const double s = map_coordinate(t, to, from, convention);
        const int base = static_cast<int>(std::floor(s));
        for (int j = 0; j < taps.per_target; ++j) {
            const int tap = base - r + 1 + j;
            const std::size_t slot = static_cast<std::size_t>(t) * static_cast<std::size_t>(taps.per_target) +
                                     static_cast<std::size_t>(j);
            taps.index[slot] = std::clamp(tap, 0, from - 1);
            taps.weight[slot] = kernel.weight(s - tap);
        }
    }
    return taps;
}

void check_resize(Size source, Size target, const KernelSpec& kernel) {
    const int min_side = kernel.kind == KernelKind::bilinear ? 2 : 4;
    if (source.width < min_side || source.height < min_side) {
        throw InvalidArgument("source too small for the resize kernel");
    }
    if (target.width < 1 || target.height < 1) {
        throw InvalidArgument("target dimensions must be positive");
    }
}

}  // namespace

Plane resize(const Plane& plane, Size target, const KernelSpec& kernel, Convention convention) {
    check_resize(plane.size(), target, kernel);
    const Taps hx = make_taps(plane.width(), target.width, kernel, convention);
    const Taps vy = make_taps(plane.height(), target.height, kernel, convention);

    Plane rows({target.width, plane.height()});
    for (int y = 0; y < plane.height(); ++y) {
        for (int x = 0; x < target.width; ++x) {
            double acc = 0.0;
            for (int j = 0; j < hx.per_target; ++j) {
                const auto slot = static_cast<std::size_t>(x * hx.per_target + j);
                acc += hx.weight[slot] * plane(hx.index[slot], y);
            }
            rows(x, y) = acc;
        }
    }
    Plane out(target);
    for (int y = 0; y < target.height; ++y) {
        for (int x = 0; x < target.width; ++x) {
            double acc = 0.0;
            for (int j = 0; j < vy.per_target; ++j) {
                const auto slot = static_cast<std::size_t>(y * vy.per_target + j);
                acc += vy.weight[slot] * rows(x, vy.index[slot]);
            }
            out(x, y) = acc;
        }
    }
    return out;
}

Image resize(const Image& image, Size target, const KernelSpec& kernel, Convention convention) {
    std::vector<Plane> planes;
    for (const auto& p : image.planes()) {
        planes.push_back(resize(p, target, kernel, convention));
    }
    return Image(std::move(planes));
}

namespace {

// One axis of valid samples, indexed by position along the row or column.
struct Line {
    const std::vector<double>* values;
    const std::vector<std::uint8_t>* valid;
    std::vector<int> prev;  // nearest valid strictly before, -1 if none
    std::vector<int> next;  // nearest valid strictly after, -1 if none

    Line(const std::vector<double>& v, const std::vector<std::uint8_t>& ok) : values(&v), valid(&ok) {
        const int n = static_cast<int>(v.size());
        prev.assign(static_cast<std::size_t>(n), -1);
        next.assign(static_cast<std::size_t>(n), -1);
        int last = -1;
        for (int i = 0; i < n; ++i) {
            prev[static_cast<std::size_t>(i)] = last;
            if (ok[static_cast<std::size_t>(i)]) last = i;
        }
        last = -1;
        for (int i = n - 1; i >= 0; --i) {
            next[static_cast<std::size_t>(i)] = last;
            if (ok[static_cast<std::size_t>(i)]) last = i;
        }
    }

    [[nodiscard]] double at(int i) const { return (*values)[static_cast<std::size_t>(i)]; }

    [[nodiscard]] std::optional<double> estimate(int pos, const KernelSpec& kernel) const {
        const int l = prev[static_cast<std::size_t>(pos)];
        const int r = next[static_cast<std::size_t>(pos)];
        if (l < 0 && r < 0) {
            return std::nullopt;
        }
        if (l < 0) return at(r);
        if (r < 0) return at(l);

        const double fl = at(l);
        const double fr = at(r);
        const double h = r - l;
        const double t = (pos - l) / h;
        if (kernel.kind == KernelKind::bilinear) {
            return fl + (fr - fl) * t;
        }
        // Cubic Hermite with finite-difference tangents across the gap.
        const int l2 = prev[static_cast<std::size_t>(l)];
        const int r2 = next[static_cast<std::size_t>(r)];
        const double tension = -2.0 * kernel.bicubic_a;
        const double ml = tension * (l2 < 0 ? (fr - fl) / h : (fr - at(l2)) / (r - l2));
        const double mr = tension * (r2 < 0 ? (fr - fl) / h : (at(r2) - fl) / (r2 - l));
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * fl + (t3 - 2 * t2 + t) * h * ml + (-2 * t3 + 3 * t2) * fr +
               (t3 - t2) * h * mr;
    }
};

}  // namespace

Reconstruction interp_reconstruct(const Image& image, const LossMask& mask, const KernelSpec& kernel) {
    if (image.size() != mask.size()) {
        throw InvalidArgument("mask and image differ in size");
    }
    const int w = image.width();
    const int h = image.height();
    const auto& valid = mask.plane();

    Reconstruction result{image, 0};
    std::vector<std::size_t> orphans;

    for (int c = 0; c < image.channels(); ++c) {
        const Plane& src = image.channel(c);
        Plane& dst = result.image.channel(c);

        std::vector<std::optional<double>> horizontal(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
        std::vector<double> values;
        std::vector<std::uint8_t> ok;
        for (int y = 0; y < h; ++y) {
            values.assign(static_cast<std::size_t>(w), 0.0);
            ok.assign(static_cast<std::size_t>(w), 0);
            for (int x = 0; x < w; ++x) {
                values[static_cast<std::size_t>(x)] = src(x, y);
                ok[static_cast<std::size_t>(x)] = valid[static_cast<std::size_t>(y * w + x)];
            }
            const Line line(values, ok);
            for (int x = 0; x < w; ++x) {
                if (!ok[static_cast<std::size_t>(x)]) {
                    horizontal[static_cast<std::size_t>(y * w + x)] = line.estimate(x, kernel);
                }
            }
        }
        for (int x = 0; x < w; ++x) {
            values.assign(static_cast<std::size_t>(h), 0.0);
            ok.assign(static_cast<std::size_t>(h), 0);
            for (int y = 0; y < h; ++y) {
                values[static_cast<std::size_t>(y)] = src(x, y);
                ok[static_cast<std::size_t>(y)] = valid[static_cast<std::size_t>(y * w + x)];
            }
            const Line line(values, ok);
            for (int y = 0; y < h; ++y) {
                if (ok[static_cast<std::size_t>(y)]) {
                    continue;
                }
                const auto hz = horizontal[static_cast<std::size_t>(y * w + x)];
                const auto vt = line.estimate(y, kernel);
                if (hz && vt) {
                    dst(x, y) = 0.5 * (*hz + *vt);
                } else if (hz) {
                    dst(x, y) = *hz;
                } else if (vt) {
                    dst(x, y) = *vt;
                } else if (c == 0) {
                    orphans.push_back(static_cast<std::size_t>(y * w + x));
                }
            }
        }
    }

    if (!orphans.empty()) {
        // Nearest valid pixel by Euclidean distance, first in row-major order on ties.
        std::vector<std::size_t> sources;
        for (std::size_t i = 0; i < valid.size(); ++i) {
            if (valid[i]) sources.push_back(i);
        }
        for (const std::size_t o : orphans) {
            const long ox = static_cast<long>(o % static_cast<std::size_t>(w));
            const long oy = static_cast<long>(o / static_cast<std::size_t>(w));
            std::size_t best = sources.front();
            long best_d = std::numeric_limits<long>::max();
            for (const std::size_t s : sources) {
                const long dx = static_cast<long>(s % static_cast<std::size_t>(w)) - ox;
                const long dy = static_cast<long>(s / static_cast<std::size_t>(w)) - oy;
                const long d = dx * dx + dy * dy;
                if (d < best_d) {
                    best_d = d;
                    best = s;
                }
            }
            for (int c = 0; c < image.channels(); ++c) {
                result.image.channel(c).data()[o] = image.channel(c).data()[best];
            }
        }
        result.fallback_pixels = orphans.size();
    }
    return result;
}

}  // namespace fsmr
