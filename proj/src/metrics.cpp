#include "fsmr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fsmr/errors.hpp"

namespace fsmr {

namespace {

void check_same(Size a, Size b) {
    if (a != b) {
        throw InvalidArgument("metric inputs differ in size");
    }
    if (a.area() == 0) {
        throw InvalidArgument("metric inputs are empty");
    }
}

// Summed-area table with a zero first row and column.
class Integral {
public:
    Integral(Size size, const std::vector<double>& values) : w_(static_cast<std::size_t>(size.width) + 1) {
        table_.assign(w_ * (static_cast<std::size_t>(size.height) + 1), 0.0);
        for (std::size_t y = 0; y < static_cast<std::size_t>(size.height); ++y) {
            double row = 0.0;
            for (std::size_t x = 0; x + 1 < w_; ++x) {
                row += values[y * (w_ - 1) + x];
                table_[(y + 1) * w_ + x + 1] = table_[y * w_ + x + 1] + row;
            }
        }
    }

    [[nodiscard]] double sum(std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1) const {
        return table_[y1 * w_ + x1] - table_[y0 * w_ + x1] - table_[y1 * w_ + x0] + table_[y0 * w_ + x0];
    }

private:
    std::size_t w_;
    std::vector<double> table_;
};

}  // namespace

double psnr(const Plane& a, const Plane& b, double peak) {
    check_same(a.size(), b.size());
    const auto da = a.data();
    const auto db = b.data();
    double sse = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = da[i] - db[i];
        sse += d * d;
    }
    if (sse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double mse = sse / static_cast<double>(da.size());
    return 10.0 * std::log10(peak * peak / mse);
}

double psnr(const Image& a, const Image& b) {
    if (a.channels() != b.channels()) {
        throw InvalidArgument("metric inputs differ in channel count");
    }
    return psnr(luma(a), luma(b));
}

double ssim(const Plane& a, const Plane& b) {
    check_same(a.size(), b.size());
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;
    const Size s = a.size();
    const auto wx = static_cast<std::size_t>(std::min(kSsimWindow, s.width));
    const auto wy = static_cast<std::size_t>(std::min(kSsimWindow, s.height));
    const double n = static_cast<double>(wx * wy);

    const std::vector<double> va(a.data().begin(), a.data().end());
    const std::vector<double> vb(b.data().begin(), b.data().end());
    std::vector<double> aa(va.size()), bb(va.size()), ab(va.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
        aa[i] = va[i] * va[i];
        bb[i] = vb[i] * vb[i];
        ab[i] = va[i] * vb[i];
    }
    const Integral ia(s, va), ib(s, vb), iaa(s, aa), ibb(s, bb), iab(s, ab);

    double total = 0.0;
    std::size_t windows = 0;
    for (std::size_t y = 0; y + wy <= static_cast<std::size_t>(s.height); ++y) {
        for (std::size_t x = 0; x + wx <= static_cast<std::size_t>(s.width); ++x) {
            const double ma = ia.sum(x, y, x + wx, y + wy) / n;
            const double mb = ib.sum(x, y, x + wx, y + wy) / n;
            const double vara = iaa.sum(x, y, x + wx, y + wy) / n - ma * ma;
            const double varb = ibb.sum(x, y, x + wx, y + wy) / n - mb * mb;
            const double cov = iab.sum(x, y, x + wx, y + wy) / n - ma * mb;
            total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (vara + varb + c2));
            ++windows;
        }
    }
    return total / static_cast<double>(windows);
}

double ssim(const Image& a, const Image& b) {
    if (a.channels() != b.channels()) {
        throw InvalidArgument("metric inputs differ in channel count");
    }
    return ssim(luma(a), luma(b));
}

AccuracyReport accuracy(std::span<const std::string> predicted, std::span<const std::string> truth) {
    if (predicted.size() != truth.size()) {
        throw InvalidArgument("prediction and ground-truth label lists differ in length");
    }
    if (predicted.empty()) {
        throw InvalidArgument("accuracy needs at least one label");
    }
    AccuracyReport r;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == truth[i]) {
            ++r.correct;
        } else {
            ++r.incorrect;
        }
    }
    return r;
}

}  // namespace fsmr
