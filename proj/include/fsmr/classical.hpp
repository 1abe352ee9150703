#pragma once

#include <cstddef>

#include "fsmr/geometry.hpp"
#include "fsmr/image.hpp"
#include "fsmr/patterns.hpp"

namespace fsmr {

enum class KernelKind { bilinear, bicubic };

struct KernelSpec {
    KernelKind kind = KernelKind::bicubic;
    /// Keys cubic sharpness; -0.5 is Catmull-Rom.
    double bicubic_a = -0.5;

    /// Tap weight at signed distance t from the sample position.
    [[nodiscard]] double weight(double t) const;
    /// Taps on each side of the sample position (1 for bilinear, 2 for bicubic).
    [[nodiscard]] int radius() const { return kind == KernelKind::bilinear ? 1 : 2; }

    static KernelSpec bilinear() { return {KernelKind::bilinear, -0.5}; }
    static KernelSpec bicubic(double a = -0.5) { return {KernelKind::bicubic, a}; }
};

/// Separable resampling with clamp-to-edge borders.
[[nodiscard]] Plane resize(const Plane& plane, Size target, const KernelSpec& kernel,
                           Convention convention = Convention::align_corners);
[[nodiscard]] Image resize(const Image& image, Size target, const KernelSpec& kernel,
                           Convention convention = Convention::align_corners);

struct Reconstruction {
    Image image;
    /// Lost pixels without any valid pixel in their row or column; filled with the nearest valid value.
    std::size_t fallback_pixels = 0;
};

/// Fills lost pixels by 1-D interpolation across the gap along the row and the
/// column (linear or cubic Hermite), averaging both directions when both have
/// valid pixels. Valid pixels are returned untouched.
[[nodiscard]] Reconstruction interp_reconstruct(const Image& image, const LossMask& mask, const KernelSpec& kernel);

}  // namespace fsmr
