#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "fsmr/image.hpp"

namespace fsmr {

/// 10 log10(peak^2 / MSE); +infinity for identical inputs.
[[nodiscard]] double psnr(const Plane& a, const Plane& b, double peak = 1.0);
/// PSNR of the luma planes.
[[nodiscard]] double psnr(const Image& a, const Image& b);

/// Mean SSIM over all 8x8 windows (stride 1, uniform weights), K1 = 0.01, K2 = 0.03, L = 1.
/// Windows shrink to the image size for images smaller than 8 pixels.
[[nodiscard]] double ssim(const Plane& a, const Plane& b);
[[nodiscard]] double ssim(const Image& a, const Image& b);

inline constexpr int kSsimWindow = 8;

struct AccuracyReport {
    std::size_t correct = 0;
    std::size_t incorrect = 0;

    /// N_T / (N_T + N_F)
    [[nodiscard]] double acc() const {
        return static_cast<double>(correct) / static_cast<double>(correct + incorrect);
    }
};

[[nodiscard]] AccuracyReport accuracy(std::span<const std::string> predicted, std::span<const std::string> truth);

}  // namespace fsmr
