#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fsmr {

struct Size {
    int width = 0;
    int height = 0;

    [[nodiscard]] std::size_t area() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
    friend bool operator==(const Size&, const Size&) = default;
};

/// Single-channel raster of reals, row-major. Values are normalized to [0,1]
/// for 8-bit sources; nothing clamps them until quantization.
class Plane {
public:
    Plane() = default;
    Plane(Size size, double fill = 0.0);
    Plane(Size size, std::vector<double> data);

    [[nodiscard]] Size size() const { return size_; }
    [[nodiscard]] int width() const { return size_.width; }
    [[nodiscard]] int height() const { return size_.height; }

    double& operator()(int x, int y) { return data_[index(x, y)]; }
    double operator()(int x, int y) const { return data_[index(x, y)]; }

    [[nodiscard]] std::span<double> data() { return data_; }
    [[nodiscard]] std::span<const double> data() const { return data_; }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    [[nodiscard]] std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(size_.width) + static_cast<std::size_t>(x);
    }

    Size size_{};
    std::vector<double> data_;
};

/// Multi-channel image stored as independent planes (R, G, B or a single gray plane).
class Image {
public:
    Image() = default;
    Image(Size size, int channels, double fill = 0.0);
    explicit Image(std::vector<Plane> planes);

    [[nodiscard]] Size size() const { return size_; }
    [[nodiscard]] int width() const { return size_.width; }
    [[nodiscard]] int height() const { return size_.height; }
    [[nodiscard]] int channels() const { return static_cast<int>(planes_.size()); }

    Plane& channel(int c) { return planes_.at(static_cast<std::size_t>(c)); }
    [[nodiscard]] const Plane& channel(int c) const { return planes_.at(static_cast<std::size_t>(c)); }
    [[nodiscard]] const std::vector<Plane>& planes() const { return planes_; }

    friend bool operator==(const Image&, const Image&) = default;

private:
    Size size_{};
    std::vector<Plane> planes_;
};

/// Rounds each value to the nearest 8-bit level (clamped) and maps it back to [0,1].
[[nodiscard]] Plane quantize8(const Plane& plane);
[[nodiscard]] Image quantize8(const Image& image);
[[nodiscard]] std::uint8_t to_byte(double value);

/// Rec.601 luma for 3-channel images, the plane itself for 1-channel images.
[[nodiscard]] Plane luma(const Image& image);

}  // namespace fsmr
