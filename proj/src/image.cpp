#include "fsmr/image.hpp"

#include <algorithm>
#include <cmath>

#include "fsmr/errors.hpp"

namespace fsmr {

Plane::Plane(Size size, double fill) : size_(size), data_(size.area(), fill) {
    if (size.width < 0 || size.height < 0) {
        throw InvalidArgument("plane dimensions must be non-negative");
    }
}

Plane::Plane(Size size, std::vector<double> data) : size_(size), data_(std::move(data)) {
    if (data_.size() != size.area()) {
        throw InvalidArgument("plane buffer length does not match its dimensions");
    }
}

Image::Image(Size size, int channels, double fill) : size_(size) {
    if (channels < 1) {
        throw InvalidArgument("image needs at least one channel");
    }
    planes_.assign(static_cast<std::size_t>(channels), Plane(size, fill));
}

Image::Image(std::vector<Plane> planes) : planes_(std::move(planes)) {
    if (planes_.empty()) {
        throw InvalidArgument("image needs at least one channel");
    }
    size_ = planes_.front().size();
    for (const auto& p : planes_) {
        if (p.size() != size_) {
            throw InvalidArgument("image channels differ in size");
        }
    }
}

std::uint8_t to_byte(double value) {
    const double scaled = std::clamp(value, 0.0, 1.0) * 255.0;
    return static_cast<std::uint8_t>(std::lround(scaled));
}

Plane quantize8(const Plane& plane) {
    Plane out(plane.size());
    auto src = plane.data();
    auto dst = out.data();
    std::transform(src.begin(), src.end(), dst.begin(),
                   [](double v) { return static_cast<double>(to_byte(v)) / 255.0; });
    return out;
}

Image quantize8(const Image& image) {
    std::vector<Plane> planes;
    planes.reserve(static_cast<std::size_t>(image.channels()));
    for (const auto& p : image.planes()) {
        planes.push_back(quantize8(p));
    }
    return Image(std::move(planes));
}

Plane luma(const Image& image) {
    if (image.channels() != 3) {
        return image.channel(0);
    }
    Plane out(image.size());
    auto r = image.channel(0).data();
    auto g = image.channel(1).data();
    auto b = image.channel(2).data();
    auto y = out.data();
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
    }
    return out;
}

}  // namespace fsmr
