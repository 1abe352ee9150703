#include "fsmr/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "fsmr/errors.hpp"

namespace fsmr {

namespace {

std::string extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

Image from_interleaved(Size size, int channels, const std::vector<std::uint8_t>& bytes) {
    Image image(size, channels);
    for (int c = 0; c < channels; ++c) {
        auto dst = image.channel(c).data();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] = bytes[i * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)] / 255.0;
        }
    }
    return image;
}

std::vector<std::uint8_t> to_interleaved(const Image& image) {
    const auto channels = static_cast<std::size_t>(image.channels());
    std::vector<std::uint8_t> bytes(image.size().area() * channels);
    for (std::size_t c = 0; c < channels; ++c) {
        const auto src = image.channel(static_cast<int>(c)).data();
        for (std::size_t i = 0; i < src.size(); ++i) {
            bytes[i * channels + c] = to_byte(src[i]);
        }
    }
    return bytes;
}

Image read_png(const std::filesystem::path& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.string().c_str())) {
        throw IoError("cannot read PNG '" + path.string() + "': " + png.message);
    }
    const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
    png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> bytes(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, bytes.data(), 0, nullptr)) {
        std::string msg = png.message;
        png_image_free(&png);
        throw IoError("cannot decode PNG '" + path.string() + "': " + msg);
    }
    const Size size{static_cast<int>(png.width), static_cast<int>(png.height)};
    return from_interleaved(size, color ? 3 : 1, bytes);
}

void write_png(const std::filesystem::path& path, const Image& image) {
    if (image.channels() != 1 && image.channels() != 3) {
        throw InvalidArgument("PNG output needs 1 or 3 channels");
    }
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width());
    png.height = static_cast<png_uint_32>(image.height());
    png.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const auto bytes = to_interleaved(image);
    if (!png_image_write_to_file(&png, path.string().c_str(), 0, bytes.data(), 0, nullptr)) {
        throw IoError("cannot write PNG '" + path.string() + "': " + png.message);
    }
}

// Netpbm token reader that skips whitespace and '#' comments.
int read_token(std::istream& in) {
    int c = in.get();
    while (in && (std::isspace(c) || c == '#')) {
        if (c == '#') {
            while (in && c != '\n') c = in.get();
        }
        c = in.get();
    }
    std::string digits;
    while (in && std::isdigit(c)) {
        digits.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (digits.empty()) {
        throw IoError("malformed netpbm header");
    }
    return std::stoi(digits);
}

Image read_netpbm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    char magic[2] = {};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '3' && magic[1] != '5' && magic[1] != '6')) {
        throw IoError("'" + path.string() + "' is not a PGM/PPM file");
    }
    const bool ascii = magic[1] == '2' || magic[1] == '3';
    const int channels = (magic[1] == '3' || magic[1] == '6') ? 3 : 1;
    const int width = read_token(in);
    const int height = read_token(in);
    const int maxval = read_token(in);
    if (width < 1 || height < 1 || maxval < 1 || maxval > 255) {
        throw IoError("unsupported netpbm geometry or depth in '" + path.string() + "'");
    }
    const Size size{width, height};
    std::vector<std::uint8_t> bytes(size.area() * static_cast<std::size_t>(channels));
    if (ascii) {
        for (auto& b : bytes) b = static_cast<std::uint8_t>(read_token(in));
    } else {
        in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
            throw IoError("truncated netpbm data in '" + path.string() + "'");
        }
    }
    if (maxval != 255) {
        for (auto& b : bytes) b = static_cast<std::uint8_t>(std::lround(255.0 * std::min<int>(b, maxval) / maxval));
    }
    return from_interleaved(size, channels, bytes);
}

void write_netpbm(const std::filesystem::path& path, const Image& image, bool color) {
    if ((color && image.channels() != 3) || (!color && image.channels() != 1)) {
        throw InvalidArgument("PPM needs 3 channels, PGM needs 1");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot create '" + path.string() + "'");
    }
    out << (color ? "P6" : "P5") << '\n' << image.width() << ' ' << image.height() << "\n255\n";
    const auto bytes = to_interleaved(image);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
}

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};

void write_mask_png(const std::filesystem::path& path, const LossMask& mask) {
    std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.string().c_str(), "wb"));
    if (!file) {
        throw IoError("cannot create '" + path.string() + "'");
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng allocation failed");
    }
    const Size size = mask.size();
    const std::size_t stride = (static_cast<std::size_t>(size.width) + 7) / 8;
    std::vector<std::uint8_t> packed(stride * static_cast<std::size_t>(size.height), 0);
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            if (mask.valid(x, y)) {
                packed[static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x) / 8] |=
                    static_cast<std::uint8_t>(0x80u >> (x % 8));
            }
        }
    }
    std::uint8_t* const rows = packed.data();
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("cannot write mask PNG '" + path.string() + "'");
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(size.width), static_cast<png_uint_32>(size.height), 1,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < size.height; ++y) {
        png_write_row(png, rows + static_cast<std::size_t>(y) * stride);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
    const auto ext = extension(path);
    if (ext == ".png") {
        return read_png(path);
    }
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
        return read_netpbm(path);
    }
    throw IoError("unsupported image format '" + ext + "'");
}

void write_image(const std::filesystem::path& path, const Image& image) {
    const auto ext = extension(path);
    if (ext == ".png") {
        write_png(path, image);
    } else if (ext == ".pgm") {
        write_netpbm(path, image, false);
    } else if (ext == ".ppm") {
        write_netpbm(path, image, true);
    } else {
        throw IoError("unsupported image format '" + ext + "'");
    }
}

LossMask read_mask(const std::filesystem::path& path) {
    const Image image = read_image(path);
    const auto data = image.channel(0).data();
    std::vector<std::uint8_t> valid(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        valid[i] = data[i] > 0.0 ? 1 : 0;
    }
    return LossMask(image.size(), std::move(valid));
}

void write_mask(const std::filesystem::path& path, const LossMask& mask) {
    if (extension(path) == ".png") {
        write_mask_png(path, mask);
        return;
    }
    Plane plane(mask.size());
    auto data = plane.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = mask.plane()[i] ? 1.0 : 0.0;
    }
    write_image(path, Image({std::move(plane)}));
}

}  // namespace fsmr
