#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scalecraft {

struct Dimensions {
    int width = 0;   // n-axis, pixels per row
    int height = 0;  // m-axis, rows

    bool operator==(const Dimensions&) const = default;
};

// 8-bit raster, interleaved channels, row-major. Immutable by convention:
// every operation returns a fresh image.
struct Image {
    Dimensions dims;
    int channels = 1;  // 1 = grayscale, 3 = RGB
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(Dimensions d, int ch, std::uint8_t fill = 0);

    std::size_t pixel_count() const { return pixels.size(); }

    std::uint8_t at(int row, int col, int ch) const {
        return pixels[(static_cast<std::size_t>(row) * dims.width + col) * channels + ch];
    }
    std::uint8_t& at(int row, int col, int ch) {
        return pixels[(static_cast<std::size_t>(row) * dims.width + col) * channels + ch];
    }

    bool operator==(const Image&) const = default;
};

// Planar double-precision working form. No range clamp; values must stay finite.
struct FloatPlanes {
    Dimensions dims;
    int channels = 1;
    std::vector<std::vector<double>> planes;  // channels × (width*height)

    FloatPlanes() = default;
    FloatPlanes(Dimensions d, int ch);

    double at(int row, int col, int ch) const {
        return planes[ch][static_cast<std::size_t>(row) * dims.width + col];
    }
    double& at(int row, int col, int ch) {
        return planes[ch][static_cast<std::size_t>(row) * dims.width + col];
    }
};

enum class ImageIoErrorKind {
    Unreadable,
    Unwritable,
    UnsupportedBitDepth,
    UnsupportedFormat,
    CorruptStream,
};

class ImageIoError : public std::runtime_error {
  public:
    ImageIoError(ImageIoErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ImageIoErrorKind kind() const { return kind_; }

  private:
    ImageIoErrorKind kind_;
};

// Format chosen by extension: .png, .pgm (gray only), .ppm (RGB only).
// Lossless round trip: load_image(save_image(img)) == img.
Image load_image(const std::string& path);
void save_image(const Image& img, const std::string& path);

FloatPlanes to_float(const Image& img);

// Clamp to [0,255], then round half away from zero. Throws on non-finite input.
Image from_float(const FloatPlanes& planes);
std::uint8_t quantize(double v);

// PSNR with peak 255 over all channels. nullopt when the images are identical.
std::optional<double> psnr(const Image& a, const Image& b);

int linf_diff(const Image& a, const Image& b);

}  // namespace scalecraft
