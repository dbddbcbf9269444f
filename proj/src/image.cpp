#include "scalecraft/image.hpp"

#include <cmath>
#include <cstdlib>

namespace scalecraft {

Image::Image(Dimensions d, int ch, std::uint8_t fill) : dims(d), channels(ch) {
    if (d.width < 1 || d.height < 1)
        throw std::invalid_argument("image dimensions must be positive");
    if (ch != 1 && ch != 3)
        throw std::invalid_argument("channel count must be 1 or 3");
    pixels.assign(static_cast<std::size_t>(d.width) * d.height * ch, fill);
}

FloatPlanes::FloatPlanes(Dimensions d, int ch) : dims(d), channels(ch) {
    planes.assign(ch, std::vector<double>(static_cast<std::size_t>(d.width) * d.height, 0.0));
}

FloatPlanes to_float(const Image& img) {
    FloatPlanes out(img.dims, img.channels);
    const std::size_t n = static_cast<std::size_t>(img.dims.width) * img.dims.height;
    for (int c = 0; c < img.channels; ++c)
        for (std::size_t i = 0; i < n; ++i)
            out.planes[c][i] = static_cast<double>(img.pixels[i * img.channels + c]);
    return out;
}

std::uint8_t quantize(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in from_float");
    if (v <= 0.0) return 0;
    if (v >= 255.0) return 255;
    // half away from zero; values here are nonnegative
    return static_cast<std::uint8_t>(std::llround(v));
}

Image from_float(const FloatPlanes& p) {
    Image out(p.dims, p.channels);
    const std::size_t n = static_cast<std::size_t>(p.dims.width) * p.dims.height;
    for (int c = 0; c < p.channels; ++c)
        for (std::size_t i = 0; i < n; ++i)
            out.pixels[i * p.channels + c] = quantize(p.planes[c][i]);
    return out;
}

static void require_same_shape(const Image& a, const Image& b) {
    if (a.dims != b.dims || a.channels != b.channels)
        throw std::invalid_argument("image dimension/channel mismatch");
}

std::optional<double> psnr(const Image& a, const Image& b) {
    require_same_shape(a, b);
    double sq = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
        sq += d * d;
    }
    if (sq == 0.0) return std::nullopt;
    const double mse = sq / static_cast<double>(a.pixels.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

int linf_diff(const Image& a, const Image& b) {
    require_same_shape(a, b);
    int m = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
        m = std::max(m, std::abs(static_cast<int>(a.pixels[i]) - static_cast<int>(b.pixels[i])));
    return m;
}

}  // namespace scalecraft
