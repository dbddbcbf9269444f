#include "scalecraft/image.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace scalecraft {

namespace {

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return {};
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void png_error_fn(png_structp png, png_const_charp msg) {
    // libpng expects this not to return
    throw ImageIoError(ImageIoErrorKind::CorruptStream, std::string("corrupt PNG stream: ") + msg);
}

void png_warn_fn(png_structp, png_const_charp) {}

Image load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw ImageIoError(ImageIoErrorKind::Unreadable, "cannot open file: " + path);

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw ImageIoError(ImageIoErrorKind::CorruptStream, "not a PNG stream: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             png_error_fn, png_warn_fn);
    png_infop info = png_create_info_struct(png);
    try {
        png_init_io(png, fp.get());
        png_set_sig_bytes(png, 8);
        png_read_info(png, info);

        const int bit_depth = png_get_bit_depth(png, info);
        const int color_type = png_get_color_type(png, info);
        if (bit_depth == 16)
            throw ImageIoError(ImageIoErrorKind::UnsupportedBitDepth,
                               "16-bit PNG not supported: " + path);
        if (color_type == PNG_COLOR_TYPE_GRAY_ALPHA || color_type == PNG_COLOR_TYPE_RGB_ALPHA ||
            png_get_valid(png, info, PNG_INFO_tRNS))
            throw ImageIoError(ImageIoErrorKind::UnsupportedFormat,
                               "PNG with alpha channel rejected: " + path);
        if (color_type == PNG_COLOR_TYPE_PALETTE)
            throw ImageIoError(ImageIoErrorKind::UnsupportedFormat,
                               "palette PNG not supported: " + path);
        if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        png_read_update_info(png, info);

        const int width = static_cast<int>(png_get_image_width(png, info));
        const int height = static_cast<int>(png_get_image_height(png, info));
        const int channels = static_cast<int>(png_get_channels(png, info));
        if (channels != 1 && channels != 3)
            throw ImageIoError(ImageIoErrorKind::UnsupportedFormat,
                               "unsupported PNG channel count: " + path);

        Image img({width, height}, channels);
        std::vector<png_bytep> row_ptrs(height);
        const std::size_t stride = static_cast<std::size_t>(width) * channels;
        for (int r = 0; r < height; ++r) row_ptrs[r] = img.pixels.data() + r * stride;
        png_read_image(png, row_ptrs.data());
        png_read_end(png, nullptr);
        png_destroy_read_struct(&png, &info, nullptr);
        return img;
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
}

void save_png(const Image& img, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw ImageIoError(ImageIoErrorKind::Unwritable, "cannot write file: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              png_error_fn, png_warn_fn);
    png_infop info = png_create_info_struct(png);
    try {
        png_init_io(png, fp.get());
        const int color_type = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
        png_set_IHDR(png, info, img.dims.width, img.dims.height, 8, color_type,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        const std::size_t stride = static_cast<std::size_t>(img.dims.width) * img.channels;
        for (int r = 0; r < img.dims.height; ++r)
            png_write_row(png, const_cast<png_bytep>(img.pixels.data() + r * stride));
        png_write_end(png, info);
        png_destroy_write_struct(&png, &info);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
}

// Binary PNM: P5 (gray) and P6 (RGB), maxval 255 only.
int pnm_read_token(std::istream& in) {
    // skips whitespace and '#' comments
    while (in) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int v = -1;
    in >> v;
    return in ? v : -1;
}

Image load_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageIoError(ImageIoErrorKind::Unreadable, "cannot open file: " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    int channels;
    if (magic[0] == 'P' && magic[1] == '5') channels = 1;
    else if (magic[0] == 'P' && magic[1] == '6') channels = 3;
    else throw ImageIoError(ImageIoErrorKind::CorruptStream, "not a binary PGM/PPM: " + path);

    const int width = pnm_read_token(in);
    const int height = pnm_read_token(in);
    const int maxval = pnm_read_token(in);
    if (width < 1 || height < 1 || maxval < 1)
        throw ImageIoError(ImageIoErrorKind::CorruptStream, "bad PNM header: " + path);
    if (maxval != 255)
        throw ImageIoError(ImageIoErrorKind::UnsupportedBitDepth,
                           "PNM maxval must be 255: " + path);
    in.get();  // single whitespace after maxval

    Image img({width, height}, channels);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.pixels.size())
        throw ImageIoError(ImageIoErrorKind::CorruptStream, "truncated PNM payload: " + path);
    return img;
}

void save_pnm(const Image& img, const std::string& path, int channels) {
    if (img.channels != channels)
        throw ImageIoError(ImageIoErrorKind::UnsupportedFormat,
                           channels == 1 ? "PGM requires a 1-channel image: " + path
                                         : "PPM requires a 3-channel image: " + path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ImageIoError(ImageIoErrorKind::Unwritable, "cannot write file: " + path);
    out << (channels == 1 ? "P5" : "P6") << "\n"
        << img.dims.width << " " << img.dims.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw ImageIoError(ImageIoErrorKind::Unwritable, "write failed: " + path);
}

}  // namespace

Image load_image(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "png") return load_png(path);
    if (ext == "pgm" || ext == "ppm") return load_pnm(path);
    throw ImageIoError(ImageIoErrorKind::UnsupportedFormat,
                       "unsupported image extension: " + path);
}

void save_image(const Image& img, const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "png") return save_png(img, path);
    if (ext == "pgm") return save_pnm(img, path, 1);
    if (ext == "ppm") return save_pnm(img, path, 3);
    throw ImageIoError(ImageIoErrorKind::UnsupportedFormat,
                       "unsupported image extension: " + path);
}

}  // namespace scalecraft
