#include "lichi/image.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

namespace lichi {

unsigned char quantize_u8(double v) {
    if (v < 0.0) v = 0.0;
    if (v > 255.0) v = 255.0;
    // half away from zero; v is non-negative here
    return static_cast<unsigned char>(std::floor(v + 0.5));
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool has_png_magic(std::FILE* f) {
    unsigned char magic[8] = {};
    std::size_t got = std::fread(magic, 1, 8, f);
    std::rewind(f);
    return got == 8 && png_sig_cmp(magic, 0, 8) == 0;
}

int read_pgm_token(std::FILE* f) {
    // skips whitespace and '#' comments, then reads a decimal integer
    int c = std::fgetc(f);
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = std::fgetc(f);
        } else if (!std::isspace(c)) {
            break;
        }
        c = std::fgetc(f);
    }
    if (c == EOF || !std::isdigit(c)) return -1;
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 30) return -1;
        c = std::fgetc(f);
    }
    return value;
}

Image load_pgm(std::FILE* f, const std::string& path) {
    char magic[3] = {};
    if (std::fread(magic, 1, 2, f) != 2 || std::strncmp(magic, "P5", 2) != 0)
        throw IoError(path + ": not a binary PGM (P5) file");
    const int width = read_pgm_token(f);
    const int height = read_pgm_token(f);
    const int maxval = read_pgm_token(f);
    if (width <= 0 || height <= 0 || maxval <= 0)
        throw IoError(path + ": malformed PGM header");
    if (maxval > 255)
        throw IoError(path + ": unsupported bit depth (maxval " +
                      std::to_string(maxval) + " > 255)");
    // exactly one whitespace byte separates header and raster; the last
    // read_pgm_token call already consumed it
    std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height);
    if (std::fread(raw.data(), 1, raw.size(), f) != raw.size())
        throw IoError(path + ": truncated PGM raster");
    Image img(height, width);
    for (std::size_t i = 0; i < raw.size(); ++i)
        img[i] = static_cast<double>(raw[i]);
    return img;
}

Image load_png(std::FILE* f, const std::string& path) {
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError(path + ": libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError(path + ": libpng init failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<unsigned char> raster;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path + ": PNG decode error");
    }
    png_init_io(png, f);
    png_read_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    if (color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path + ": color image not supported (grayscale only)");
    }
    if (bit_depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path + ": unsupported bit depth");
    }
    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    raster.resize(static_cast<std::size_t>(width) * height);
    row_ptrs.resize(height);
    for (int r = 0; r < height; ++r)
        row_ptrs[r] = raster.data() + static_cast<std::size_t>(r) * width;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image img(height, width);
    for (std::size_t i = 0; i < raster.size(); ++i)
        img[i] = static_cast<double>(raster[i]);
    return img;
}

bool ends_with_png(const std::string& path) {
    if (path.size() < 4) return false;
    std::string ext = path.substr(path.size() - 4);
    for (auto& c : ext) c = static_cast<char>(std::tolower(c));
    return ext == ".png";
}

void save_pgm(const Image& img, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError(path + ": cannot open for writing");
    std::fprintf(f.get(), "P5\n%d %d\n255\n", img.width(), img.height());
    std::vector<unsigned char> raw(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) raw[i] = quantize_u8(img[i]);
    if (std::fwrite(raw.data(), 1, raw.size(), f.get()) != raw.size())
        throw IoError(path + ": write failed");
}

void save_png(const Image& img, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError(path + ": cannot open for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              nullptr, nullptr);
    if (!png) throw IoError(path + ": libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError(path + ": libpng init failed");
    }
    std::vector<unsigned char> raw(img.size());
    std::vector<png_bytep> row_ptrs(img.height());
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError(path + ": PNG encode error");
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, img.width(), img.height(), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t i = 0; i < img.size(); ++i) raw[i] = quantize_u8(img[i]);
    for (int r = 0; r < img.height(); ++r)
        row_ptrs[r] = raw.data() + static_cast<std::size_t>(r) * img.width();
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

Image load_gray(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw IoError(path + ": cannot open for reading");
    if (has_png_magic(f.get())) return load_png(f.get(), path);
    return load_pgm(f.get(), path);
}

void save_gray(const Image& img, const std::string& path) {
    if (ends_with_png(path))
        save_png(img, path);
    else
        save_pgm(img, path);
}

}  // namespace lichi
