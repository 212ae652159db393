#ifndef LICHI_IMAGE_HPP
#define LICHI_IMAGE_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lichi {

/// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File reading/writing failures.
struct IoError : Error {
    using Error::Error;
};

/// Invalid or inconsistent configuration.
struct ConfigError : Error {
    using Error::Error;
};

/// 2-D grayscale image. Intensities live in the nominal range [0,255] but
/// values outside that range are permitted mid-pipeline; clamping happens
/// only when writing to disk.
class Image {
public:
    Image() = default;
    Image(int height, int width, double fill = 0.0)
        : height_(height), width_(width),
          data_(static_cast<std::size_t>(height) * width, fill) {
        if (height <= 0 || width <= 0)
            throw ConfigError("Image dimensions must be positive");
    }
    Image(int height, int width, std::vector<double> data)
        : height_(height), width_(width), data_(std::move(data)) {
        if (height <= 0 || width <= 0)
            throw ConfigError("Image dimensions must be positive");
        if (data_.size() != static_cast<std::size_t>(height) * width)
            throw ConfigError("Image data length does not match dimensions");
    }

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return data_.size(); }

    double operator()(int r, int c) const {
        return data_[static_cast<std::size_t>(r) * width_ + c];
    }
    double& operator()(int r, int c) {
        return data_[static_cast<std::size_t>(r) * width_ + c];
    }
    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const Image& other) const {
        return height_ == other.height_ && width_ == other.width_;
    }

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

/// Loads an 8-bit grayscale PGM (binary P5) or PNG file. Pixel value v maps
/// to intensity v exactly. Color or 16-bit inputs are rejected.
Image load_gray(const std::string& path);

/// Writes an 8-bit grayscale image. Intensities are clamped to [0,255] and
/// rounded half-away-from-zero. Format chosen from the file extension
/// (.png -> PNG, anything else -> binary PGM).
void save_gray(const Image& img, const std::string& path);

/// The clamp + round-half-away-from-zero rule applied at save time.
unsigned char quantize_u8(double v);

}  // namespace lichi

#endif
