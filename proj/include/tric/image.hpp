#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tric/common.hpp"

namespace tric {

// Dense 8-bit RGB raster, row-major, 3 channels. The unit every filter and
// augmentation acts on.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;  // width * height * 3

  Image() = default;
  Image(int w, int h) : width(w), height(h), data(static_cast<size_t>(w) * h * 3, 0) {}

  static Image filled(int w, int h, std::array<uint8_t, 3> rgb) {
    Image img(w, h);
    for (size_t i = 0; i < img.data.size(); i += 3) {
      img.data[i] = rgb[0];
      img.data[i + 1] = rgb[1];
      img.data[i + 2] = rgb[2];
    }
    return img;
  }

  size_t pixel_count() const { return static_cast<size_t>(width) * height; }

  uint8_t& at(int x, int y, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
  uint8_t at(int x, int y, int c) const {
    return data[(static_cast<size_t>(y) * width + x) * 3 + c];
  }

  bool same_size(const Image& other) const {
    return width == other.width && height == other.height;
  }

  bool operator==(const Image& other) const {
    return width == other.width && height == other.height && data == other.data;
  }
};

// ITU-R BT.601 luma, kept in floating point.
inline double luma601(uint8_t r, uint8_t g, uint8_t b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

inline double luma_at(const Image& img, int x, int y) {
  return luma601(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2));
}

inline void require_same_size(const Image& a, const Image& b, const char* op) {
  if (!a.same_size(b)) {
    fail(Errc::size_mismatch, std::string(op) + ": " + std::to_string(a.width) + "x" +
                                  std::to_string(a.height) + " vs " + std::to_string(b.width) +
                                  "x" + std::to_string(b.height));
  }
}

}  // namespace tric
