#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sidar/error.hpp"

namespace sidar {

// 8-bit raster, row-major, 1 (gray/mask) or 3 (RGB) channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int w, int h, int c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {}

  std::uint8_t& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  bool empty() const { return data.empty(); }
  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

// Linear-light accumulation buffer used before tone mapping.
struct ImageF {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  ImageF() = default;
  ImageF(int w, int h, int c)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, 0.0f) {}

  float& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

// sRGB transfer functions (IEC 61966-2-1).
inline double srgb_decode(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

inline double srgb_encode(double v) {
  return v <= 0.0031308 ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

inline double srgb_u8_to_linear(std::uint8_t v) { return srgb_decode(v / 255.0); }

inline std::uint8_t linear_to_srgb_u8(double v) {
  v = std::clamp(v, 0.0, 1.0);
  const double e = srgb_encode(v);
  return static_cast<std::uint8_t>(std::lround(e * 255.0));
}

// Clamp linear radiance to [0,1], sRGB-encode to 8 bits.
inline Image tonemap(const ImageF& hdr) {
  Image out(hdr.width, hdr.height, hdr.channels);
  for (std::size_t i = 0; i < hdr.data.size(); ++i)
    out.data[i] = linear_to_srgb_u8(static_cast<double>(hdr.data[i]));
  return out;
}

// Mean absolute difference in [0,1] over pixels at least `margin` pixels away
// from the border. The standard photometric comparison used by the tests.
inline double mean_abs_diff(const Image& a, const Image& b, int margin = 0) {
  if (!a.same_shape(b)) raise(errc::invalid_dimension, "image shapes differ");
  double sum = 0.0;
  std::size_t count = 0;
  for (int y = margin; y < a.height - margin; ++y)
    for (int x = margin; x < a.width - margin; ++x)
      for (int c = 0; c < a.channels; ++c) {
        sum += std::abs(static_cast<int>(a.at(x, y, c)) - static_cast<int>(b.at(x, y, c)));
        ++count;
      }
  return count ? sum / (255.0 * static_cast<double>(count)) : 0.0;
}

}  // namespace sidar
