#pragma once

// Inverse warping of images under a homography, with a validity channel
// marking target pixels whose preimage falls outside the source raster.

#include <cmath>

#include "sidar/geometry.hpp"
#include "sidar/image.hpp"

namespace sidar {

struct WarpResult {
  Image image;     // same channel count as the source
  Image validity;  // 1 channel, 255 = valid, 0 = outside the source
};

namespace detail {

// Bilinear sample at continuous pixel coordinates ((u,v) in [0,W]x[0,H],
// texel centers at half-integers). Caller guarantees the footprint is in
// range: u in [0.5, W-0.5], v in [0.5, H-0.5].
inline void bilinear_u8(const Image& src, double u, double v, double* out) {
  const double gx = u - 0.5;
  const double gy = v - 0.5;
  int x0 = static_cast<int>(std::floor(gx));
  int y0 = static_cast<int>(std::floor(gy));
  const double fx = gx - x0;
  const double fy = gy - y0;
  const int x1 = std::min(x0 + 1, src.width - 1);
  const int y1 = std::min(y0 + 1, src.height - 1);
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  for (int c = 0; c < src.channels; ++c) {
    const double top = (1.0 - fx) * src.at(x0, y0, c) + fx * src.at(x1, y0, c);
    const double bot = (1.0 - fx) * src.at(x0, y1, c) + fx * src.at(x1, y1, c);
    out[c] = (1.0 - fy) * top + fy * bot;
  }
}

}  // namespace detail

// For each target pixel p the source is sampled at H^-1 p. H maps source
// pixels to target pixels. Out-of-source pixels get the fill color and a
// zero validity flag; points mapping behind the source camera (sign flip of
// the homogeneous scale relative to the target center) are invalid too.
inline WarpResult warp_image(const Image& source, const Homography& homography,
                             int target_width, int target_height,
                             std::uint8_t fill = 0) {
  if (source.empty()) raise(errc::invalid_dimension, "warp_image: empty source");
  if (target_width <= 0 || target_height <= 0)
    raise(errc::invalid_dimension, "warp_image: empty target resolution");

  const Mat3 h_inv = invert(homography).matrix();

  // Reference sign of the homogeneous scale at the target center.
  const Vec3 center = h_inv * Vec3(target_width / 2.0, target_height / 2.0, 1.0);
  const double ref_sign = center.z() >= 0.0 ? 1.0 : -1.0;

  WarpResult r;
  r.image = Image(target_width, target_height, source.channels, fill);
  r.validity = Image(target_width, target_height, 1, 0);

  double sample[4] = {0, 0, 0, 0};
  for (int y = 0; y < target_height; ++y) {
    for (int x = 0; x < target_width; ++x) {
      const Vec3 q = h_inv * Vec3(x + 0.5, y + 0.5, 1.0);
      const double w = q.z() * ref_sign;
      if (!(w > 1e-12)) continue;
      const double u = q.x() * ref_sign / w;
      const double v = q.y() * ref_sign / w;
      if (!(u >= 0.5 && u <= source.width - 0.5 && v >= 0.5 && v <= source.height - 0.5))
        continue;
      detail::bilinear_u8(source, u, v, sample);
      for (int c = 0; c < source.channels; ++c)
        r.image.at(x, y, c) = static_cast<std::uint8_t>(std::lround(sample[c]));
      r.validity.at(x, y) = 255;
    }
  }
  return r;
}

// Shrink a validity mask by `radius` pixels (used to compare warped images
// away from interpolation boundaries).
inline Image erode_validity(const Image& validity, int radius) {
  Image out(validity.width, validity.height, 1, 0);
  for (int y = 0; y < validity.height; ++y)
    for (int x = 0; x < validity.width; ++x) {
      bool keep = true;
      for (int dy = -radius; keep && dy <= radius; ++dy)
        for (int dx = -radius; keep && dx <= radius; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= validity.width || ny >= validity.height ||
              validity.at(nx, ny) == 0)
            keep = false;
        }
      if (keep) out.at(x, y) = 255;
    }
  return out;
}

}  // namespace sidar
