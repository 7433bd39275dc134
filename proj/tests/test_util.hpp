#pragma once

// Shared test fixtures: procedural textures, temp directories, corpora.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sidar/image.hpp>
#include <sidar/png_io.hpp>
#include <sidar/rng.hpp>

namespace sidar::test {

namespace fs = std::filesystem;

// Smooth natural-looking RGB texture: gradients plus a few soft blobs and a
// low-frequency wave. Variant changes the layout.
inline Image make_texture(int w, int h, int variant = 0) {
  Image img(w, h, 3);
  Pcg32 rng(derive_seed(0x5eedu, stream_tag("texture"), static_cast<std::uint64_t>(variant)));
  struct Blob {
    double x, y, r, amp[3];
  };
  Blob blobs[4];
  for (auto& b : blobs) {
    b.x = rng.uniform(0.15, 0.85);
    b.y = rng.uniform(0.15, 0.85);
    b.r = rng.uniform(0.08, 0.25);
    for (double& a : b.amp) a = rng.uniform(-0.35, 0.35);
  }
  const double phase = rng.uniform(0.0, 6.28);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double u = (x + 0.5) / w;
      const double v = (y + 0.5) / h;
      double rgb[3] = {0.25 + 0.5 * u, 0.3 + 0.4 * v,
                       0.45 + 0.2 * std::sin(6.0 * u + 4.0 * v + phase)};
      for (const auto& b : blobs) {
        const double d2 = (u - b.x) * (u - b.x) + (v - b.y) * (v - b.y);
        const double g = std::exp(-d2 / (2.0 * b.r * b.r));
        for (int c = 0; c < 3; ++c) rgb[c] += b.amp[c] * g;
      }
      for (int c = 0; c < 3; ++c)
        img.at(x, y, c) = static_cast<std::uint8_t>(
            std::lround(std::clamp(rgb[c], 0.0, 1.0) * 255.0));
    }
  }
  return img;
}

inline Image make_uniform_texture(int w, int h, std::uint8_t value) {
  Image img(w, h, 3, value);
  return img;
}

class TempDir {
 public:
  explicit TempDir(const std::string& hint) {
    path_ = fs::temp_directory_path() /
            ("sidar_test_" + hint + "_" + std::to_string(counter()++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path path_;
};

inline void write_corpus(const fs::path& dir, int count, int w = 96, int h = 96) {
  fs::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "tex_%03d.png", i);
    write_png(dir / name, make_texture(w, h, i));
  }
}

}  // namespace sidar::test
