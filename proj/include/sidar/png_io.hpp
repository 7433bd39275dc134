#pragma once

// Minimal image file I/O: 8-bit PNG read/write via libpng, JPEG read via
// libjpeg (corpora are commonly JPEG). Gray and RGB only; alpha is dropped.

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#ifdef SIDAR_HAVE_JPEG
#include <jpeglib.h>
#endif

#include "sidar/error.hpp"
#include "sidar/image.hpp"

namespace sidar {

namespace io_detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline bool has_png_magic(const unsigned char* bytes, std::size_t n) {
  return n >= 8 && png_sig_cmp(bytes, 0, 8) == 0;
}

inline bool has_jpeg_magic(const unsigned char* bytes, std::size_t n) {
  return n >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff;
}

}  // namespace io_detail

inline Image read_png(const std::filesystem::path& path) {
  io_detail::FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) raise(errc::unreadable_image, "cannot open " + path.string());

  unsigned char header[8] = {};
  if (std::fread(header, 1, 8, file.get()) != 8 || !io_detail::has_png_magic(header, 8))
    raise(errc::unreadable_image, "not a PNG file: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(errc::unreadable_image, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(errc::unreadable_image, "corrupt PNG: " + path.string());
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int channels = static_cast<int>(png_get_channels(png, info));
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(errc::unreadable_image, "unsupported channel count in " + path.string());
  }

  Image img(width, height, channels);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y)
    rows[static_cast<std::size_t>(y)] =
        img.data.data() + static_cast<std::size_t>(y) * width * channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

inline void write_png(const std::filesystem::path& path, const Image& img) {
  if (img.empty() || (img.channels != 1 && img.channels != 3))
    raise(errc::io_failure, "write_png: image must be non-empty gray or RGB");
  io_detail::FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) raise(errc::io_failure, "cannot create " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    raise(errc::io_failure, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    raise(errc::io_failure, "PNG write failed: " + path.string());
  }

  png_init_io(png, file.get());
  // Fixed compression settings keep the byte stream reproducible.
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_SUB);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
  for (int y = 0; y < img.height; ++y)
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(
        img.data.data() + static_cast<std::size_t>(y) * img.width * img.channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

#ifdef SIDAR_HAVE_JPEG
namespace io_detail {

struct JpegErr {
  jpeg_error_mgr mgr;
  std::jmp_buf env;
  char msg[JMSG_LENGTH_MAX];
};

inline void jpeg_error_longjmp(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->msg);
  std::longjmp(err->env, 1);
}

}  // namespace io_detail

inline Image read_jpeg(const std::filesystem::path& path) {
  io_detail::FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) raise(errc::unreadable_image, "cannot open " + path.string());

  jpeg_decompress_struct cinfo{};
  io_detail::JpegErr err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = io_detail::jpeg_error_longjmp;

  Image img;
  if (setjmp(err.env)) {
    jpeg_destroy_decompress(&cinfo);
    raise(errc::unreadable_image, std::string("JPEG: ") + err.msg + " in " + path.string());
  }

  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  img = Image(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height),
              static_cast<int>(cinfo.output_components));
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = img.data.data() + static_cast<std::size_t>(cinfo.output_scanline) *
                                         img.width * img.channels;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return img;
}
#endif

// Dispatch on magic bytes; extension is not trusted.
inline Image read_image(const std::filesystem::path& path) {
  io_detail::FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) raise(errc::unreadable_image, "cannot open " + path.string());
  unsigned char magic[8] = {};
  const std::size_t n = std::fread(magic, 1, sizeof(magic), file.get());
  file.reset();
  if (io_detail::has_png_magic(magic, n)) return read_png(path);
#ifdef SIDAR_HAVE_JPEG
  if (io_detail::has_jpeg_magic(magic, n)) return read_jpeg(path);
#endif
  raise(errc::unreadable_image, "unrecognized image format: " + path.string());
}

}  // namespace sidar
