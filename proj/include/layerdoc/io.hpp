#pragma once

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "layerdoc/error.hpp"
#include "layerdoc/image.hpp"

namespace layerdoc {

namespace detail {

static_assert(sizeof(Rgb) == 3, "Rgb must be a packed 3-byte pixel");

struct FileHandle {
  std::FILE* f = nullptr;

  FileHandle(const std::filesystem::path& path, const char* mode) {
    f = std::fopen(path.c_str(), mode);
    if (!f) {
      fail(ErrorKind::io, std::string("cannot open ") + path.string());
    }
  }
  FileHandle(const FileHandle&) = delete;
  FileHandle& operator=(const FileHandle&) = delete;
  ~FileHandle() {
    if (f) std::fclose(f);
  }
};

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit_fn(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

inline Raster load_png_file(const std::filesystem::path& path) {
  FileHandle file(path, "rb");
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(ErrorKind::io, "libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(ErrorKind::io, "libpng: out of memory");
  }

  Raster out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::io, "cannot decode PNG: " + path.string());
  }

  png_init_io(png, file.f);
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  // Normalize every input to 8-bit RGB.
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY ||
      color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  if (png_get_rowbytes(png, info) != static_cast<std::size_t>(w) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::io, "cannot normalize PNG to RGB: " + path.string());
  }

  out = Raster(static_cast<int>(w), static_cast<int>(h));
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) {
    rows[y] = reinterpret_cast<png_bytep>(out.px.data()) +
              static_cast<std::size_t>(y) * w * 3;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

inline Raster load_jpeg_file(const std::filesystem::path& path) {
  FileHandle file(path, "rb");
  jpeg_decompress_struct cinfo;
  JpegErrorMgr jerr;
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = jpeg_error_exit_fn;

  Raster out;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_decompress(&cinfo);
    fail(ErrorKind::io,
         "cannot decode JPEG: " + path.string() + ": " + jerr.message);
  }

  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.f);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  out = Raster(static_cast<int>(cinfo.output_width),
               static_cast<int>(cinfo.output_height));
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = reinterpret_cast<JSAMPROW>(
        out.px.data() +
        static_cast<std::size_t>(cinfo.output_scanline) * out.width);
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return out;
}

/// Fixed compression level so repeated runs produce byte-identical files.
inline constexpr int png_compression_level = 4;

inline void save_png(const std::filesystem::path& path, int width, int height,
                     int color_type, const std::uint8_t* data,
                     std::size_t row_bytes) {
  FileHandle file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  if (!png) fail(ErrorKind::io, "libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(ErrorKind::io, "libpng: out of memory");
  }

  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorKind::io, "cannot write PNG: " + path.string());
  }

  png_init_io(png, file.f);
  png_set_compression_level(png, png_compression_level);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  rows.resize(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(data + static_cast<std::size_t>(y) *
                                               row_bytes);
  }
  png_write_image(png, rows.data());
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

}  // namespace detail

/// Decodes a PNG or JPEG file (sniffed by magic bytes) to 8-bit RGB.
inline Raster load_image(const std::filesystem::path& path) {
  unsigned char magic[8] = {0};
  {
    detail::FileHandle file(path, "rb");
    if (std::fread(magic, 1, sizeof(magic), file.f) < 2) {
      fail(ErrorKind::io, "cannot read " + path.string());
    }
  }
  if (png_sig_cmp(magic, 0, 8) == 0) return detail::load_png_file(path);
  if (magic[0] == 0xFF && magic[1] == 0xD8) return detail::load_jpeg_file(path);
  fail(ErrorKind::io,
       "unsupported image format (expected PNG or JPEG): " + path.string());
}

inline void save_png_rgb(const std::filesystem::path& path,
                         const Raster& raster) {
  if (raster.empty()) fail(ErrorKind::domain, "save_png_rgb: empty raster");
  detail::save_png(path, raster.width, raster.height, PNG_COLOR_TYPE_RGB,
                   reinterpret_cast<const std::uint8_t*>(raster.px.data()),
                   static_cast<std::size_t>(raster.width) * 3);
}

/// Machine-readable mask: single-channel PNG holding raw class codes 0-3.
inline void save_png_gray(const std::filesystem::path& path, const Mask& mask) {
  if (mask.empty()) fail(ErrorKind::domain, "save_png_gray: empty mask");
  detail::save_png(path, mask.width, mask.height, PNG_COLOR_TYPE_GRAY,
                   mask.v.data(), static_cast<std::size_t>(mask.width));
}

/// Reads a class-code mask PNG. Accepts single-channel files (or RGB files
/// whose channels agree) and requires every code to be in 0-3.
inline Mask load_mask_png(const std::filesystem::path& path) {
  Raster rgb = load_image(path);
  Mask m(rgb.width, rgb.height);
  for (std::size_t i = 0; i < rgb.px.size(); ++i) {
    const Rgb c = rgb.px[i];
    if (c.r != c.g || c.g != c.b) {
      fail(ErrorKind::validation,
           "mask is not single-channel: " + path.string());
    }
    if (c.r > 3) {
      fail(ErrorKind::validation, "mask class code " + std::to_string(c.r) +
                                      " out of range 0-3: " + path.string());
    }
    m.v[i] = c.r;
  }
  return m;
}

}  // namespace layerdoc
