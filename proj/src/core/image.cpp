// Copyright (c) 2026 The docrestore Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "docrestore/core/image.h"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>

#include "docrestore/core/annotation_io.h"
#include "docrestore/core/errors.h"

namespace docrestore {

Image::Image(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0 || (channels != 1 && channels != 3)) {
    throw ContractError("invalid image shape");
  }
  pixels_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

double Image::luminance(int x, int y) const {
  if (channels_ == 1) return at(x, y);
  double sum = 0;
  for (int c = 0; c < channels_; ++c) sum += at(x, y, c);
  return sum / channels_;
}

void Image::set_pixel(int x, int y, std::span<const std::uint8_t> value) {
  for (int c = 0; c < channels_; ++c) {
    at(x, y, c) = value[value.size() == 1 ? 0 : static_cast<std::size_t>(c)];
  }
}

Image Image::crop(const PixelRect& rect) const {
  if (rect.x0 < 0 || rect.y0 < 0 || rect.x1 > width_ || rect.y1 > height_ || rect.empty()) {
    throw ContractError("crop rectangle outside image");
  }
  Image out(rect.width(), rect.height(), channels_);
  const std::size_t row_bytes = static_cast<std::size_t>(rect.width()) * channels_;
  for (int y = 0; y < rect.height(); ++y) {
    std::memcpy(out.row(y), row(rect.y0 + y) + static_cast<std::size_t>(rect.x0) * channels_, row_bytes);
  }
  return out;
}

void Image::paste(const Image& src, int x0, int y0) {
  if (src.channels_ != channels_ || x0 < 0 || y0 < 0 || x0 + src.width_ > width_ ||
      y0 + src.height_ > height_) {
    throw ContractError("paste outside image");
  }
  const std::size_t row_bytes = static_cast<std::size_t>(src.width_) * channels_;
  for (int y = 0; y < src.height_; ++y) {
    std::memcpy(row(y0 + y) + static_cast<std::size_t>(x0) * channels_, src.row(y), row_bytes);
  }
}

void Image::paste_masked(const Image& src, const Image& mask, int x0, int y0) {
  if (src.width_ != mask.width_ || src.height_ != mask.height_ || mask.channels_ != 1) {
    throw ContractError("mask shape differs from source");
  }
  if (src.channels_ != channels_ || x0 < 0 || y0 < 0 || x0 + src.width_ > width_ ||
      y0 + src.height_ > height_) {
    throw ContractError("paste outside image");
  }
  for (int y = 0; y < src.height_; ++y) {
    for (int x = 0; x < src.width_; ++x) {
      if (!mask.at(x, y)) continue;
      for (int c = 0; c < channels_; ++c) at(x0 + x, y0 + y, c) = src.at(x, y, c);
    }
  }
}

namespace {

struct PngReadBuffer {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void read_from_buffer(png_structp png, png_bytep out, png_size_t length) {
  auto* buf = static_cast<PngReadBuffer*>(png_get_io_ptr(png));
  if (buf->offset + length > buf->bytes.size()) png_error(png, "truncated PNG");
  std::memcpy(out, buf->bytes.data() + buf->offset, length);
  buf->offset += length;
}

void write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

[[noreturn]] void png_fail(png_structp, png_const_charp msg) { throw Error(std::string("png: ") + msg); }
void png_warn(png_structp, png_const_charp) {}

}  // namespace

Image decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error("png: not a PNG stream");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* p;
    png_infop* i;
    ~Guard() { png_destroy_read_struct(p, i, nullptr); }
  } guard{&png, &info};

  PngReadBuffer buf{bytes, 0};
  png_set_read_fn(png, &buf, read_from_buffer);
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_packing(png);
  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) throw Error("png: unsupported channel count");

  Image image(width, height, channels);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[static_cast<std::size_t>(y)] = &image.at(0, y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  return image;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  if (image.empty()) throw ContractError("cannot encode empty image");
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* p;
    png_infop* i;
    ~Guard() { png_destroy_write_struct(p, i); }
  } guard{&png, &info};

  png_set_write_fn(png, &out, write_to_vector, flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), 8,
               image.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height(); ++y) {
    png_write_row(png, const_cast<png_bytep>(image.row(y)));
  }
  png_write_end(png, nullptr);
  return out;
}

Image read_png(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "rb"), std::fclose);
  if (!f) throw Error("cannot open image " + path.string());
  std::vector<std::uint8_t> bytes;
  std::uint8_t chunk[1 << 16];
  std::size_t n;
  while ((n = std::fread(chunk, 1, sizeof chunk, f.get())) > 0) bytes.insert(bytes.end(), chunk, chunk + n);
  return decode_png(bytes);
}

void write_png(const Image& image, const std::filesystem::path& path) {
  const auto bytes = encode_png(image);
  const auto tmp = temp_sibling(path).string();
  {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(tmp.c_str(), "wb"), std::fclose);
    if (!f) throw Error("cannot write image " + path.string());
    if (std::fwrite(bytes.data(), 1, bytes.size(), f.get()) != bytes.size()) {
      throw Error("short write to " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace docrestore
