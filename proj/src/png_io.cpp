#include "ati/png_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <png.h>

#include "ati/file_util.hpp"

namespace ati {

namespace {

std::string write_png(int width, int height, png_uint_32 format, const std::uint8_t* pixels) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0, nullptr)) {
    throw Error(std::string("png encode failed: ") + image.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0, nullptr)) {
    throw Error(std::string("png encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

std::string encode_png(const Image& img) {
  if (img.empty()) throw DimensionError("cannot encode an empty image");
  std::vector<std::uint8_t> bytes(img.values().size());
  for (std::size_t k = 0; k < bytes.size(); ++k) {
    bytes[k] = static_cast<std::uint8_t>(std::lround(std::clamp(img.values()[k], 0.0, 1.0) * 255.0));
  }
  return write_png(img.width(), img.height(), PNG_FORMAT_RGB, bytes.data());
}

std::string encode_png_gray(int width, int height, const std::vector<std::uint8_t>& pixels) {
  if (width < 1 || height < 1 || pixels.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("grayscale buffer does not match its dimensions");
  }
  return write_png(width, height, PNG_FORMAT_GRAY, pixels.data());
}

Image decode_png(std::string_view bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw FormatError(std::string("invalid PNG: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw FormatError(std::string("invalid PNG: ") + image.message);
  }
  Image img(static_cast<int>(image.width), static_cast<int>(image.height));
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = buf[(static_cast<std::size_t>(y) * img.width() + x) * 3 + c] / 255.0;
      }
    }
  }
  return img;
}

void save_png(const std::filesystem::path& path, const Image& img) {
  write_file_atomic(path, encode_png(img));
}

Image load_png(const std::filesystem::path& path) { return decode_png(read_file(path)); }

}  // namespace ati
