#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "unroll/io.hpp"

namespace unroll {

Image read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&image, path.c_str()) == 0) {
    throw IoError("cannot read PNG '" + path.string() + "': " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  // Read alpha explicitly and skip it; letting libpng strip it would composite over black.
  image.format = (color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY) | (alpha ? PNG_FORMAT_FLAG_ALPHA : 0U);
  const int channels = color ? 3 : 1;
  const int stride = channels + (alpha ? 1 : 0);
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr) == 0) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG '" + path.string() + "': " + msg);
  }
  const int h = static_cast<int>(image.height);
  const int w = static_cast<int>(image.width);
  Image out(h, w, channels);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t base =
          (static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)) *
          static_cast<std::size_t>(stride);
      for (int c = 0; c < channels; ++c) {
        out.at(c, y, x) = buffer[base + static_cast<std::size_t>(c)] / 255.0;
      }
    }
  }
  return out;
}

void write_png(const std::filesystem::path& path, const Image& img) {
  if (img.channels() != 1 && img.channels() != 3) {
    throw DimensionError("PNG export supports 1 or 3 channels");
  }
  const int channels = img.channels();
  const int h = img.height();
  const int w = img.width();
  std::vector<std::uint8_t> buffer(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
                                   static_cast<std::size_t>(channels));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        const double v = std::clamp(img.at(c, y, x), 0.0, 1.0);
        buffer[(static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                static_cast<std::size_t>(x)) *
                   static_cast<std::size_t>(channels) +
               static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
    }
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr) == 0) {
    throw IoError("cannot write PNG '" + path.string() + "': " + image.message);
  }
}

}  // namespace unroll
