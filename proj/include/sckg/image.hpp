#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace sckg {

/// 8-bit RGBA raster, row-major, no padding.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgba;

  Image() = default;
  Image(int w, int h);

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::uint8_t* pixel(int x, int y) {
    return rgba.data() + (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                          static_cast<std::size_t>(x)) * 4;
  }
  const std::uint8_t* pixel(int x, int y) const {
    return rgba.data() + (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                          static_cast<std::size_t>(x)) * 4;
  }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a = 255);

  friend bool operator==(const Image&, const Image&) = default;
};

/// Decodes PNG or JPEG (sniffed from the file signature) to RGBA.
/// Throws Error(kImageDecode) or Error(kIo).
Image decode_image(const std::filesystem::path& path);

/// Writes an 8-bit RGBA PNG with fixed compression settings and no
/// timestamp chunk, so equal images give equal bytes.
void write_png(const std::filesystem::path& path, const Image& image);

/// Baseline JPEG writer; used to produce fixtures.
void write_jpeg(const std::filesystem::path& path, const Image& image, int quality = 95);

}  // namespace sckg
