#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cubetti {

// Channel values are stored scaled by 3 so the grayscale channel (the mean of
// R, G and B) stays an exact integer: stored = 3*component for R/G/B and
// r+g+b for gray. All threshold comparisons are then exact integer compares.
constexpr int kScale = 3;
constexpr int kMaxScaledValue = 765;  // 3 * 255

enum class Channel { Red, Green, Blue, Gray };

const char* channel_name(Channel c);
Channel channel_from_name(const std::string& name);

struct RgbImage {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;  // interleaved r,g,b, row-major

  std::size_t pixel_count() const { return static_cast<std::size_t>(rows) * cols; }
  std::uint8_t r(int i, int j) const { return data[3 * (static_cast<std::size_t>(i) * cols + j) + 0]; }
  std::uint8_t g(int i, int j) const { return data[3 * (static_cast<std::size_t>(i) * cols + j) + 1]; }
  std::uint8_t b(int i, int j) const { return data[3 * (static_cast<std::size_t>(i) * cols + j) + 2]; }
  void set(int i, int j, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    std::size_t base = 3 * (static_cast<std::size_t>(i) * cols + j);
    data[base] = r;
    data[base + 1] = g;
    data[base + 2] = b;
  }
  bool monochrome() const;
};

// rows, cols >= 1; pixels zero-initialized
RgbImage make_rgb_image(int rows, int cols);

struct ChannelMatrix {
  int rows = 0;
  int cols = 0;
  Channel channel = Channel::Gray;
  std::vector<int> values;  // scaled, each in [0, 765]

  int at(int i, int j) const { return values[static_cast<std::size_t>(i) * cols + j]; }
};

enum class ImageFormat { PgmAscii, PgmBinary, PpmAscii, PpmBinary, Csv };

// Netpbm P2/P3/P5/P6 with maxval 255, or a plain CSV integer matrix
// (grayscale). Grayscale inputs are promoted to RgbImage with r=g=b.
// Parse errors report the byte offset of the offending data.
RgbImage load_image(const std::string& path, ImageFormat format);

// Picks the format by magic bytes (P2/P3/P5/P6) or a .csv extension.
RgbImage load_image_auto(const std::string& path);

// Grayscale-only formats (P2/P5/CSV) require a monochrome image.
void save_image(const RgbImage& img, const std::string& path, ImageFormat format);

ChannelMatrix extract_channel(const RgbImage& img, Channel channel);

}  // namespace cubetti
