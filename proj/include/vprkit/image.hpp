#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace vprkit {

/// Owned single-channel luminance raster, row-major, values in [0, 1].
class GrayImage {
 public:
  GrayImage() = default;
  /// Filled with `value`. Throws InvalidArgument on a zero dimension or out-of-range value.
  GrayImage(int width, int height, float value = 0.0f);
  GrayImage(int width, int height, std::vector<float> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }
  std::size_t size() const noexcept { return pixels_.size(); }

  float at(int x, int y) const noexcept { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  float& at(int x, int y) noexcept { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  /// Replicated-border access.
  float clamped(int x, int y) const noexcept;

  std::span<const float> pixels() const noexcept { return pixels_; }
  std::span<float> pixels() noexcept { return pixels_; }
  std::span<const float> row(int y) const noexcept {
    return std::span<const float>(pixels_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  double mean() const noexcept;

  /// Intensities rounded to 8 bits (0..255).
  std::vector<std::uint8_t> to_u8() const;

  bool operator==(const GrayImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> pixels_;
};

/// Square target size, side x side pixels.
struct Resolution {
  int side = 0;

  constexpr explicit Resolution(int s = 0) : side(s) {}
  constexpr bool operator==(const Resolution&) const = default;
  constexpr auto operator<=>(const Resolution&) const = default;
};

/// 16x16 through 1024x1024 in powers of two.
inline constexpr std::array<Resolution, 7> kResolutionLadder = {
    Resolution{16}, Resolution{32}, Resolution{64}, Resolution{128},
    Resolution{256}, Resolution{512}, Resolution{1024}};

/// Decodes a PNG or JPEG (8 or 16 bit, gray/RGB/RGBA) into luminance
/// Y = 0.299 R + 0.587 G + 0.114 B on [0, 1]-normalized channels.
/// Throws IoError when the file cannot be read, FormatError when it cannot be decoded.
GrayImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG.
void save_png(const GrayImage& image, const std::filesystem::path& path);

/// Square resize; aspect ratio is not preserved.
GrayImage resize(const GrayImage& image, Resolution target);

/// Resize to an arbitrary width x height. Each axis independently uses area
/// averaging when shrinking and bilinear interpolation (half-pixel centres)
/// when enlarging. Output samples are clamped to the range of their support,
/// so constant regions stay exactly constant.
GrayImage resize_to(const GrayImage& image, int width, int height);

enum class Pattern { constant, vertical_edge, checkerboard, seeded_noise };

Pattern parse_pattern(std::string_view name);
std::string_view to_string(Pattern pattern) noexcept;

/// Deterministic test images:
///   constant      all pixels 0.5
///   vertical_edge left half 0, right half 1
///   checkerboard  8x8 board (square side = side / 8, min 1), top-left square dark
///   seeded_noise  i.i.d. uniform [0, 1) from a 64-bit Mersenne Twister seeded with `seed`
GrayImage synth_image(Pattern kind, int side, std::uint64_t seed = 0);

}  // namespace vprkit
