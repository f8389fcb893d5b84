#include "vprkit/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vprkit/error.hpp"

namespace vprkit {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
}

}  // namespace

GrayImage::GrayImage(int width, int height, float value) : width_(width), height_(height) {
  check_dims(width, height);
  if (!(value >= 0.0f && value <= 1.0f)) throw InvalidArgument("pixel value outside [0, 1]");
  pixels_.assign(static_cast<std::size_t>(width) * height, value);
}

GrayImage::GrayImage(int width, int height, std::vector<float> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * height) {
    throw InvalidArgument("pixel buffer length does not match width x height");
  }
  for (float p : pixels_) {
    if (!(p >= 0.0f && p <= 1.0f)) throw InvalidArgument("pixel value outside [0, 1]");
  }
}

float GrayImage::clamped(int x, int y) const noexcept {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return at(x, y);
}

double GrayImage::mean() const noexcept {
  if (pixels_.empty()) return 0.0;
  double sum = std::accumulate(pixels_.begin(), pixels_.end(), 0.0);
  return sum / static_cast<double>(pixels_.size());
}

std::vector<std::uint8_t> GrayImage::to_u8() const {
  std::vector<std::uint8_t> out(pixels_.size());
  std::transform(pixels_.begin(), pixels_.end(), out.begin(), [](float p) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(p, 0.0f, 1.0f) * 255.0f));
  });
  return out;
}

}  // namespace vprkit
