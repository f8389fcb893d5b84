#include "descriptors/gradient.hpp"

#include <cmath>
#include <numbers>

namespace vprkit::detail {

GradientField compute_gradients(const GrayImage& image) {
  GradientField f;
  f.width = image.width();
  f.height = image.height();
  const std::size_t n = image.size();
  f.magnitude.resize(n);
  f.orientation.resize(n);
  constexpr double kDegrees = 180.0 / std::numbers::pi;
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const double gx = static_cast<double>(image.clamped(x + 1, y)) - image.clamped(x - 1, y);
      const double gy = static_cast<double>(image.clamped(x, y + 1)) - image.clamped(x, y - 1);
      double theta = std::atan2(gy, gx) * kDegrees;
      if (theta < 0.0) theta += 180.0;
      if (theta >= 180.0) theta -= 180.0;
      const std::size_t i = static_cast<std::size_t>(y) * f.width + x;
      f.magnitude[i] = std::hypot(gx, gy);
      f.orientation[i] = theta;
    }
  }
  return f;
}

void accumulate_cell(const GradientField& field, int x0, int y0, int side,
                     std::span<double> hist) {
  const int bins = static_cast<int>(hist.size());
  const double bin_width = 180.0 / bins;
  for (int y = y0; y < y0 + side; ++y) {
    for (int x = x0; x < x0 + side; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * field.width + x;
      const double m = field.magnitude[i];
      if (m == 0.0) continue;
      const double pos = field.orientation[i] / bin_width;
      const int lo = static_cast<int>(std::floor(pos));
      const double frac = pos - lo;
      hist[lo % bins] += m * (1.0 - frac);
      hist[(lo + 1) % bins] += m * frac;
    }
  }
}

void l2_normalize(std::span<double> v, double epsilon) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double scale = 1.0 / std::sqrt(sq + epsilon * epsilon);
  for (double& x : v) x *= scale;
}

}  // namespace vprkit::detail
