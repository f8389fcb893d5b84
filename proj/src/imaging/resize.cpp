#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vprkit/error.hpp"
#include "vprkit/image.hpp"

namespace vprkit {

namespace {

struct Tap {
  int index;
  double weight;
};

// One output sample along an axis: its contributing input samples.
using AxisTaps = std::vector<std::vector<Tap>>;

AxisTaps area_taps(int in, int out) {
  const double scale = static_cast<double>(in) / out;
  AxisTaps taps(out);
  for (int i = 0; i < out; ++i) {
    const double lo = i * scale;
    const double hi = (i + 1) * scale;
    const int first = static_cast<int>(std::floor(lo));
    const int last = std::min(in - 1, static_cast<int>(std::ceil(hi)) - 1);
    for (int j = first; j <= last; ++j) {
      const double overlap = std::min(hi, j + 1.0) - std::max(lo, static_cast<double>(j));
      if (overlap > 0.0) taps[i].push_back({j, overlap / scale});
    }
  }
  return taps;
}

AxisTaps bilinear_taps(int in, int out) {
  const double scale = static_cast<double>(in) / out;
  AxisTaps taps(out);
  for (int i = 0; i < out; ++i) {
    double src = (i + 0.5) * scale - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(in - 1));
    const int j0 = static_cast<int>(std::floor(src));
    const double frac = src - j0;
    if (frac > 0.0 && j0 + 1 < in) {
      taps[i].push_back({j0, 1.0 - frac});
      taps[i].push_back({j0 + 1, frac});
    } else {
      taps[i].push_back({j0, 1.0});
    }
  }
  return taps;
}

AxisTaps make_taps(int in, int out) {
  if (out < in) return area_taps(in, out);
  if (out > in) return bilinear_taps(in, out);
  AxisTaps taps(out);
  for (int i = 0; i < out; ++i) taps[i].push_back({i, 1.0});
  return taps;
}

// Weighted sum clamped to the range of its support.
template <typename Sample>
double apply(const std::vector<Tap>& taps, Sample&& sample) {
  double acc = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Tap& t : taps) {
    const double v = sample(t.index);
    acc += t.weight * v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return std::clamp(acc, lo, hi);
}

}  // namespace

GrayImage resize_to(const GrayImage& image, int width, int height) {
  if (image.empty()) throw InvalidArgument("cannot resize an empty image");
  if (width < 1 || height < 1) {
    throw InvalidArgument("resize target must be >= 1, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  if (width == image.width() && height == image.height()) return image;

  const AxisTaps xtaps = make_taps(image.width(), width);
  const AxisTaps ytaps = make_taps(image.height(), height);

  // Horizontal pass: width x source height.
  std::vector<double> tmp(static_cast<std::size_t>(width) * image.height());
  for (int y = 0; y < image.height(); ++y) {
    const auto row = image.row(y);
    for (int x = 0; x < width; ++x) {
      tmp[static_cast<std::size_t>(y) * width + x] =
          apply(xtaps[x], [&](int j) { return static_cast<double>(row[j]); });
    }
  }

  std::vector<float> out(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double v =
          apply(ytaps[y], [&](int j) { return tmp[static_cast<std::size_t>(j) * width + x]; });
      out[static_cast<std::size_t>(y) * width + x] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  return GrayImage(width, height, std::move(out));
}

GrayImage resize(const GrayImage& image, Resolution target) {
  if (target.side < 1) throw InvalidArgument("resolution side must be >= 1");
  return resize_to(image, target.side, target.side);
}

}  // namespace vprkit
