#include <algorithm>
#include <cmath>
#include <numbers>

#include "vprkit/dataset.hpp"
#include "vprkit/error.hpp"

namespace vprkit {

namespace {

// splitmix64: fixed, portable stream for scene layout.
class SceneRng {
 public:
  explicit SceneRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }

 private:
  std::uint64_t state_;
};

class LatticeNoise {
 public:
  LatticeNoise(SceneRng& rng, int cells) : cells_(cells), values_((cells + 1) * (cells + 1)) {
    for (double& v : values_) v = rng.uniform(-1.0, 1.0);
  }

  double operator()(double u, double v) const noexcept {
    const double x = std::clamp(u, 0.0, 1.0) * cells_;
    const double y = std::clamp(v, 0.0, 1.0) * cells_;
    const int x0 = std::min(static_cast<int>(x), cells_ - 1);
    const int y0 = std::min(static_cast<int>(y), cells_ - 1);
    const double fx = smooth(x - x0);
    const double fy = smooth(y - y0);
    auto at = [&](int i, int j) { return values_[static_cast<std::size_t>(j) * (cells_ + 1) + i]; };
    const double top = at(x0, y0) * (1 - fx) + at(x0 + 1, y0) * fx;
    const double bottom = at(x0, y0 + 1) * (1 - fx) + at(x0 + 1, y0 + 1) * fx;
    return top * (1 - fy) + bottom * fy;
  }

 private:
  static double smooth(double t) noexcept { return t * t * (3.0 - 2.0 * t); }

  int cells_;
  std::vector<double> values_;
};

struct Box {
  double x0, y0, x1, y1, level;
};
struct Ellipse {
  double cx, cy, rx, ry, level;
};

}  // namespace

GrayImage render_scene(std::uint64_t seed, int side, double gain, double bias) {
  if (side < 1) throw InvalidArgument("scene side must be >= 1");
  SceneRng rng(seed);

  const double base = rng.uniform(0.25, 0.55);
  const double slope_u = rng.uniform(-0.3, 0.3);
  const double slope_v = rng.uniform(-0.3, 0.3);

  std::vector<Box> boxes(10);
  for (Box& b : boxes) {
    const double w = rng.uniform(0.06, 0.35);
    const double h = rng.uniform(0.06, 0.35);
    b.x0 = rng.uniform(0.0, 1.0 - w);
    b.y0 = rng.uniform(0.0, 1.0 - h);
    b.x1 = b.x0 + w;
    b.y1 = b.y0 + h;
    b.level = rng.uniform(0.05, 0.95);
  }
  std::vector<Ellipse> ellipses(5);
  for (Ellipse& e : ellipses) {
    e.cx = rng.uniform(0.1, 0.9);
    e.cy = rng.uniform(0.1, 0.9);
    e.rx = rng.uniform(0.04, 0.2);
    e.ry = rng.uniform(0.04, 0.2);
    e.level = rng.uniform(0.05, 0.95);
  }
  const double grating_freq = rng.uniform(6.0, 20.0);
  const double grating_angle = rng.uniform(0.0, std::numbers::pi);
  const double gx0 = rng.uniform(0.0, 0.6), gy0 = rng.uniform(0.0, 0.6);
  const LatticeNoise coarse(rng, 32);
  const LatticeNoise fine(rng, 128);

  const double gc = std::cos(grating_angle), gs = std::sin(grating_angle);
  GrayImage img(side, side, 0.0f);
  for (int y = 0; y < side; ++y) {
    const double v = (y + 0.5) / side;
    for (int x = 0; x < side; ++x) {
      const double u = (x + 0.5) / side;
      double value = base + slope_u * (u - 0.5) + slope_v * (v - 0.5);
      for (const Box& b : boxes) {
        if (u >= b.x0 && u < b.x1 && v >= b.y0 && v < b.y1) value = b.level;
      }
      for (const Ellipse& e : ellipses) {
        const double du = (u - e.cx) / e.rx, dv = (v - e.cy) / e.ry;
        if (du * du + dv * dv <= 1.0) value = e.level;
      }
      if (u >= gx0 && u < gx0 + 0.4 && v >= gy0 && v < gy0 + 0.4) {
        value += 0.15 * std::sin(2.0 * std::numbers::pi * grating_freq * (u * gc + v * gs));
      }
      value += 0.06 * coarse(u, v) + 0.04 * fine(u, v);
      value = std::clamp(gain * std::clamp(value, 0.0, 1.0) + bias, 0.0, 1.0);
      // 8-bit quantisation, matching what a PNG round trip yields.
      img.at(x, y) = static_cast<float>(std::lround(value * 255.0) * (1.0 / 255.0));
    }
  }
  return img;
}

}  // namespace vprkit
