#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "vprkit/encoders.hpp"
#include "vprkit/error.hpp"

namespace vprkit {

namespace {

constexpr std::array<std::array<int, 4>, 256> kPattern = {{
#include "descriptors/orb_pattern.inc"
}};

// Bresenham circle of radius 3, clockwise from 12 o'clock (below centre in image rows).
constexpr std::array<std::array<int, 2>, 16> kCircle = {{{0, 3},  {1, 3},   {2, 2},   {3, 1},
                                                        {3, 0},  {3, -1},  {2, -2},  {1, -3},
                                                        {0, -3}, {-1, -3}, {-2, -2}, {-3, -1},
                                                        {-3, 0}, {-3, 1},  {-2, 2},  {-1, 3}}};
constexpr int kArc = 9;
constexpr int kHarrisBlock = 7;
constexpr double kHarrisK = 0.04;

struct Level {
  int width = 0;
  int height = 0;
  double scale = 1.0;  // base pixels per level pixel
  std::vector<std::uint8_t> raw;
  std::vector<std::uint8_t> smooth;

  const std::uint8_t* ptr(int x, int y) const noexcept {
    return raw.data() + static_cast<std::size_t>(y) * width + x;
  }
};

struct Candidate {
  int x;
  int y;
  int fast;
  double harris = 0.0;
};

int reflect101(int i, int n) noexcept {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - i - 2;
  }
  return i;
}

// 7x7 Gaussian, sigma 2, applied before sampling the binary tests.
std::vector<std::uint8_t> gaussian_blur(const std::vector<std::uint8_t>& src, int w, int h) {
  constexpr int kRadius = 3;
  constexpr double kSigma = 2.0;
  std::array<double, 2 * kRadius + 1> k{};
  double sum = 0.0;
  for (int i = -kRadius; i <= kRadius; ++i) {
    k[i + kRadius] = std::exp(-(i * i) / (2.0 * kSigma * kSigma));
    sum += k[i + kRadius];
  }
  for (double& v : k) v /= sum;

  std::vector<double> tmp(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -kRadius; i <= kRadius; ++i)
        acc += k[i + kRadius] * src[static_cast<std::size_t>(y) * w + reflect101(x + i, w)];
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  std::vector<std::uint8_t> out(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -kRadius; i <= kRadius; ++i)
        acc += k[i + kRadius] * tmp[static_cast<std::size_t>(reflect101(y + i, h)) * w + x];
      out[static_cast<std::size_t>(y) * w + x] =
          static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
    }
  }
  return out;
}

std::vector<Level> build_pyramid(const GrayImage& image, const OrbParams& params) {
  std::vector<Level> levels;
  GrayImage current = image;
  for (int l = 0; l < params.pyramid_levels; ++l) {
    const double scale = std::pow(params.scale_factor, l);
    const int w = static_cast<int>(std::lround(image.width() / scale));
    const int h = static_cast<int>(std::lround(image.height() / scale));
    if (std::min(w, h) < params.patch_side) break;
    if (l > 0) current = resize_to(current, w, h);
    Level level;
    level.width = w;
    level.height = h;
    level.scale = scale;
    level.raw = current.to_u8();
    levels.push_back(std::move(level));
  }
  return levels;
}

// Per-level quotas decay geometrically with the level scale.
std::vector<int> level_quotas(const OrbParams& params) {
  const int n = params.pyramid_levels;
  std::vector<int> quota(n);
  const double factor = 1.0 / params.scale_factor;
  double per_level = params.max_features * (1.0 - factor) / (1.0 - std::pow(factor, n));
  int total = 0;
  for (int l = 0; l < n - 1; ++l) {
    quota[l] = static_cast<int>(std::lround(per_level));
    total += quota[l];
    per_level *= factor;
  }
  quota[n - 1] = std::max(params.max_features - total, 0);
  return quota;
}

std::vector<Candidate> detect_fast(const Level& level, const OrbParams& params) {
  const int w = level.width;
  const int h = level.height;
  const int t = params.fast_threshold;
  std::vector<int> score(static_cast<std::size_t>(w) * h, 0);
  for (int y = 3; y < h - 3; ++y) {
    for (int x = 3; x < w - 3; ++x) {
      const std::uint8_t* p = level.ptr(x, y);
      const int c = *p;
      auto diff = [&](int k) { return p[kCircle[k][1] * w + kCircle[k][0]] - c; };
      // Every 9-arc contains circle index 0 or 8, and 4 or 12.
      if (std::abs(diff(0)) <= t && std::abs(diff(8)) <= t) continue;
      if (std::abs(diff(4)) <= t && std::abs(diff(12)) <= t) continue;
      const int s = fast9_score(level.raw.data(), w, x, y);
      if (s > t) score[static_cast<std::size_t>(y) * w + x] = s;
    }
  }

  // 3x3 non-maximum suppression, then drop anything within edge_threshold of a border.
  const int lo = std::max(params.edge_threshold, 4);
  std::vector<Candidate> out;
  for (int y = lo; y < h - lo; ++y) {
    for (int x = lo; x < w - lo; ++x) {
      const int s = score[static_cast<std::size_t>(y) * w + x];
      if (s == 0) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if ((dx || dy) && score[static_cast<std::size_t>(y + dy) * w + x + dx] >= s) {
            is_max = false;
            break;
          }
        }
      if (is_max) out.push_back({x, y, s});
    }
  }
  return out;
}

double harris_response(const Level& level, int x0, int y0) {
  const int w = level.width;
  const int r = kHarrisBlock / 2;
  long long a = 0, b = 0, c = 0;
  for (int y = y0 - r; y < y0 - r + kHarrisBlock; ++y) {
    for (int x = x0 - r; x < x0 - r + kHarrisBlock; ++x) {
      const std::uint8_t* p = level.ptr(x, y);
      const int ix = (p[1] - p[-1]) * 2 + (p[-w + 1] - p[-w - 1]) + (p[w + 1] - p[w - 1]);
      const int iy = (p[w] - p[-w]) * 2 + (p[w - 1] - p[-w - 1]) + (p[w + 1] - p[-w + 1]);
      a += ix * ix;
      b += iy * iy;
      c += ix * iy;
    }
  }
  const double scale = 1.0 / (4.0 * kHarrisBlock * 255.0);
  const double s4 = scale * scale * scale * scale;
  const double da = static_cast<double>(a), db = static_cast<double>(b), dc = static_cast<double>(c);
  return (da * db - dc * dc - kHarrisK * (da + db) * (da + db)) * s4;
}

// Row half-widths of the circular orientation patch.
std::vector<int> circular_extent(int half) {
  std::vector<int> umax(half + 2);
  const int vmax = static_cast<int>(std::floor(half * std::sqrt(2.0) / 2 + 1));
  const int vmin = static_cast<int>(std::ceil(half * std::sqrt(2.0) / 2));
  for (int v = 0; v <= vmax; ++v)
    umax[v] = static_cast<int>(std::lround(std::sqrt(static_cast<double>(half) * half - v * v)));
  for (int v = half, v0 = 0; v >= vmin; --v) {
    while (umax[v0] == umax[v0 + 1]) ++v0;
    umax[v] = v0;
    ++v0;
  }
  return umax;
}

// Intensity-centroid orientation in [0, 2 pi).
double centroid_angle(const Level& level, int x, int y, const std::vector<int>& umax, int half) {
  const int w = level.width;
  const std::uint8_t* centre = level.ptr(x, y);
  long long m01 = 0, m10 = 0;
  for (int u = -half; u <= half; ++u) m10 += u * centre[u];
  for (int v = 1; v <= half; ++v) {
    long long v_sum = 0;
    const int d = umax[v];
    for (int u = -d; u <= d; ++u) {
      const int plus = centre[u + v * w];
      const int minus = centre[u - v * w];
      v_sum += plus - minus;
      m10 += static_cast<long long>(u) * (plus + minus);
    }
    m01 += v * v_sum;
  }
  double angle = std::atan2(static_cast<double>(m01), static_cast<double>(m10));
  if (angle < 0.0) angle += 2.0 * std::numbers::pi;
  return angle;
}

Bits256 steered_brief(const Level& level, int x, int y, double angle) {
  const double ca = std::cos(angle);
  const double sa = std::sin(angle);
  auto sample = [&](int px, int py) {
    const int rx = static_cast<int>(std::lround(px * ca - py * sa));
    const int ry = static_cast<int>(std::lround(px * sa + py * ca));
    const int sx = std::clamp(x + rx, 0, level.width - 1);
    const int sy = std::clamp(y + ry, 0, level.height - 1);
    return level.smooth[static_cast<std::size_t>(sy) * level.width + sx];
  };
  Bits256 bits{};
  for (std::size_t i = 0; i < kPattern.size(); ++i) {
    const auto& p = kPattern[i];
    if (sample(p[0], p[1]) < sample(p[2], p[3])) bits[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return bits;
}

void keep_best(std::vector<Candidate>& c, std::size_t n, auto key) {
  std::stable_sort(c.begin(), c.end(),
                   [&](const Candidate& a, const Candidate& b) { return key(a) > key(b); });
  if (c.size() > n) c.resize(n);
}

}  // namespace

void OrbParams::validate() const {
  if (max_features < 1) throw InvalidArgument("orb max_features must be >= 1");
  if (fast_threshold < 0 || fast_threshold > 255)
    throw InvalidArgument("orb fast_threshold must lie in [0, 255]");
  if (pyramid_levels < 1) throw InvalidArgument("orb pyramid_levels must be >= 1");
  if (!(scale_factor > 1.0)) throw InvalidArgument("orb scale_factor must be > 1");
  if (patch_side < 3 || patch_side % 2 == 0)
    throw InvalidArgument("orb patch_side must be odd and >= 3");
  if (edge_threshold < 0) throw InvalidArgument("orb edge_threshold must be >= 0");
}

std::string NoKeypoints::message() const {
  switch (reason) {
    case Reason::image_smaller_than_patch:
      return "image is smaller than the descriptor patch";
    case Reason::no_corners:
      return "no keypoints detected";
  }
  return "no keypoints";
}

std::span<const std::array<int, 4>, 256> orb_pattern() noexcept { return kPattern; }

int fast9_score(const std::uint8_t* image, int stride, int x, int y) noexcept {
  const std::uint8_t* p = image + static_cast<std::ptrdiff_t>(y) * stride + x;
  const int c = *p;
  std::array<int, 16> d{};
  for (int k = 0; k < 16; ++k) d[k] = p[kCircle[k][1] * stride + kCircle[k][0]] - c;
  int best = 0;
  for (int start = 0; start < 16; ++start) {
    int bright = 255;
    int dark = 255;
    for (int j = 0; j < kArc; ++j) {
      const int v = d[(start + j) % 16];
      bright = std::min(bright, v);
      dark = std::min(dark, -v);
    }
    best = std::max({best, bright, dark});
  }
  return best;
}

OrbOutcome encode_orb(const GrayImage& image, const OrbParams& params) {
  params.validate();
  if (image.width() < params.patch_side || image.height() < params.patch_side) {
    return NoKeypoints{NoKeypoints::Reason::image_smaller_than_patch};
  }

  std::vector<Level> levels = build_pyramid(image, params);
  const std::vector<int> quotas = level_quotas(params);
  const int half = params.patch_side / 2;
  const std::vector<int> umax = circular_extent(half);

  KeypointDescriptor out;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    Level& level = levels[l];
    std::vector<Candidate> cands = detect_fast(level, params);
    if (cands.empty()) continue;
    const auto quota = static_cast<std::size_t>(quotas[l]);
    keep_best(cands, 2 * quota, [](const Candidate& c) { return static_cast<double>(c.fast); });
    for (Candidate& c : cands) c.harris = harris_response(level, c.x, c.y);
    keep_best(cands, quota, [](const Candidate& c) { return c.harris; });
    if (cands.empty()) continue;

    level.smooth = gaussian_blur(level.raw, level.width, level.height);
    for (const Candidate& c : cands) {
      const double angle = centroid_angle(level, c.x, c.y, umax, half);
      out.keypoints.push_back({static_cast<float>(c.x * level.scale),
                               static_cast<float>(c.y * level.scale), static_cast<float>(angle),
                               static_cast<float>(c.harris), static_cast<int>(l)});
      out.bits.push_back(steered_brief(level, c.x, c.y, angle));
    }
  }

  if (out.keypoints.empty()) return NoKeypoints{NoKeypoints::Reason::no_corners};
  return out;
}

}  // namespace vprkit
