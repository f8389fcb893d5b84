#include <random>
#include <string>

#include "vprkit/error.hpp"
#include "vprkit/image.hpp"

namespace vprkit {

Pattern parse_pattern(std::string_view name) {
  if (name == "constant") return Pattern::constant;
  if (name == "vertical-edge" || name == "vertical_edge") return Pattern::vertical_edge;
  if (name == "checkerboard") return Pattern::checkerboard;
  if (name == "seeded-noise" || name == "seeded_noise") return Pattern::seeded_noise;
  throw InvalidArgument("unknown pattern: " + std::string(name));
}

std::string_view to_string(Pattern pattern) noexcept {
  switch (pattern) {
    case Pattern::constant:
      return "constant";
    case Pattern::vertical_edge:
      return "vertical-edge";
    case Pattern::checkerboard:
      return "checkerboard";
    case Pattern::seeded_noise:
      return "seeded-noise";
  }
  return "unknown";
}

GrayImage synth_image(Pattern kind, int side, std::uint64_t seed) {
  if (side < 1) throw InvalidArgument("synthetic image side must be >= 1");
  GrayImage img(side, side, 0.0f);
  switch (kind) {
    case Pattern::constant:
      return GrayImage(side, side, 0.5f);
    case Pattern::vertical_edge:
      for (int y = 0; y < side; ++y)
        for (int x = side / 2; x < side; ++x) img.at(x, y) = 1.0f;
      break;
    case Pattern::checkerboard: {
      const int square = std::max(1, side / 8);
      for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) img.at(x, y) = ((x / square + y / square) % 2) ? 1.0f : 0.0f;
      break;
    }
    case Pattern::seeded_noise: {
      // Bits -> [0, 1) by hand; std::uniform_real_distribution is not
      // specified bit-for-bit across standard libraries.
      std::mt19937_64 rng(seed);
      for (float& p : img.pixels()) {
        p = static_cast<float>(static_cast<double>(rng() >> 40) * 0x1.0p-24);
      }
      break;
    }
  }
  return img;
}

}  // namespace vprkit
