#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vprkit/kernels.hpp"

namespace vprkit {

/// Global real vector (HOG, GIST).
struct DenseDescriptor {
  std::vector<double> values;

  bool operator==(const DenseDescriptor&) const = default;
};

struct PixelPoint {
  int x = 0;
  int y = 0;

  bool operator==(const PixelPoint&) const = default;
};

/// Set of (region centre, vector) pairs (CoHOG). Vectors are stored row-major
/// in one buffer, `dim` values per region.
struct RegionalDescriptor {
  int dim = 0;
  std::vector<PixelPoint> centers;
  std::vector<double> values;

  std::size_t size() const noexcept { return centers.size(); }
  std::span<const double> vector(std::size_t i) const {
    return std::span<const double>(values).subspan(i * dim, dim);
  }

  bool operator==(const RegionalDescriptor&) const = default;
};

struct Keypoint {
  float x = 0.0f;  // base-image pixel coordinates
  float y = 0.0f;
  float angle = 0.0f;  // radians
  float response = 0.0f;
  int level = 0;

  bool operator==(const Keypoint&) const = default;
};

/// ORB keypoints with one 256-bit string each.
struct KeypointDescriptor {
  std::vector<Keypoint> keypoints;
  std::vector<Bits256> bits;

  std::size_t size() const noexcept { return keypoints.size(); }

  bool operator==(const KeypointDescriptor&) const = default;
};

enum class DescriptorKind : std::uint8_t { dense = 1, regional = 2, keypoints = 3 };

std::string_view to_string(DescriptorKind kind) noexcept;

class Descriptor {
 public:
  using Payload = std::variant<DenseDescriptor, RegionalDescriptor, KeypointDescriptor>;

  Descriptor() = default;
  Descriptor(DenseDescriptor d) : payload_(std::move(d)) {}
  Descriptor(RegionalDescriptor d) : payload_(std::move(d)) {}
  Descriptor(KeypointDescriptor d) : payload_(std::move(d)) {}

  DescriptorKind kind() const noexcept {
    return static_cast<DescriptorKind>(payload_.index() + 1);
  }

  const DenseDescriptor& dense() const { return std::get<DenseDescriptor>(payload_); }
  const RegionalDescriptor& regional() const { return std::get<RegionalDescriptor>(payload_); }
  const KeypointDescriptor& keypoints() const { return std::get<KeypointDescriptor>(payload_); }

  const Payload& payload() const noexcept { return payload_; }

  bool operator==(const Descriptor&) const = default;

 private:
  Payload payload_;
};

// Binary layout, little-endian:
//   magic "VPRD" | u16 version (1) | u8 kind | u8 reserved (0)
//   dense:     u64 n                     | n x f64
//   regional:  u64 count | u64 dim       | count x (i32 x, i32 y) | count*dim x f64
//   keypoints: u64 count                 | count x (f32 x, f32 y, f32 angle, f32 response, i32 level, 32 bytes bits)
inline constexpr std::uint16_t kDescriptorFormatVersion = 1;

std::vector<std::uint8_t> serialize(const Descriptor& descriptor);
/// Throws FormatError on a bad header or truncated payload.
Descriptor deserialize(std::span<const std::uint8_t> bytes);

void write_descriptor(const Descriptor& descriptor, std::ostream& out);
Descriptor read_descriptor(std::istream& in);

/// Lossless JSON debug form (doubles printed round-trip exact, bits as hex).
std::string to_json(const Descriptor& descriptor, int indent = -1);
Descriptor from_json(const std::string& text);

}  // namespace vprkit
