#include <bit>
#include <cstring>
#include <istream>
#include <iterator>
#include <json.hpp>
#include <ostream>

#include "vprkit/descriptor.hpp"
#include "vprkit/error.hpp"

namespace vprkit {

namespace {

static_assert(std::endian::native == std::endian::little,
              "descriptor serialisation assumes a little-endian host");

constexpr std::array<char, 4> kMagic = {'V', 'P', 'R', 'D'};

class Writer {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (bytes_.size() - pos_ < sizeof(T)) throw FormatError("descriptor payload is truncated");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::size_t checked_count(Reader& r, std::size_t min_bytes_each) {
  const auto n = r.get<std::uint64_t>();
  if (min_bytes_each && n > r.remaining() / min_bytes_each)
    throw FormatError("descriptor element count exceeds payload size");
  return static_cast<std::size_t>(n);
}

std::string to_hex(const Bits256& bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (std::uint64_t word : bits) {
    for (int b = 0; b < 8; ++b) {
      const auto byte = static_cast<unsigned>((word >> (8 * b)) & 0xff);
      s.push_back(kDigits[byte >> 4]);
      s.push_back(kDigits[byte & 0xf]);
    }
  }
  return s;
}

Bits256 from_hex(const std::string& s) {
  if (s.size() != 64) throw FormatError("keypoint bits must be 64 hex digits");
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw FormatError("invalid hex digit in keypoint bits");
  };
  Bits256 bits{};
  for (std::size_t i = 0; i < 32; ++i) {
    const std::uint64_t byte = (nibble(s[2 * i]) << 4) | nibble(s[2 * i + 1]);
    bits[i / 8] |= byte << (8 * (i % 8));
  }
  return bits;
}

}  // namespace

std::vector<std::uint8_t> serialize(const Descriptor& descriptor) {
  Writer w;
  for (char c : kMagic) w.put(c);
  w.put(kDescriptorFormatVersion);
  w.put(static_cast<std::uint8_t>(descriptor.kind()));
  w.put(std::uint8_t{0});
  switch (descriptor.kind()) {
    case DescriptorKind::dense: {
      const auto& d = descriptor.dense();
      w.put(static_cast<std::uint64_t>(d.values.size()));
      for (double v : d.values) w.put(v);
      break;
    }
    case DescriptorKind::regional: {
      const auto& d = descriptor.regional();
      w.put(static_cast<std::uint64_t>(d.size()));
      w.put(static_cast<std::uint64_t>(d.dim));
      for (const auto& c : d.centers) {
        w.put(static_cast<std::int32_t>(c.x));
        w.put(static_cast<std::int32_t>(c.y));
      }
      for (double v : d.values) w.put(v);
      break;
    }
    case DescriptorKind::keypoints: {
      const auto& d = descriptor.keypoints();
      w.put(static_cast<std::uint64_t>(d.size()));
      for (std::size_t i = 0; i < d.size(); ++i) {
        const Keypoint& k = d.keypoints[i];
        w.put(k.x);
        w.put(k.y);
        w.put(k.angle);
        w.put(k.response);
        w.put(static_cast<std::int32_t>(k.level));
        for (std::uint64_t word : d.bits[i]) w.put(word);
      }
      break;
    }
  }
  return w.take();
}

Descriptor deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  for (char c : kMagic) {
    if (r.get<char>() != c) throw FormatError("not a descriptor file (bad magic)");
  }
  const auto version = r.get<std::uint16_t>();
  if (version != kDescriptorFormatVersion)
    throw FormatError("unsupported descriptor format version " + std::to_string(version));
  const auto kind = r.get<std::uint8_t>();
  r.get<std::uint8_t>();

  Descriptor out;
  switch (static_cast<DescriptorKind>(kind)) {
    case DescriptorKind::dense: {
      DenseDescriptor d;
      d.values.resize(checked_count(r, sizeof(double)));
      for (double& v : d.values) v = r.get<double>();
      out = Descriptor(std::move(d));
      break;
    }
    case DescriptorKind::regional: {
      RegionalDescriptor d;
      const std::size_t n = checked_count(r, 8);
      const auto dim = r.get<std::uint64_t>();
      if (dim > r.remaining()) throw FormatError("regional dimension exceeds payload size");
      d.dim = static_cast<int>(dim);
      d.centers.resize(n);
      for (auto& c : d.centers) {
        c.x = r.get<std::int32_t>();
        c.y = r.get<std::int32_t>();
      }
      if (n * dim > r.remaining() / sizeof(double))
        throw FormatError("descriptor payload is truncated");
      d.values.resize(n * dim);
      for (double& v : d.values) v = r.get<double>();
      out = Descriptor(std::move(d));
      break;
    }
    case DescriptorKind::keypoints: {
      KeypointDescriptor d;
      const std::size_t n = checked_count(r, 52);
      d.keypoints.resize(n);
      d.bits.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        Keypoint& k = d.keypoints[i];
        k.x = r.get<float>();
        k.y = r.get<float>();
        k.angle = r.get<float>();
        k.response = r.get<float>();
        k.level = r.get<std::int32_t>();
        for (std::uint64_t& word : d.bits[i]) word = r.get<std::uint64_t>();
      }
      out = Descriptor(std::move(d));
      break;
    }
    default:
      throw FormatError("unknown descriptor kind tag " + std::to_string(kind));
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after descriptor payload");
  return out;
}

void write_descriptor(const Descriptor& descriptor, std::ostream& out) {
  const auto bytes = serialize(descriptor);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed to write descriptor");
}

Descriptor read_descriptor(std::istream& in) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

std::string to_json(const Descriptor& descriptor, int indent) {
  nlohmann::json j;
  j["format"] = "vprkit-descriptor";
  j["version"] = kDescriptorFormatVersion;
  j["kind"] = std::string(to_string(descriptor.kind()));
  switch (descriptor.kind()) {
    case DescriptorKind::dense:
      j["values"] = descriptor.dense().values;
      break;
    case DescriptorKind::regional: {
      const auto& d = descriptor.regional();
      j["dim"] = d.dim;
      auto regions = nlohmann::json::array();
      for (std::size_t i = 0; i < d.size(); ++i) {
        const auto v = d.vector(i);
        regions.push_back({{"center", {d.centers[i].x, d.centers[i].y}},
                           {"vector", std::vector<double>(v.begin(), v.end())}});
      }
      j["regions"] = std::move(regions);
      break;
    }
    case DescriptorKind::keypoints: {
      const auto& d = descriptor.keypoints();
      auto kps = nlohmann::json::array();
      for (std::size_t i = 0; i < d.size(); ++i) {
        const Keypoint& k = d.keypoints[i];
        kps.push_back({{"x", k.x},
                       {"y", k.y},
                       {"angle", k.angle},
                       {"response", k.response},
                       {"level", k.level},
                       {"bits", to_hex(d.bits[i])}});
      }
      j["keypoints"] = std::move(kps);
      break;
    }
  }
  return j.dump(indent);
}

Descriptor from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dense") {
      return DenseDescriptor{j.at("values").get<std::vector<double>>()};
    }
    if (kind == "regional") {
      RegionalDescriptor d;
      d.dim = j.at("dim").get<int>();
      for (const auto& r : j.at("regions")) {
        d.centers.push_back({r.at("center").at(0).get<int>(), r.at("center").at(1).get<int>()});
        const auto v = r.at("vector").get<std::vector<double>>();
        if (static_cast<int>(v.size()) != d.dim) throw FormatError("region vector length != dim");
        d.values.insert(d.values.end(), v.begin(), v.end());
      }
      return d;
    }
    if (kind == "keypoints") {
      KeypointDescriptor d;
      for (const auto& k : j.at("keypoints")) {
        d.keypoints.push_back({k.at("x").get<float>(), k.at("y").get<float>(),
                               k.at("angle").get<float>(), k.at("response").get<float>(),
                               k.at("level").get<int>()});
        d.bits.push_back(from_hex(k.at("bits").get<std::string>()));
      }
      return d;
    }
    throw FormatError("unknown descriptor kind: " + kind);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed descriptor JSON: ") + e.what());
  }
}

}  // namespace vprkit
