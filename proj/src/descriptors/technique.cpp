#include <charconv>
#include <string>

#include "vprkit/encoders.hpp"
#include "vprkit/error.hpp"

namespace vprkit {

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("invalid value for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return value;
}

[[noreturn]] void unknown_key(Technique t, std::string_view key) {
  throw InvalidArgument("unknown " + std::string(to_string(t)) + " parameter: " + std::string(key));
}

void assign(HogParams& p, std::string_view key, std::string_view value) {
  if (key == "cell_side") p.cell_side = parse_number<int>(key, value);
  else if (key == "block_side") p.block_side = parse_number<int>(key, value);
  else if (key == "bins") p.bins = parse_number<int>(key, value);
  else if (key == "epsilon") p.epsilon = parse_number<double>(key, value);
  else unknown_key(Technique::hog, key);
}

void assign(GistParams& p, std::string_view key, std::string_view value) {
  if (key == "scales") p.scales = parse_number<int>(key, value);
  else if (key == "orientations") p.orientations = parse_number<int>(key, value);
  else if (key == "grid") p.grid = parse_number<int>(key, value);
  else unknown_key(Technique::gist, key);
}

void assign(CohogParams& p, std::string_view key, std::string_view value) {
  if (key == "internal_side") p.internal_side = parse_number<int>(key, value);
  else if (key == "cell_side") p.cell_side = parse_number<int>(key, value);
  else if (key == "bins") p.bins = parse_number<int>(key, value);
  else if (key == "entropy_threshold") p.entropy_threshold = parse_number<double>(key, value);
  else if (key == "patch_side") p.patch_side = parse_number<int>(key, value);
  else if (key == "epsilon") p.epsilon = parse_number<double>(key, value);
  else unknown_key(Technique::cohog, key);
}

void assign(OrbParams& p, std::string_view key, std::string_view value) {
  if (key == "max_features") p.max_features = parse_number<int>(key, value);
  else if (key == "fast_threshold") p.fast_threshold = parse_number<int>(key, value);
  else if (key == "pyramid_levels") p.pyramid_levels = parse_number<int>(key, value);
  else if (key == "scale_factor") p.scale_factor = parse_number<double>(key, value);
  else if (key == "patch_side") p.patch_side = parse_number<int>(key, value);
  else if (key == "edge_threshold") p.edge_threshold = parse_number<int>(key, value);
  else unknown_key(Technique::orb, key);
}

}  // namespace

std::string_view to_string(Technique t) noexcept {
  switch (t) {
    case Technique::hog:
      return "hog";
    case Technique::gist:
      return "gist";
    case Technique::cohog:
      return "cohog";
    case Technique::orb:
      return "orb";
  }
  return "unknown";
}

Technique parse_technique(std::string_view name) {
  for (Technique t : kAllTechniques) {
    if (to_string(t) == name) return t;
  }
  throw InvalidArgument("unknown technique: " + std::string(name));
}

void TechniqueParams::set(Technique technique, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw InvalidArgument("expected key=value, got '" + std::string(assignment) + "'");
  std::string_view key = assignment.substr(0, eq);
  const std::string_view value = assignment.substr(eq + 1);
  if (const auto dot = key.find('.'); dot != std::string_view::npos) {
    technique = parse_technique(key.substr(0, dot));
    key = key.substr(dot + 1);
  }
  switch (technique) {
    case Technique::hog:
      assign(hog, key, value);
      hog.validate();
      break;
    case Technique::gist:
      assign(gist, key, value);
      gist.validate();
      break;
    case Technique::cohog:
      assign(cohog, key, value);
      cohog.validate();
      break;
    case Technique::orb:
      assign(orb, key, value);
      orb.validate();
      break;
  }
}

EncodeOutcome encode(Technique technique, const GrayImage& image, const TechniqueParams& params) {
  switch (technique) {
    case Technique::hog:
      return Descriptor(encode_hog(image, params.hog));
    case Technique::gist:
      return Descriptor(encode_gist(image, params.gist));
    case Technique::cohog:
      return Descriptor(encode_cohog(image, params.cohog));
    case Technique::orb: {
      OrbOutcome o = encode_orb(image, params.orb);
      if (auto* kp = std::get_if<KeypointDescriptor>(&o)) return Descriptor(std::move(*kp));
      return std::get<NoKeypoints>(o);
    }
  }
  throw InvalidArgument("unknown technique");
}

}  // namespace vprkit
