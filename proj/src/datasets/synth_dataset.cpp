#include <cstdio>
#include <fstream>

#include "vprkit/dataset.hpp"
#include "vprkit/error.hpp"

namespace vprkit {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
  std::uint64_t z = seed ^ (stream * 0xd6e8feb86659fd93ULL) ^ (index * 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 32)) * 0xd6e8feb86659fd93ULL;
  z = (z ^ (z >> 32)) * 0xd6e8feb86659fd93ULL;
  return z ^ (z >> 32);
}

constexpr std::uint64_t kSceneStream = 1;
constexpr std::uint64_t kPerturbStream = 2;
constexpr std::uint64_t kDistractorStream = 3;

std::string image_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu.png", i);
  return buf;
}

}  // namespace

LoadedDataset synth_dataset_in_memory(const SynthSpec& spec, const std::string& name) {
  if (spec.n < 1) throw InvalidArgument("synthetic dataset needs n >= 1");
  if (spec.side < 1) throw InvalidArgument("synthetic dataset needs side >= 1");
  if (spec.distractors < 0) throw InvalidArgument("distractors must be >= 0");

  LoadedDataset d;
  d.name = name;
  for (int i = 0; i < spec.n; ++i) {
    const std::uint64_t scene = mix(spec.seed, kSceneStream, i);
    d.queries.push_back(render_scene(scene, spec.side));
    // Mild photometric change: gain in [0.85, 1.15], bias in [-0.05, 0.05].
    const std::uint64_t p = mix(spec.seed, kPerturbStream, i);
    const double gain = 0.85 + 0.30 * static_cast<double>(p >> 40) * 0x1.0p-24;
    const double bias = -0.05 + 0.10 * static_cast<double>(p & 0xffffff) * 0x1.0p-24;
    d.references.push_back(render_scene(scene, spec.side, gain, bias));
    d.ground_truth.push_back({static_cast<std::size_t>(i)});
  }
  for (int j = 0; j < spec.distractors; ++j) {
    d.references.push_back(render_scene(mix(spec.seed, kDistractorStream, j), spec.side));
  }
  return d;
}

DatasetManifest synth_dataset(const SynthSpec& spec, const std::filesystem::path& root) {
  const LoadedDataset d = synth_dataset_in_memory(spec);
  std::error_code ec;
  std::filesystem::create_directories(root / "query", ec);
  std::filesystem::create_directories(root / "reference", ec);
  if (ec) throw IoError("cannot create dataset directories under " + root.string());

  DatasetManifest m;
  std::filesystem::path normalized = root.lexically_normal();
  if (!normalized.has_filename()) normalized = normalized.parent_path();
  m.name = normalized.filename().string();
  for (std::size_t i = 0; i < d.queries.size(); ++i) {
    m.query_paths.push_back(root / "query" / image_name(i));
    save_png(d.queries[i], m.query_paths.back());
  }
  for (std::size_t i = 0; i < d.references.size(); ++i) {
    m.reference_paths.push_back(root / "reference" / image_name(i));
    save_png(d.references[i], m.reference_paths.back());
  }
  m.ground_truth = d.ground_truth;

  std::ofstream gt(root / "ground_truth.csv", std::ios::binary);
  gt << format_ground_truth(m.ground_truth);
  if (!gt) throw IoError("cannot write " + (root / "ground_truth.csv").string());
  return m;
}

}  // namespace vprkit
