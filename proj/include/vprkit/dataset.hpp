#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vprkit/image.hpp"

namespace vprkit {

/// Per query: the sorted, de-duplicated reference indices that count as a correct match.
using GroundTruth = std::vector<std::vector<std::size_t>>;

/// On-disk dataset:
///   <root>/query/        query images, ordered by byte-wise filename
///   <root>/reference/    reference images, same ordering rule
///   <root>/ground_truth.csv  rows `query_index,ref_index[;ref_index]*`
struct DatasetManifest {
  std::string name;
  std::vector<std::filesystem::path> query_paths;
  std::vector<std::filesystem::path> reference_paths;
  GroundTruth ground_truth;

  std::size_t query_count() const noexcept { return query_paths.size(); }
  std::size_t reference_count() const noexcept { return reference_paths.size(); }

  /// Throws GroundTruthError when a query lacks an entry or an index is out of range.
  void validate() const;

  bool operator==(const DatasetManifest&) const = default;
};

/// Throws LayoutError (missing directory or file) / GroundTruthError.
DatasetManifest load_manifest(const std::filesystem::path& root);

/// Parses ground_truth.csv content for `query_count` queries and
/// `reference_count` references. Blank lines, `#` comments and a leading
/// non-numeric header line are skipped; LF and CRLF are accepted.
GroundTruth parse_ground_truth(const std::string& text, std::size_t query_count,
                               std::size_t reference_count);

std::string format_ground_truth(const GroundTruth& gt);

/// True when `retrieved` lies within `tolerance` indices of a ground-truth reference.
bool is_correct(const std::vector<std::size_t>& truth, std::size_t retrieved, int tolerance = 0);

/// Images decoded into memory, ready for evaluation.
struct LoadedDataset {
  std::string name;
  std::vector<GrayImage> queries;
  std::vector<GrayImage> references;
  GroundTruth ground_truth;
};

LoadedDataset load_images(const DatasetManifest& manifest);

/// Resolution-independent synthetic scene (shaded background, opaque
/// rectangles and ellipses, a grating, two octaves of lattice noise), then
/// `gain * v + bias`, clamped and quantised to 8 bits. Same seed at two sides
/// gives the same scene at two resolutions.
GrayImage render_scene(std::uint64_t seed, int side, double gain = 1.0, double bias = 0.0);

struct SynthSpec {
  int n = 1;  // queries; must be >= 1
  int side = 128;
  std::uint64_t seed = 42;
  int distractors = 0;
};

/// Queries are n scenes; references are the same scenes with a mild
/// brightness change, followed by `distractors` unrelated scenes.
/// Ground truth is the identity on the first n references. Throws InvalidArgument.
LoadedDataset synth_dataset_in_memory(const SynthSpec& spec, const std::string& name = "synthetic");

/// Materialises synth_dataset_in_memory under `root` (created if needed) and
/// returns the manifest that load_manifest(root) would produce.
DatasetManifest synth_dataset(const SynthSpec& spec, const std::filesystem::path& root);

}  // namespace vprkit
