#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "vprkit/dataset.hpp"
#include "vprkit/error.hpp"

namespace vprkit {

namespace {

bool is_image_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw LayoutError("missing directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  // Byte-wise on the filename, independent of locale and platform.
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_index(std::string_view s, std::size_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

void DatasetManifest::validate() const {
  if (ground_truth.size() != query_paths.size())
    throw GroundTruthError("ground truth has " + std::to_string(ground_truth.size()) +
                           " entries for " + std::to_string(query_paths.size()) + " queries");
  for (std::size_t q = 0; q < ground_truth.size(); ++q) {
    if (ground_truth[q].empty())
      throw GroundTruthError("query " + std::to_string(q) + " has no ground-truth reference");
    for (std::size_t r : ground_truth[q]) {
      if (r >= reference_paths.size())
        throw GroundTruthError("query " + std::to_string(q) + " points at reference " +
                               std::to_string(r) + ", map has " +
                               std::to_string(reference_paths.size()));
    }
  }
}

GroundTruth parse_ground_truth(const std::string& text, std::size_t query_count,
                               std::size_t reference_count) {
  std::vector<std::set<std::size_t>> sets(query_count);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto comma = row.find(',');
    std::size_t q = 0;
    if (comma == std::string_view::npos || !parse_index(row.substr(0, comma), q)) {
      if (!seen_data) {
        seen_data = true;  // header
        continue;
      }
      throw GroundTruthError("ground_truth.csv line " + std::to_string(line_no) +
                             ": expected query_index,ref_index[;ref_index]*");
    }
    seen_data = true;
    if (q >= query_count)
      throw GroundTruthError("ground_truth.csv line " + std::to_string(line_no) + ": query index " +
                             std::to_string(q) + " out of range");
    std::string_view refs = row.substr(comma + 1);
    while (true) {
      const auto semi = refs.find(';');
      std::size_t r = 0;
      if (!parse_index(refs.substr(0, semi), r))
        throw GroundTruthError("ground_truth.csv line " + std::to_string(line_no) +
                               ": malformed reference index");
      if (r >= reference_count)
        throw GroundTruthError("ground_truth.csv line " + std::to_string(line_no) +
                               ": reference index " + std::to_string(r) + " out of range");
      sets[q].insert(r);
      if (semi == std::string_view::npos) break;
      refs = refs.substr(semi + 1);
    }
  }

  GroundTruth gt(query_count);
  for (std::size_t q = 0; q < query_count; ++q) {
    if (sets[q].empty())
      throw GroundTruthError("ground_truth.csv has no entry for query " + std::to_string(q));
    gt[q].assign(sets[q].begin(), sets[q].end());
  }
  return gt;
}

std::string format_ground_truth(const GroundTruth& gt) {
  std::ostringstream out;
  for (std::size_t q = 0; q < gt.size(); ++q) {
    out << q << ',';
    for (std::size_t i = 0; i < gt[q].size(); ++i) out << (i ? ";" : "") << gt[q][i];
    out << '\n';
  }
  return out.str();
}

DatasetManifest load_manifest(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root))
    throw LayoutError("dataset root is not a directory: " + root.string());
  DatasetManifest m;
  std::filesystem::path normalized = root.lexically_normal();
  if (!normalized.has_filename()) normalized = normalized.parent_path();
  m.name = normalized.filename().string();
  m.query_paths = list_images(root / "query");
  m.reference_paths = list_images(root / "reference");

  const auto gt_path = root / "ground_truth.csv";
  std::ifstream in(gt_path, std::ios::binary);
  if (!in) throw LayoutError("missing file: " + gt_path.string());
  std::ostringstream text;
  text << in.rdbuf();
  m.ground_truth = parse_ground_truth(text.str(), m.query_paths.size(), m.reference_paths.size());
  m.validate();
  return m;
}

bool is_correct(const std::vector<std::size_t>& truth, std::size_t retrieved, int tolerance) {
  for (std::size_t r : truth) {
    const std::size_t gap = r > retrieved ? r - retrieved : retrieved - r;
    if (gap <= static_cast<std::size_t>(std::max(tolerance, 0))) return true;
  }
  return false;
}

LoadedDataset load_images(const DatasetManifest& manifest) {
  manifest.validate();
  LoadedDataset d;
  d.name = manifest.name;
  d.ground_truth = manifest.ground_truth;
  d.queries.reserve(manifest.query_count());
  for (const auto& p : manifest.query_paths) d.queries.push_back(load_image(p));
  d.references.reserve(manifest.reference_count());
  for (const auto& p : manifest.reference_paths) d.references.push_back(load_image(p));
  return d;
}

}  // namespace vprkit
