#include <algorithm>
#include <chrono>
#include <optional>

#include "vprkit/error.hpp"
#include "vprkit/evaluation.hpp"

namespace vprkit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Encoder outcome with ImageTooSmall folded into "inapplicable".
std::optional<Descriptor> try_encode(Technique technique, const GrayImage& image,
                                     const TechniqueParams& params) {
  try {
    EncodeOutcome o = encode(technique, image, params);
    if (auto* d = std::get_if<Descriptor>(&o)) return std::move(*d);
    return std::nullopt;
  } catch (const ImageTooSmall&) {
    return std::nullopt;
  }
}

class MaybeLock {
 public:
  explicit MaybeLock(std::mutex* m) : m_(m) {
    if (m_) m_->lock();
  }
  ~MaybeLock() {
    if (m_) m_->unlock();
  }
  MaybeLock(const MaybeLock&) = delete;
  MaybeLock& operator=(const MaybeLock&) = delete;

 private:
  std::mutex* m_;
};

}  // namespace

std::string_view to_string(RecordStatus status) noexcept {
  return status == RecordStatus::ok ? "ok" : "technique-inapplicable";
}

double accuracy_of(std::size_t n_correct, std::size_t n_query) {
  if (n_query == 0) throw InvalidArgument("accuracy needs at least one query");
  if (n_correct > n_query) throw InvalidArgument("n_correct exceeds n_query");
  return static_cast<double>(n_correct) / static_cast<double>(n_query);
}

double tradeoff_ratio(const BenchmarkRecord& record) {
  if (!(record.timing.t_vpr > 0.0)) throw ZeroTime("trade-off ratio needs t_vpr > 0");
  return record.accuracy / record.timing.t_vpr;
}

BenchmarkRecord evaluate(const LoadedDataset& dataset, Technique technique, Resolution resolution,
                         const EvaluateOptions& options) {
  if (dataset.queries.empty()) throw InvalidArgument("dataset has no queries");
  if (dataset.references.empty()) throw EmptyMap("dataset has no reference images");
  if (dataset.ground_truth.size() != dataset.queries.size())
    throw GroundTruthError("ground truth does not cover every query");
  if (options.timing_repetitions < 1) throw InvalidArgument("timing_repetitions must be >= 1");

  std::vector<GrayImage> queries, references;
  queries.reserve(dataset.queries.size());
  references.reserve(dataset.references.size());
  for (const auto& img : dataset.queries) queries.push_back(resize(img, resolution));
  for (const auto& img : dataset.references) references.push_back(resize(img, resolution));

  BenchmarkRecord rec;
  rec.technique = std::string(to_string(technique));
  rec.dataset = dataset.name;
  rec.resolution = resolution;
  rec.n_query = queries.size();

  // The map: usable reference descriptors and their original indices.
  std::vector<Descriptor> map;
  std::vector<std::size_t> map_index;
  {
    MaybeLock lock(options.timing_lock);
    const auto start = Clock::now();
    for (std::size_t i = 0; i < references.size(); ++i) {
      if (auto d = try_encode(technique, references[i], options.params)) {
        map.push_back(std::move(*d));
        map_index.push_back(i);
      }
    }
    rec.map_encode_seconds = seconds_since(start);
  }

  // Each repetition runs the two phases of t_vpr back to back: every query is
  // encoded, then every query is matched, so matching is not charged for the
  // cache traffic of the encoder that ran just before it.
  std::vector<double> encode_means, match_means;
  std::size_t matched = 0;
  std::vector<std::optional<Descriptor>> encoded(queries.size());
  for (int rep = 0; rep < options.timing_repetitions; ++rep) {
    MaybeLock lock(options.timing_lock);
    double encode_total = 0.0;
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const auto t0 = Clock::now();
      encoded[q] = try_encode(technique, queries[q], options.params);
      encode_total += seconds_since(t0);
    }

    double match_total = 0.0;
    std::size_t correct = 0, inapplicable = 0, matched_now = 0;
    for (std::size_t q = 0; q < queries.size(); ++q) {
      if (!encoded[q]) {
        ++inapplicable;
        continue;
      }
      if (map.empty()) continue;
      const auto t1 = Clock::now();
      const MatchResult m = retrieve(*encoded[q], map, options.match);
      match_total += seconds_since(t1);
      ++matched_now;
      if (is_correct(dataset.ground_truth[q], map_index[m.best_index], options.tolerance))
        ++correct;
    }
    encode_means.push_back(encode_total / static_cast<double>(queries.size()));
    match_means.push_back(matched_now ? match_total / static_cast<double>(matched_now) : 0.0);
    if (rep == 0) {
      rec.n_correct = correct;
      rec.n_inapplicable = inapplicable;
      matched = matched_now;
    }
  }

  rec.accuracy = accuracy_of(rec.n_correct, rec.n_query);
  rec.timing = TimingSample::from_parts(median(encode_means), median(match_means));
  rec.status = matched == 0 ? RecordStatus::technique_inapplicable : RecordStatus::ok;
  rec.ratio = rec.timing.t_vpr > 0.0 ? tradeoff_ratio(rec) : 0.0;
  return rec;
}

BenchmarkRecord evaluate(const DatasetManifest& manifest, Technique technique,
                         Resolution resolution, const EvaluateOptions& options) {
  return evaluate(load_images(manifest), technique, resolution, options);
}

}  // namespace vprkit
