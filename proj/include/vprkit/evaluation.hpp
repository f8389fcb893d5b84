#pragma once

#include <filesystem>
#include <iosfwd>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "vprkit/dataset.hpp"
#include "vprkit/encoders.hpp"
#include "vprkit/matching.hpp"

namespace vprkit {

/// Seconds. t_vpr is always computed as t_e + t_m.
struct TimingSample {
  double t_e = 0.0;  // mean wall-clock to encode one query image
  double t_m = 0.0;  // mean wall-clock to match one query against the whole map
  double t_vpr = 0.0;

  static TimingSample from_parts(double encode, double match) noexcept {
    return {encode, match, encode + match};
  }
};

enum class RecordStatus { ok, technique_inapplicable };

std::string_view to_string(RecordStatus status) noexcept;

/// One (technique, dataset, resolution) measurement.
struct BenchmarkRecord {
  std::string technique;
  std::string dataset;
  Resolution resolution;
  double accuracy = 0.0;  // n_correct / n_query
  std::size_t n_correct = 0;
  std::size_t n_query = 0;
  TimingSample timing;
  double ratio = 0.0;  // accuracy / t_vpr, 1/s
  RecordStatus status = RecordStatus::ok;

  // Not part of the CSV schema.
  std::size_t n_inapplicable = 0;   // queries the encoder could not describe
  double map_encode_seconds = 0.0;  // one-off reference encoding, excluded from t_e
};

struct EvaluateOptions {
  TechniqueParams params;
  MatchOptions match;
  /// Query encode+match passes; timings are the per-phase medians.
  int timing_repetitions = 1;
  /// A retrieval is correct within this many indices of a ground-truth reference.
  int tolerance = 0;
  /// When set, every timed section holds this lock, so concurrent
  /// evaluations never overlap their measurements.
  std::mutex* timing_lock = nullptr;
};

/// N_c / N_q. Throws InvalidArgument when n_query is 0 or n_correct > n_query.
double accuracy_of(std::size_t n_correct, std::size_t n_query);

/// accuracy / t_vpr. Throws ZeroTime when t_vpr <= 0.
double tradeoff_ratio(const BenchmarkRecord& record);

/// Resizes every image to `resolution`, encodes the map once, then times
/// query encoding and retrieval. Queries the encoder cannot describe count as
/// incorrect; if no query can be matched the record is technique_inapplicable.
BenchmarkRecord evaluate(const LoadedDataset& dataset, Technique technique, Resolution resolution,
                         const EvaluateOptions& options = {});

BenchmarkRecord evaluate(const DatasetManifest& manifest, Technique technique,
                         Resolution resolution, const EvaluateOptions& options = {});

struct SweepConfig {
  std::vector<Resolution> resolutions{kResolutionLadder.begin(), kResolutionLadder.end()};
  std::vector<Technique> techniques{kAllTechniques.begin(), kAllTechniques.end()};
  int timing_repetitions = 5;
  std::filesystem::path output;  // CSV target; empty = caller handles output
  int jobs = 1;

  /// Throws InvalidArgument.
  void validate() const;
};

/// techniques x resolutions, technique-major then ascending resolution.
/// `base` supplies parameters; its timing_repetitions is replaced by the config's.
std::vector<BenchmarkRecord> sweep(const LoadedDataset& dataset, const SweepConfig& config,
                                   const EvaluateOptions& base = {});

std::vector<BenchmarkRecord> sweep(const DatasetManifest& manifest, const SweepConfig& config,
                                   const EvaluateOptions& base = {});

struct WeightedAccuracy {
  std::string technique;
  Resolution resolution;
  double accuracy = 0.0;
  std::size_t total_queries = 0;
  bool all_inapplicable = false;
};

/// Per (technique, resolution): sum(accuracy_d * N_q,d) / sum(N_q,d) over
/// datasets d. Groups appear in first-seen technique order, then ascending
/// resolution. Throws EmptyGroup when a group has no queries.
std::vector<WeightedAccuracy> weighted_average_accuracy(std::span<const BenchmarkRecord> records);

// ---- Reporting ----------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "technique,dataset,resolution,accuracy,n_correct,n_query,encode_ms,match_ms,vpr_ms,ratio,status";

std::string format_csv_row(const BenchmarkRecord& record);
void write_csv(std::span<const BenchmarkRecord> records, std::ostream& out);
void write_csv(std::span<const BenchmarkRecord> records, const std::filesystem::path& path);

/// Parses one data row produced by format_csv_row. Throws FormatError.
BenchmarkRecord parse_csv_row(std::string_view row);

/// Whitespace-delimited tables, one per figure:
///   accuracy_vs_resolution.dat, weighted_accuracy.dat,
///   vpr_time_vs_resolution.dat, ratio_vs_resolution.dat
/// Missing (inapplicable) points are written as NaN. Returns the written paths.
std::vector<std::filesystem::path> write_plot_data(std::span<const BenchmarkRecord> records,
                                                   const std::filesystem::path& dir);

}  // namespace vprkit
