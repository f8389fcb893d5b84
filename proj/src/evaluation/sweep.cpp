#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <thread>

#include "vprkit/error.hpp"
#include "vprkit/evaluation.hpp"

namespace vprkit {

void SweepConfig::validate() const {
  if (resolutions.empty()) throw InvalidArgument("sweep needs at least one resolution");
  if (techniques.empty()) throw InvalidArgument("sweep needs at least one technique");
  if (timing_repetitions < 1) throw InvalidArgument("timing repetitions must be >= 1");
  if (jobs < 1) throw InvalidArgument("jobs must be >= 1");
  for (Resolution r : resolutions) {
    if (r.side < 1) throw InvalidArgument("resolution side must be >= 1");
  }
}

std::vector<BenchmarkRecord> sweep(const LoadedDataset& dataset, const SweepConfig& config,
                                   const EvaluateOptions& base) {
  config.validate();
  std::vector<Resolution> resolutions = config.resolutions;
  std::sort(resolutions.begin(), resolutions.end());

  struct Cell {
    Technique technique;
    Resolution resolution;
  };
  std::vector<Cell> cells;
  for (Technique t : config.techniques)
    for (Resolution r : resolutions) cells.push_back({t, r});

  std::mutex timing_lock;
  EvaluateOptions options = base;
  options.timing_repetitions = config.timing_repetitions;
  if (config.jobs > 1) options.timing_lock = &timing_lock;

  std::vector<BenchmarkRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        records[i] = evaluate(dataset, cells[i].technique, cells[i].resolution, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells.size();
      }
    }
  };

  const int jobs = std::min<int>(config.jobs, static_cast<int>(cells.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<BenchmarkRecord> sweep(const DatasetManifest& manifest, const SweepConfig& config,
                                   const EvaluateOptions& base) {
  config.validate();
  return sweep(load_images(manifest), config, base);
}

std::vector<WeightedAccuracy> weighted_average_accuracy(std::span<const BenchmarkRecord> records) {
  if (records.empty()) throw EmptyGroup("no records to average");
  std::vector<std::string> technique_order;
  struct Acc {
    double weighted = 0.0;
    std::size_t queries = 0;
    bool all_inapplicable = true;
  };
  std::map<std::pair<std::string, int>, Acc> groups;
  for (const BenchmarkRecord& r : records) {
    if (std::find(technique_order.begin(), technique_order.end(), r.technique) ==
        technique_order.end())
      technique_order.push_back(r.technique);
    Acc& a = groups[{r.technique, r.resolution.side}];
    a.weighted += r.accuracy * static_cast<double>(r.n_query);
    a.queries += r.n_query;
    a.all_inapplicable = a.all_inapplicable && r.status == RecordStatus::technique_inapplicable;
  }

  std::vector<WeightedAccuracy> out;
  for (const std::string& t : technique_order) {
    for (auto it = groups.lower_bound({t, 0}); it != groups.end() && it->first.first == t; ++it) {
      if (it->second.queries == 0)
        throw EmptyGroup("no queries for " + t + " at " + std::to_string(it->first.second));
      out.push_back({t, Resolution{it->first.second},
                     it->second.weighted / static_cast<double>(it->second.queries),
                     it->second.queries, it->second.all_inapplicable});
    }
  }
  return out;
}

}  // namespace vprkit
