#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "support.hpp"
#include "vprkit/error.hpp"
#include "vprkit/evaluation.hpp"

using namespace vprkit;
namespace fs = std::filesystem;

namespace {

BenchmarkRecord record(std::string technique, std::string dataset, int side, std::size_t correct,
                       std::size_t n, double te = 0.001, double tm = 0.002) {
  BenchmarkRecord r;
  r.technique = std::move(technique);
  r.dataset = std::move(dataset);
  r.resolution = Resolution{side};
  r.n_correct = correct;
  r.n_query = n;
  r.accuracy = accuracy_of(correct, n);
  r.timing = TimingSample::from_parts(te, tm);
  r.ratio = tradeoff_ratio(r);
  return r;
}

LoadedDataset identity_dataset(int n, int side) {
  LoadedDataset d = synth_dataset_in_memory({n, side, 99, 0}, "identity");
  d.references = d.queries;  // byte-identical
  return d;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

}  // namespace

TEST_CASE("accuracy and ratio arithmetic") {
  CHECK(accuracy_of(86, 172) == 0.5);
  CHECK(accuracy_of(0, 3) == 0.0);
  CHECK_THROWS_AS(accuracy_of(0, 0), InvalidArgument);
  CHECK_THROWS_AS(accuracy_of(4, 3), InvalidArgument);

  BenchmarkRecord r;
  r.accuracy = 0.5;
  r.timing = TimingSample::from_parts(0.125, 0.125);
  CHECK(tradeoff_ratio(r) == 2.0);
  r.accuracy = 0.0;
  CHECK(tradeoff_ratio(r) == 0.0);
  r.timing = TimingSample::from_parts(0.0, 0.0);
  CHECK_THROWS_AS(tradeoff_ratio(r), ZeroTime);

  BenchmarkRecord a, b;
  a.accuracy = b.accuracy = 0.8;
  a.timing = TimingSample::from_parts(0.01, 0.02);
  b.timing = TimingSample::from_parts(0.1, 0.2);
  CHECK(tradeoff_ratio(a) / tradeoff_ratio(b) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("weighted average accuracy") {
  const std::vector<BenchmarkRecord> recs{record("hog", "a", 64, 100, 100),
                                          record("hog", "b", 64, 0, 300)};
  const auto w = weighted_average_accuracy(recs);
  REQUIRE(w.size() == 1);
  CHECK(std::abs(w[0].accuracy - 0.25) <= 1e-12);
  CHECK(w[0].total_queries == 400);

  const std::vector<BenchmarkRecord> single{record("gist", "a", 32, 3, 7)};
  CHECK(weighted_average_accuracy(single)[0].accuracy == accuracy_of(3, 7));

  const std::vector<BenchmarkRecord> equal{record("hog", "a", 16, 1, 10),
                                           record("hog", "b", 16, 4, 10),
                                           record("hog", "c", 16, 7, 10)};
  CHECK(weighted_average_accuracy(equal)[0].accuracy == doctest::Approx(0.4).epsilon(1e-12));

  // Grouping: technique order as first seen, resolutions ascending.
  const std::vector<BenchmarkRecord> mixed{
      record("orb", "a", 256, 1, 2), record("hog", "a", 64, 1, 2), record("orb", "a", 128, 0, 2),
      record("orb", "b", 256, 2, 2)};
  const auto g = weighted_average_accuracy(mixed);
  REQUIRE(g.size() == 3);
  CHECK(g[0].technique == "orb");
  CHECK(g[0].resolution.side == 128);
  CHECK(g[1].resolution.side == 256);
  CHECK(g[1].accuracy == 0.75);
  CHECK(g[2].technique == "hog");

  BenchmarkRecord empty;
  empty.technique = "hog";
  empty.resolution = Resolution{64};
  const std::vector<BenchmarkRecord> bad{empty};
  CHECK_THROWS_AS(weighted_average_accuracy(bad), EmptyGroup);
}

TEST_CASE("evaluate on an identity dataset") {
  const LoadedDataset d = identity_dataset(6, 128);
  EvaluateOptions opts;
  opts.timing_repetitions = 3;
  for (Technique t : {Technique::hog, Technique::gist, Technique::cohog}) {
    const BenchmarkRecord r = evaluate(d, t, Resolution{64}, opts);
    CAPTURE(to_string(t));
    CHECK(r.accuracy == 1.0);
    CHECK(r.n_correct == 6);
    CHECK(r.n_query == 6);
    CHECK(r.status == RecordStatus::ok);
    CHECK(r.timing.t_vpr == r.timing.t_e + r.timing.t_m);
    CHECK(r.timing.t_e > 0.0);
    CHECK(r.timing.t_m > 0.0);
    CHECK(r.ratio == doctest::Approx(r.accuracy / r.timing.t_vpr));
    CHECK(r.resolution.side == 64);
    CHECK(r.dataset == "identity");
  }
}

TEST_CASE("ORB inapplicability in evaluate") {
  const LoadedDataset d = identity_dataset(3, 128);
  for (int side : {16, 32}) {
    const BenchmarkRecord r = evaluate(d, Technique::orb, Resolution{side});
    CHECK(r.status == RecordStatus::technique_inapplicable);
    CHECK(r.accuracy == 0.0);
    CHECK(r.n_query == 3);
    CHECK(r.n_inapplicable == 3);
    CHECK(r.ratio == 0.0);
  }
  const BenchmarkRecord ok = evaluate(d, Technique::orb, Resolution{256});
  CHECK(ok.status == RecordStatus::ok);
  CHECK(ok.accuracy == 1.0);
  // HOG below its block size is also inapplicable, not an error.
  CHECK(evaluate(d, Technique::hog, Resolution{8}).status == RecordStatus::technique_inapplicable);
}

TEST_CASE("accuracy is invariant under reference permutation") {
  LoadedDataset d = synth_dataset_in_memory({8, 64, 3, 4}, "perm");
  const double base = evaluate(d, Technique::hog, Resolution{32}).accuracy;
  std::vector<std::size_t> order(d.references.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 3; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    LoadedDataset p = d;
    std::vector<std::size_t> where(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      p.references[i] = d.references[order[i]];
      where[order[i]] = i;
    }
    for (auto& truth : p.ground_truth) {
      for (auto& r : truth) r = where[r];
      std::sort(truth.begin(), truth.end());
    }
    CHECK(evaluate(p, Technique::hog, Resolution{32}).accuracy == base);
  }
}

TEST_CASE("frame tolerance widens the correct set") {
  LoadedDataset d = identity_dataset(4, 64);
  // Shift every ground truth by one: exact matching scores nothing.
  for (std::size_t q = 0; q < 4; ++q) d.ground_truth[q] = {(q + 1) % 4};
  CHECK(evaluate(d, Technique::hog, Resolution{64}).accuracy < 1.0);
  EvaluateOptions opts;
  opts.tolerance = 3;
  CHECK(evaluate(d, Technique::hog, Resolution{64}, opts).accuracy == 1.0);
}

TEST_CASE("sweep ordering and determinism") {
  const LoadedDataset d = synth_dataset_in_memory({3, 64, 5, 1}, "sw");
  SweepConfig cfg;
  cfg.techniques = {Technique::gist, Technique::hog};
  cfg.resolutions = {Resolution{64}, Resolution{16}, Resolution{32}};
  cfg.timing_repetitions = 1;
  const auto a = sweep(d, cfg);
  REQUIRE(a.size() == 6);
  const char* techniques[] = {"gist", "gist", "gist", "hog", "hog", "hog"};
  const int sides[] = {16, 32, 64, 16, 32, 64};
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(a[i].technique == techniques[i]);
    CHECK(a[i].resolution.side == sides[i]);
    CHECK(std::abs(a[i].timing.t_vpr - (a[i].timing.t_e + a[i].timing.t_m)) <= 1e-12);
  }
  cfg.jobs = 3;
  const auto b = sweep(d, cfg);
  REQUIRE(b.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(b[i].technique == a[i].technique);
    CHECK(b[i].resolution == a[i].resolution);
    CHECK(b[i].accuracy == a[i].accuracy);
    CHECK(b[i].n_correct == a[i].n_correct);
  }

  SweepConfig bad;
  bad.techniques.clear();
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = SweepConfig{};
  bad.timing_repetitions = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = SweepConfig{};
  bad.resolutions.clear();
  CHECK_THROWS_AS(sweep(d, bad), InvalidArgument);
}

TEST_CASE("sweep with ORB marks the small sides") {
  const LoadedDataset d = identity_dataset(2, 128);
  SweepConfig cfg;
  cfg.techniques = {Technique::orb};
  cfg.resolutions = {Resolution{16}, Resolution{32}, Resolution{64}, Resolution{128}};
  cfg.timing_repetitions = 1;
  const auto recs = sweep(d, cfg);
  for (int i = 0; i < 3; ++i) CHECK(recs[i].status == RecordStatus::technique_inapplicable);
}

TEST_CASE("CSV formatting") {
  BenchmarkRecord r = record("hog", "tiny", 64, 3, 3, 0.0012345, 0.0000456);
  const std::string row = format_csv_row(r);
  CHECK(row == "hog,tiny,64x64,1.000,3,3,1.234,0.046,1.280," +
                   [&] {
                     char buf[32];
                     std::snprintf(buf, sizeof buf, "%.4f", r.ratio);
                     return std::string(buf);
                   }() +
                   ",ok");
  const BenchmarkRecord back = parse_csv_row(row);
  CHECK(back.technique == "hog");
  CHECK(back.resolution.side == 64);
  CHECK(back.n_correct == 3);
  CHECK(back.status == RecordStatus::ok);
  CHECK(back.timing.t_e == doctest::Approx(0.001234));

  r.status = RecordStatus::technique_inapplicable;
  CHECK(format_csv_row(r).ends_with(",technique-inapplicable"));
  CHECK_THROWS_AS(parse_csv_row("hog,tiny"), FormatError);
  CHECK_THROWS_AS(parse_csv_row("hog,tiny,64,1,3,3,1,1,1,1,ok"), FormatError);

  std::ostringstream out;
  const std::vector<BenchmarkRecord> recs{r, r};
  write_csv(recs, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == kCsvHeader);
  CHECK(header ==
        "technique,dataset,resolution,accuracy,n_correct,n_query,encode_ms,match_ms,vpr_ms,ratio,"
        "status");
}

TEST_CASE("plot data tables") {
  test::TempDir dir;
  std::vector<BenchmarkRecord> recs{record("hog", "a", 16, 1, 4), record("hog", "a", 32, 2, 4),
                                    record("hog", "b", 16, 0, 12), record("orb", "a", 16, 0, 4)};
  recs.back().status = RecordStatus::technique_inapplicable;
  const auto files = write_plot_data(recs, dir.path() / "plots");
  REQUIRE(files.size() == 4);
  for (const char* name : {"accuracy_vs_resolution.dat", "weighted_accuracy.dat",
                           "vpr_time_vs_resolution.dat", "ratio_vs_resolution.dat"}) {
    CHECK(fs::exists(dir.path() / "plots" / name));
  }
  const auto weighted = read_lines(dir.path() / "plots" / "weighted_accuracy.dat");
  REQUIRE(weighted.size() >= 2);
  CHECK(weighted[0].front() == '#');
  bool found = false;
  for (const auto& line : weighted) {
    if (line.rfind("16", 0) == 0) {
      found = true;
      std::istringstream ss(line);
      int side;
      double hog;
      std::string orb;
      ss >> side >> hog >> orb;
      CHECK(hog == doctest::Approx(1.0 / 16.0));  // (1 + 0) / (4 + 12)
      CHECK(orb == "NaN");
    }
  }
  CHECK(found);
}
