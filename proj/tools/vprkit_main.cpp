// vprkit command-line interface.
//
// Exit codes: 0 success (an image without ORB keypoints is a success),
// 2 usage or input error, 3 internal or encoder error.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vprkit/dataset.hpp"
#include "vprkit/encoders.hpp"
#include "vprkit/error.hpp"
#include "vprkit/evaluation.hpp"

namespace {

using namespace vprkit;

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

// Thrown for failures that map to the usage/input exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> technique_names() {
  std::vector<std::string> names;
  for (Technique t : kAllTechniques) names.emplace_back(to_string(t));
  return names;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

TechniqueParams parse_params(Technique technique, const std::vector<std::string>& assignments) {
  TechniqueParams params;
  for (const auto& a : assignments) {
    try {
      params.set(technique, a);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }
  return params;
}

// ---- encode -------------------------------------------------------------

struct EncodeArgs {
  std::string technique;
  std::string input;
  int resolution = 0;
  std::vector<std::string> params;
  std::string out;
  std::string json;
};

int run_encode(const EncodeArgs& args) {
  const Technique technique = parse_technique(args.technique);
  const TechniqueParams params = parse_params(technique, args.params);

  GrayImage image;
  try {
    image = load_image(args.input);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (args.resolution > 0) image = resize(image, Resolution{args.resolution});

  const auto start = std::chrono::steady_clock::now();
  EncodeOutcome outcome;
  try {
    outcome = encode(technique, image, params);
  } catch (const ImageTooSmall& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (const auto* none = std::get_if<NoKeypoints>(&outcome)) {
    std::cout << "NO_KEYPOINTS\n";
    std::cerr << "orb: " << none->message() << '\n';
    return 0;
  }
  const Descriptor& d = std::get<Descriptor>(outcome);
  if (!args.out.empty()) {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw UsageError("cannot write " + args.out);
    write_descriptor(d, out);
  }
  if (!args.json.empty()) {
    std::ofstream out(args.json, std::ios::binary);
    if (!out) throw UsageError("cannot write " + args.json);
    out << to_json(d, 1) << '\n';
  }
  std::size_t size = 0;
  switch (d.kind()) {
    case DescriptorKind::dense: size = d.dense().values.size(); break;
    case DescriptorKind::regional: size = d.regional().size(); break;
    case DescriptorKind::keypoints: size = d.keypoints().size(); break;
  }
  char line[64];
  std::snprintf(line, sizeof line, "%.3f", ms);
  std::cout << "encode_ms=" << line << '\n'
            << "kind=" << to_string(d.kind()) << " size=" << size << '\n';
  return 0;
}

// ---- bench / sweep ------------------------------------------------------

LoadedDataset load_dataset_or_usage(const std::string& root) {
  try {
    return load_images(load_manifest(root));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

struct BenchArgs {
  std::string dataset;
  std::string technique;
  int resolution = 0;
  int reps = 5;
  int tolerance = 0;
  std::vector<std::string> params;
  bool header = false;
};

int run_bench(const BenchArgs& args) {
  const Technique technique = parse_technique(args.technique);
  EvaluateOptions options;
  options.params = parse_params(technique, args.params);
  options.timing_repetitions = args.reps;
  options.tolerance = args.tolerance;
  const LoadedDataset dataset = load_dataset_or_usage(args.dataset);
  const BenchmarkRecord rec = evaluate(dataset, technique, Resolution{args.resolution}, options);
  if (args.header) std::cout << kCsvHeader << '\n';
  std::cout << format_csv_row(rec) << '\n';
  return 0;
}

struct SweepArgs {
  std::vector<std::string> datasets;
  std::string techniques;
  std::string resolutions;
  std::string out;
  std::string plot_data;
  int reps = 5;
  int jobs = 1;
  int tolerance = 0;
  std::vector<std::string> params;
};

int run_sweep(const SweepArgs& args) {
  SweepConfig config;
  config.timing_repetitions = args.reps;
  config.jobs = args.jobs;
  config.output = args.out;
  if (!args.techniques.empty()) {
    config.techniques.clear();
    for (const auto& name : split_list(args.techniques)) {
      try {
        config.techniques.push_back(parse_technique(name));
      } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
      }
    }
  }
  if (!args.resolutions.empty()) {
    config.resolutions.clear();
    for (const auto& side : split_list(args.resolutions)) {
      try {
        config.resolutions.push_back(Resolution{std::stoi(side)});
      } catch (const std::exception&) {
        throw UsageError("invalid resolution: " + side);
      }
    }
  }
  try {
    config.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }

  EvaluateOptions base;
  base.tolerance = args.tolerance;
  for (const auto& a : args.params) {
    try {
      base.params.set(config.techniques.front(), a);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }

  // Every dataset is loaded and validated before any encoding starts.
  std::vector<LoadedDataset> datasets;
  for (const auto& root : args.datasets) datasets.push_back(load_dataset_or_usage(root));

  std::vector<BenchmarkRecord> records;
  for (const auto& d : datasets) {
    auto part = sweep(d, config, base);
    records.insert(records.end(), part.begin(), part.end());
  }

  if (args.out.empty()) {
    write_csv(records, std::cout);
  } else {
    write_csv(records, std::filesystem::path(args.out));
  }
  if (!args.plot_data.empty()) {
    for (const auto& p : write_plot_data(records, args.plot_data)) std::cerr << "wrote " << p.string() << '\n';
  }
  return 0;
}

// ---- synth --------------------------------------------------------------

struct SynthArgs {
  int n = 0;
  int side = 128;
  std::uint64_t seed = 42;
  int distractors = 0;
  std::string out;
};

int run_synth(SynthArgs args) {
  if (const char* env = std::getenv("VPRKIT_SEED")) {
    try {
      args.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("VPRKIT_SEED is not an unsigned integer: ") + env);
    }
  }
  if (args.n < 1) throw UsageError("--n must be >= 1");
  if (args.side < 1) throw UsageError("--side must be >= 1");
  if (args.distractors < 0) throw UsageError("--distractors must be >= 0");
  const DatasetManifest m = synth_dataset({args.n, args.side, args.seed, args.distractors}, args.out);
  std::cout << "wrote " << m.query_count() << " queries and " << m.reference_count()
            << " references to " << args.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vprkit: handcrafted visual place recognition pipelines and resolution sweeps"};
  app.failure_message(CLI::FailureMessage::help);
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode_cmd = app.add_subcommand("encode", "Resize and encode one image");
  encode_cmd->add_option("--technique", enc.technique, "hog, gist, cohog or orb")
      ->required()
      ->check(CLI::IsMember(technique_names()));
  encode_cmd->add_option("--input", enc.input, "PNG or JPEG image")->required();
  encode_cmd->add_option("--resolution", enc.resolution, "Square side in pixels (default: native)")
      ->check(CLI::PositiveNumber);
  encode_cmd->add_option("--params", enc.params, "Encoder parameters as key=value");
  encode_cmd->add_option("--out", enc.out, "Binary descriptor output");
  encode_cmd->add_option("--json", enc.json, "JSON debug descriptor output");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Evaluate one technique at one resolution");
  bench_cmd->add_option("--dataset", bench.dataset, "Dataset root")->required();
  bench_cmd->add_option("--technique", bench.technique, "hog, gist, cohog or orb")
      ->required()
      ->check(CLI::IsMember(technique_names()));
  bench_cmd->add_option("--resolution", bench.resolution, "Square side in pixels")
      ->required()
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--reps", bench.reps, "Timing repetitions (median kept)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--tolerance", bench.tolerance, "Frame tolerance for correct matches")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--params", bench.params, "Encoder parameters as key=value");
  bench_cmd->add_flag("--header", bench.header, "Print the CSV header first");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Techniques x resolutions over one or more datasets");
  sweep_cmd->add_option("--dataset", sw.datasets, "Dataset root (repeatable)")->required();
  sweep_cmd->add_option("--techniques", sw.techniques, "Comma-separated list (default: all)");
  sweep_cmd->add_option("--resolutions", sw.resolutions,
                        "Comma-separated sides (default: 16,32,64,128,256,512,1024)");
  sweep_cmd->add_option("--out", sw.out, "CSV output (default: stdout)");
  sweep_cmd->add_option("--plot-data", sw.plot_data, "Directory for per-figure data tables");
  sweep_cmd->add_option("--reps", sw.reps, "Timing repetitions (median kept)")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--jobs", sw.jobs, "Worker threads; timed sections still serialise")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--tolerance", sw.tolerance, "Frame tolerance for correct matches")
      ->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--params", sw.params, "Encoder parameters, e.g. orb.fast_threshold=15");

  SynthArgs syn;
  auto* synth_cmd = app.add_subcommand("synth", "Write a deterministic synthetic dataset");
  synth_cmd->add_option("--n", syn.n, "Number of queries")->required();
  synth_cmd->add_option("--side", syn.side, "Image side in pixels");
  synth_cmd->add_option("--seed", syn.seed, "Seed (VPRKIT_SEED overrides)");
  synth_cmd->add_option("--distractors", syn.distractors, "Extra unrelated references");
  synth_cmd->add_option("--out", syn.out, "Dataset root")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*encode_cmd) return run_encode(enc);
    if (*bench_cmd) return run_bench(bench);
    if (*sweep_cmd) return run_sweep(sw);
    if (*synth_cmd) return run_synth(syn);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
