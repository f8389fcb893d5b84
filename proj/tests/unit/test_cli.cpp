#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "vprkit/dataset.hpp"
#include "vprkit/descriptor.hpp"
#include "vprkit/evaluation.hpp"

using namespace vprkit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const test::TempDir& dir, const std::string& args, const std::string& env = "") {
  const fs::path out = dir.path() / "stdout.txt";
  const fs::path err = dir.path() / "stderr.txt";
  const std::string cmd = env + " '" + std::string(VPRKIT_CLI_PATH) + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::vector<std::string> tree(const fs::path& root) {
  std::vector<std::string> entries;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    entries.push_back(fs::relative(e.path(), root).string() +
                      (e.is_regular_file() ? ":" + slurp(e.path()) : ""));
  }
  std::sort(entries.begin(), entries.end());
  return entries;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  test::TempDir dir;
  CHECK(run(dir, "").code == 2);
  const Run bad = run(dir, "encode --technique sift --input x.png");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("Usage") != std::string::npos);
  CHECK(run(dir, "bench --dataset nowhere --technique hog --resolution 64").code == 2);
  CHECK(run(dir, "synth --n 0 --out '" + (dir.path() / "z").string() + "'").code == 2);
  CHECK(run(dir, "encode --technique hog --input '" + (dir.path() / "missing.png").string() + "'")
            .code == 2);
  CHECK(run(dir, "--help").code == 0);
}

TEST_CASE("synth is deterministic and loadable") {
  test::TempDir dir;
  const fs::path a = dir.path() / "a", b = dir.path() / "b";
  REQUIRE(run(dir, "synth --n 5 --side 128 --seed 42 --out '" + a.string() + "'").code == 0);
  REQUIRE(run(dir, "synth --n 5 --side 128 --seed 42 --out '" + b.string() + "'").code == 0);
  CHECK(tree(a) == tree(b));
  const DatasetManifest m = load_manifest(a);
  CHECK(m.query_count() == 5);

  const fs::path c = dir.path() / "c";
  REQUIRE(run(dir, "synth --n 5 --side 128 --seed 1 --out '" + c.string() + "'", "VPRKIT_SEED=42")
              .code == 0);
  CHECK(tree(a) == tree(c));
}

TEST_CASE("encode writes descriptors") {
  test::TempDir dir;
  const fs::path img = dir.path() / "a.png";
  save_png(render_scene(3, 100), img);
  const fs::path hog = dir.path() / "a.hog";
  const Run r = run(dir, "encode --technique hog --input '" + img.string() +
                             "' --resolution 64 --out '" + hog.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("encode_ms=") != std::string::npos);
  std::ifstream in(hog, std::ios::binary);
  const Descriptor d = read_descriptor(in);
  CHECK(d.dense().values.size() == 144);

  const fs::path json = dir.path() / "a.json";
  CHECK(run(dir, "encode --technique cohog --input '" + img.string() + "' --json '" +
                     json.string() + "' --params cell_side=8")
            .code == 0);
  CHECK(from_json(slurp(json)).kind() == DescriptorKind::regional);
  CHECK(run(dir, "encode --technique hog --input '" + img.string() + "' --params bogus=1").code ==
        2);

  const fs::path flat = dir.path() / "const.png";
  save_png(GrayImage(64, 64, 0.5f), flat);
  const Run none =
      run(dir, "encode --technique orb --input '" + flat.string() + "' --resolution 256");
  CHECK(none.code == 0);
  CHECK(none.out == "NO_KEYPOINTS\n");

  // HOG cannot describe an 8x8 image.
  CHECK(run(dir, "encode --technique hog --input '" + img.string() + "' --resolution 8").code == 3);
}

TEST_CASE("bench prints one CSV row") {
  test::TempDir dir;
  const fs::path data = dir.path() / "ident";
  REQUIRE(run(dir, "synth --n 4 --side 64 --out '" + data.string() + "'").code == 0);
  // Make the map byte-identical to the queries.
  fs::remove_all(data / "reference");
  fs::copy(data / "query", data / "reference");

  const Run hog = run(dir, "bench --dataset '" + data.string() +
                               "' --technique hog --resolution 64 --reps 5");
  REQUIRE(hog.code == 0);
  CHECK(count_lines(hog.out) == 1);
  const BenchmarkRecord rec = parse_csv_row(hog.out.substr(0, hog.out.size() - 1));
  CHECK(rec.accuracy == 1.0);
  CHECK(hog.out.find(",1.000,") != std::string::npos);
  CHECK(rec.dataset == "ident");

  const Run orb =
      run(dir, "bench --dataset '" + data.string() + "' --technique orb --resolution 16 --header");
  REQUIRE(orb.code == 0);
  CHECK(count_lines(orb.out) == 2);
  CHECK(orb.out.rfind(std::string(kCsvHeader), 0) == 0);
  CHECK(orb.out.find("technique-inapplicable") != std::string::npos);
}

TEST_CASE("sweep writes CSV and plot tables") {
  test::TempDir dir;
  const fs::path a = dir.path() / "a", b = dir.path() / "b";
  REQUIRE(run(dir, "synth --n 3 --side 64 --seed 1 --out '" + a.string() + "'").code == 0);
  REQUIRE(run(dir, "synth --n 6 --side 64 --seed 2 --out '" + b.string() + "'").code == 0);
  const fs::path csv = dir.path() / "out.csv";
  const fs::path plots = dir.path() / "plots";
  const Run r = run(dir, "sweep --dataset '" + a.string() + "' --techniques hog,cohog --reps 1" +
                             " --resolutions 16,32,64,128,256,512,1024 --out '" + csv.string() +
                             "' --plot-data '" + plots.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(count_lines(slurp(csv)) == 15);  // header + 2 x 7
  for (const char* name : {"accuracy_vs_resolution.dat", "weighted_accuracy.dat",
                           "vpr_time_vs_resolution.dat", "ratio_vs_resolution.dat"}) {
    CHECK(fs::exists(plots / name));
  }

  const Run two = run(dir, "sweep --dataset '" + a.string() + "' --dataset '" + b.string() +
                               "' --techniques hog --resolutions 32 --reps 1");
  REQUIRE(two.code == 0);
  CHECK(count_lines(two.out) == 3);

  // Bad inputs are rejected before any work.
  CHECK(run(dir, "sweep --dataset '" + a.string() + "' --dataset nowhere").code == 2);
  CHECK(run(dir, "sweep --dataset '" + a.string() + "' --techniques hog,sift").code == 2);
  CHECK(run(dir, "sweep --dataset '" + a.string() + "' --resolutions 16,abc").code == 2);
}
