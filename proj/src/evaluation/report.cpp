#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "vprkit/error.hpp"
#include "vprkit/evaluation.hpp"

namespace vprkit {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Dataset labels become single whitespace-free tokens in plot tables.
std::string token(std::string s) {
  for (char& c : s) {
    if (c == ' ' || c == '\t') c = '_';
  }
  return s.empty() ? "-" : s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s = s.substr(pos + 1);
  }
  return out;
}

template <typename T>
T parse_field(std::string_view text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw FormatError("malformed CSV field: '" + std::string(text) + "'");
  return v;
}

struct Table {
  std::vector<std::string> techniques;  // column order
  std::set<std::string> seen;

  void add(const std::string& t) {
    if (seen.insert(t).second) techniques.push_back(t);
  }
};

void write_header(std::ofstream& out, const std::string& lead, const Table& t,
                  const std::string& suffix) {
  out << "# " << lead;
  for (const auto& name : t.techniques) out << ' ' << name << suffix;
  out << '\n';
}

std::ofstream open_table(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_csv_row(const BenchmarkRecord& r) {
  std::string row;
  row += r.technique;
  row += ',' + r.dataset;
  row += ',' + std::to_string(r.resolution.side) + 'x' + std::to_string(r.resolution.side);
  row += ',' + fixed(r.accuracy, 3);
  row += ',' + std::to_string(r.n_correct);
  row += ',' + std::to_string(r.n_query);
  row += ',' + fixed(r.timing.t_e * 1e3, 3);
  row += ',' + fixed(r.timing.t_m * 1e3, 3);
  row += ',' + fixed(r.timing.t_vpr * 1e3, 3);
  row += ',' + fixed(r.ratio, 4);
  row += ',' + std::string(to_string(r.status));
  return row;
}

void write_csv(std::span<const BenchmarkRecord> records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << format_csv_row(r) << '\n';
}

void write_csv(std::span<const BenchmarkRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(records, out);
  if (!out) throw IoError("failed writing " + path.string());
}

BenchmarkRecord parse_csv_row(std::string_view row) {
  while (!row.empty() && (row.back() == '\r' || row.back() == '\n')) row.remove_suffix(1);
  const auto f = split(row, ',');
  if (f.size() != 11) throw FormatError("expected 11 CSV fields, got " + std::to_string(f.size()));
  BenchmarkRecord r;
  r.technique = std::string(f[0]);
  r.dataset = std::string(f[1]);
  const auto x = f[2].find('x');
  if (x == std::string_view::npos) throw FormatError("resolution must be <side>x<side>");
  r.resolution = Resolution{parse_field<int>(f[2].substr(0, x))};
  r.accuracy = parse_field<double>(f[3]);
  r.n_correct = parse_field<std::size_t>(f[4]);
  r.n_query = parse_field<std::size_t>(f[5]);
  r.timing = {parse_field<double>(f[6]) / 1e3, parse_field<double>(f[7]) / 1e3,
              parse_field<double>(f[8]) / 1e3};
  r.ratio = parse_field<double>(f[9]);
  if (f[10] == "ok") r.status = RecordStatus::ok;
  else if (f[10] == "technique-inapplicable") r.status = RecordStatus::technique_inapplicable;
  else throw FormatError("unknown status: " + std::string(f[10]));
  return r;
}

std::vector<std::filesystem::path> write_plot_data(std::span<const BenchmarkRecord> records,
                                                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());

  Table table;
  std::vector<std::string> datasets;
  std::set<std::string> seen_datasets;
  std::set<int> sides;
  std::map<std::tuple<std::string, int, std::string>, const BenchmarkRecord*> cell;
  for (const auto& r : records) {
    table.add(r.technique);
    if (seen_datasets.insert(r.dataset).second) datasets.push_back(r.dataset);
    sides.insert(r.resolution.side);
    cell[{r.dataset, r.resolution.side, r.technique}] = &r;
  }

  const auto nan = std::string("NaN");
  auto per_dataset = [&](const std::filesystem::path& path, const std::string& suffix,
                         auto value) {
    std::ofstream out = open_table(path);
    write_header(out, "dataset side", table, suffix);
    for (const auto& d : datasets) {
      for (int side : sides) {
        out << token(d) << ' ' << side;
        for (const auto& t : table.techniques) {
          const auto it = cell.find({d, side, t});
          out << ' '
              << (it == cell.end() || it->second->status != RecordStatus::ok ? nan
                                                                              : value(*it->second));
        }
        out << '\n';
      }
      out << '\n';  // blank line between datasets (gnuplot index blocks)
    }
    if (!out) throw IoError("failed writing " + path.string());
  };

  std::vector<std::filesystem::path> written;
  written.push_back(dir / "accuracy_vs_resolution.dat");
  per_dataset(written.back(), "", [](const BenchmarkRecord& r) { return fixed(r.accuracy, 6); });

  written.push_back(dir / "weighted_accuracy.dat");
  {
    std::ofstream out = open_table(written.back());
    write_header(out, "side", table, "");
    std::map<std::pair<std::string, int>, WeightedAccuracy> avg;
    if (!records.empty()) {
      for (const auto& w : weighted_average_accuracy(records)) avg[{w.technique, w.resolution.side}] = w;
    }
    for (int side : sides) {
      out << side;
      for (const auto& t : table.techniques) {
        const auto it = avg.find({t, side});
        out << ' '
            << (it == avg.end() || it->second.all_inapplicable ? nan
                                                               : fixed(it->second.accuracy, 6));
      }
      out << '\n';
    }
    if (!out) throw IoError("failed writing " + written.back().string());
  }

  written.push_back(dir / "vpr_time_vs_resolution.dat");
  per_dataset(written.back(), "_ms",
              [](const BenchmarkRecord& r) { return fixed(r.timing.t_vpr * 1e3, 6); });

  written.push_back(dir / "ratio_vs_resolution.dat");
  per_dataset(written.back(), "", [](const BenchmarkRecord& r) { return fixed(r.ratio, 6); });
  return written;
}

}  // namespace vprkit
