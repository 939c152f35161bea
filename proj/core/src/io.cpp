#include "phasespace/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace phasespace::io {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
  }
  return out;
}

std::string line_context(std::size_t line_no) { return "line " + std::to_string(line_no); }

// Reads "a,b,x[,y]" rows after a header; calls sink(a, b, x, y, line_no).
template <typename Sink>
void read_rows(std::istream& in, const std::vector<std::vector<std::string>>& headers, Sink sink) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (columns == 0) {
      for (const auto& h : headers) {
        if (fields.size() != h.size()) continue;
        bool match = true;
        for (std::size_t k = 0; k < h.size(); ++k) match = match && fields[k] == h[k];
        if (match) columns = h.size();
      }
      if (columns == 0) throw std::invalid_argument("unrecognised CSV header on " + line_context(line_no));
      continue;
    }
    if (fields.size() != columns) {
      throw std::invalid_argument("expected " + std::to_string(columns) + " fields on " + line_context(line_no));
    }
    const std::string where = line_context(line_no);
    const long long a = parse_integer(fields[0], where);
    const long long b = parse_integer(fields[1], where);
    const double x = parse_double(fields[2], where);
    const double y = columns == 4 ? parse_double(fields[3], where) : 0.0;
    sink(a, b, x, y, line_no);
  }
  if (columns == 0) throw std::invalid_argument("CSV input is empty");
}

ComplexMatrix read_square_grid(std::istream& in, int n, const std::vector<std::vector<std::string>>& headers) {
  ComplexMatrix grid(n, n);
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  read_rows(in, headers, [&](long long a, long long b, double x, double y, std::size_t line_no) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw std::invalid_argument("index out of range on " + line_context(line_no));
    char& flag = seen[static_cast<std::size_t>(a) * n + b];
    if (flag) throw std::invalid_argument("duplicate entry on " + line_context(line_no));
    flag = 1;
    grid(a, b) = Complex(x, y);
  });
  for (char f : seen)
    if (!f) throw std::invalid_argument("CSV grid is incomplete");
  return grid;
}

void write_grid(std::ostream& out, const ComplexMatrix& grid, const char* header, bool real_only) {
  out << header << '\n';
  for (int a = 0; a < grid.rows(); ++a)
    for (int b = 0; b < grid.cols(); ++b) {
      out << a << ',' << b << ',' << format_double(grid(a, b).real());
      if (!real_only) out << ',' << format_double(grid(a, b).imag());
      out << '\n';
    }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token, std::string_view what) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (token.empty() || res.ec != std::errc() || res.ptr != last) {
    throw std::invalid_argument("cannot parse '" + std::string(token) + "' as a number (" + std::string(what) + ")");
  }
  return value;
}

long long parse_integer(std::string_view token, std::string_view what) {
  long long value = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument("cannot parse '" + std::string(token) + "' as an integer (" + std::string(what) + ")");
  }
  return value;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_distribution_csv(std::ostream& out, const QuasiDistribution& dist) {
  const bool real_only = dist.max_imag() == 0.0;
  write_grid(out, dist.grid(), real_only ? "p,q,value" : "p,q,re,im", real_only);
}

QuasiDistribution read_distribution_csv(std::istream& in, const SpacePtr& space, DistributionKind kind) {
  return QuasiDistribution(space, read_square_grid(in, space->dimension(), {{"p", "q", "value"}, {"p", "q", "re", "im"}}),
                           kind);
}

void write_symbol_csv(std::ostream& out, const WeylSymbol& symbol) {
  write_grid(out, symbol.grid(), "p,q,re,im", false);
}

WeylSymbol read_symbol_csv(std::istream& in, const SpacePtr& space) {
  return WeylSymbol(space, read_square_grid(in, space->dimension(), {{"p", "q", "re", "im"}, {"p", "q", "value"}}));
}

void write_matrix_csv(std::ostream& out, const ComplexMatrix& m) { write_grid(out, m, "row,col,re,im", false); }

ComplexMatrix read_matrix_csv(std::istream& in) {
  struct Entry {
    long long r, c;
    Complex z;
    std::size_t line;
  };
  std::vector<Entry> entries;
  long long extent = 0;
  read_rows(in, {{"row", "col", "re", "im"}}, [&](long long r, long long c, double x, double y, std::size_t line_no) {
    if (r < 0 || c < 0) throw std::invalid_argument("negative index on " + line_context(line_no));
    extent = std::max({extent, r + 1, c + 1});
    entries.push_back({r, c, Complex(x, y), line_no});
  });
  if (extent * extent != static_cast<long long>(entries.size())) {
    throw std::invalid_argument("matrix CSV must list every entry of a square matrix exactly once");
  }
  const int n = static_cast<int>(extent);
  ComplexMatrix m(n, n);
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  for (const auto& e : entries) {
    char& flag = seen[static_cast<std::size_t>(e.r) * n + e.c];
    if (flag) throw std::invalid_argument("duplicate entry on " + line_context(e.line));
    flag = 1;
    m(e.r, e.c) = e.z;
  }
  return m;
}

std::string distribution_to_json(const QuasiDistribution& dist, double time) {
  const int n = dist.dimension();
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int p = 0; p < n; ++p) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ir = nlohmann::json::array();
    for (int q = 0; q < n; ++q) {
      rr.push_back(dist.grid()(p, q).real());
      ir.push_back(dist.grid()(p, q).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  nlohmann::json j;
  j["N"] = n;
  j["kind"] = std::string(to_string(dist.kind()));
  j["time"] = time;
  j["normalization"] = dist.normalization();
  j["grid"] = {{"re", std::move(re)}, {"im", std::move(im)}};
  return j.dump(2);
}

DistributionEnvelope distribution_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed distribution JSON: ") + e.what());
  }
  for (const char* key : {"N", "kind", "time", "grid"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("distribution JSON lacks key '") + key + "'");
  const int n = j.at("N").get<int>();
  const SpacePtr space = make_space(n);
  const auto& re = j.at("grid").at("re");
  const auto& im = j.at("grid").at("im");
  if (re.size() != static_cast<std::size_t>(n) || im.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("distribution JSON grid has the wrong number of rows");
  }
  ComplexMatrix grid(n, n);
  for (int p = 0; p < n; ++p) {
    if (re[p].size() != static_cast<std::size_t>(n) || im[p].size() != static_cast<std::size_t>(n)) {
      throw std::invalid_argument("distribution JSON grid row " + std::to_string(p) + " has the wrong length");
    }
    for (int q = 0; q < n; ++q) grid(p, q) = Complex(re[p][q].get<double>(), im[p][q].get<double>());
  }
  const DistributionKind kind = distribution_kind_from_string(j.at("kind").get<std::string>());
  return {QuasiDistribution(space, std::move(grid), kind), j.at("time").get<double>()};
}

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, const TrajectoryMetadata& meta) {
  std::filesystem::create_directories(dir);
  nlohmann::json log = nlohmann::json::array();
  for (const auto& snap : traj.snapshots) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%08d.csv", snap.step);
    std::ostringstream csv;
    write_distribution_csv(csv, snap.distribution);
    write_text_file(dir / name, csv.str());
    log.push_back({{"step", snap.step},
                   {"time", snap.time},
                   {"file", name},
                   {"trace", snap.trace},
                   {"purity", snap.purity},
                   {"energy", snap.energy},
                   {"max_imag", snap.max_imag}});
  }
  nlohmann::json m;
  m["engine"] = meta.engine_label ? *meta.engine_label : std::string(to_string(traj.config.engine));
  m["integrator"] = std::string(to_string(traj.config.integrator));
  m["N"] = traj.dimension;
  m["dt"] = traj.config.dt;
  m["steps"] = traj.config.steps;
  m["stride"] = traj.config.stride;
  m["hamiltonian"] = meta.hamiltonian;
  m["warnings"] = traj.warnings;
  m["snapshots"] = std::move(log);
  if (meta.wall_time_seconds) m["wall_time_seconds"] = *meta.wall_time_seconds;
  write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace phasespace::io
