#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "phasespace/io.hpp"

namespace phasespace::cli {

namespace {

namespace fs = std::filesystem;

std::string at_line(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return "";
  return " (line " + std::to_string(m.line + 1) + ")";
}

[[noreturn]] void fail(const std::string& key, const YAML::Node& node, const std::string& what) {
  throw ConfigError("config key '" + key + "'" + at_line(node) + ": " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void require_map(const YAML::Node& node, const std::string& key) {
  if (!node.IsMap()) fail(key, node, "expected a mapping");
}

void check_keys(const YAML::Node& map, const std::string& prefix, std::initializer_list<std::string_view> allowed) {
  for (const auto& kv : map) {
    const std::string name = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
      std::string list;
      for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      throw ConfigError("unknown config key '" + join(prefix, name) + "'" + at_line(kv.first) + "; expected one of: " +
                        list);
    }
  }
}

std::string scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail(key, node, "expected a scalar value");
  return node.Scalar();
}

double as_double(const YAML::Node& node, const std::string& key) {
  try {
    return io::parse_double(scalar(node, key), key);
  } catch (const std::invalid_argument&) {
    fail(key, node, "expected a number, got '" + node.Scalar() + "'");
  }
}

long long as_integer(const YAML::Node& node, const std::string& key) {
  try {
    return io::parse_integer(scalar(node, key), key);
  } catch (const std::invalid_argument&) {
    fail(key, node, "expected an integer, got '" + node.Scalar() + "'");
  }
}

int as_int(const YAML::Node& node, const std::string& key) {
  const long long v = as_integer(node, key);
  if (v < -1000000000LL || v > 1000000000LL) fail(key, node, "integer out of range");
  return static_cast<int>(v);
}

int as_positive(const YAML::Node& node, const std::string& key) {
  const int v = as_int(node, key);
  if (v <= 0) fail(key, node, "must be positive");
  return v;
}

template <class F>
auto as_list(const YAML::Node& node, const std::string& key, F&& element) {
  if (!node.IsSequence()) fail(key, node, "expected a list");
  std::vector<decltype(element(node, key))> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(element(node[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

std::pair<int, int> as_point(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence() || node.size() != 2) fail(key, node, "expected [p, q]");
  return {as_int(node[0], key + "[0]"), as_int(node[1], key + "[1]")};
}

fs::path as_file(const YAML::Node& node, const std::string& key, const fs::path& base) {
  fs::path p = scalar(node, key);
  if (p.is_relative() && !base.empty()) p = base / p;
  if (!fs::exists(p)) fail(key, node, "file not found: " + p.string());
  return p;
}

int as_odd_dimension(const YAML::Node& node, const std::string& key) {
  const int n = as_int(node, key);
  if (n < 3 || n % 2 == 0) fail(key, node, "N must be odd and at least 3 (got " + std::to_string(n) + ")");
  return n;
}

HamiltonianConfig parse_hamiltonian(const YAML::Node& node, const fs::path& base) {
  const std::string k = "hamiltonian";
  require_map(node, k);
  check_keys(node, k, {"preset", "matrix", "symbol", "omega0", "center", "hopping", "onsite", "kick", "period",
                       "pulse_width"});
  HamiltonianConfig h;
  const int sources = int(bool(node["preset"])) + int(bool(node["matrix"])) + int(bool(node["symbol"]));
  if (sources != 1) fail(k, node, "give exactly one of 'preset', 'matrix' or 'symbol'");
  if (node["preset"]) {
    h.preset = scalar(node["preset"], k + ".preset");
    if (h.preset != "harmonic" && h.preset != "tight_binding" && h.preset != "kicked_rotor") {
      fail(k + ".preset", node["preset"], "unknown preset '" + h.preset + "' (harmonic, tight_binding, kicked_rotor)");
    }
  }
  if (node["matrix"]) h.matrix_file = as_file(node["matrix"], k + ".matrix", base);
  if (node["symbol"]) h.symbol_file = as_file(node["symbol"], k + ".symbol", base);
  if (node["omega0"]) h.omega0 = as_double(node["omega0"], k + ".omega0");
  if (node["center"]) std::tie(h.center_p, h.center_q) = as_point(node["center"], k + ".center");
  if (node["hopping"]) h.hopping = as_double(node["hopping"], k + ".hopping");
  if (node["onsite"]) h.onsite = as_double(node["onsite"], k + ".onsite");
  if (node["kick"]) h.kick = as_double(node["kick"], k + ".kick");
  if (node["period"]) h.period = as_double(node["period"], k + ".period");
  if (node["pulse_width"]) h.pulse_width = as_double(node["pulse_width"], k + ".pulse_width");
  return h;
}

StateConfig parse_state(const YAML::Node& node, const fs::path& base) {
  const std::string k = "state";
  require_map(node, k);
  check_keys(node, k, {"type", "center", "width", "q0", "components", "file"});
  StateConfig s;
  if (node["type"]) s.type = scalar(node["type"], k + ".type");
  if (s.type != "wavepacket" && s.type != "basis_state" && s.type != "mixed" && s.type != "file") {
    fail(k + ".type", node["type"], "unknown state type '" + s.type + "' (wavepacket, basis_state, mixed, file)");
  }
  if (node["center"]) std::tie(s.center_p, s.center_q) = as_point(node["center"], k + ".center");
  if (node["width"]) {
    s.width = as_double(node["width"], k + ".width");
    if (!(*s.width > 0.0)) fail(k + ".width", node["width"], "must be positive");
  }
  if (node["q0"]) s.q0 = as_int(node["q0"], k + ".q0");
  if (node["components"]) {
    const YAML::Node list = node["components"];
    if (!list.IsSequence()) fail(k + ".components", list, "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string ck = k + ".components[" + std::to_string(i) + "]";
      require_map(list[i], ck);
      check_keys(list[i], ck, {"center", "weight"});
      StateConfig::Component c;
      if (list[i]["center"]) std::tie(c.center_p, c.center_q) = as_point(list[i]["center"], ck + ".center");
      if (list[i]["weight"]) c.weight = as_double(list[i]["weight"], ck + ".weight");
      if (!(c.weight > 0.0)) fail(ck + ".weight", list[i]["weight"], "must be positive");
      s.components.push_back(c);
    }
  }
  if (node["file"]) s.file = as_file(node["file"], k + ".file", base);
  if (s.type == "file" && !s.file) fail(k, node, "type 'file' needs 'file'");
  return s;
}

PropagatorConfig parse_evolve(const YAML::Node& node) {
  const std::string k = "evolve";
  require_map(node, k);
  check_keys(node, k, {"engine", "integrator", "dt", "steps", "stride"});
  PropagatorConfig c;
  try {
    if (node["engine"]) c.engine = engine_from_string(scalar(node["engine"], k + ".engine"));
  } catch (const std::invalid_argument& e) {
    fail(k + ".engine", node["engine"], e.what());
  }
  try {
    if (node["integrator"]) c.integrator = integrator_from_string(scalar(node["integrator"], k + ".integrator"));
  } catch (const std::invalid_argument& e) {
    fail(k + ".integrator", node["integrator"], e.what());
  }
  if (node["dt"]) c.dt = as_double(node["dt"], k + ".dt");
  if (node["steps"]) c.steps = as_positive(node["steps"], k + ".steps");
  if (node["stride"]) c.stride = as_positive(node["stride"], k + ".stride");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    fail(k, node, e.what());
  }
  return c;
}

SymbolSource parse_source(const YAML::Node& node, const std::string& k, const fs::path& base) {
  SymbolSource s;
  if (node.IsScalar()) {
    s.constant = as_double(node, k);
    return s;
  }
  require_map(node, k);
  check_keys(node, k, {"constant", "files"});
  if (node["constant"] && node["files"]) fail(k, node, "give either 'constant' or 'files'");
  if (node["constant"]) s.constant = as_double(node["constant"], k + ".constant");
  if (node["files"]) {
    s.files = as_list(node["files"], k + ".files",
                      [&](const YAML::Node& n, const std::string& key) { return as_file(n, key, base); });
    if (s.files.empty()) fail(k + ".files", node["files"], "list is empty");
  }
  return s;
}

TransportConfig parse_transport(const YAML::Node& node, const fs::path& base) {
  const std::string k = "transport";
  require_map(node, k);
  check_keys(node, k, {"energies", "energy_range", "dt", "steps", "stride", "injection", "broadening",
                       "retarded_real", "spectral", "initial"});
  TransportConfig t;
  if (node["energies"] && node["energy_range"]) fail(k, node, "give either 'energies' or 'energy_range'");
  if (node["energies"]) {
    t.energies = as_list(node["energies"], k + ".energies", as_double);
    if (t.energies.empty()) fail(k + ".energies", node["energies"], "list is empty");
  }
  if (node["energy_range"]) {
    const YAML::Node r = node["energy_range"];
    const std::string rk = k + ".energy_range";
    require_map(r, rk);
    check_keys(r, rk, {"min", "max", "points"});
    if (!r["min"] || !r["max"] || !r["points"]) fail(rk, r, "needs 'min', 'max' and 'points'");
    const double lo = as_double(r["min"], rk + ".min");
    const double hi = as_double(r["max"], rk + ".max");
    const int pts = as_positive(r["points"], rk + ".points");
    if (pts > 1 && !(hi > lo)) fail(rk, r, "'max' must exceed 'min'");
    t.energies.clear();
    for (int i = 0; i < pts; ++i) t.energies.push_back(pts == 1 ? lo : lo + (hi - lo) * i / (pts - 1));
  }
  for (std::size_t i = 1; i < t.energies.size(); ++i) {
    if (!(t.energies[i] > t.energies[i - 1])) fail(k + ".energies", node["energies"], "must be strictly increasing");
  }
  if (node["dt"]) t.dt = as_double(node["dt"], k + ".dt");
  if (!(t.dt > 0.0)) fail(k + ".dt", node["dt"], "must be positive");
  if (node["steps"]) t.steps = as_positive(node["steps"], k + ".steps");
  if (node["stride"]) t.stride = as_positive(node["stride"], k + ".stride");
  if (t.steps % t.stride != 0) fail(k + ".stride", node["stride"], "must divide 'steps'");
  if (node["injection"]) t.injection = parse_source(node["injection"], k + ".injection", base);
  if (node["broadening"]) t.broadening = parse_source(node["broadening"], k + ".broadening", base);
  if (node["retarded_real"]) t.retarded_real = parse_source(node["retarded_real"], k + ".retarded_real", base);
  if (node["spectral"]) t.spectral = parse_source(node["spectral"], k + ".spectral", base);
  if (node["initial"]) t.initial = parse_source(node["initial"], k + ".initial", base);
  return t;
}

BenchConfig parse_bench(const YAML::Node& node) {
  const std::string k = "bench";
  require_map(node, k);
  check_keys(node, k, {"sizes", "engines", "min_seconds", "min_steps"});
  BenchConfig b;
  if (node["sizes"]) b.sizes = as_list(node["sizes"], k + ".sizes", as_odd_dimension);
  if (node["engines"]) b.engines = as_list(node["engines"], k + ".engines", scalar);
  if (node["min_seconds"]) b.min_seconds = as_double(node["min_seconds"], k + ".min_seconds");
  if (node["min_steps"]) b.min_steps = as_positive(node["min_steps"], k + ".min_steps");
  return b;
}

}  // namespace

Command command_from_string(const std::string& name) {
  if (name == "transform") return Command::transform;
  if (name == "evolve") return Command::evolve;
  if (name == "transport") return Command::transport;
  if (name == "verify") return Command::verify;
  if (name == "bench") return Command::bench;
  throw ConfigError("unknown command '" + name + "' (transform, evolve, transport, verify, bench)");
}

std::string HamiltonianConfig::label() const {
  if (matrix_file) return "matrix:" + matrix_file->filename().string();
  if (symbol_file) return "symbol:" + symbol_file->filename().string();
  return preset;
}

RunConfig parse_config(const std::string& text, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("malformed config (line " + std::to_string(e.mark.line + 1) + "): " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping of keys to values");
  check_keys(root, "", {"N", "seed", "workers", "output", "hamiltonian", "state", "evolve", "transform", "transport",
                        "verify", "bench"});
  RunConfig c;
  if (root["N"]) c.n = as_odd_dimension(root["N"], "N");
  if (root["seed"]) {
    const long long s = as_integer(root["seed"], "seed");
    if (s < 0) fail("seed", root["seed"], "must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (root["workers"]) c.workers = as_positive(root["workers"], "workers");
  if (root["output"]) c.output = scalar(root["output"], "output");
  if (root["hamiltonian"]) {
    c.hamiltonian = parse_hamiltonian(root["hamiltonian"], base_dir);
  } else {
    c.hamiltonian.preset = "harmonic";
  }
  if (root["state"]) c.state = parse_state(root["state"], base_dir);
  if (root["evolve"]) c.propagator = parse_evolve(root["evolve"]);
  if (root["transform"]) {
    const YAML::Node t = root["transform"];
    require_map(t, "transform");
    check_keys(t, "transform", {"source", "file"});
    if (t["source"]) c.transform.source = scalar(t["source"], "transform.source");
    if (c.transform.source != "hamiltonian" && c.transform.source != "state" && c.transform.source != "file") {
      fail("transform.source", t["source"], "expected hamiltonian, state or file");
    }
    if (t["file"]) c.transform.file = as_file(t["file"], "transform.file", base_dir);
    if (c.transform.source == "file" && !c.transform.file) fail("transform", t, "source 'file' needs 'file'");
  }
  if (root["transport"]) c.transport = parse_transport(root["transport"], base_dir);
  if (root["verify"]) {
    const YAML::Node v = root["verify"];
    require_map(v, "verify");
    check_keys(v, "verify", {"sizes"});
    if (v["sizes"]) c.verify.sizes = as_list(v["sizes"], "verify.sizes", as_odd_dimension);
  }
  if (root["bench"]) c.bench = parse_bench(root["bench"]);
  c.bench.seed = c.seed;
  c.bench.workers = c.workers;
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

int effective_workers(int configured) {
  const char* env = std::getenv("PHASESPACE_WORKERS");
  if (env == nullptr || *env == '\0') return configured;
  long long cap = 0;
  try {
    cap = io::parse_integer(env, "PHASESPACE_WORKERS");
  } catch (const std::invalid_argument&) {
    throw ConfigError(std::string("PHASESPACE_WORKERS must be a positive integer, got '") + env + "'");
  }
  if (cap <= 0) throw ConfigError(std::string("PHASESPACE_WORKERS must be a positive integer, got '") + env + "'");
  return static_cast<int>(std::min<long long>(configured, cap));
}

}  // namespace phasespace::cli
