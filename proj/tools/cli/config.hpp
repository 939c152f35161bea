#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasespace/bench.hpp"
#include "phasespace/dynamics.hpp"

namespace phasespace::cli {

/// Thrown for any problem with the configuration file; the message names the
/// offending key and, when known, its line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { transform, evolve, transport, verify, bench };

Command command_from_string(const std::string& name);

struct HamiltonianConfig {
  std::string preset;  // harmonic, tight_binding, kicked_rotor; empty when a file is given
  double omega0 = 1.0;
  int center_p = 0;
  int center_q = 0;
  double hopping = 1.0;
  double onsite = 0.0;
  double kick = 1.0;
  double period = 1.0;
  double pulse_width = 0.1;
  std::optional<std::filesystem::path> matrix_file;  // row,col,re,im in the position basis
  std::optional<std::filesystem::path> symbol_file;  // p,q,re,im

  std::string label() const;
};

struct StateConfig {
  std::string type = "wavepacket";  // wavepacket, basis_state, mixed, file
  int center_p = 0;
  int center_q = 0;
  std::optional<double> width;
  int q0 = 0;
  struct Component {
    int center_p = 0;
    int center_q = 0;
    double weight = 1.0;
  };
  std::vector<Component> components;  // mixed; empty means the maximally mixed state
  std::optional<std::filesystem::path> file;
};

/// Constant value or a per-slice list of symbol files.
struct SymbolSource {
  double constant = 0.0;
  std::vector<std::filesystem::path> files;
};

struct TransportConfig {
  std::vector<double> energies{0.0};
  SymbolSource injection;
  SymbolSource broadening;
  SymbolSource retarded_real;
  SymbolSource spectral{1.0, {}};
  std::optional<SymbolSource> initial;  // default: Wigner function of the state
  double dt = 0.01;
  int steps = 100;
  int stride = 10;
};

struct TransformConfig {
  std::string source = "hamiltonian";  // hamiltonian, state, file
  std::optional<std::filesystem::path> file;
};

struct VerifyConfig {
  std::vector<int> sizes;  // default: {N}
};

struct RunConfig {
  int n = 0;
  std::uint64_t seed = 1;
  int workers = 1;
  std::filesystem::path output = "out";
  HamiltonianConfig hamiltonian;
  StateConfig state;
  PropagatorConfig propagator;
  TransformConfig transform;
  TransportConfig transport;
  VerifyConfig verify;
  BenchConfig bench;
};

/// Parses YAML text. Relative file paths resolve against `base_dir`.
/// Throws ConfigError.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

/// Reads and parses a config file; a missing file is reported with its path.
RunConfig load_config(const std::filesystem::path& path);

/// Applies PHASESPACE_WORKERS, which caps the worker count when set.
int effective_workers(int configured);

}  // namespace phasespace::cli
