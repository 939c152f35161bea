#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "phasespace/hamiltonian.hpp"

namespace phasespace::cli {

HamiltonianSpec build_hamiltonian(const RunConfig& cfg, const SpacePtr& space);
OperatorMatrix build_state(const RunConfig& cfg, const SpacePtr& space);

int run_transform(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int run_evolve(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int run_transport(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int run_bench(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

struct VerifyRow {
  std::string check;
  int n = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass() const { return max_error <= tolerance; }
};

/// The invariant suite run by `verify`, one row per check and lattice size.
std::vector<VerifyRow> verify_suite(const std::vector<int>& sizes, std::uint64_t seed);

int run_verify(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// Dispatches one command; returns the process exit status.
int run(Command command, const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

}  // namespace phasespace::cli
