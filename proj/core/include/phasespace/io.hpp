#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "phasespace/distributions.hpp"
#include "phasespace/dynamics.hpp"

namespace phasespace::io {

/// Shortest-form-independent text for a double: always 17 significant
/// digits, so parse_double(format_double(x)) == x bit for bit.
std::string format_double(double x);

/// Strict parse of a full token; throws std::invalid_argument naming `what`.
double parse_double(std::string_view token, std::string_view what = "number");
long long parse_integer(std::string_view token, std::string_view what = "integer");

/// Reads a whole file; throws std::runtime_error echoing the path if it is missing.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Rows "p,q,value" for real grids, "p,q,re,im" otherwise.
void write_distribution_csv(std::ostream& out, const QuasiDistribution& dist);
QuasiDistribution read_distribution_csv(std::istream& in, const SpacePtr& space, DistributionKind kind);

/// Rows "p,q,re,im".
void write_symbol_csv(std::ostream& out, const WeylSymbol& symbol);
WeylSymbol read_symbol_csv(std::istream& in, const SpacePtr& space);

/// Rows "row,col,re,im"; used for correlation matrices and operator files.
void write_matrix_csv(std::ostream& out, const ComplexMatrix& m);
/// Size is inferred from the largest index; every entry must be present once.
ComplexMatrix read_matrix_csv(std::istream& in);

/// JSON envelope {N, kind, time, normalization, grid: {re, im}}, grid rows indexed by p.
std::string distribution_to_json(const QuasiDistribution& dist, double time);

struct DistributionEnvelope {
  QuasiDistribution distribution;
  double time = 0.0;
};

DistributionEnvelope distribution_from_json(std::string_view text);

struct TrajectoryMetadata {
  std::string hamiltonian;                  // free-form label
  std::optional<double> wall_time_seconds;  // excluded from determinism checks
  std::optional<std::string> engine_label;  // replaces the engine name in the manifest
};

/// Writes snapshot_<step>.csv files and manifest.json into `dir` (created if needed).
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, const TrajectoryMetadata& meta);

}  // namespace phasespace::io
