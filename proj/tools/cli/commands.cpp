#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "phasespace/bench.hpp"
#include "phasespace/io.hpp"
#include "phasespace/thirdq.hpp"

namespace phasespace::cli {

namespace fs = std::filesystem;

namespace {

SpacePtr require_space(const RunConfig& cfg) {
  if (cfg.n == 0) throw ConfigError("missing required config key 'N'");
  return make_space(cfg.n);
}

std::ifstream open_input(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open file: " + p.string());
  return in;
}

WeylSymbol constant_symbol(const SpacePtr& s, double value) {
  const int n = s->dimension();
  return WeylSymbol(s, ComplexMatrix::Constant(n, n, Complex(value)));
}

std::vector<WeylSymbol> load_source(const SymbolSource& src, const SpacePtr& s) {
  if (src.files.empty()) return {constant_symbol(s, src.constant)};
  std::vector<WeylSymbol> out;
  for (const auto& f : src.files) {
    auto in = open_input(f);
    out.push_back(io::read_symbol_csv(in, s));
  }
  return out;
}

}  // namespace

HamiltonianSpec build_hamiltonian(const RunConfig& cfg, const SpacePtr& space) {
  const HamiltonianConfig& h = cfg.hamiltonian;
  if (h.matrix_file) {
    auto in = open_input(*h.matrix_file);
    const ComplexMatrix m = io::read_matrix_csv(in);
    if (m.rows() != space->dimension()) {
      throw ConfigError("hamiltonian matrix in " + h.matrix_file->string() + " is " + std::to_string(m.rows()) +
                        " x " + std::to_string(m.cols()) + ", expected N = " + std::to_string(space->dimension()));
    }
    return HamiltonianSpec::from_matrix(OperatorMatrix(space, m, Basis::position, OperatorKind::hermitian));
  }
  if (h.symbol_file) {
    auto in = open_input(*h.symbol_file);
    return HamiltonianSpec::from_symbol(io::read_symbol_csv(in, space));
  }
  if (h.preset == "tight_binding") return HamiltonianSpec::preset(space, TightBindingPreset{h.hopping, h.onsite});
  if (h.preset == "kicked_rotor") {
    return HamiltonianSpec::preset(space, KickedRotorPreset{h.kick, h.period, h.pulse_width});
  }
  return HamiltonianSpec::preset(space, HarmonicPreset{h.omega0, h.center_p, h.center_q});
}

OperatorMatrix build_state(const RunConfig& cfg, const SpacePtr& space) {
  const StateConfig& st = cfg.state;
  const int n = space->dimension();
  const double width = st.width.value_or(default_frame_width(n));
  if (st.type == "wavepacket") return wavepacket_state(space, st.center_p, st.center_q, width);
  if (st.type == "basis_state") {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m(space->wrap(st.q0), space->wrap(st.q0)) = 1.0;
    return OperatorMatrix(space, std::move(m), Basis::position, OperatorKind::density);
  }
  if (st.type == "mixed") {
    if (st.components.empty()) {
      return OperatorMatrix(space, ComplexMatrix::Identity(n, n) / double(n), Basis::position, OperatorKind::density);
    }
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    double total = 0.0;
    for (const auto& c : st.components) {
      m += c.weight * wavepacket_state(space, c.center_p, c.center_q, width).entries();
      total += c.weight;
    }
    return OperatorMatrix(space, m / total, Basis::position, OperatorKind::density);
  }
  auto in = open_input(*st.file);
  const ComplexMatrix m = io::read_matrix_csv(in);
  if (m.rows() != n) {
    throw ConfigError("state matrix in " + st.file->string() + " has dimension " + std::to_string(m.rows()) +
                      ", expected N = " + std::to_string(n));
  }
  return OperatorMatrix(space, m, Basis::position, OperatorKind::density);
}

int run_transform(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const SpacePtr s = require_space(cfg);
  OperatorMatrix op = OperatorMatrix::zero(s);
  if (cfg.transform.source == "hamiltonian") {
    op = build_hamiltonian(cfg, s).matrix_at(0.0);
  } else if (cfg.transform.source == "state") {
    op = build_state(cfg, s);
  } else {
    auto in = open_input(*cfg.transform.file);
    const ComplexMatrix m = io::read_matrix_csv(in);
    if (m.rows() != s->dimension()) {
      throw ConfigError("operator matrix in " + cfg.transform.file->string() + " has dimension " +
                        std::to_string(m.rows()) + ", expected N = " + std::to_string(s->dimension()));
    }
    op = OperatorMatrix(s, m);
  }
  std::ostringstream csv;
  io::write_symbol_csv(csv, weyl_symbol(op));
  fs::create_directories(out);
  io::write_text_file(out / "symbol.csv", csv.str());
  log << "wrote " << (out / "symbol.csv").string() << "\n";
  return 0;
}

int run_evolve(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const SpacePtr s = require_space(cfg);
  const HamiltonianSpec h = build_hamiltonian(cfg, s);
  const OperatorMatrix rho = build_state(cfg, s);
  const auto start = std::chrono::steady_clock::now();
  const Trajectory traj = evolve(rho, h, cfg.propagator);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  io::write_trajectory(out, traj, io::TrajectoryMetadata{cfg.hamiltonian.label(), wall, std::nullopt});
  const Snapshot& first = traj.snapshots.front();
  const Snapshot& last = traj.snapshots.back();
  log << "evolved N = " << cfg.n << " for " << cfg.propagator.steps << " steps (" << to_string(cfg.propagator.engine)
      << ", " << to_string(cfg.propagator.integrator) << "), " << traj.snapshots.size() << " snapshots in "
      << out.string() << "\n";
  log << "trace drift " << std::abs(last.trace - first.trace) << ", purity drift "
      << std::abs(last.purity - first.purity) << "\n";
  for (const auto& w : traj.warnings) log << "warning: " << w << "\n";
  return 0;
}

int run_transport(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const SpacePtr s = require_space(cfg);
  const TransportConfig& t = cfg.transport;
  const HamiltonianSpec hspec = build_hamiltonian(cfg, s);
  if (hspec.time_dependent()) throw ConfigError("transport needs a time-independent hamiltonian");
  const WeylSymbol hsym = hspec.symbol_at(0.0);

  TransportInputs inputs;
  inputs.hamiltonian = {hsym};
  inputs.injection = load_source(t.injection, s);
  inputs.broadening = load_source(t.broadening, s);
  inputs.retarded_real = load_source(t.retarded_real, s);
  inputs.spectral = load_source(t.spectral, s);
  inputs.validate(t.energies.size());

  EnergyResolvedSymbols f;
  f.energies = t.energies;
  if (t.initial) {
    std::vector<WeylSymbol> init = load_source(*t.initial, s);
    if (init.size() != 1 && init.size() != t.energies.size()) {
      throw ConfigError("transport.initial needs one symbol or one per energy slice");
    }
    for (std::size_t e = 0; e < t.energies.size(); ++e) f.slices.push_back(init.size() == 1 ? init[0] : init[e]);
  } else {
    const WeylSymbol w(s, wigner_of(build_state(cfg, s)).grid());
    f.slices.assign(t.energies.size(), w);
  }

  const int n = s->dimension();
  const RealMatrix hreal = hsym.grid().real();
  Trajectory traj;
  traj.dimension = n;
  traj.config.dt = t.dt;
  traj.config.steps = t.steps;
  traj.config.stride = t.stride;
  traj.config.integrator = Integrator::rk4;
  auto record = [&](int step) {
    QuasiDistribution d = energy_integrate(f);
    Snapshot snap{step, step * t.dt, d, d.normalization(), purity(d), (hreal.cwiseProduct(d.real())).sum() / n,
                  d.max_imag()};
    traj.snapshots.push_back(std::move(snap));
  };
  const auto start = std::chrono::steady_clock::now();
  record(0);
  for (int step = 1; step <= t.steps; ++step) {
    f = transport_step(f, inputs, t.dt);
    if (step % t.stride == 0) record(step);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  io::write_trajectory(out, traj, io::TrajectoryMetadata{cfg.hamiltonian.label(), wall, std::string("transport")});
  log << "transport N = " << n << ", " << t.energies.size() << " energy slices, " << traj.snapshots.size()
      << " snapshots in " << out.string() << "\n";
  return 0;
}

int run_bench(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  BenchConfig b = cfg.bench;
  b.workers = effective_workers(cfg.workers);
  const BenchReport report = benchmark_engines(b);
  std::ostringstream csv;
  write_bench_csv(csv, report);
  fs::create_directories(out);
  io::write_text_file(out / "bench.csv", csv.str());
  log << csv.str();
  for (const auto& [engine, slope] : report.exponents) log << "exponent " << engine << " " << slope << "\n";
  log << "wrote " << (out / "bench.csv").string() << "\n";
  return 0;
}

int run_verify(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  std::vector<int> sizes = cfg.verify.sizes;
  if (sizes.empty()) sizes.push_back(cfg.n == 0 ? 5 : cfg.n);
  const std::vector<VerifyRow> rows = verify_suite(sizes, cfg.seed);
  std::ostringstream table;
  char line[160];
  std::snprintf(line, sizeof line, "%-34s %5s %12s %10s  %s\n", "check", "N", "max_error", "tolerance", "status");
  table << line;
  bool ok = true;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-34s %5d %12.3e %10.1e  %s\n", r.check.c_str(), r.n, r.max_error, r.tolerance,
                  r.pass() ? "PASS" : "FAIL");
    table << line;
    ok = ok && r.pass();
  }
  log << table.str();
  std::ostringstream csv;
  csv << "check,N,max_error,tolerance,pass\n";
  for (const auto& r : rows) {
    csv << r.check << ',' << r.n << ',' << io::format_double(r.max_error) << ',' << io::format_double(r.tolerance)
        << ',' << (r.pass() ? 1 : 0) << '\n';
  }
  fs::create_directories(out);
  io::write_text_file(out / "verify.csv", csv.str());
  log << (ok ? "all checks passed" : "some checks FAILED") << "\n";
  return ok ? 0 : 1;
}

int run(Command command, const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  switch (command) {
    case Command::transform: return run_transform(cfg, out, log);
    case Command::evolve: return run_evolve(cfg, out, log);
    case Command::transport: return run_transport(cfg, out, log);
    case Command::verify: return run_verify(cfg, out, log);
    case Command::bench: return run_bench(cfg, out, log);
  }
  return 2;
}

}  // namespace phasespace::cli
