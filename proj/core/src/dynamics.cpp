#include "openchain/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCore>

#include "openchain/errors.hpp"
#include "openchain/sector_engine.hpp"

namespace openchain {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kStiffnessBound = 0.1;   // max gamma * dt
constexpr double kTraceBound = 1e-4;

bool any_finite_active(const ChainConfig& cfg, double* gamma_max) {
  bool any = false;
  double g = 0.0;
  if (cfg.channel == Channel::None) return false;
  for (int j = 0; j < 2; ++j) {
    if (cfg.Gamma[j] > 0.0 && !is_markov_limit(cfg.gamma[j])) {
      any = true;
      g = std::max(g, cfg.gamma[j]);
    }
  }
  if (gamma_max) *gamma_max = g;
  return any;
}

ChainConfig resolved_config(const ChainConfig& cfg, const TimeGrid& grid) {
  ChainConfig out = cfg;
  out.dt = grid.dt;
  out.sample_every = grid.sample_every;
  return out;
}

// State-vector propagation of both ancilla branches for a closed chain.
TrajectoryRecord evolve_closed_statevector(const ChainConfig& cfg, const TimeGrid& grid) {
  const Partition p = make_partition(cfg);
  const ComplexMatrix h_dense = build_hamiltonian(cfg, false);
  const SparseMatrix h = h_dense.sparseView();
  const auto chain_dim = h_dense.rows();

  const ComplexVector psi0 = prepare_initial_vector(cfg);
  Eigen::MatrixXcd branches(chain_dim, 2);
  branches.col(0) = psi0.head(chain_dim);
  branches.col(1) = psi0.tail(chain_dim);

  Eigen::MatrixXcd k1(chain_dim, 2), k2(chain_dim, 2), k3(chain_dim, 2), k4(chain_dim, 2);
  auto deriv = [&](const Eigen::MatrixXcd& x, Eigen::MatrixXcd& out) {
    out.noalias() = h * x;
    out *= -kI;
  };

  TrajectoryRecord rec;
  rec.config = resolved_config(cfg, grid);
  auto sample = [&](long step) {
    ComplexVector psi(2 * chain_dim);
    psi << branches.col(0), branches.col(1);
    const double t = static_cast<double>(step) * grid.dt;
    // A rank-one projector is positive semidefinite exactly.
    const double zero = 0.0;
    MeasureSample s = sample_state(t, psi * psi.adjoint(), p, &zero);
    rec.samples.push_back(s);
  };

  sample(0);
  const double dt = grid.dt;
  for (long step = 1; step <= grid.steps; ++step) {
    deriv(branches, k1);
    deriv(branches + 0.5 * dt * k1, k2);
    deriv(branches + 0.5 * dt * k2, k3);
    deriv(branches + dt * k3, k4);
    branches += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (step % grid.sample_every == 0) sample(step);
  }
  return rec;
}

TrajectoryRecord evolve_sectors(const ChainConfig& cfg, const TimeGrid& grid) {
  const Partition p = make_partition(cfg);
  SectorEngine engine(cfg);
  TrajectoryRecord rec;
  rec.config = resolved_config(cfg, grid);
  auto sample = [&](long step) {
    const double t = static_cast<double>(step) * grid.dt;
    const double min_eig = engine.min_eigenvalue();
    MeasureSample s = sample_state(t, engine.assemble_rho(), p, &min_eig, cfg.positivity_guard);
    rec.samples.push_back(s);
  };
  sample(0);
  for (long step = 1; step <= grid.steps; ++step) {
    engine.step(grid.dt);
    if (step % grid.sample_every == 0) sample(step);
  }
  return rec;
}

struct DenseStage {
  ComplexMatrix rho;
  std::array<ComplexMatrix, 2> obar;
};

}  // namespace

double correlation_alpha(double Gamma, double gamma, double t, double s) {
  return 0.5 * Gamma * gamma * std::exp(-gamma * std::abs(t - s));
}

OpenSystem OpenSystem::from_config(const ChainConfig& cfg) {
  OpenSystem sys;
  sys.H = build_hamiltonian(cfg, true);
  for (int j = 0; j < 2; ++j) {
    sys.Gamma[j] = cfg.Gamma[j];
    sys.gamma[j] = cfg.gamma[j];
    if (cfg.channel == Channel::None) {
      sys.L[j] = ComplexMatrix::Zero(sys.H.rows(), sys.H.cols());
      sys.Gamma[j] = 0.0;
    } else {
      sys.L[j] = build_lindblad(cfg, j + 1, true);
    }
  }
  return sys;
}

ComplexMatrix rho_rhs(const EvolutionState& state, const ComplexMatrix& H,
                      const ComplexMatrix& L1, const ComplexMatrix& L2) {
  const ComplexMatrix& rho = state.rho;
  if (H.rows() != rho.rows() || L1.rows() != rho.rows() || L2.rows() != rho.rows() ||
      state.obar[0].rows() != rho.rows() || state.obar[1].rows() != rho.rows()) {
    throw ShapeError("rho_rhs: operator dimensions differ");
  }
  ComplexMatrix out = -kI * commutator(H, rho);
  const std::array<const ComplexMatrix*, 2> ls{&L1, &L2};
  for (int j = 0; j < 2; ++j) {
    const ComplexMatrix& L = *ls[j];
    const ComplexMatrix& O = state.obar[j];
    out += commutator(L, rho * O.adjoint());
    out -= commutator(L.adjoint(), O * rho);
  }
  return out;
}

std::array<ComplexMatrix, 2> obar_rhs(const EvolutionState& state, const OpenSystem& sys) {
  const auto dim = sys.H.rows();
  for (int j = 0; j < 2; ++j) {
    if (state.obar[j].rows() != dim || sys.L[j].rows() != dim) {
      throw ShapeError("obar_rhs: operator dimensions differ");
    }
  }
  const ComplexMatrix generator = -kI * sys.H - sys.L[0].adjoint() * state.obar[0] -
                                  sys.L[1].adjoint() * state.obar[1];
  std::array<ComplexMatrix, 2> out;
  for (int j = 0; j < 2; ++j) {
    if (is_markov_limit(sys.gamma[j])) {
      out[j] = ComplexMatrix::Zero(dim, dim);
      continue;
    }
    const double g = sys.gamma[j];
    out[j] = (0.5 * sys.Gamma[j] * g) * sys.L[j] - g * state.obar[j] +
             commutator(generator, state.obar[j]);
  }
  return out;
}

ComplexMatrix markovian_obar(const ComplexMatrix& L, double Gamma) { return (0.5 * Gamma) * L; }

TimeGrid resolve_grid(const ChainConfig& cfg) {
  TimeGrid g;
  g.dt = cfg.dt;
  g.sample_every = cfg.sample_every;
  const double ratio = cfg.t_max / cfg.dt;
  const double nearest = std::round(ratio);
  g.steps = static_cast<long>(std::abs(ratio - nearest) < 1e-9 * std::max(1.0, ratio)
                                  ? nearest
                                  : std::floor(ratio));
  double gamma_max = 0.0;
  if (any_finite_active(cfg, &gamma_max) && gamma_max * cfg.dt > kStiffnessBound) {
    const long sub = static_cast<long>(std::ceil(gamma_max * cfg.dt / kStiffnessBound - 1e-12));
    g.dt = cfg.dt / static_cast<double>(sub);
    g.steps *= sub;
    g.sample_every *= static_cast<int>(sub);
  }
  return g;
}

void integrate_dense(const OpenSystem& sys, EvolutionState state, const TimeGrid& grid,
                     const std::function<void(const EvolutionState&)>& observe) {
  for (int j = 0; j < 2; ++j) {
    if (is_markov_limit(sys.gamma[j])) state.obar[j] = markovian_obar(sys.L[j], sys.Gamma[j]);
  }
  const double t0 = state.t;
  auto deriv = [&](const DenseStage& y) {
    EvolutionState es{0.0, y.rho, y.obar};
    DenseStage d;
    d.rho = rho_rhs(es, sys.H, sys.L[0], sys.L[1]);
    d.obar = obar_rhs(es, sys);
    return d;
  };
  auto axpy = [](const DenseStage& x, const DenseStage& k, double h) {
    DenseStage out;
    out.rho = x.rho + h * k.rho;
    for (int j = 0; j < 2; ++j) out.obar[j] = x.obar[j] + h * k.obar[j];
    return out;
  };

  DenseStage y{state.rho, state.obar};
  observe(state);
  const double dt = grid.dt;
  for (long step = 1; step <= grid.steps; ++step) {
    const DenseStage k1 = deriv(y);
    const DenseStage k2 = deriv(axpy(y, k1, 0.5 * dt));
    const DenseStage k3 = deriv(axpy(y, k2, 0.5 * dt));
    const DenseStage k4 = deriv(axpy(y, k3, dt));
    y.rho += (dt / 6.0) * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho);
    for (int j = 0; j < 2; ++j) {
      y.obar[j] += (dt / 6.0) * (k1.obar[j] + 2.0 * k2.obar[j] + 2.0 * k3.obar[j] + k4.obar[j]);
    }
    if (step % grid.sample_every == 0) {
      observe(EvolutionState{t0 + static_cast<double>(step) * dt, y.rho, y.obar});
    }
  }
}

std::vector<double> TrajectoryRecord::times() const {
  std::vector<double> t;
  t.reserve(samples.size());
  for (const auto& s : samples) t.push_back(s.t);
  return t;
}

TrajectoryRecord evolve(const ChainConfig& cfg, const EvolveOptions& options) {
  validate(cfg);
  const TimeGrid grid = resolve_grid(cfg);
  if (is_closed(cfg) && !options.density_matrix_when_closed) {
    return evolve_closed_statevector(cfg, grid);
  }
  return evolve_sectors(cfg, grid);
}

TrajectoryRecord evolve_dense(const ChainConfig& cfg) {
  validate(cfg);
  const TimeGrid grid = resolve_grid(cfg);
  const Partition p = make_partition(cfg);
  const OpenSystem sys = OpenSystem::from_config(cfg);
  EvolutionState init;
  init.rho = prepare_initial_state(cfg);
  init.obar = {ComplexMatrix::Zero(sys.H.rows(), sys.H.cols()),
               ComplexMatrix::Zero(sys.H.rows(), sys.H.cols())};
  TrajectoryRecord rec;
  rec.config = resolved_config(cfg, grid);
  integrate_dense(sys, init, grid, [&](const EvolutionState& s) {
    MeasureSample m = sample_state(s.t, s.rho, p, nullptr, cfg.positivity_guard);
    rec.samples.push_back(m);
  });
  return rec;
}

MeasureSample sample_state(double t, const ComplexMatrix& rho, const Partition& p,
                           const double* min_eig, double positivity_guard) {
  const Complex trace = rho.trace();
  const double herm_err = hermiticity_error(rho);
  const ComplexMatrix clean = (0.5 / trace.real()) * (rho + rho.adjoint());
  const double lowest = min_eig ? *min_eig : herm_eigenvalues(clean).minCoeff();
  MeasureSample s;
  // Measures on a state that has already failed the guard are meaningless
  // and may throw; report hygiene first.
  s.t = t;
  s.trace_err = std::abs(trace - Complex(1.0, 0.0));
  s.herm_err = herm_err;
  s.min_eig = lowest;
  check_stability(s, positivity_guard);
  MeasureSample m = measure_state(clean, p);
  m.t = t;
  m.trace_err = s.trace_err;
  m.herm_err = s.herm_err;
  m.min_eig = s.min_eig;
  return m;
}

void check_stability(const MeasureSample& s, double positivity_guard) {
  if (s.trace_err > kTraceBound || s.min_eig < -positivity_guard) {
    std::ostringstream msg;
    msg << "numerical instability at t=" << s.t << ": trace error " << s.trace_err
        << ", min eigenvalue " << s.min_eig << "; try a smaller dt";
    throw InstabilityError(msg.str());
  }
}

}  // namespace openchain
