#pragma once

// Independent checks on the dynamics: closed forms, a separately written
// Lindblad integrator, a state-vector integrator and a stochastic unraveling
// of the single-qubit dephasing model. None of them calls the right-hand
// sides in dynamics.cpp.

#include <cstdint>
#include <string>
#include <vector>

#include "openchain/dynamics.hpp"

namespace openchain {

struct OracleDeviation {
  double t = 0.0;
  double deviation = 0.0;
};

struct OracleReport {
  std::string name;
  double max_abs_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::vector<OracleDeviation> details;

  /// Sets max_abs_deviation and passed from details.
  void finalize();
};

/// |rho01(t)| / |rho01(0)| for a dephased qubit with H = 0, L = sigma^z:
/// exp(-2 Gamma [t - (1 - e^{-gamma t}) / gamma]); exp(-2 Gamma t) when
/// gamma is kMarkovLimit.
double analytic_dephasing_coherence(double Gamma, double gamma, double t);

/// Markov-limit evolution of the ancilla-extended chain with its own RK4 and
/// bit-level operator application. Ignores cfg.gamma.
TrajectoryRecord lindblad_reference_evolve(const ChainConfig& cfg);

/// Closed evolution of the prepared pure state. Requires no bath coupling
/// (channel None or Gamma = 0). Throws InstabilityError on norm drift > 1e-8.
TrajectoryRecord statevector_unitary_evolve(const ChainConfig& cfg);

/// Bit-level RK4 of |psi> under the chain Hamiltonian of `cfg` on a register
/// with `qubits` qubits whose last N qubits are the chain. `observe` runs at
/// t = 0 and after every `sample_every` steps.
void statevector_propagate(const ChainConfig& cfg, int qubits, ComplexVector psi,
                           const TimeGrid& grid,
                           const std::function<void(double, const ComplexVector&)>& observe);

struct QsdEnsemble {
  std::vector<double> times;
  std::vector<double> coherence;       // 2 Re M[a b*], starting at 1
  std::vector<double> standard_error;  // of the same estimator
  long num_traj = 0;
  std::uint64_t seed = 0;
  std::string generator = "mt19937_64";
};

/// Linear QSD of one qubit with H = 0, L = sigma^z, started in |+>, driven by
/// stationary complex Ornstein-Uhlenbeck noise with
/// M[z*_t z_s] = (Gamma gamma / 2) e^{-gamma |t - s|}. Trajectory k draws from
/// mt19937_64 seeded with seed + k, so results do not depend on `jobs`.
/// Throws ConfigError for fewer than 100 trajectories.
QsdEnsemble qsd_trajectory_dephasing_ensemble(double Gamma, double gamma, double t_max, double dt,
                                              long num_traj, std::uint64_t seed, int jobs = 1);

/// Sup-norm difference of the named columns of two records sampled on the
/// same grid. Throws ShapeError when the grids differ.
OracleReport compare_records(const std::string& name, const TrajectoryRecord& a,
                             const TrajectoryRecord& b, const std::vector<std::string>& columns,
                             double tolerance);

/// Single qubit, H = 0, L = sigma^z, started in |+>, integrated by
/// integrate_dense; returns times and |rho01| / |rho01(0)|.
std::vector<std::pair<double, double>> dense_dephasing_coherence(double Gamma, double gamma,
                                                                 double t_max, double dt,
                                                                 int sample_every);

struct OracleSuiteOptions {
  bool quick = false;  // smaller chains and horizons, for smoke runs
  std::uint64_t seed = 12345;
  int jobs = 1;
};

/// Runs every oracle comparison and returns one report per check.
std::vector<OracleReport> run_oracle_suite(const OracleSuiteOptions& options = {});

}  // namespace openchain
