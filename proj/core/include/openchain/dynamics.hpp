#pragma once

// Time-local non-Markovian master equation with Ornstein-Uhlenbeck baths.
//
//   d rho / dt = -i[H, rho] + sum_j ( [L_j, rho Obar_j^dag] - [L_j^dag, Obar_j rho] )
//   d Obar_j / dt = (Gamma_j gamma_j / 2) L_j - gamma_j Obar_j
//                   + [ -iH - L_1^dag Obar_1 - L_2^dag Obar_2, Obar_j ]
//
// with Obar_j(0) = 0. In the Markov limit (gamma_j -> infinity) Obar_j is the
// constant (Gamma_j / 2) L_j and the first line is the ordinary Lindblad
// generator with rate Gamma_j.

#include <array>
#include <functional>
#include <vector>

#include "openchain/measures.hpp"
#include "openchain/model.hpp"
#include "openchain/tensor.hpp"

namespace openchain {

/// alpha(t, s) = (Gamma gamma / 2) exp(-gamma |t - s|).
double correlation_alpha(double Gamma, double gamma, double t, double s);

/// Generator data on an arbitrary register. Setting gamma[j] = kMarkovLimit
/// freezes Obar_j at its Markov value.
struct OpenSystem {
  ComplexMatrix H;
  std::array<ComplexMatrix, 2> L;
  std::array<double, 2> Gamma{0.0, 0.0};
  std::array<double, 2> gamma{kMarkovLimit, kMarkovLimit};

  /// H, L_1, L_2 on the ancilla-extended register of `cfg`. A bath without a
  /// channel gets a zero Lindblad operator.
  static OpenSystem from_config(const ChainConfig& cfg);
};

struct EvolutionState {
  double t = 0.0;
  ComplexMatrix rho;
  std::array<ComplexMatrix, 2> obar;
};

ComplexMatrix rho_rhs(const EvolutionState& state, const ComplexMatrix& H,
                      const ComplexMatrix& L1, const ComplexMatrix& L2);

/// Right-hand sides of both Obar equations. Requires finite gamma.
std::array<ComplexMatrix, 2> obar_rhs(const EvolutionState& state, const OpenSystem& sys);

/// (Gamma / 2) L.
ComplexMatrix markovian_obar(const ComplexMatrix& L, double Gamma);

/// Fixed-step grid actually used by an integration.
struct TimeGrid {
  double dt = 1e-3;
  long steps = 0;
  int sample_every = 1;
  double sample_interval() const { return dt * sample_every; }
};

/// Fixed grid for `cfg`. When gamma * dt > 0.1 for a finite gamma, the step
/// is subdivided so that gamma * dt <= 0.1 while keeping the sample times.
TimeGrid resolve_grid(const ChainConfig& cfg);

/// Classical RK4 on the stacked (rho, Obar_1, Obar_2) with full matrices.
/// `observe` runs at t = 0 and after every `sample_every` steps.
void integrate_dense(const OpenSystem& sys, EvolutionState state, const TimeGrid& grid,
                     const std::function<void(const EvolutionState&)>& observe);

struct TrajectoryRecord {
  ChainConfig config;  // dt / sample_every as resolved
  std::vector<MeasureSample> samples;

  std::vector<double> times() const;
  bool empty() const { return samples.empty(); }
};

struct EvolveOptions {
  /// Run the density-matrix path even when the chain is closed.
  bool density_matrix_when_closed = false;
};

/// Evolves the ancilla-extended chain from prepare_initial_state(cfg).
/// Closed chains use state-vector propagation unless told otherwise; open
/// chains co-integrate rho and Obar_j in excitation-number sectors.
/// Throws InstabilityError on trace drift beyond 1e-4 or a lowest eigenvalue
/// below -cfg.positivity_guard.
TrajectoryRecord evolve(const ChainConfig& cfg, const EvolveOptions& options = {});

/// Same physics through integrate_dense on full 2^(N+1) matrices. Slow; used
/// to cross-check the sector path on small chains.
TrajectoryRecord evolve_dense(const ChainConfig& cfg);

/// Hygiene + measures of one state. Re-symmetrizes and renormalizes a copy
/// before measuring. `min_eig` is taken as given when provided. Throws
/// through check_stability before any measure is computed.
MeasureSample sample_state(double t, const ComplexMatrix& rho, const Partition& p,
                           const double* min_eig = nullptr, double positivity_guard = 1e-4);

/// Throws InstabilityError when a sample breaks the trace or positivity guard.
void check_stability(const MeasureSample& s, double positivity_guard = 1e-4);

}  // namespace openchain
