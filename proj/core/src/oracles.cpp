#include "openchain/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "openchain/errors.hpp"

namespace openchain {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kNormDriftBound = 1e-8;
constexpr long kTrajectoriesPerBlock = 64;

// Compensated (Neumaier) running sum.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

// Bit-level view of the chain part of a register: site i of the chain is
// qubit q - N + i, and qubit 0 is the most significant bit.
struct ChainBits {
  int qubits;
  int sites;
  std::size_t mask(int site) const {
    return std::size_t{1} << (qubits - 1 - (qubits - sites + site));
  }
};

// Diagonal part and hopping amplitude of J sum (XX + YY + delta ZZ).
class BitHamiltonian {
 public:
  BitHamiltonian(const ChainConfig& cfg, int qubits) : bits_{qubits, cfg.N}, J_(cfg.J) {
    const std::size_t dim = std::size_t{1} << qubits;
    diag_.resize(dim);
    for (std::size_t s = 0; s < dim; ++s) {
      double d = 0.0;
      for (int i = 0; i + 1 < cfg.N; ++i) {
        const bool a = s & bits_.mask(i);
        const bool b = s & bits_.mask(i + 1);
        d += (a == b ? 1.0 : -1.0);
      }
      diag_[s] = cfg.J * cfg.delta * d;
    }
  }

  // out = H in, both of length 2^qubits.
  void apply(const Complex* in, Complex* out) const {
    const std::size_t dim = diag_.size();
    for (std::size_t s = 0; s < dim; ++s) out[s] = diag_[s] * in[s];
    for (int i = 0; i + 1 < bits_.sites; ++i) {
      const std::size_t m = bits_.mask(i) | bits_.mask(i + 1);
      for (std::size_t s = 0; s < dim; ++s) {
        const std::size_t pair = s & m;
        // XX + YY swaps |01> and |10> with amplitude 2.
        if (pair != 0 && pair != m) out[s ^ m] += 2.0 * J_ * in[s];
      }
    }
  }

  const ChainBits& bits() const { return bits_; }

 private:
  ChainBits bits_;
  double J_;
  std::vector<double> diag_;
};

// H X for a square matrix X, column by column.
ComplexMatrix left_apply(const BitHamiltonian& h, const ComplexMatrix& x) {
  ComplexMatrix out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) h.apply(x.col(c).data(), out.col(c).data());
  return out;
}

struct Hygiene {
  double trace_err;
  double herm_err;
  double min_eig;
  ComplexMatrix clean;
};

Hygiene inspect(const ComplexMatrix& rho) {
  Hygiene h;
  const Complex tr = rho.trace();
  h.trace_err = std::abs(tr - Complex(1.0, 0.0));
  h.herm_err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  h.clean = (0.5 / tr.real()) * (rho + rho.adjoint());
  h.min_eig = herm_eigenvalues(h.clean).minCoeff();
  return h;
}

MeasureSample record_row(double t, const ComplexMatrix& rho, const Partition& p) {
  Hygiene h = inspect(rho);
  MeasureSample s = measure_state(h.clean, p);
  s.t = t;
  s.trace_err = h.trace_err;
  s.herm_err = h.herm_err;
  s.min_eig = h.min_eig;
  return s;
}

TimeGrid plain_grid(double t_max, double dt, int sample_every) {
  TimeGrid g;
  g.dt = dt;
  g.sample_every = sample_every;
  g.steps = std::lround(t_max / dt);
  return g;
}

ChainConfig resolved(const ChainConfig& cfg, const TimeGrid& grid) {
  ChainConfig out = cfg;
  out.dt = grid.dt;
  out.sample_every = grid.sample_every;
  return out;
}

}  // namespace

void OracleReport::finalize() {
  max_abs_deviation = 0.0;
  for (const auto& d : details) max_abs_deviation = std::max(max_abs_deviation, d.deviation);
  passed = max_abs_deviation <= tolerance;
}

double analytic_dephasing_coherence(double Gamma, double gamma, double t) {
  if (is_markov_limit(gamma)) return std::exp(-2.0 * Gamma * t);
  return std::exp(-2.0 * Gamma * (t + std::expm1(-gamma * t) / gamma));
}

TrajectoryRecord lindblad_reference_evolve(const ChainConfig& cfg_in) {
  ChainConfig cfg = cfg_in;
  cfg.gamma = {kMarkovLimit, kMarkovLimit};
  validate(cfg);
  const TimeGrid grid = resolve_grid(cfg);
  const int q = cfg.N + 1;
  const BitHamiltonian h(cfg, q);
  const Partition p = make_partition(cfg);
  const std::size_t dim = std::size_t{1} << q;
  const bool lossy = cfg.channel == Channel::Dissipation;
  const std::array<std::size_t, 2> bath_mask{h.bits().mask(0), h.bits().mask(cfg.N - 1)};
  std::array<double, 2> rate{0.0, 0.0};
  if (cfg.channel != Channel::None) rate = cfg.Gamma;

  auto deriv = [&](const ComplexMatrix& rho) {
    const ComplexMatrix hr = left_apply(h, rho);
    const ComplexMatrix rh = left_apply(h, rho.adjoint()).adjoint();
    ComplexMatrix out = -kI * (hr - rh);
    for (int j = 0; j < 2; ++j) {
      if (rate[j] == 0.0) continue;
      const std::size_t m = bath_mask[j];
      for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t r = 0; r < dim; ++r) {
          const auto ri = static_cast<Eigen::Index>(r);
          const auto ci = static_cast<Eigen::Index>(c);
          if (!lossy) {
            // sigma^z rho sigma^z - rho.
            const bool flip = ((r & m) != 0) != ((c & m) != 0);
            if (flip) out(ri, ci) -= 2.0 * rate[j] * rho(ri, ci);
            continue;
          }
          // sigma^- = |0><1|: L rho L^dag - {n, rho} / 2 with n = |1><1|.
          Complex v = 0.0;
          if ((r & m) == 0 && (c & m) == 0) {
            v += rho(static_cast<Eigen::Index>(r | m), static_cast<Eigen::Index>(c | m));
          }
          const double occ = ((r & m) ? 0.5 : 0.0) + ((c & m) ? 0.5 : 0.0);
          v -= occ * rho(ri, ci);
          out(ri, ci) += rate[j] * v;
        }
      }
    }
    return out;
  };

  TrajectoryRecord rec;
  rec.config = resolved(cfg_in, grid);
  ComplexMatrix rho = prepare_initial_state(cfg);
  auto sample = [&](long step) {
    MeasureSample s = record_row(static_cast<double>(step) * grid.dt, rho, p);
    check_stability(s, cfg.positivity_guard);
    rec.samples.push_back(s);
  };
  sample(0);
  const double dt = grid.dt;
  for (long step = 1; step <= grid.steps; ++step) {
    const ComplexMatrix k1 = deriv(rho);
    const ComplexMatrix k2 = deriv(rho + 0.5 * dt * k1);
    const ComplexMatrix k3 = deriv(rho + 0.5 * dt * k2);
    const ComplexMatrix k4 = deriv(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (step % grid.sample_every == 0) sample(step);
  }
  return rec;
}

void statevector_propagate(const ChainConfig& cfg, int qubits, ComplexVector psi,
                           const TimeGrid& grid,
                           const std::function<void(double, const ComplexVector&)>& observe) {
  if (qubits < cfg.N) throw ShapeError("statevector_propagate: register smaller than chain");
  if (psi.size() != (Eigen::Index{1} << qubits)) {
    throw ShapeError("statevector_propagate: state length is not 2^qubits");
  }
  const BitHamiltonian h(cfg, qubits);
  const auto dim = psi.size();
  ComplexVector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  auto deriv = [&](const ComplexVector& x, ComplexVector& out) {
    h.apply(x.data(), out.data());
    out *= -kI;
  };
  const double dt = grid.dt;
  observe(0.0, psi);
  for (long step = 1; step <= grid.steps; ++step) {
    deriv(psi, k1);
    tmp = psi + 0.5 * dt * k1;
    deriv(tmp, k2);
    tmp = psi + 0.5 * dt * k2;
    deriv(tmp, k3);
    tmp = psi + dt * k3;
    deriv(tmp, k4);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (step % grid.sample_every == 0) observe(static_cast<double>(step) * dt, psi);
  }
}

TrajectoryRecord statevector_unitary_evolve(const ChainConfig& cfg) {
  validate(cfg);
  if (!is_closed(cfg)) {
    throw ConfigError("statevector_unitary_evolve needs Gamma1 = Gamma2 = 0 or channel none");
  }
  const TimeGrid grid = plain_grid(cfg.t_max, cfg.dt, cfg.sample_every);
  const Partition p = make_partition(cfg);
  TrajectoryRecord rec;
  rec.config = cfg;
  statevector_propagate(cfg, cfg.N + 1, prepare_initial_vector(cfg), grid,
                        [&](double t, const ComplexVector& psi) {
                          const double drift = std::abs(psi.squaredNorm() - 1.0);
                          if (drift > kNormDriftBound) {
                            throw InstabilityError("state-vector norm drift " +
                                                   std::to_string(drift) + " at t=" +
                                                   std::to_string(t) + "; try a smaller dt");
                          }
                          rec.samples.push_back(record_row(t, psi * psi.adjoint(), p));
                        });
  return rec;
}

QsdEnsemble qsd_trajectory_dephasing_ensemble(double Gamma, double gamma, double t_max, double dt,
                                              long num_traj, std::uint64_t seed, int jobs) {
  if (num_traj < 100) throw ConfigError("qsd ensemble needs at least 100 trajectories");
  if (!(Gamma >= 0.0) || !std::isfinite(Gamma)) throw ConfigError("Gamma must be finite and >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("qsd ensemble needs a finite gamma > 0");
  }
  if (!(dt > 0.0) || !(t_max >= dt)) throw ConfigError("qsd ensemble needs 0 < dt <= t_max");

  const long steps = std::lround(t_max / dt);
  const double decay = std::exp(-gamma * dt);
  const double stationary = std::sqrt(0.5 * Gamma * gamma);
  const double kick = std::sqrt(0.5 * Gamma * gamma * -std::expm1(-2.0 * gamma * dt));
  // F(t) = int_0^t f, f(t) = (Gamma / 2)(1 - e^{-gamma t}); L^dag Obar = f I.
  auto F = [&](double t) { return 0.5 * Gamma * (t + std::expm1(-gamma * t) / gamma); };
  std::vector<double> drift(static_cast<std::size_t>(steps));
  for (long k = 0; k < steps; ++k) {
    drift[static_cast<std::size_t>(k)] =
        F(static_cast<double>(k + 1) * dt) - F(static_cast<double>(k) * dt);
  }

  // Per-block sums of x and x^2 for x = 2 Re(a b*) at every grid time.
  const long num_blocks = (num_traj + kTrajectoriesPerBlock - 1) / kTrajectoriesPerBlock;
  const auto width = static_cast<std::size_t>(steps + 1);
  std::vector<std::vector<double>> block_sum(static_cast<std::size_t>(num_blocks));
  std::vector<std::vector<double>> block_sq(static_cast<std::size_t>(num_blocks));

  auto run_block = [&](long b) {
    std::vector<NeumaierSum> s(width), s2(width);
    const long first = b * kTrajectoriesPerBlock;
    const long last = std::min(num_traj, first + kTrajectoriesPerBlock);
    for (long k = first; k < last; ++k) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
      std::normal_distribution<double> normal(0.0, 1.0);
      auto complex_normal = [&] {
        const double re = normal(rng);
        const double im = normal(rng);
        return Complex(re, im) / std::sqrt(2.0);
      };
      Complex z = stationary * complex_normal();
      Complex a = 1.0 / std::sqrt(2.0);
      Complex b2 = a;
      auto accumulate = [&](std::size_t i) {
        const double x = 2.0 * (a * std::conj(b2)).real();
        s[i].add(x);
        s2[i].add(x * x);
      };
      accumulate(0);
      for (long step = 0; step < steps; ++step) {
        const Complex next = z * decay + kick * complex_normal();
        // d|psi> = (sigma^z z*_t - f(t)) |psi> dt, integrated over one step
        // with the trapezoid rule for the noise.
        const Complex w = 0.5 * dt * (std::conj(z) + std::conj(next));
        const double d = drift[static_cast<std::size_t>(step)];
        a *= std::exp(w - d);
        b2 *= std::exp(-w - d);
        z = next;
        accumulate(static_cast<std::size_t>(step + 1));
      }
    }
    auto& out = block_sum[static_cast<std::size_t>(b)];
    auto& out2 = block_sq[static_cast<std::size_t>(b)];
    out.resize(width);
    out2.resize(width);
    for (std::size_t i = 0; i < width; ++i) {
      out[i] = s[i].value();
      out2[i] = s2[i].value();
    }
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(num_blocks)));
  if (workers == 1) {
    for (long b = 0; b < num_blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (long b = w; b < num_blocks; b += workers) run_block(b);
      });
    }
    for (auto& t : pool) t.join();
  }

  QsdEnsemble out;
  out.num_traj = num_traj;
  out.seed = seed;
  out.times.resize(width);
  out.coherence.resize(width);
  out.standard_error.resize(width);
  const double n = static_cast<double>(num_traj);
  for (std::size_t i = 0; i < width; ++i) {
    NeumaierSum s, s2;
    for (long b = 0; b < num_blocks; ++b) {
      s.add(block_sum[static_cast<std::size_t>(b)][i]);
      s2.add(block_sq[static_cast<std::size_t>(b)][i]);
    }
    const double mean = s.value() / n;
    const double var = std::max(0.0, (s2.value() - n * mean * mean) / (n - 1.0));
    out.times[i] = static_cast<double>(i) * dt;
    out.coherence[i] = mean;
    out.standard_error[i] = std::sqrt(var / n);
  }
  return out;
}

OracleReport compare_records(const std::string& name, const TrajectoryRecord& a,
                             const TrajectoryRecord& b, const std::vector<std::string>& columns,
                             double tolerance) {
  if (a.samples.size() != b.samples.size()) {
    throw ShapeError(name + ": records have " + std::to_string(a.samples.size()) + " and " +
                     std::to_string(b.samples.size()) + " samples");
  }
  std::vector<std::size_t> idx;
  for (const auto& c : columns) idx.push_back(column_index(c));
  OracleReport r;
  r.name = name;
  r.tolerance = tolerance;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const auto va = column_values(a.samples[i]);
    const auto vb = column_values(b.samples[i]);
    if (std::abs(va[0] - vb[0]) > 1e-9) throw ShapeError(name + ": time grids differ");
    double dev = 0.0;
    for (std::size_t k : idx) dev = std::max(dev, std::abs(va[k] - vb[k]));
    r.details.push_back({va[0], dev});
  }
  r.finalize();
  return r;
}

std::vector<std::pair<double, double>> dense_dephasing_coherence(double Gamma, double gamma,
                                                                 double t_max, double dt,
                                                                 int sample_every) {
  OpenSystem sys;
  sys.H = ComplexMatrix::Zero(2, 2);
  sys.L[0] = site_matrix(SiteOp::Z);
  sys.L[1] = ComplexMatrix::Zero(2, 2);
  sys.Gamma = {Gamma, 0.0};
  sys.gamma = {gamma, kMarkovLimit};
  EvolutionState init;
  init.rho = ComplexMatrix::Constant(2, 2, 0.5);
  init.obar = {ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)};
  std::vector<std::pair<double, double>> out;
  integrate_dense(sys, init, plain_grid(t_max, dt, sample_every), [&](const EvolutionState& s) {
    out.emplace_back(s.t, std::abs(s.rho(0, 1)) / 0.5);
  });
  return out;
}

std::vector<OracleReport> run_oracle_suite(const OracleSuiteOptions& options) {
  std::vector<OracleReport> reports;

  for (double gamma : {5.0, kMarkovLimit}) {
    OracleReport r;
    r.name = is_markov_limit(gamma) ? "dephasing qubit, Markov: integrator vs closed form"
                                    : "dephasing qubit, gamma=5: integrator vs closed form";
    r.tolerance = 1e-6;
    for (const auto& [t, c] : dense_dephasing_coherence(0.5, gamma, 5.0, 1e-3, 10)) {
      r.details.push_back({t, std::abs(c - analytic_dephasing_coherence(0.5, gamma, t))});
    }
    r.finalize();
    reports.push_back(std::move(r));
  }

  {
    const QsdEnsemble e = qsd_trajectory_dephasing_ensemble(0.5, 5.0, 2.0, 1e-3,
                                                            options.quick ? 2000 : 10000,
                                                            options.seed, options.jobs);
    OracleReport r;
    r.name = "dephasing qubit: trajectory ensemble vs closed form (standard errors)";
    r.tolerance = 3.0;
    for (double t : {0.5, 1.0, 2.0}) {
      const auto i = static_cast<std::size_t>(std::lround(t / 1e-3));
      const double dev =
          std::abs(e.coherence[i] - analytic_dephasing_coherence(0.5, 5.0, t)) /
          e.standard_error[i];
      r.details.push_back({t, dev});
    }
    r.finalize();
    reports.push_back(std::move(r));
  }

  {
    // Two sites, XX coupling, |01>: population of |01> is cos^2(2t).
    ChainConfig c;
    c.N = 2;
    c.delta = 0.0;
    c.n = 0;
    ComplexVector psi = ComplexVector::Zero(4);
    psi[1] = 1.0;
    OracleReport r;
    r.name = "two-site XX oscillation: state vector vs cos^2(2t)";
    r.tolerance = 1e-8;
    statevector_propagate(c, 2, psi, plain_grid(3.0, 1e-3, 50),
                          [&](double t, const ComplexVector& v) {
                            const double c2 = std::cos(2.0 * t);
                            r.details.push_back({t, std::abs(std::norm(v[1]) - c2 * c2)});
                          });
    r.finalize();
    reports.push_back(std::move(r));
  }

  ChainConfig base;
  base.N = options.quick ? 4 : 6;
  base.n = options.quick ? 1 : 2;
  base.init = InitialState::Neel;
  base.t_max = options.quick ? 3.0 : 30.0;
  base.dt = 1e-3;
  base.sample_every = 100;

  for (Channel ch : {Channel::Dephasing, Channel::Dissipation}) {
    ChainConfig c = base;
    c.channel = ch;
    c.gamma = {kMarkovLimit, kMarkovLimit};
    std::vector<std::string> all(kColumnNames.begin() + 1, kColumnNames.end());
    reports.push_back(compare_records("Markov limit, " + to_string(ch) +
                                          ": reference Lindblad vs evolve (all columns)",
                                      lindblad_reference_evolve(c), evolve(c), all, 1e-6));
  }

  {
    ChainConfig c = base;
    c.channel = Channel::None;
    EvolveOptions dm;
    dm.density_matrix_when_closed = true;
    reports.push_back(compare_records("closed chain: state vector vs density matrix (TMI, TLN)",
                                      statevector_unitary_evolve(c), evolve(c, dm),
                                      {"TMI", "TLN"}, 1e-8));
  }
  return reports;
}

}  // namespace openchain
