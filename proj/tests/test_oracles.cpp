#include <gtest/gtest.h>

#include <cmath>

#include "openchain/errors.hpp"
#include "openchain/oracles.hpp"

using namespace openchain;

TEST(AnalyticDephasing, Values) {
  EXPECT_DOUBLE_EQ(analytic_dephasing_coherence(0.5, 5.0, 0.0), 1.0);
  EXPECT_NEAR(analytic_dephasing_coherence(0.5, 5.0, 1.0), 0.4487, 1e-4);
  EXPECT_DOUBLE_EQ(analytic_dephasing_coherence(0.5, kMarkovLimit, 2.0), std::exp(-2.0));
  EXPECT_NEAR(analytic_dephasing_coherence(0.5, 1e9, 2.0), std::exp(-2.0), 1e-8);
}

TEST(LindbladReference, ClosedWhenUncoupled) {
  ChainConfig c;
  c.N = 4;
  c.n = 1;
  c.channel = Channel::Dephasing;
  c.Gamma = {0.0, 0.0};
  c.t_max = 2.0;
  c.dt = 1e-3;
  const TrajectoryRecord ref = lindblad_reference_evolve(c);
  const TrajectoryRecord sv = statevector_unitary_evolve(c);
  const OracleReport r = compare_records("closed", ref, sv, {"TMI", "TLN", "I2_AB", "S_A"}, 1e-9);
  EXPECT_TRUE(r.passed) << r.max_abs_deviation;
}

TEST(LindbladReference, MatchesEvolveInMarkovLimit) {
  for (Channel ch : {Channel::Dephasing, Channel::Dissipation}) {
    ChainConfig c;
    c.N = 4;
    c.n = 1;
    c.channel = ch;
    c.gamma = {kMarkovLimit, kMarkovLimit};
    c.t_max = 2.0;
    c.dt = 1e-3;
    std::vector<std::string> all(kColumnNames.begin(), kColumnNames.end());
    const OracleReport r =
        compare_records("markov", evolve(c), lindblad_reference_evolve(c), all, 1e-9);
    EXPECT_TRUE(r.passed) << to_string(ch) << " " << r.max_abs_deviation;
  }
}

TEST(StateVector, TwoSiteOscillation) {
  ChainConfig c;
  c.N = 2;
  c.n = 0;
  c.delta = 0.0;
  TimeGrid g;
  g.dt = 1e-3;
  g.steps = 3000;
  g.sample_every = 100;
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0b01) = 1.0;
  int calls = 0;
  statevector_propagate(c, 2, psi, g, [&](double t, const ComplexVector& v) {
    EXPECT_NEAR(std::norm(v(0b01)), std::pow(std::cos(2 * t), 2), 1e-9);
    ++calls;
  });
  EXPECT_EQ(calls, 31);
}

TEST(StateVector, EnergyConserved) {
  ChainConfig c;
  c.N = 5;
  c.n = 2;
  c.delta = 0.7;
  const ComplexMatrix h = build_hamiltonian(c, true);
  TimeGrid g;
  g.dt = 1e-3;
  g.steps = 5000;
  g.sample_every = 500;
  const ComplexVector psi0 = prepare_initial_vector(c);
  const double e0 = psi0.dot(h * psi0).real();
  statevector_propagate(c, 6, psi0, g, [&](double, const ComplexVector& v) {
    EXPECT_NEAR(v.dot(h * v).real(), e0, 1e-8);
    EXPECT_NEAR(v.norm(), 1.0, 1e-9);
  });
}

TEST(StateVector, RejectsOpenChains) {
  ChainConfig c;
  c.channel = Channel::Dephasing;
  EXPECT_THROW(statevector_unitary_evolve(c), ConfigError);
}

TEST(StateVector, NeelTmiDipsNegative) {
  ChainConfig c;
  c.t_max = 10.0;
  c.dt = 1e-3;
  c.sample_every = 100;
  double lowest = 0.0;
  for (const auto& s : statevector_unitary_evolve(c).samples) lowest = std::min(lowest, s.TMI);
  EXPECT_LT(lowest, -0.1);
}

TEST(Qsd, UncoupledStaysCoherent) {
  const QsdEnsemble e = qsd_trajectory_dephasing_ensemble(0.0, 5.0, 1.0, 1e-2, 200, 1);
  for (double x : e.coherence) EXPECT_DOUBLE_EQ(x, 1.0);
}

TEST(Qsd, MatchesClosedForm) {
  const QsdEnsemble e = qsd_trajectory_dephasing_ensemble(0.5, 5.0, 1.0, 1e-3, 10000, 2024);
  ASSERT_EQ(e.times.size(), e.coherence.size());
  EXPECT_EQ(e.times.front(), 0.0);
  EXPECT_NEAR(e.coherence.back(), 0.4487, 0.02);
  EXPECT_EQ(e.num_traj, 10000);
  EXPECT_EQ(e.generator, "mt19937_64");
}

TEST(Qsd, DeterministicAcrossRunsAndThreads) {
  const auto a = qsd_trajectory_dephasing_ensemble(0.5, 2.0, 0.5, 1e-2, 300, 99, 1);
  const auto b = qsd_trajectory_dephasing_ensemble(0.5, 2.0, 0.5, 1e-2, 300, 99, 1);
  const auto c = qsd_trajectory_dephasing_ensemble(0.5, 2.0, 0.5, 1e-2, 300, 99, 3);
  EXPECT_EQ(a.coherence, b.coherence);
  EXPECT_EQ(a.coherence, c.coherence);
  EXPECT_EQ(a.standard_error, c.standard_error);
  const auto d = qsd_trajectory_dephasing_ensemble(0.5, 2.0, 0.5, 1e-2, 300, 100, 1);
  EXPECT_NE(a.coherence, d.coherence);
}

TEST(Qsd, InputErrors) {
  EXPECT_THROW(qsd_trajectory_dephasing_ensemble(0.5, 5.0, 1.0, 1e-2, 99, 1), ConfigError);
  EXPECT_THROW(qsd_trajectory_dephasing_ensemble(0.5, kMarkovLimit, 1.0, 1e-2, 200, 1),
               ConfigError);
  EXPECT_THROW(qsd_trajectory_dephasing_ensemble(0.5, 5.0, 1.0, 0.0, 200, 1), ConfigError);
}

TEST(CompareRecords, GridMismatch) {
  TrajectoryRecord a, b;
  a.samples.resize(3);
  b.samples.resize(2);
  EXPECT_THROW(compare_records("x", a, b, {"TMI"}, 1e-6), ShapeError);
  b.samples.resize(3);
  b.samples[1].t = 0.5;
  EXPECT_THROW(compare_records("x", a, b, {"TMI"}, 1e-6), ShapeError);
}

TEST(CompareRecords, PassFlag) {
  TrajectoryRecord a, b;
  a.samples.resize(2);
  b.samples.resize(2);
  b.samples[1].TLN = 2e-6;
  EXPECT_FALSE(compare_records("x", a, b, {"TLN"}, 1e-6).passed);
  const OracleReport r = compare_records("x", a, b, {"TLN"}, 2e-6);
  EXPECT_TRUE(r.passed);
  EXPECT_DOUBLE_EQ(r.max_abs_deviation, 2e-6);
  EXPECT_EQ(r.details.size(), 2u);
}

TEST(OracleSuite, QuickPasses) {
  OracleSuiteOptions o;
  o.quick = true;
  const auto reports = run_oracle_suite(o);
  EXPECT_GE(reports.size(), 6u);
  for (const auto& r : reports) EXPECT_TRUE(r.passed) << r.name << " " << r.max_abs_deviation;
}
