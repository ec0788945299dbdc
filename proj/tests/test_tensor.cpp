#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "openchain/errors.hpp"
#include "openchain/model.hpp"
#include "openchain/tensor.hpp"

using namespace openchain;

namespace {

const Complex I{0.0, 1.0};

ComplexMatrix bell() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

ComplexMatrix random_density(int q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const Eigen::Index d = Eigen::Index{1} << q;
  ComplexMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

ComplexMatrix random_hermitian(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_TRUE(kron(identity(2), identity(2)).isApprox(identity(4)));
}

TEST(Kron, SigmaZTimesIdentity) {
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect.diagonal() << 1.0, 1.0, -1.0, -1.0;
  EXPECT_EQ(kron(site_matrix(SiteOp::Z), identity(2)), expect);
}

TEST(Kron, XXMapsZeroToThree) {
  ComplexVector e0 = ComplexVector::Zero(4);
  e0(0) = 1.0;
  const ComplexVector out = kron(site_matrix(SiteOp::X), site_matrix(SiteOp::X)) * e0;
  EXPECT_EQ(out(3), Complex(1.0));
  EXPECT_DOUBLE_EQ(out.norm(), 1.0);
}

TEST(Commutator, PauliAlgebra) {
  const ComplexMatrix c = commutator(site_matrix(SiteOp::X), site_matrix(SiteOp::Y));
  EXPECT_TRUE(c.isApprox(2.0 * I * site_matrix(SiteOp::Z)));
}

TEST(Commutator, SelfCommutes) {
  ChainConfig cfg;
  cfg.N = 4;
  cfg.n = 1;
  const ComplexMatrix h = build_hamiltonian(cfg, false);
  EXPECT_EQ(commutator(h, h).cwiseAbs().maxCoeff(), 0.0);
}

TEST(PartialTrace, BellReducesToMaximallyMixed) {
  EXPECT_TRUE(partial_trace(bell(), 2, {0}).isApprox(identity(2) / 2.0));
  EXPECT_TRUE(partial_trace(bell(), 2, {1}).isApprox(identity(2) / 2.0));
}

TEST(PartialTrace, ProductFactorizes) {
  const ComplexMatrix a = random_density(1, 1);
  const ComplexMatrix b = random_density(2, 2);
  const ComplexMatrix ab = kron(a, b);
  EXPECT_TRUE(partial_trace(ab, 3, {0}).isApprox(a, 1e-12));
  EXPECT_TRUE(partial_trace(ab, 3, {1, 2}).isApprox(b, 1e-12));
}

TEST(PartialTrace, PreservesTrace) {
  const ComplexMatrix rho = random_density(3, 7);
  for (const QubitIndexSet& keep :
       {QubitIndexSet{0}, QubitIndexSet{1}, QubitIndexSet{2}, QubitIndexSet{0, 2},
        QubitIndexSet{1, 2}, QubitIndexSet{0, 1, 2}}) {
    EXPECT_NEAR(partial_trace(rho, 3, keep).trace().real(), 1.0, 1e-12);
  }
}

TEST(PartialTrace, KeepsRelativeOrder) {
  // rho = a (x) b (x) c; keeping {0, 2} must give a (x) c, not c (x) a.
  const ComplexMatrix a = random_density(1, 3);
  const ComplexMatrix b = random_density(1, 4);
  const ComplexMatrix c = random_density(1, 5);
  const ComplexMatrix abc = kron(kron(a, b), c);
  EXPECT_TRUE(partial_trace(abc, 3, {0, 2}).isApprox(kron(a, c), 1e-12));
}

TEST(PartialTranspose, EmptySetIsIdentityMap) {
  const ComplexMatrix rho = random_density(3, 11);
  EXPECT_EQ(partial_transpose(rho, 3, {}), rho);
}

TEST(PartialTranspose, BellSpectrum) {
  const RealVector ev = herm_eigenvalues(partial_transpose(bell(), 2, {1}));
  EXPECT_NEAR(ev(0), -0.5, 1e-12);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(ev(k), 0.5, 1e-12);
}

TEST(PartialTranspose, ProductTransposesOneFactor) {
  const ComplexMatrix a = random_density(1, 21);
  const ComplexMatrix b = random_density(2, 22);
  EXPECT_TRUE(partial_transpose(kron(a, b), 3, {1, 2}).isApprox(kron(a, b.transpose()), 1e-12));
}

TEST(PartialTranspose, InvolutionIsBitExact) {
  const ComplexMatrix rho = random_density(4, 5);
  EXPECT_EQ(partial_transpose(partial_transpose(rho, 4, {1, 3}), 4, {1, 3}), rho);
}

TEST(HermEig, Identity) {
  const auto e = herm_eig(identity(4));
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(e.values(k), 1.0, 1e-14);
}

TEST(HermEig, PauliX) {
  const auto e = herm_eig(site_matrix(SiteOp::X));
  EXPECT_NEAR(e.values(0), -1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
}

TEST(HermEig, ReconstructsRandomHermitian) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ComplexMatrix m = random_hermitian(8, seed);
    const auto e = herm_eig(m);
    for (int k = 1; k < 8; ++k) EXPECT_LE(e.values(k - 1), e.values(k));
    const ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT((back - m).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(HermEig, AgreesWithEigen) {
  const ComplexMatrix m = random_hermitian(32, 9);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(m);
  EXPECT_LT((herm_eigenvalues(m) - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(TraceNorm, Cases) {
  EXPECT_NEAR(trace_norm(random_density(3, 17)), 1.0, 1e-12);
  EXPECT_NEAR(trace_norm(partial_transpose(bell(), 2, {1})), 2.0, 1e-12);
  EXPECT_EQ(trace_norm(ComplexMatrix::Zero(4, 4)), 0.0);
}

TEST(HermiticityError, DetectsAntiHermitianPart) {
  ComplexMatrix m = random_hermitian(4, 1);
  EXPECT_LT(hermiticity_error(m), 1e-15);
  m(0, 1) += 1e-3;
  EXPECT_NEAR(hermiticity_error(m), 1e-3, 1e-12);
}

TEST(QubitIndexSet, RejectsDuplicatesAndRange) {
  EXPECT_THROW((QubitIndexSet{1, 1}), IndexError);
  EXPECT_THROW(QubitIndexSet({-1}), IndexError);
  EXPECT_THROW(QubitIndexSet({3}).validate(3), IndexError);
  EXPECT_THROW(partial_trace(bell(), 2, {2}), IndexError);
  EXPECT_THROW(partial_trace(bell(), 2, {}), IndexError);
  EXPECT_EQ(QubitIndexSet({2, 0}).indices(), (std::vector<int>{0, 2}));
}

TEST(QubitIndexSet, MaskAndSetOps) {
  const QubitIndexSet s{0, 2};
  EXPECT_EQ(s.mask(3), 0b101u);
  EXPECT_TRUE(s.disjoint_with({1}));
  EXPECT_EQ(s.united_with({1}), QubitIndexSet::range(0, 3));
}

TEST(Shapes, DimensionChecks) {
  EXPECT_EQ(qubits_for_dim(8), 3);
  EXPECT_THROW(qubits_for_dim(6), ShapeError);
  EXPECT_THROW(partial_trace(ComplexMatrix::Zero(3, 3), 2, {0}), ShapeError);
}

TEST(Register, CapFromEnvironment) {
  ::setenv("OPENCHAIN_MAX_QUBITS", "5", 1);
  EXPECT_EQ(max_register_qubits(), 5);
  EXPECT_THROW(kron(identity(32), identity(2)), SizeError);
  ::unsetenv("OPENCHAIN_MAX_QUBITS");
  EXPECT_EQ(max_register_qubits(), 12);
}
