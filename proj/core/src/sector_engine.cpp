#include "openchain/sector_engine.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "openchain/errors.hpp"

namespace openchain {

namespace {

constexpr Complex kI{0.0, 1.0};

std::size_t chain_index_of(const ComplexVector& psi_full, int chain_qubits, int ancilla) {
  const std::size_t offset = static_cast<std::size_t>(ancilla) << chain_qubits;
  const std::size_t dim = std::size_t{1} << chain_qubits;
  for (std::size_t s = 0; s < dim; ++s) {
    if (psi_full[static_cast<Eigen::Index>(offset | s)] != Complex(0.0, 0.0)) return s;
  }
  throw ShapeError("initial state has an empty ancilla branch");
}

int charge(std::size_t index) { return std::popcount(static_cast<unsigned long long>(index)); }

void hermitian_sum(const GradedMatrix& y, GradedMatrix& out) {
  for (int k = 0; k < y.num_blocks(); ++k) out.block(k) = y.block(k) + y.block(k).adjoint();
}

}  // namespace

SectorEngine::SectorEngine(const ChainConfig& cfg) : cfg_(cfg) {
  validate(cfg_);
  // The two branches of the prepared state are computational basis states
  // |0>|x0> and |1>|x1> with equal weight.
  const ComplexVector psi = prepare_initial_vector(cfg_);
  const std::size_t x0 = chain_index_of(psi, cfg_.N, 0);
  const std::size_t x1 = chain_index_of(psi, cfg_.N, 1);
  const Complex a0 = psi[static_cast<Eigen::Index>(x0)];
  const Complex a1 = psi[static_cast<Eigen::Index>((std::size_t{1} << cfg_.N) | x1)];
  coherence_shift_ = charge(x0) - charge(x1);

  // Neither channel raises the excitation number, so sectors above the
  // initial maximum are never reached and are left out of the basis.
  basis_ = std::make_shared<const SectorBasis>(cfg_.N, std::max(charge(x0), charge(x1)));

  lindblad_shift_ = cfg_.channel == Channel::Dissipation ? -1 : 0;
  h_ = GradedSparse::from_dense(basis_, build_hamiltonian(cfg_, false), 0);
  for (int j = 0; j < 2; ++j) {
    active_[j] = cfg_.channel != Channel::None && cfg_.Gamma[j] > 0.0;
    markov_[j] = is_markov_limit(cfg_.gamma[j]);
    if (active_[j]) {
      l_[j] = GradedSparse::from_dense(basis_, build_lindblad(cfg_, j + 1, false),
                                       lindblad_shift_);
      ld_[j] = l_[j].adjoint();
      l_dense_[j] = l_[j].to_graded_dense();
    }
  }

  state_.r[0] = GradedMatrix::zero(basis_, 0);
  state_.r[1] = GradedMatrix::zero(basis_, coherence_shift_);
  state_.r[2] = GradedMatrix::zero(basis_, 0);
  const int c0 = charge(x0);
  const int c1 = charge(x1);
  const Eigen::Index p0 = basis_->position_of(x0);
  const Eigen::Index p1 = basis_->position_of(x1);
  state_.r[0].block(c0)(p0, p0) = a0 * std::conj(a0);
  state_.r[1].block(c1)(p0, p1) = a0 * std::conj(a1);
  state_.r[2].block(c1)(p1, p1) = a1 * std::conj(a1);

  for (int j = 0; j < 2; ++j) {
    state_.o[j] = GradedMatrix::zero(basis_, lindblad_shift_);
    if (active_[j] && markov_[j]) {
      state_.o[j] = l_dense_[j];
      state_.o[j] *= 0.5 * cfg_.Gamma[j];
    }
  }

  k1_ = zero_like(state_);
  k2_ = zero_like(state_);
  k3_ = zero_like(state_);
  k4_ = zero_like(state_);
  tmp_ = state_;
  y_herm_ = GradedMatrix::zero(basis_, 0);
  m_ = GradedMatrix::zero(basis_, 0);
  p_diag_ = GradedMatrix::zero(basis_, lindblad_shift_);
  p_coh_ = GradedMatrix::zero(basis_, coherence_shift_ + lindblad_shift_);
  q_coh_ = GradedMatrix::zero(basis_, coherence_shift_ - lindblad_shift_);
}

SectorEngine::State SectorEngine::zero_like(const State& s) const {
  State z;
  for (int i = 0; i < 3; ++i) z.r[i] = GradedMatrix::zero(basis_, s.r[i].shift());
  for (int j = 0; j < 2; ++j) z.o[j] = GradedMatrix::zero(basis_, s.o[j].shift());
  return z;
}

// For Hermitian X the generator is Y + Y^dag with
//   Y = -i H X + sum_j ( L_j (Obar_j X)^dag - L_j^dag Obar_j X ).
void SectorEngine::hermitian_block_rhs(const GradedMatrix& x, const State& y, GradedMatrix& dx) {
  y_herm_.set_zero();
  add_product(y_herm_, h_, x, Adj::No, -kI);
  for (int j = 0; j < 2; ++j) {
    if (!active_[j]) continue;
    p_diag_.set_zero();
    add_product(p_diag_, y.o[j], Adj::No, x, Adj::No, 1.0);
    add_product(y_herm_, l_[j], p_diag_, Adj::Yes, 1.0);
    add_product(y_herm_, ld_[j], p_diag_, Adj::No, -1.0);
  }
  hermitian_sum(y_herm_, dx);
}

void SectorEngine::coherence_block_rhs(const GradedMatrix& x, const State& y, GradedMatrix& dx) {
  dx.set_zero();
  add_product(dx, h_, x, Adj::No, -kI);
  add_product(dx, x, Adj::No, h_, kI);
  for (int j = 0; j < 2; ++j) {
    if (!active_[j]) continue;
    q_coh_.set_zero();
    add_product(q_coh_, x, Adj::No, y.o[j], Adj::Yes, 1.0);  // X Obar^dag
    p_coh_.set_zero();
    add_product(p_coh_, y.o[j], Adj::No, x, Adj::No, 1.0);  // Obar X
    add_product(dx, l_[j], q_coh_, Adj::No, 1.0);
    add_product(dx, q_coh_, Adj::No, l_[j], -1.0);
    add_product(dx, ld_[j], p_coh_, Adj::No, -1.0);
    add_product(dx, p_coh_, Adj::No, ld_[j], 1.0);
  }
}

void SectorEngine::obar_rhs(const State& y, State& dy) {
  bool any_finite = false;
  for (int j = 0; j < 2; ++j) any_finite = any_finite || (active_[j] && !markov_[j]);
  for (int j = 0; j < 2; ++j) dy.o[j].set_zero();
  if (!any_finite) return;

  // M = -L_1^dag Obar_1 - L_2^dag Obar_2, so the commutator generator is -iH + M.
  m_.set_zero();
  for (int j = 0; j < 2; ++j) {
    if (active_[j]) add_product(m_, ld_[j], y.o[j], Adj::No, -1.0);
  }
  for (int j = 0; j < 2; ++j) {
    if (!active_[j] || markov_[j]) continue;
    const double g = cfg_.gamma[j];
    GradedMatrix& d = dy.o[j];
    d.add_scaled(l_dense_[j], 0.5 * cfg_.Gamma[j] * g);
    d.add_scaled(y.o[j], -g);
    add_product(d, h_, y.o[j], Adj::No, -kI);
    add_product(d, y.o[j], Adj::No, h_, kI);
    add_product(d, m_, Adj::No, y.o[j], Adj::No, 1.0);
    add_product(d, y.o[j], Adj::No, m_, Adj::No, -1.0);
  }
}

void SectorEngine::rhs(const State& y, State& dy) {
  hermitian_block_rhs(y.r[0], y, dy.r[0]);
  coherence_block_rhs(y.r[1], y, dy.r[1]);
  hermitian_block_rhs(y.r[2], y, dy.r[2]);
  obar_rhs(y, dy);
}

void SectorEngine::step(double dt) {
  auto combine = [](State& out, const State& x, const State& k, double h) {
    for (int i = 0; i < 3; ++i) out.r[i].assign_sum(x.r[i], k.r[i], h);
    for (int j = 0; j < 2; ++j) out.o[j].assign_sum(x.o[j], k.o[j], h);
  };
  rhs(state_, k1_);
  combine(tmp_, state_, k1_, 0.5 * dt);
  rhs(tmp_, k2_);
  combine(tmp_, state_, k2_, 0.5 * dt);
  rhs(tmp_, k3_);
  combine(tmp_, state_, k3_, dt);
  rhs(tmp_, k4_);
  const double w = dt / 6.0;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < state_.r[i].num_blocks(); ++k) {
      state_.r[i].block(k) += w * (k1_.r[i].block(k) + 2.0 * k2_.r[i].block(k) +
                                   2.0 * k3_.r[i].block(k) + k4_.r[i].block(k));
    }
  }
  for (int j = 0; j < 2; ++j) {
    if (!active_[j] || markov_[j]) continue;
    for (int k = 0; k < state_.o[j].num_blocks(); ++k) {
      state_.o[j].block(k) += w * (k1_.o[j].block(k) + 2.0 * k2_.o[j].block(k) +
                                   2.0 * k3_.o[j].block(k) + k4_.o[j].block(k));
    }
  }
}

ComplexMatrix SectorEngine::assemble_rho() const {
  const auto chain_dim = static_cast<Eigen::Index>(basis_->full_dim());
  ComplexMatrix rho(2 * chain_dim, 2 * chain_dim);
  const ComplexMatrix r00 = state_.r[0].to_dense();
  const ComplexMatrix r01 = state_.r[1].to_dense();
  const ComplexMatrix r11 = state_.r[2].to_dense();
  rho.topLeftCorner(chain_dim, chain_dim) = r00;
  rho.topRightCorner(chain_dim, chain_dim) = r01;
  rho.bottomLeftCorner(chain_dim, chain_dim) = r01.adjoint();
  rho.bottomRightCorner(chain_dim, chain_dim) = r11;
  return rho;
}

double SectorEngine::min_eigenvalue() const {
  const GradedMatrix& r00 = state_.r[0];
  const GradedMatrix& r01 = state_.r[1];
  const GradedMatrix& r11 = state_.r[2];
  const int s = coherence_shift_;
  Complex trace = 0.0;
  for (int k = 0; k < r00.num_blocks(); ++k) trace += r00.block(k).trace() + r11.block(k).trace();
  const double norm = trace.real();

  double lowest = std::numeric_limits<double>::infinity();
  // Conserved charge: chain excitations on the |0>_A side equal chain
  // excitations + s on the |1>_A side.
  for (int v = std::min(0, s); v <= basis_->num_sites() + std::max(0, s); ++v) {
    const int w = v - s;
    const Eigen::Index d0 = basis_->dim(v);
    const Eigen::Index d1 = basis_->dim(w);
    if (d0 + d1 == 0) continue;
    ComplexMatrix block = ComplexMatrix::Zero(d0 + d1, d0 + d1);
    if (d0 > 0) block.topLeftCorner(d0, d0) = r00.block(v);
    if (d1 > 0) block.bottomRightCorner(d1, d1) = r11.block(w);
    if (d0 > 0 && d1 > 0) {
      block.topRightCorner(d0, d1) = r01.block(w);
      block.bottomLeftCorner(d1, d0) = r01.block(w).adjoint();
    }
    lowest = std::min(lowest, herm_eigenvalues(block / norm).minCoeff());
  }
  return lowest;
}

}  // namespace openchain
