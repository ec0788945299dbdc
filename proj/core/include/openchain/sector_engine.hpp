#pragma once

// Fast path behind evolve(): the ancilla-extended density matrix is kept as
// its three independent ancilla blocks
//
//   rho = [[R00, R01], [R01^dag, R11]]     (ancilla is qubit 0)
//
// each a graded chain operator, and Obar_j lives on the chain alone. Because
// the generator never touches the ancilla, every block obeys the same chain
// equation and all operators stay inside fixed excitation-number shifts.

#include <array>

#include "openchain/graded.hpp"
#include "openchain/model.hpp"

namespace openchain {

class SectorEngine {
 public:
  struct State {
    std::array<GradedMatrix, 3> r;  // R00, R01, R11
    std::array<GradedMatrix, 2> o;  // Obar_1, Obar_2 on the chain
  };

  explicit SectorEngine(const ChainConfig& cfg);

  const State& state() const { return state_; }
  State& mutable_state() { return state_; }

  /// Derivative of every block at `y`.
  void rhs(const State& y, State& dy);

  /// One classical RK4 step of size dt.
  void step(double dt);

  /// Full 2^(N+1) density matrix.
  ComplexMatrix assemble_rho() const;

  /// Smallest eigenvalue of the Hermitian part of rho / Tr(rho), computed on
  /// the blocks of the conserved charge (chain excitations - ancilla offset).
  double min_eigenvalue() const;

  int lindblad_shift() const { return lindblad_shift_; }
  int coherence_shift() const { return coherence_shift_; }
  bool bath_active(int j) const { return active_[j]; }
  bool bath_markov(int j) const { return markov_[j]; }

  /// Graded chain operators, exposed for cross-checks against the dense path.
  const GradedSparse& hamiltonian() const { return h_; }
  const GradedSparse& lindblad(int j) const { return l_[j]; }

 private:
  void hermitian_block_rhs(const GradedMatrix& x, const State& y, GradedMatrix& dx);
  void coherence_block_rhs(const GradedMatrix& x, const State& y, GradedMatrix& dx);
  void obar_rhs(const State& y, State& dy);
  State zero_like(const State& s) const;

  ChainConfig cfg_;
  SectorBasisPtr basis_;
  int lindblad_shift_ = 0;
  int coherence_shift_ = 0;
  std::array<bool, 2> active_{false, false};
  std::array<bool, 2> markov_{false, false};

  GradedSparse h_;
  std::array<GradedSparse, 2> l_;
  std::array<GradedSparse, 2> ld_;
  std::array<GradedMatrix, 2> l_dense_;

  State state_;
  // RK4 stages and products, allocated once.
  State k1_, k2_, k3_, k4_, tmp_;
  GradedMatrix y_herm_;
  GradedMatrix m_;
  GradedMatrix p_diag_;
  GradedMatrix p_coh_;
  GradedMatrix q_coh_;
};

}  // namespace openchain
