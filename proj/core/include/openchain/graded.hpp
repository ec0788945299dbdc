#pragma once

// Excitation-number graded operators on an N-site chain.
//
// Every generator in the model (XXZ Hamiltonian, sigma^z and sigma^- baths)
// maps the sector with k excitations (k ones in the basis index) to a single
// sector k + shift. A graded operator stores one dense block per source
// sector, so products cost sum_k d_k^3 instead of (2^N)^3.

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/SparseCore>

#include "openchain/tensor.hpp"

namespace openchain {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Sectors 0..max_charge of an N-site chain. A truncated basis is exact for
/// dynamics that never raise the excitation number past max_charge.
class SectorBasis {
 public:
  explicit SectorBasis(int num_sites, int max_charge = -1);

  int num_sites() const { return num_sites_; }
  int max_charge() const { return max_charge_; }
  int num_sectors() const { return max_charge_ + 1; }
  bool valid(int charge) const { return charge >= 0 && charge <= max_charge_; }
  Eigen::Index dim(int charge) const {
    return valid(charge) ? static_cast<Eigen::Index>(states_[charge].size()) : 0;
  }
  /// Basis indices (ascending) of the states with `charge` excitations.
  const std::vector<std::uint32_t>& states(int charge) const { return states_[charge]; }
  int charge_of(std::size_t index) const { return charge_[index]; }
  Eigen::Index position_of(std::size_t index) const { return position_[index]; }
  std::size_t full_dim() const { return charge_.size(); }

 private:
  int num_sites_;
  int max_charge_;
  std::vector<std::vector<std::uint32_t>> states_;
  std::vector<int> charge_;
  std::vector<Eigen::Index> position_;
};

using SectorBasisPtr = std::shared_ptr<const SectorBasis>;

/// Dense blocks: block(k) maps sector k to sector k + shift. Blocks whose
/// target sector does not exist have zero rows.
class GradedMatrix {
 public:
  GradedMatrix() = default;
  static GradedMatrix zero(SectorBasisPtr basis, int shift);
  /// Extracts the graded part of a dense operator; throws ShapeError when an
  /// entry outside the declared shift exceeds `tolerance` in magnitude.
  static GradedMatrix from_dense(SectorBasisPtr basis, const ComplexMatrix& m, int shift,
                                 double tolerance = 0.0);

  ComplexMatrix to_dense() const;

  int shift() const { return shift_; }
  const SectorBasis& basis() const { return *basis_; }
  const SectorBasisPtr& basis_ptr() const { return basis_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  ComplexMatrix& block(int k) { return blocks_[k]; }
  const ComplexMatrix& block(int k) const { return blocks_[k]; }

  GradedMatrix adjoint() const;
  void set_zero();
  GradedMatrix& operator+=(const GradedMatrix& other);
  GradedMatrix& operator*=(Complex alpha);
  /// this += alpha * other.
  void add_scaled(const GradedMatrix& other, Complex alpha);
  /// this = x + alpha * y, reusing storage.
  void assign_sum(const GradedMatrix& x, const GradedMatrix& y, Complex alpha);

  double max_abs() const;

 private:
  SectorBasisPtr basis_;
  int shift_ = 0;
  std::vector<ComplexMatrix> blocks_;
};

/// Sparse counterpart used for the Hamiltonian and Lindblad operators.
class GradedSparse {
 public:
  GradedSparse() = default;
  static GradedSparse from_dense(SectorBasisPtr basis, const ComplexMatrix& m, int shift,
                                 double tolerance = 0.0);

  int shift() const { return shift_; }
  const SparseMatrix& block(int k) const { return blocks_[k]; }
  GradedSparse adjoint() const;
  GradedMatrix to_graded_dense() const;

 private:
  SectorBasisPtr basis_;
  int shift_ = 0;
  std::vector<SparseMatrix> blocks_;
};

enum class Adj { No, Yes };

// out += alpha * op(a) * op(b). Shifts of the operands must combine to the
// shift of `out`. Exactly-zero operand blocks are skipped.
void add_product(GradedMatrix& out, const GradedMatrix& a, Adj adj_a, const GradedMatrix& b,
                 Adj adj_b, Complex alpha);
void add_product(GradedMatrix& out, const GradedSparse& a, const GradedMatrix& b, Adj adj_b,
                 Complex alpha);
void add_product(GradedMatrix& out, const GradedMatrix& a, Adj adj_a, const GradedSparse& b,
                 Complex alpha);

}  // namespace openchain
