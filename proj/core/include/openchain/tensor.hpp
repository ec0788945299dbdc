#pragma once

// Dense complex linear algebra over qubit registers.
//
// Register convention: qubit 0 is the most significant tensor factor, so in a
// q-qubit register the state of qubit k sits at bit (q - 1 - k) of a basis
// index. Every module in the project uses this ordering.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace openchain {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest register (in qubits) any kernel will build. Reads
/// OPENCHAIN_MAX_QUBITS on each call; defaults to 12.
int max_register_qubits();

/// Distinct qubit indices, stored in ascending register order.
class QubitIndexSet {
 public:
  QubitIndexSet() = default;
  QubitIndexSet(std::initializer_list<int> indices);
  explicit QubitIndexSet(std::vector<int> indices);

  /// Contiguous run [first, first + count).
  static QubitIndexSet range(int first, int count);

  const std::vector<int>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(int qubit) const;

  /// Throws IndexError unless every index lies in [0, num_qubits).
  void validate(int num_qubits) const;

  /// Bit mask of the set inside a num_qubits register.
  std::size_t mask(int num_qubits) const;

  bool disjoint_with(const QubitIndexSet& other) const;
  QubitIndexSet united_with(const QubitIndexSet& other) const;

  friend bool operator==(const QubitIndexSet&, const QubitIndexSet&) = default;

 private:
  std::vector<int> indices_;
};

ComplexMatrix identity(std::size_t dim);

/// Number of qubits q with dim == 2^q; throws ShapeError otherwise.
int qubits_for_dim(std::size_t dim);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// ab - ba.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced operator on `keep`; the kept qubits retain their relative order.
ComplexMatrix partial_trace(const ComplexMatrix& rho, int num_qubits,
                            const QubitIndexSet& keep);

/// Transpose on the qubits in `transposed`. Pure index permutation, so
/// applying it twice returns the input bit for bit.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, int num_qubits,
                                const QubitIndexSet& transposed);

struct EigenDecomposition {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // column k pairs with values[k]
};

/// Cyclic Jacobi eigensolver for Hermitian input. The matrix is symmetrized
/// as (m + m^dagger)/2 first, so small anti-Hermitian drift is absorbed.
EigenDecomposition herm_eig(const ComplexMatrix& m);

/// Eigenvalues only; same algorithm without accumulating rotations.
RealVector herm_eigenvalues(const ComplexMatrix& m);

/// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm(const ComplexMatrix& m);

/// max_ij |m_ij - conj(m_ji)|.
double hermiticity_error(const ComplexMatrix& m);

}  // namespace openchain
