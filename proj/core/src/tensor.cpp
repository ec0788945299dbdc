#include "openchain/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "openchain/errors.hpp"

namespace openchain {

namespace {

constexpr int kDefaultMaxQubits = 12;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kJacobiOffTolerance = 1e-12;

std::size_t bit_of(int qubit, int num_qubits) {
  return std::size_t{1} << (num_qubits - 1 - qubit);
}

// Offsets into a full register index for every assignment of the listed
// qubits. Entry j sets qubit list[0] from the most significant bit of j, so
// enumeration order matches the reduced register's own ordering.
std::vector<std::size_t> scatter_offsets(const std::vector<int>& qubits,
                                         int num_qubits) {
  const std::size_t count = std::size_t{1} << qubits.size();
  std::vector<std::size_t> out(count, 0);
  const int k = static_cast<int>(qubits.size());
  for (std::size_t j = 0; j < count; ++j) {
    std::size_t full = 0;
    for (int b = 0; b < k; ++b) {
      if (j & (std::size_t{1} << (k - 1 - b))) full |= bit_of(qubits[b], num_qubits);
    }
    out[j] = full;
  }
  return out;
}

struct JacobiResult {
  ComplexMatrix a;
  ComplexMatrix v;
  int sweeps = 0;
};

double off_diagonal_norm_sq(const ComplexMatrix& a) {
  double s = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return s;
}

// Rotations act on columns p, q and are mirrored onto rows p, q, keeping the
// working matrix exactly Hermitian.
JacobiResult jacobi(const ComplexMatrix& m, bool with_vectors) {
  const Eigen::Index n = m.rows();
  JacobiResult r;
  r.a = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < n; ++i) r.a(i, i) = Complex(r.a(i, i).real(), 0.0);
  if (with_vectors) r.v = ComplexMatrix::Identity(n, n);

  const double scale = std::max(1.0, r.a.norm());
  const double tol_sq = (kJacobiOffTolerance * scale) * (kJacobiOffTolerance * scale);

  ComplexMatrix& a = r.a;
  for (int sweep = 0; sweep <= kJacobiMaxSweeps; ++sweep) {
    const double off = off_diagonal_norm_sq(a);
    if (off <= tol_sq) {
      r.sweeps = sweep;
      return r;
    }
    if (sweep == kJacobiMaxSweeps) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip rotations that cannot change the diagonal in floating point.
        if (std::abs(app) + 1e3 * mag == std::abs(app) &&
            std::abs(aqq) + 1e3 * mag == std::abs(aqq) && sweep > 4) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const Complex phase = apq / mag;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          const Complex nkp = akp * upp + akq * uqp;
          const Complex nkq = akp * upq + akq * uqq;
          a(k, p) = nkp;
          a(k, q) = nkq;
          a(p, k) = std::conj(nkp);
          a(q, k) = std::conj(nkq);
        }
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (with_vectors) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex vkp = r.v(k, p);
            const Complex vkq = r.v(k, q);
            r.v(k, p) = vkp * upp + vkq * uqp;
            r.v(k, q) = vkp * upq + vkq * uqq;
          }
        }
      }
    }
  }
  throw NumericError("herm_eig: Jacobi did not converge after " +
                     std::to_string(kJacobiMaxSweeps) +
                     " sweeps; off-diagonal residual " +
                     std::to_string(std::sqrt(off_diagonal_norm_sq(a))));
}

}  // namespace

int max_register_qubits() {
  if (const char* env = std::getenv("OPENCHAIN_MAX_QUBITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 30) return static_cast<int>(v);
  }
  return kDefaultMaxQubits;
}

QubitIndexSet::QubitIndexSet(std::initializer_list<int> indices)
    : QubitIndexSet(std::vector<int>(indices)) {}

QubitIndexSet::QubitIndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw IndexError("qubit index set contains duplicates");
  }
  if (!indices_.empty() && indices_.front() < 0) {
    throw IndexError("qubit index set contains a negative index");
  }
}

QubitIndexSet QubitIndexSet::range(int first, int count) {
  std::vector<int> v(static_cast<std::size_t>(std::max(count, 0)));
  std::iota(v.begin(), v.end(), first);
  return QubitIndexSet(std::move(v));
}

bool QubitIndexSet::contains(int qubit) const {
  return std::binary_search(indices_.begin(), indices_.end(), qubit);
}

void QubitIndexSet::validate(int num_qubits) const {
  for (int i : indices_) {
    if (i < 0 || i >= num_qubits) {
      throw IndexError("qubit index " + std::to_string(i) + " outside register of " +
                       std::to_string(num_qubits) + " qubits");
    }
  }
}

std::size_t QubitIndexSet::mask(int num_qubits) const {
  std::size_t m = 0;
  for (int i : indices_) m |= bit_of(i, num_qubits);
  return m;
}

bool QubitIndexSet::disjoint_with(const QubitIndexSet& other) const {
  return std::none_of(indices_.begin(), indices_.end(),
                      [&](int i) { return other.contains(i); });
}

QubitIndexSet QubitIndexSet::united_with(const QubitIndexSet& other) const {
  if (!disjoint_with(other)) throw IndexError("qubit index sets overlap");
  std::vector<int> all = indices_;
  all.insert(all.end(), other.indices_.begin(), other.indices_.end());
  return QubitIndexSet(std::move(all));
}

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim),
                                 static_cast<Eigen::Index>(dim));
}

int qubits_for_dim(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0) {
    throw ShapeError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int q = 0;
  while ((std::size_t{1} << q) < dim) ++q;
  return q;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  const double limit = std::ldexp(1.0, max_register_qubits());
  if (static_cast<double>(ar) * br > limit || static_cast<double>(ac) * bc > limit) {
    throw SizeError("kron result exceeds the 2^" + std::to_string(max_register_qubits()) +
                    " register limit");
  }
  ComplexMatrix out(ar * br, ac * bc);
  for (Eigen::Index j = 0; j < ac; ++j) {
    for (Eigen::Index i = 0; i < ar; ++i) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw ShapeError("commutator: operands must be square with equal dimensions");
  }
  ComplexMatrix out = a * b;
  out.noalias() -= b * a;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, int num_qubits,
                            const QubitIndexSet& keep) {
  if (rho.rows() != rho.cols() ||
      rho.rows() != (Eigen::Index{1} << num_qubits)) {
    throw ShapeError("partial_trace: matrix is not 2^num_qubits square");
  }
  if (keep.empty()) throw IndexError("partial_trace: keep set is empty");
  keep.validate(num_qubits);

  std::vector<int> traced;
  for (int k = 0; k < num_qubits; ++k) {
    if (!keep.contains(k)) traced.push_back(k);
  }
  const auto kept_off = scatter_offsets(keep.indices(), num_qubits);
  const auto traced_off = scatter_offsets(traced, num_qubits);

  const auto out_dim = static_cast<Eigen::Index>(kept_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  for (Eigen::Index j = 0; j < out_dim; ++j) {
    for (Eigen::Index i = 0; i < out_dim; ++i) {
      Complex acc = 0.0;
      const std::size_t ri = kept_off[i];
      const std::size_t cj = kept_off[j];
      for (std::size_t t : traced_off) {
        acc += rho(static_cast<Eigen::Index>(ri | t), static_cast<Eigen::Index>(cj | t));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, int num_qubits,
                                const QubitIndexSet& transposed) {
  if (rho.rows() != rho.cols() ||
      rho.rows() != (Eigen::Index{1} << num_qubits)) {
    throw ShapeError("partial_transpose: matrix is not 2^num_qubits square");
  }
  transposed.validate(num_qubits);
  const std::size_t m = transposed.mask(num_qubits);
  const auto dim = static_cast<std::size_t>(rho.rows());
  ComplexMatrix out(rho.rows(), rho.cols());
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t r = 0; r < dim; ++r) {
      const std::size_t r2 = (r & ~m) | (c & m);
      const std::size_t c2 = (c & ~m) | (r & m);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rho(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c2));
    }
  }
  return out;
}

EigenDecomposition herm_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("herm_eig: matrix is not square");
  JacobiResult r = jacobi(m, true);
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return r.a(x, x).real() < r.a(y, y).real();
  });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = r.a(order[k], order[k]).real();
    out.vectors.col(k) = r.v.col(order[k]);
  }
  return out;
}

RealVector herm_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("herm_eig: matrix is not square");
  JacobiResult r = jacobi(m, false);
  RealVector values = r.a.diagonal().real();
  std::sort(values.begin(), values.end());
  return values;
}

double trace_norm(const ComplexMatrix& m) {
  return herm_eigenvalues(m).cwiseAbs().sum();
}

double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("hermiticity_error: matrix is not square");
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace openchain
