#include "openchain/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "openchain/errors.hpp"

namespace openchain {

namespace {

// Position of each member of `subset` within `outer` (both ascending), i.e.
// the subset's indices in the register left after keeping only `outer`.
QubitIndexSet relabel(const QubitIndexSet& subset, const QubitIndexSet& outer) {
  std::vector<int> out;
  const auto& o = outer.indices();
  for (int q : subset.indices()) {
    const auto it = std::lower_bound(o.begin(), o.end(), q);
    if (it == o.end() || *it != q) throw IndexError("relabel: qubit not in outer set");
    out.push_back(static_cast<int>(it - o.begin()));
  }
  return QubitIndexSet(std::move(out));
}

double entropy_of(const ComplexMatrix& rho) { return entropy_of_spectrum(herm_eigenvalues(rho)); }

double log_negativity(const ComplexMatrix& rho_xy, int num_qubits, const QubitIndexSet& y) {
  return std::log2(trace_norm(partial_transpose(rho_xy, num_qubits, y)));
}

void require_disjoint(const QubitIndexSet& x, const QubitIndexSet& y) {
  if (x.empty() || y.empty()) throw IndexError("subsystems must be nonempty");
  if (!x.disjoint_with(y)) throw IndexError("subsystems overlap");
}

}  // namespace

double entropy_of_spectrum(const RealVector& eigenvalues) {
  double s = 0.0;
  for (double lambda : eigenvalues) {
    if (lambda < -kNegativeEigenvalueTolerance) {
      std::ostringstream msg;
      msg << "density matrix has eigenvalue " << lambda << " below -"
          << kNegativeEigenvalueTolerance;
      throw PositivityError(msg.str());
    }
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  }
  return s;
}

double von_neumann_entropy(const ComplexMatrix& rho) { return entropy_of(rho); }

double bmi(const ComplexMatrix& rho_full, const QubitIndexSet& X, const QubitIndexSet& Y) {
  require_disjoint(X, Y);
  const int q = qubits_for_dim(static_cast<std::size_t>(rho_full.rows()));
  const QubitIndexSet xy = X.united_with(Y);
  xy.validate(q);
  const ComplexMatrix rho_xy = partial_trace(rho_full, q, xy);
  const int qxy = static_cast<int>(xy.size());
  const double sx = entropy_of(partial_trace(rho_xy, qxy, relabel(X, xy)));
  const double sy = entropy_of(partial_trace(rho_xy, qxy, relabel(Y, xy)));
  return sx + sy - entropy_of(rho_xy);
}

double tmi(const ComplexMatrix& rho_full, const Partition& p) {
  return bmi(rho_full, p.A, p.B) + bmi(rho_full, p.A, p.C) -
         bmi(rho_full, p.A, p.B.united_with(p.C));
}

double bln(const ComplexMatrix& rho_full, const QubitIndexSet& X, const QubitIndexSet& Y) {
  require_disjoint(X, Y);
  const int q = qubits_for_dim(static_cast<std::size_t>(rho_full.rows()));
  const QubitIndexSet xy = X.united_with(Y);
  xy.validate(q);
  const ComplexMatrix rho_xy = partial_trace(rho_full, q, xy);
  return log_negativity(rho_xy, static_cast<int>(xy.size()), relabel(Y, xy));
}

double tln(const ComplexMatrix& rho_full, const Partition& p) {
  return bln(rho_full, p.A, p.B) + bln(rho_full, p.A, p.C) -
         bln(rho_full, p.A, p.B.united_with(p.C));
}

double total_sz(const ComplexMatrix& rho_full) {
  const int q = qubits_for_dim(static_cast<std::size_t>(rho_full.rows()));
  double acc = 0.0;
  for (Eigen::Index s = 0; s < rho_full.rows(); ++s) {
    const int ones = std::popcount(static_cast<unsigned long long>(s));
    acc += rho_full(s, s).real() * static_cast<double>(q - 2 * ones);
  }
  return acc;
}

MeasureSample measure_state(const ComplexMatrix& rho_full, const Partition& p) {
  const int q = qubits_for_dim(static_cast<std::size_t>(rho_full.rows()));
  if (q != p.num_qubits) throw ShapeError("measure_state: partition does not match register");

  const QubitIndexSet bc = p.B.united_with(p.C);
  const QubitIndexSet abc = p.A.united_with(bc);
  const int k = static_cast<int>(abc.size());
  const ComplexMatrix rho_abc = partial_trace(rho_full, q, abc);

  const QubitIndexSet a = relabel(p.A, abc);
  const QubitIndexSet b = relabel(p.B, abc);
  const QubitIndexSet c = relabel(p.C, abc);
  const QubitIndexSet ab = a.united_with(b);
  const QubitIndexSet ac = a.united_with(c);
  const QubitIndexSet bc_r = b.united_with(c);

  const ComplexMatrix rho_ab = partial_trace(rho_abc, k, ab);
  const ComplexMatrix rho_ac = partial_trace(rho_abc, k, ac);

  const double s_a = entropy_of(partial_trace(rho_abc, k, a));
  const double s_b = entropy_of(partial_trace(rho_abc, k, b));
  const double s_c = entropy_of(partial_trace(rho_abc, k, c));
  const double s_ab = entropy_of(rho_ab);
  const double s_ac = entropy_of(rho_ac);
  const double s_bc = entropy_of(partial_trace(rho_abc, k, bc_r));
  const double s_abc = entropy_of(rho_abc);

  MeasureSample m;
  m.S_A = s_a;
  m.I2_AB = s_a + s_b - s_ab;
  m.I2_AC = s_a + s_c - s_ac;
  m.I2_ABC = s_a + s_bc - s_abc;
  m.TMI = m.I2_AB + m.I2_AC - m.I2_ABC;

  m.E2_AB = log_negativity(rho_ab, static_cast<int>(ab.size()), relabel(b, ab));
  m.E2_AC = log_negativity(rho_ac, static_cast<int>(ac.size()), relabel(c, ac));
  m.E2_ABC = log_negativity(rho_abc, k, bc_r);
  m.TLN = m.E2_AB + m.E2_AC - m.E2_ABC;

  m.total_sz = total_sz(rho_full);
  return m;
}

std::array<double, kNumColumns> column_values(const MeasureSample& s) {
  return {s.t,      s.I2_AB, s.I2_AC, s.I2_ABC,   s.TMI,       s.E2_AB,    s.E2_AC,
          s.E2_ABC, s.TLN,   s.S_A,   s.total_sz, s.trace_err, s.herm_err, s.min_eig};
}

std::size_t column_index(std::string_view name) {
  for (std::size_t i = 0; i < kColumnNames.size(); ++i) {
    if (kColumnNames[i] == name) return i;
  }
  throw ConfigError("unknown column '" + std::string(name) + "'");
}

}  // namespace openchain
