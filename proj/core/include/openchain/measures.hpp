#pragma once

// Information diagnostics on the ancilla-extended register.
// Entropies use the natural log; logarithmic negativities use log base 2, so
// a Bell pair reads 2 ln 2 in mutual information and 1 in negativity.

#include <array>
#include <string_view>

#include "openchain/model.hpp"
#include "openchain/tensor.hpp"

namespace openchain {

/// Eigenvalues in [-kNegativeEigenvalueTolerance, 0) are treated as zero by
/// every entropy; anything lower is a positivity failure. The integrator's
/// hygiene checks use the same constant.
inline constexpr double kNegativeEigenvalueTolerance = 1e-6;

/// One sampled row. Field names follow the CSV columns.
struct MeasureSample {
  double t = 0.0;
  double I2_AB = 0.0;
  double I2_AC = 0.0;
  double I2_ABC = 0.0;
  double TMI = 0.0;
  double E2_AB = 0.0;
  double E2_AC = 0.0;
  double E2_ABC = 0.0;
  double TLN = 0.0;
  double S_A = 0.0;
  double total_sz = 0.0;
  double trace_err = 0.0;
  double herm_err = 0.0;
  double min_eig = 0.0;
};

inline constexpr std::size_t kNumColumns = 14;

/// CSV column order.
inline constexpr std::array<std::string_view, kNumColumns> kColumnNames{
    "t",      "I2_AB", "I2_AC",    "I2_ABC",    "TMI",      "E2_AB",    "E2_AC",
    "E2_ABC", "TLN",   "S_A",      "total_sz",  "trace_err", "herm_err", "min_eig"};

std::array<double, kNumColumns> column_values(const MeasureSample& s);

/// Index into kColumnNames; throws ConfigError for an unknown name.
std::size_t column_index(std::string_view name);

/// -sum lambda ln lambda with 0 ln 0 = 0.
double von_neumann_entropy(const ComplexMatrix& rho);

/// Entropy from an already computed spectrum (same clamping rules).
double entropy_of_spectrum(const RealVector& eigenvalues);

/// I2(X:Y) = S_X + S_Y - S_XY.
double bmi(const ComplexMatrix& rho_full, const QubitIndexSet& X, const QubitIndexSet& Y);

/// I2(A:B) + I2(A:C) - I2(A:BC).
double tmi(const ComplexMatrix& rho_full, const Partition& p);

/// log2 || rho_XY^{T_Y} ||_1.
double bln(const ComplexMatrix& rho_full, const QubitIndexSet& X, const QubitIndexSet& Y);

/// E2(A:B) + E2(A:C) - E2(A:BC).
double tln(const ComplexMatrix& rho_full, const Partition& p);

/// Tr(rho * sum_k sigma^z_k) over every qubit of the register.
double total_sz(const ComplexMatrix& rho_full);

/// All information measures of one state; reduces to ABC once and derives the
/// smaller marginals from it. Hygiene fields are left at zero.
MeasureSample measure_state(const ComplexMatrix& rho_full, const Partition& p);

}  // namespace openchain
