#pragma once

// Physical model: open XXZ chain with baths on both end spins, plus one
// ancilla qubit that never interacts with the chain.
//
// Register layout for the ancilla-extended register of N + 1 qubits:
//   qubit 0        ancilla A
//   qubit 1        chain site 1 (B, coupled to bath 1)
//   qubits 2..n+1  subsystem C
//   qubits n+2..N  subsystem D (site N is coupled to bath 2)
// Without the ancilla, chain site i occupies qubit i - 1.

#include <array>
#include <limits>
#include <string>

#include "openchain/tensor.hpp"

namespace openchain {

enum class Channel { None, Dephasing, Dissipation };
enum class InitialState { Neel, AllZeros };

/// Inverse bath memory time meaning gamma -> infinity.
inline constexpr double kMarkovLimit = std::numeric_limits<double>::infinity();

inline bool is_markov_limit(double gamma) { return gamma == kMarkovLimit; }

struct ChainConfig {
  int N = 6;
  double J = -1.0;
  double delta = 1.0;
  Channel channel = Channel::None;
  std::array<double, 2> Gamma{0.5, 0.5};
  std::array<double, 2> gamma{5.0, 5.0};
  InitialState init = InitialState::Neel;
  int n = 2;
  double t_max = 30.0;
  double dt = 1e-3;
  int sample_every = 100;
  // A sample whose lowest eigenvalue is below -positivity_guard aborts the
  // run. The memory-kernel generator is not positivity preserving, so slow
  // baths may need more room than the default.
  double positivity_guard = 1e-4;

  bool operator==(const ChainConfig&) const = default;
};

/// Throws ConfigError naming the first violated invariant.
void validate(const ChainConfig& cfg);

/// True when no bath acts: channel None or both couplings zero.
bool is_closed(const ChainConfig& cfg);

int register_qubits(const ChainConfig& cfg, bool with_ancilla);

struct Partition {
  QubitIndexSet A;
  QubitIndexSet B;
  QubitIndexSet C;
  QubitIndexSet D;
  int num_qubits = 0;
};

enum class SiteOp { X, Y, Z, Lower };

/// 2x2 matrix of a site operator. Lower is |0><1|, which annihilates |0>.
ComplexMatrix site_matrix(SiteOp op);

/// I x ... x op x ... x I with op on `site` of a q-qubit register.
ComplexMatrix single_site_op(SiteOp op, int site, int q);

ComplexMatrix build_hamiltonian(const ChainConfig& cfg, bool with_ancilla);

/// Lindblad operator of bath 1 (first chain spin) or bath 2 (last chain spin).
ComplexMatrix build_lindblad(const ChainConfig& cfg, int which_bath, bool with_ancilla);

/// CNOT_{A->B} [ |+>_A x |Xi>_BCD ] as a density matrix on N + 1 qubits.
ComplexMatrix prepare_initial_state(const ChainConfig& cfg);

/// The same preparation as a state vector.
ComplexVector prepare_initial_vector(const ChainConfig& cfg);

Partition make_partition(const ChainConfig& cfg);

std::string to_string(Channel c);
std::string to_string(InitialState s);

}  // namespace openchain
