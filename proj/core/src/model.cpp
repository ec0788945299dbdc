#include "openchain/model.hpp"

#include <cmath>
#include <string>

#include "openchain/errors.hpp"

namespace openchain {

namespace {

constexpr int kMinChain = 2;
constexpr int kMaxChain = 11;

// Basis index of |Xi>_BCD on N chain qubits.
std::size_t chain_product_index(const ChainConfig& cfg) {
  std::size_t idx = 0;
  for (int site = 0; site < cfg.N; ++site) {
    const bool excited = cfg.init == InitialState::Neel && (site % 2 == 1);
    if (excited) idx |= std::size_t{1} << (cfg.N - 1 - site);
  }
  return idx;
}

// Everything except the partition size, so builders accept N = 2 chains.
void validate_chain(const ChainConfig& cfg) {
  if (cfg.N < kMinChain || cfg.N > kMaxChain) {
    throw ConfigError("N must satisfy 2 <= N <= 11 (got " + std::to_string(cfg.N) + ")");
  }
  if (cfg.N + 1 > max_register_qubits()) {
    throw ConfigError("N + 1 = " + std::to_string(cfg.N + 1) +
                      " qubits exceeds the register cap of " +
                      std::to_string(max_register_qubits()));
  }
  if (!std::isfinite(cfg.J) || !std::isfinite(cfg.delta)) {
    throw ConfigError("J and delta must be finite");
  }
  for (int j = 0; j < 2; ++j) {
    if (!(cfg.Gamma[j] >= 0.0) || !std::isfinite(cfg.Gamma[j])) {
      throw ConfigError("Gamma" + std::to_string(j + 1) + " must be finite and >= 0");
    }
    if (!(cfg.gamma[j] > 0.0)) {
      throw ConfigError("gamma" + std::to_string(j + 1) + " must be > 0 or markov");
    }
  }
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt must be > 0");
  if (!(cfg.t_max >= cfg.dt) || !std::isfinite(cfg.t_max)) {
    throw ConfigError("t_max must be finite and >= dt");
  }
  if (cfg.sample_every < 1) throw ConfigError("sample_every must be >= 1");
  if (!(cfg.positivity_guard > 0.0) || !std::isfinite(cfg.positivity_guard)) {
    throw ConfigError("positivity_guard must be finite and > 0");
  }
}

void validate_partition_size(const ChainConfig& cfg) {
  if (cfg.n < 1 || cfg.n > cfg.N - 2) {
    throw ConfigError("n must satisfy 1 <= n <= N - 2 (got n=" + std::to_string(cfg.n) +
                      ", N=" + std::to_string(cfg.N) + ")");
  }
}

}  // namespace

void validate(const ChainConfig& cfg) {
  validate_chain(cfg);
  validate_partition_size(cfg);
}

bool is_closed(const ChainConfig& cfg) {
  return cfg.channel == Channel::None || (cfg.Gamma[0] == 0.0 && cfg.Gamma[1] == 0.0);
}

int register_qubits(const ChainConfig& cfg, bool with_ancilla) {
  return cfg.N + (with_ancilla ? 1 : 0);
}

ComplexMatrix site_matrix(SiteOp op) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (op) {
    case SiteOp::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case SiteOp::Y:
      m(0, 1) = Complex(0.0, -1.0);
      m(1, 0) = Complex(0.0, 1.0);
      break;
    case SiteOp::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case SiteOp::Lower:
      m(0, 1) = 1.0;
      break;
  }
  return m;
}

ComplexMatrix single_site_op(SiteOp op, int site, int q) {
  if (q < 1) throw IndexError("register must have at least one qubit");
  if (site < 0 || site >= q) {
    throw IndexError("site " + std::to_string(site) + " outside register of " +
                     std::to_string(q) + " qubits");
  }
  const ComplexMatrix left = identity(std::size_t{1} << site);
  const ComplexMatrix right = identity(std::size_t{1} << (q - 1 - site));
  return kron(kron(left, site_matrix(op)), right);
}

ComplexMatrix build_hamiltonian(const ChainConfig& cfg, bool with_ancilla) {
  validate_chain(cfg);
  const int q = register_qubits(cfg, with_ancilla);
  const int offset = with_ancilla ? 1 : 0;
  const std::size_t dim = std::size_t{1} << q;
  ComplexMatrix h = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                        static_cast<Eigen::Index>(dim));
  // XX + YY flips an anti-aligned pair with amplitude 2; ZZ is diagonal.
  for (int i = 0; i + 1 < cfg.N; ++i) {
    const std::size_t bi = std::size_t{1} << (q - 1 - (i + offset));
    const std::size_t bj = std::size_t{1} << (q - 1 - (i + 1 + offset));
    for (std::size_t s = 0; s < dim; ++s) {
      const bool ui = (s & bi) != 0;
      const bool uj = (s & bj) != 0;
      const auto col = static_cast<Eigen::Index>(s);
      h(col, col) += cfg.J * cfg.delta * (ui == uj ? 1.0 : -1.0);
      if (ui != uj) h(static_cast<Eigen::Index>(s ^ bi ^ bj), col) += 2.0 * cfg.J;
    }
  }
  return h;
}

ComplexMatrix build_lindblad(const ChainConfig& cfg, int which_bath, bool with_ancilla) {
  validate_chain(cfg);
  if (cfg.channel == Channel::None) {
    throw ConfigError("build_lindblad: channel is None");
  }
  if (which_bath != 1 && which_bath != 2) {
    throw ConfigError("build_lindblad: bath index must be 1 or 2");
  }
  const int q = register_qubits(cfg, with_ancilla);
  const int offset = with_ancilla ? 1 : 0;
  const int site = (which_bath == 1 ? 0 : cfg.N - 1) + offset;
  const SiteOp op = cfg.channel == Channel::Dephasing ? SiteOp::Z : SiteOp::Lower;
  return single_site_op(op, site, q);
}

ComplexVector prepare_initial_vector(const ChainConfig& cfg) {
  validate_chain(cfg);
  const int q = cfg.N + 1;
  const std::size_t dim = std::size_t{1} << q;
  const std::size_t ancilla_bit = std::size_t{1} << (q - 1);
  const std::size_t b_bit = std::size_t{1} << (q - 2);
  const std::size_t chain = chain_product_index(cfg);
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  const double amp = 1.0 / std::sqrt(2.0);
  // |0>_A |Xi> is untouched; |1>_A |Xi> has B flipped by the CNOT.
  psi[static_cast<Eigen::Index>(chain)] += amp;
  psi[static_cast<Eigen::Index>(ancilla_bit | (chain ^ b_bit))] += amp;
  return psi;
}

ComplexMatrix prepare_initial_state(const ChainConfig& cfg) {
  const ComplexVector psi = prepare_initial_vector(cfg);
  return psi * psi.adjoint();
}

Partition make_partition(const ChainConfig& cfg) {
  validate_chain(cfg);
  validate_partition_size(cfg);
  Partition p;
  p.num_qubits = cfg.N + 1;
  p.A = QubitIndexSet{0};
  p.B = QubitIndexSet{1};
  p.C = QubitIndexSet::range(2, cfg.n);
  p.D = QubitIndexSet::range(2 + cfg.n, cfg.N - 1 - cfg.n);
  return p;
}

std::string to_string(Channel c) {
  switch (c) {
    case Channel::None:
      return "none";
    case Channel::Dephasing:
      return "dephasing";
    case Channel::Dissipation:
      return "dissipation";
  }
  return "none";
}

std::string to_string(InitialState s) {
  return s == InitialState::Neel ? "neel" : "allzeros";
}

}  // namespace openchain
