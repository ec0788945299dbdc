#include "openchain/graded.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "openchain/errors.hpp"

namespace openchain {

namespace {

bool all_zero(const ComplexMatrix& m) {
  const Complex* p = m.data();
  const Eigen::Index n = m.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p[i] != Complex(0.0, 0.0)) return false;
  }
  return true;
}

void check_same_layout(const GradedMatrix& a, const GradedMatrix& b) {
  if (a.shift() != b.shift() || a.num_blocks() != b.num_blocks()) {
    throw ShapeError("graded operands differ in shift or sector count");
  }
}

template <typename Fn>
void for_each_entry(const SectorBasis& basis, int shift, Fn&& fn) {
  for (int k = 0; k < basis.num_sectors(); ++k) {
    const int target = k + shift;
    if (!basis.valid(target)) continue;
    const auto& cols = basis.states(k);
    const auto& rows = basis.states(target);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        fn(k, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), rows[i], cols[j]);
      }
    }
  }
}

void check_outside_shift(const SectorBasis& basis, const ComplexMatrix& m, int shift,
                         double tolerance) {
  const auto dim = static_cast<Eigen::Index>(basis.full_dim());
  if (m.rows() != dim || m.cols() != dim) {
    throw ShapeError("graded extraction: operator dimension " + std::to_string(m.rows()) +
                     " does not match 2^" + std::to_string(basis.num_sites()));
  }
  for (Eigen::Index c = 0; c < dim; ++c) {
    const int kc = basis.charge_of(static_cast<std::size_t>(c));
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (basis.charge_of(static_cast<std::size_t>(r)) == kc + shift) continue;
      if (std::abs(m(r, c)) > tolerance) {
        throw ShapeError("operator does not change the excitation number by " +
                         std::to_string(shift));
      }
    }
  }
}

}  // namespace

SectorBasis::SectorBasis(int num_sites, int max_charge)
    : num_sites_(num_sites), max_charge_(max_charge < 0 ? num_sites : max_charge) {
  if (num_sites < 1 || num_sites > 24) throw SizeError("SectorBasis: unsupported site count");
  if (max_charge_ > num_sites) throw SizeError("SectorBasis: charge cap exceeds site count");
  const std::size_t dim = std::size_t{1} << num_sites;
  states_.resize(static_cast<std::size_t>(num_sites) + 1);
  charge_.resize(dim);
  position_.resize(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    const int k = std::popcount(static_cast<unsigned long long>(s));
    charge_[s] = k;
    position_[s] = static_cast<Eigen::Index>(states_[k].size());
    states_[k].push_back(static_cast<std::uint32_t>(s));
  }
  states_.resize(static_cast<std::size_t>(max_charge_) + 1);
}

GradedMatrix GradedMatrix::zero(SectorBasisPtr basis, int shift) {
  GradedMatrix g;
  g.shift_ = shift;
  g.blocks_.resize(static_cast<std::size_t>(basis->num_sectors()));
  for (int k = 0; k < basis->num_sectors(); ++k) {
    g.blocks_[k] = ComplexMatrix::Zero(basis->dim(k + shift), basis->dim(k));
  }
  g.basis_ = std::move(basis);
  return g;
}

GradedMatrix GradedMatrix::from_dense(SectorBasisPtr basis, const ComplexMatrix& m, int shift,
                                      double tolerance) {
  check_outside_shift(*basis, m, shift, tolerance);
  GradedMatrix g = zero(basis, shift);
  for_each_entry(*basis, shift,
                 [&](int k, Eigen::Index i, Eigen::Index j, std::uint32_t r, std::uint32_t c) {
                   g.blocks_[k](i, j) = m(r, c);
                 });
  return g;
}

ComplexMatrix GradedMatrix::to_dense() const {
  const auto dim = static_cast<Eigen::Index>(basis_->full_dim());
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for_each_entry(*basis_, shift_,
                 [&](int k, Eigen::Index i, Eigen::Index j, std::uint32_t r, std::uint32_t c) {
                   m(r, c) = blocks_[k](i, j);
                 });
  return m;
}

GradedMatrix GradedMatrix::adjoint() const {
  GradedMatrix out = zero(basis_, -shift_);
  for (int k = 0; k < num_blocks(); ++k) {
    const int target = k + shift_;
    if (basis_->valid(target)) out.blocks_[target] = blocks_[k].adjoint();
  }
  return out;
}

void GradedMatrix::set_zero() {
  for (auto& b : blocks_) b.setZero();
}

GradedMatrix& GradedMatrix::operator+=(const GradedMatrix& other) {
  check_same_layout(*this, other);
  for (int k = 0; k < num_blocks(); ++k) blocks_[k] += other.blocks_[k];
  return *this;
}

GradedMatrix& GradedMatrix::operator*=(Complex alpha) {
  for (auto& b : blocks_) b *= alpha;
  return *this;
}

void GradedMatrix::add_scaled(const GradedMatrix& other, Complex alpha) {
  check_same_layout(*this, other);
  for (int k = 0; k < num_blocks(); ++k) blocks_[k] += alpha * other.blocks_[k];
}

void GradedMatrix::assign_sum(const GradedMatrix& x, const GradedMatrix& y, Complex alpha) {
  check_same_layout(x, y);
  if (blocks_.size() != x.blocks_.size() || shift_ != x.shift_) *this = x;
  for (int k = 0; k < num_blocks(); ++k) blocks_[k] = x.blocks_[k] + alpha * y.blocks_[k];
}

double GradedMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& b : blocks_) {
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  }
  return m;
}

GradedSparse GradedSparse::from_dense(SectorBasisPtr basis, const ComplexMatrix& m, int shift,
                                      double tolerance) {
  check_outside_shift(*basis, m, shift, tolerance);
  GradedSparse g;
  g.shift_ = shift;
  g.blocks_.resize(static_cast<std::size_t>(basis->num_sectors()));
  std::vector<std::vector<Eigen::Triplet<Complex>>> triplets(g.blocks_.size());
  for_each_entry(*basis, shift,
                 [&](int k, Eigen::Index i, Eigen::Index j, std::uint32_t r, std::uint32_t c) {
                   const Complex v = m(r, c);
                   if (v != Complex(0.0, 0.0)) triplets[k].emplace_back(i, j, v);
                 });
  for (int k = 0; k < basis->num_sectors(); ++k) {
    g.blocks_[k].resize(basis->dim(k + shift), basis->dim(k));
    g.blocks_[k].setFromTriplets(triplets[k].begin(), triplets[k].end());
    g.blocks_[k].makeCompressed();
  }
  g.basis_ = std::move(basis);
  return g;
}

GradedSparse GradedSparse::adjoint() const {
  GradedSparse out;
  out.basis_ = basis_;
  out.shift_ = -shift_;
  out.blocks_.resize(blocks_.size());
  for (int k = 0; k < static_cast<int>(blocks_.size()); ++k) {
    out.blocks_[k].resize(basis_->dim(k - shift_), basis_->dim(k));
  }
  for (int k = 0; k < static_cast<int>(blocks_.size()); ++k) {
    const int target = k + shift_;
    if (basis_->valid(target)) {
      out.blocks_[target] = SparseMatrix(blocks_[k].adjoint());
      out.blocks_[target].makeCompressed();
    }
  }
  return out;
}

GradedMatrix GradedSparse::to_graded_dense() const {
  GradedMatrix g = GradedMatrix::zero(basis_, shift_);
  for (int k = 0; k < static_cast<int>(blocks_.size()); ++k) g.block(k) = ComplexMatrix(blocks_[k]);
  return g;
}

void add_product(GradedMatrix& out, const GradedMatrix& a, Adj adj_a, const GradedMatrix& b,
                 Adj adj_b, Complex alpha) {
  const SectorBasis& basis = out.basis();
  const int ea = adj_a == Adj::Yes ? -a.shift() : a.shift();
  const int eb = adj_b == Adj::Yes ? -b.shift() : b.shift();
  if (ea + eb != out.shift()) throw ShapeError("add_product: shift mismatch");
  for (int k = 0; k < out.num_blocks(); ++k) {
    const int mid = k + eb;
    const int tgt = mid + ea;
    if (!basis.valid(mid) || !basis.valid(tgt)) continue;
    const ComplexMatrix& bb = adj_b == Adj::Yes ? b.block(mid) : b.block(k);
    const ComplexMatrix& ab = adj_a == Adj::Yes ? a.block(tgt) : a.block(mid);
    if (all_zero(bb) || all_zero(ab)) continue;
    ComplexMatrix& o = out.block(k);
    if (adj_a == Adj::No && adj_b == Adj::No) {
      o.noalias() += alpha * ab * bb;
    } else if (adj_a == Adj::No) {
      o.noalias() += alpha * ab * bb.adjoint();
    } else if (adj_b == Adj::No) {
      o.noalias() += alpha * ab.adjoint() * bb;
    } else {
      o.noalias() += alpha * ab.adjoint() * bb.adjoint();
    }
  }
}

void add_product(GradedMatrix& out, const GradedSparse& a, const GradedMatrix& b, Adj adj_b,
                 Complex alpha) {
  const SectorBasis& basis = out.basis();
  const int eb = adj_b == Adj::Yes ? -b.shift() : b.shift();
  if (a.shift() + eb != out.shift()) throw ShapeError("add_product: shift mismatch");
  for (int k = 0; k < out.num_blocks(); ++k) {
    const int mid = k + eb;
    const int tgt = mid + a.shift();
    if (!basis.valid(mid) || !basis.valid(tgt)) continue;
    const ComplexMatrix& bb = adj_b == Adj::Yes ? b.block(mid) : b.block(k);
    const SparseMatrix& ab = a.block(mid);
    if (ab.nonZeros() == 0 || all_zero(bb)) continue;
    ComplexMatrix& o = out.block(k);
    if (adj_b == Adj::No) {
      o.noalias() += alpha * (ab * bb);
    } else {
      o.noalias() += alpha * (ab * bb.adjoint());
    }
  }
}

void add_product(GradedMatrix& out, const GradedMatrix& a, Adj adj_a, const GradedSparse& b,
                 Complex alpha) {
  const SectorBasis& basis = out.basis();
  const int ea = adj_a == Adj::Yes ? -a.shift() : a.shift();
  if (ea + b.shift() != out.shift()) throw ShapeError("add_product: shift mismatch");
  for (int k = 0; k < out.num_blocks(); ++k) {
    const int mid = k + b.shift();
    const int tgt = mid + ea;
    if (!basis.valid(mid) || !basis.valid(tgt)) continue;
    const SparseMatrix& bb = b.block(k);
    const ComplexMatrix& ab = adj_a == Adj::Yes ? a.block(tgt) : a.block(mid);
    if (bb.nonZeros() == 0 || all_zero(ab)) continue;
    ComplexMatrix& o = out.block(k);
    if (adj_a == Adj::No) {
      o.noalias() += alpha * (ab * bb);
    } else {
      o.noalias() += alpha * (ab.adjoint() * bb);
    }
  }
}

}  // namespace openchain
