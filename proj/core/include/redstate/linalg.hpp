#pragma once

// Dense complex linear algebra for bipartite states on C^m (x) C^n.
//
// Basis convention: e_i (x) e_j (0-based i < m, j < n) lives at flat index
// i*n + j, so a state rho on the composite system is an m x m grid of n x n
// blocks rho_ij.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "redstate/errors.hpp"

namespace redstate {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Numerical tolerances for validating density matrices.
struct Tolerances {
  double hermit = 1e-9;    // relative to max(1, max |a_ij|)
  double psd = 1e-9;       // relative to max(1, max |lambda|)
  double trace = 1e-9;     // absolute
  double rank_rel = 1e-9;  // relative to the largest eigenvalue
};

/// Residual scale for the Hermitian eigensolver: ||A - V D V*|| <= kEigTol * dim * max|A|.
inline constexpr double kEigTol = 1e-12;

/// Real vector kept sorted in descending order.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<double> values);
  Spectrum(std::initializer_list<double> values)
      : Spectrum(std::vector<double>(values)) {}

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }
  double sum() const;

  /// Nonnegative within tol and summing to one within tol.
  bool is_probability(double tol = 1e-9) const;

 private:
  std::vector<double> values_;
};

/// Square matrix equal to its conjugate transpose. The stored entries are
/// exactly Hermitian: validated input is replaced by (A + A*)/2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Throws ErrorKind::not_hermitian when max|A - A*| exceeds
  /// rel_tol * max(1, max|A|), ErrorKind::dimension when not square.
  static HermitianMatrix from(const ComplexMatrix& a, double rel_tol = 1e-9);

  const ComplexMatrix& matrix() const noexcept { return a_; }
  Index dim() const noexcept { return a_.rows(); }

 private:
  explicit HermitianMatrix(ComplexMatrix a) : a_(std::move(a)) {}
  ComplexMatrix a_;
};

/// Positive semidefinite, unit-trace Hermitian matrix with its spectrum and
/// numerical rank fixed at construction. Build through validate_density.
class DensityMatrix {
 public:
  const HermitianMatrix& hermitian() const noexcept { return h_; }
  const ComplexMatrix& matrix() const noexcept { return h_.matrix(); }
  Index dim() const noexcept { return h_.dim(); }
  Index rank() const noexcept { return rank_; }
  const Spectrum& spectrum() const noexcept { return spectrum_; }

 private:
  friend DensityMatrix validate_density(const ComplexMatrix&, const Tolerances&);
  DensityMatrix(HermitianMatrix h, Spectrum s, Index rank)
      : h_(std::move(h)), spectrum_(std::move(s)), rank_(rank) {}

  HermitianMatrix h_;
  Spectrum spectrum_;
  Index rank_ = 0;
};

/// A density matrix on C^m (x) C^n.
class BipartiteState {
 public:
  BipartiteState(Index m, Index n, DensityMatrix rho);

  /// Validates `rho` as a density matrix of dimension m*n.
  static BipartiteState from(const ComplexMatrix& rho, Index m, Index n,
                             const Tolerances& tol = {});

  Index m() const noexcept { return m_; }
  Index n() const noexcept { return n_; }
  const DensityMatrix& rho() const noexcept { return rho_; }
  const ComplexMatrix& matrix() const noexcept { return rho_.matrix(); }
  Index rank() const noexcept { return rho_.rank(); }

  /// Block rho_ij (n x n), 0-based.
  ComplexMatrix block(Index i, Index j) const;

 private:
  Index m_;
  Index n_;
  DensityMatrix rho_;
};

struct EigenDecomposition {
  Spectrum values;       // descending
  ComplexMatrix vectors; // column i pairs with values[i]
};

/// n x m matrix whose column j holds w[j*n .. j*n + n).
ComplexMatrix fold(const ComplexVector& w, Index m, Index n);
/// Inverse of fold: stacks the columns of an n x m matrix.
ComplexVector unfold(const ComplexMatrix& w);

/// Sum of the m diagonal n x n blocks.
ComplexMatrix partial_trace_first(const ComplexMatrix& rho, Index m, Index n);
/// m x m matrix of block traces.
ComplexMatrix partial_trace_second(const ComplexMatrix& rho, Index m, Index n);
HermitianMatrix partial_trace_first(const BipartiteState& s);
HermitianMatrix partial_trace_second(const BipartiteState& s);

EigenDecomposition hermitian_eig(const HermitianMatrix& a);
EigenDecomposition hermitian_eig(const ComplexMatrix& a);
Spectrum eigenvalues(const HermitianMatrix& a);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// (I_m (x) U) X (I_m (x) U)^* for U acting on the second factor.
ComplexMatrix conjugate_second_factor(const ComplexMatrix& x, const ComplexMatrix& u,
                                      Index m);

/// Throws not_hermitian / not_psd / trace_not_one (or dimension when not square).
DensityMatrix validate_density(const ComplexMatrix& a, const Tolerances& tol = {});

/// Number of eigenvalues strictly above rel_tol * max(values).
Index numerical_rank(const Spectrum& s, double rel_tol = 1e-9);

/// Entrywise max-modulus, the ||.||_inf used throughout for residual checks.
double max_abs(const ComplexMatrix& a);

ComplexMatrix diagonal_matrix(std::span<const double> d);

}  // namespace redstate
