#pragma once

// Explicit members of S(sigma) = { rho in D(m*n) : tr_1(rho) = sigma }.
//
// Every construction works in the eigenbasis of sigma and is conjugated back
// by I_m (x) V, which maps S(diag) onto S(V diag V*).

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "redstate/linalg.hpp"

namespace redstate {

/// Rank-one rho = w w* with tr_1(rho) = sigma. Needs m >= rank(sigma).
BipartiteState purify(const DensityMatrix& sigma, Index m);

/// Member of S(sigma) of rank exactly k, for ceil(r/m) <= k <= r*m.
///
/// With sigma = sum_j d_j x_j x_j* (d_1 >= ... >= d_r > 0):
///  * k > r, k = q*r + s with 0 < s <= r: the diagonal state putting
///    d_j/(q+1) on first-factor slots 0..q for j < s and d_j/q on slots
///    0..q-1 for j >= s;
///  * k <= r, r = k*q + s with 1 <= s <= k: k orthogonal vectors, vector j
///    superposing sqrt(d_{i*k+j}) e_i (x) x_{i*k+j} over slots i <= q (j < s)
///    or i < q (j >= s).
/// Throws infeasible_rank outside the range.
BipartiteState construct_rank_k(const DensityMatrix& sigma, Index m, Index k);

struct NormValue {
  double p;
  double value;
};

struct ApproxResult {
  BipartiteState rho;
  HermitianMatrix achieved_sigma;         // tr_1(rho)
  std::vector<double> residual_spectrum;  // eigenvalues of sigma - tr_1(rho), descending
  double mu_shift = 0.0;
  bool exact = false;
  std::vector<NormValue> norms;  // Schatten norms of the residual
};

/// Rank-<=k state whose first marginal is closest to sigma in every unitary
/// similarity invariant norm. When m*k < r the top m*k eigenvalues are lifted
/// by mu = (d_{mk+1} + ... + d_r)/(mk) and the rest dropped, so the residual
/// spectrum is (d_{mk+1}, ..., d_r, 0, ..., 0, -mu x mk).
ApproxResult optimal_low_rank(const DensityMatrix& sigma, Index m, Index k,
                              std::span<const double> norms = {});

/// F* diag(d) F with F the unitary DFT of order d.size(): constant diagonal
/// sum(d)/size, eigenvalues d.
HermitianMatrix constant_diagonal_conjugate(std::span<const double> d);

/// Real orthogonal U with diag(U* diag(w) U) = d, for d majorized by w.
/// Built from successive Givens rotations, each pinning the largest remaining
/// target on one coordinate. Throws precondition when d is not majorized by w.
ComplexMatrix horn_unitary(std::span<const double> w, std::span<const double> d);

/// For m >= n: a state with spectrum mu whose first marginal is
/// diag(lambda), whenever lambda is majorized by the m-block sums of mu.
/// Throws unsupported_regime for m < n and precondition when that
/// majorization fails.
BipartiteState construct_with_spectra(const Spectrum& lambda, const Spectrum& mu, Index m);

/// 2x2 real symmetric block [[corner, a], [a, hi + lo - corner]] with
/// eigenvalues {hi, lo}, a = sqrt((hi - corner)(corner - lo)).
struct Gadget {
  double eig_hi = 0.0;
  double eig_lo = 0.0;
  double corner = 0.0;
  double offdiag = 0.0;

  double other_corner() const noexcept { return eig_hi + eig_lo - corner; }
  Eigen::Matrix2d matrix() const;
};

/// Throws precondition unless eig_lo <= corner <= eig_hi.
Gadget gadget(double eig_hi, double eig_lo, double corner);

/// (m, n) = (2, 3): a state with spectrum mu whose first marginal is
/// diag(lambda). Throws infeasible when compat_2x3 fails.
BipartiteState construct_23(const Spectrum& lambda, const Spectrum& mu);

/// Rank-k member of S(sigma) that is not an extreme point, for
/// ceil(r/m) < k <= r: the rank-(k-1) superposition state of
/// construct_rank_k with its first vector split into two whose folded outer
/// products coincide.
BipartiteState nonextreme_of_rank_k(const DensityMatrix& sigma, Index m, Index k);

}  // namespace redstate
