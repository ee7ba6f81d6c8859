#pragma once

// Extreme points of S(sigma). Writing rho = Z Z* with Z = [z_1 ... z_r] of
// full column rank, rho is extreme iff the r^2 matrices fold(z_i) fold(z_j)*
// are linearly independent. A dependency H (Hermitian, r x r) with
// sum_ij h_ij fold(z_i) fold(z_j)* = 0 moves rho along Z H Z* without
// leaving S(sigma).

#include <optional>
#include <utility>

#include "redstate/linalg.hpp"

namespace redstate {

/// Smallest Gram eigenvalue, relative to the largest, that still counts as
/// linear independence.
inline constexpr double kIndependenceTol = 1e-8;
/// Second tier used to flag verdicts that depend on the threshold.
inline constexpr double kIndependenceTolLoose = 1e-6;

struct ExtremalityReport {
  bool is_extreme = false;
  Index rank = 0;
  double gram_min_eig = 0.0;
  double gram_max_eig = 0.0;
  /// The verdict flips between kIndependenceTol and kIndependenceTolLoose.
  bool marginal = false;
  /// Present iff not extreme; relation coefficients for the columns of
  /// extremality_factor().
  std::optional<HermitianMatrix> certificate;
};

/// Z = V sqrt(Lambda) over the numerically nonzero eigenpairs of rho.
ComplexMatrix extremality_factor(const BipartiteState& s);

ExtremalityReport is_extreme(const BipartiteState& s);

/// Same test for an explicit factor rho = Z Z* (columns need not be orthogonal).
ExtremalityReport is_extreme_factor(const ComplexMatrix& z, Index m, Index n);

/// rho = (rho_1 + rho_2)/2 with both halves in S(tr_1 rho) and
/// rank(rho_1) < rank(rho). Throws invalid_certificate when `cert` is not a
/// dependency for extremality_factor(s).
std::pair<BipartiteState, BipartiteState> split_nonextreme(const BipartiteState& s,
                                                           const HermitianMatrix& cert);

}  // namespace redstate
