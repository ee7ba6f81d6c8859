#pragma once

// Majorization order, Schur-convex functionals and Schatten norms.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "redstate/linalg.hpp"

namespace redstate {

/// Absolute slack used by every majorization and inequality comparison.
inline constexpr double kMajTol = 1e-10;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct MajorizationReport {
  bool holds = false;
  /// Length k of the first prefix (k largest entries) where x exceeds y; the
  /// full length when only the totals disagree.
  std::optional<std::size_t> first_violation;
  std::vector<double> partial_sums_x;
  std::vector<double> partial_sums_y;

  /// min_k (Y_k - X_k) over proper prefixes, lowered to -|X_n - Y_n| when the
  /// totals disagree. Nonnegative up to kMajTol iff holds.
  double slack = 0.0;
};

enum class Padding { none, zeros };

/// Tests x < y (x is majorized by y). Inputs need not be sorted. With
/// Padding::zeros the shorter vector is extended by zeros; otherwise unequal
/// lengths throw ErrorKind::dimension.
MajorizationReport majorizes(std::span<const double> x, std::span<const double> y,
                             Padding padding = Padding::none, double tol = kMajTol);

/// Prefix sums of the descending rearrangement, Neumaier-compensated.
std::vector<double> sorted_prefix_sums(std::span<const double> x);

/// (sum |x_i|^p)^(1/p); p = kInf gives max |x_i|. Throws domain for p < 1.
double schatten_norm(std::span<const double> eigenvalues, double p);
double schatten_norm(const HermitianMatrix& a, double p);

/// -sum x ln x with 0 ln 0 = 0. Entries in [-kMajTol, 0) are clamped to zero;
/// anything more negative throws domain.
double von_neumann_entropy(std::span<const double> x);
inline double von_neumann_entropy(const Spectrum& s) { return von_neumann_entropy(s.values()); }

/// Ky Fan functional: sum of the k largest entries, 1 <= k <= size.
double sum_k_largest(std::span<const double> x, std::size_t k);

}  // namespace redstate
