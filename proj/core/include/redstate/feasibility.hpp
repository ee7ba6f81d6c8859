#pragma once

// Closed-form existence tests: which ranks occur in S(sigma) and among its
// extreme points, and which (reduced, global) spectrum pairs are compatible.
//
// S(sigma) = { rho in D(m*n) : tr_1(rho) = sigma }.

#include <string>
#include <vector>

#include "redstate/linalg.hpp"
#include "redstate/majorization.hpp"

namespace redstate {

struct RankRange {
  Index k_min = 0;
  Index k_max = 0;

  bool contains(Index k) const noexcept { return k_min <= k && k <= k_max; }
  friend bool operator==(const RankRange&, const RankRange&) = default;
};

struct CompatCheck {
  std::string id;
  bool pass = false;
  double slack = 0.0;  // signed margin on the feasible side
};

struct CompatReport {
  bool holds = false;
  std::vector<CompatCheck> checks;

  const CompatCheck& check(const std::string& id) const;
};

/// Ranks of elements of S(sigma) for rank(sigma) = r: [ceil(r/m), r*m].
RankRange element_rank_range(Index r, Index m);
/// Ranks of extreme points of S(sigma): [ceil(r/m), r].
RankRange extreme_rank_range(Index r, Index m);
/// Whether some rho of rank <= k has tr_1(rho) = sigma: m*k >= r.
bool exact_low_rank_exists(Index r, Index m, Index k);

/// Necessary conditions for lambda = spec(tr_1 rho), mu = spec(rho):
///   "major-1": (lambda_1/m x m, ..., lambda_n/m x m) < mu
///   "major":   lambda < (m-block sums of mu)
///   "major2":  mu < (m-block sums of lambda zero-padded to m*m*n)
/// The three are necessary but not sufficient once m < n.
CompatReport necessary_spectra_compat(const Spectrum& lambda, const Spectrum& mu, Index m);

/// (m, n) = (2, 2): compatible iff mu_1 + mu_2 >= lambda_1.
bool compat_2x2(const Spectrum& lambda, const Spectrum& mu);

/// (m, n) = (2, 3): compatible iff
///   mu_4 + mu_5 <= lambda_1 <= mu_1 + mu_2  and  mu_5 + mu_6 <= lambda_3 <= mu_2 + mu_3.
CompatReport compat_2x3(const Spectrum& lambda, const Spectrum& mu);

}  // namespace redstate
