#pragma once

// Seeded samplers and brute-force checks used to test the constructions.
// Nothing here relies on the optimality or spectral constructions it is used
// to check; sample_in_S only reuses construct_rank_k for membership coverage.

#include <cstdint>
#include <utility>
#include <vector>

#include "redstate/linalg.hpp"
#include "redstate/random.hpp"

namespace redstate {

struct SamplerConfig {
  std::uint64_t seed = 0;
  Index trials = 1;
  Index mix_components = 4;
};

/// Convex combination sum_t p_t (U_t (x) I) rho_t (U_t (x) I)* of members
/// rho_t in S(sigma) of random feasible ranks; conjugating the first factor
/// keeps tr_1 fixed.
BipartiteState sample_in_S(const DensityMatrix& sigma, Index m, const SamplerConfig& cfg);

/// Running minimum of ||sigma - tr_1(rho)||_p over cfg.trials random states
/// rho = G G*/tr(G G*) with G an (m*n) x k Ginibre matrix.
double search_min_norm(const DensityMatrix& sigma, Index m, Index k, double p,
                       const SamplerConfig& cfg);

struct SpectraPair {
  Spectrum lambda;  // spectrum of tr_1(rho)
  Spectrum mu;      // spectrum of rho
};

/// cfg.trials pairs from random states of random rank in D(m*n).
std::vector<SpectraPair> spectra_pair_census(Index m, Index n, const SamplerConfig& cfg);

/// Descending point of the simplex; when `zeros` > 0 that many trailing
/// entries are exactly zero.
Spectrum random_spectrum(Index d, Rng& rng, Index zeros = 0);

/// Apply `transfers` Robin Hood moves (mass from a larger entry to a smaller
/// one, never overshooting their average) to w. The result is majorized by w.
Spectrum robin_hood_mix(std::vector<double> w, Index transfers, Rng& rng);

/// Random (lambda, mu) with lambda majorized by the m-block sums of mu.
SpectraPair majorized_pair(Index m, Index n, Rng& rng);

/// Random (lambda, mu) on (2, 3) passing the compatibility inequalities, by
/// rejection. Rank-deficient mu (half the draws) and lambda (a quarter) are
/// included so degenerate gadgets get exercised.
SpectraPair compatible_23_pair(Rng& rng);

}  // namespace redstate
