#pragma once

// Seeded sampling. The engine is std::mt19937_64, whose output sequence is
// fixed by the C++ standard. Uniform and Gaussian variates are derived here
// rather than through <random> distributions (whose algorithms are
// implementation-defined), so a seed yields the same matrices on every
// conforming toolchain:
//   uniform  = (engine() >> 11) * 2^-53                      in [0, 1)
//   normal   = Box-Muller on (1 - u1, u2), both variates used in turn
//   complex  = (normal + i normal) / sqrt(2)

#include <cstdint>
#include <random>
#include <vector>

#include "redstate/linalg.hpp"

namespace redstate {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double normal();
  Complex complex_normal();
  /// Uniform integer in [lo, hi].
  Index uniform_index(Index lo, Index hi);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer of seed + golden-ratio * (stream + 1); used to give
/// every independent sampler instance its own seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// rows x cols matrix of i.i.d. standard complex Gaussians.
ComplexMatrix ginibre(Index rows, Index cols, Rng& rng);

/// Haar unitary: Q from the QR factorization of a Ginibre matrix with the
/// phases of diag(R) folded into Q.
ComplexMatrix random_unitary(Index d, Rng& rng);

/// Random Hermitian matrix (G + G*)/2 with G Ginibre.
ComplexMatrix random_hermitian(Index d, Rng& rng);

/// rho = G G* / tr(G G*) with G a d x rank Ginibre sample.
DensityMatrix random_density(Index d, Index rank, Rng& rng);
DensityMatrix random_density(Index d, Index rank, std::uint64_t seed);

/// Point of the probability simplex, Dirichlet(1,...,1) via normalized exponentials.
std::vector<double> random_simplex(Index d, Rng& rng);

}  // namespace redstate
