#include "redstate/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "redstate/constructors.hpp"
#include "redstate/feasibility.hpp"
#include "redstate/majorization.hpp"

namespace redstate {

BipartiteState sample_in_S(const DensityMatrix& sigma, Index m, const SamplerConfig& cfg) {
  if (m < 1) fail(ErrorKind::domain, "m must be positive");
  Rng rng(cfg.seed);
  const Index n = sigma.dim();
  const RankRange range = element_rank_range(std::max<Index>(sigma.rank(), 1), m);
  const Index parts = std::max<Index>(cfg.mix_components, 1);
  std::vector<double> weights(static_cast<std::size_t>(parts));
  double total = 0.0;
  for (auto& w : weights) {
    w = rng.uniform() + 1e-3;
    total += w;
  }
  ComplexMatrix mix = ComplexMatrix::Zero(m * n, m * n);
  const ComplexMatrix eye_n = ComplexMatrix::Identity(n, n);
  for (Index t = 0; t < parts; ++t) {
    const Index k = rng.uniform_index(range.k_min, range.k_max);
    const BipartiteState member = construct_rank_k(sigma, m, k);
    const ComplexMatrix u = kron(random_unitary(m, rng), eye_n);
    mix += (weights[static_cast<std::size_t>(t)] / total) * (u * member.matrix() * u.adjoint());
  }
  return BipartiteState::from(mix, m, n);
}

double search_min_norm(const DensityMatrix& sigma, Index m, Index k, double p,
                       const SamplerConfig& cfg) {
  if (m < 1 || k < 1) fail(ErrorKind::domain, "m and k must be positive");
  if (!(p >= 1.0)) fail(ErrorKind::domain, "Schatten norm needs p >= 1");
  Rng rng(cfg.seed);
  const Index n = sigma.dim();
  double best = std::numeric_limits<double>::infinity();
  for (Index trial = 0; trial < std::max<Index>(cfg.trials, 1); ++trial) {
    const ComplexMatrix g = ginibre(m * n, k, rng);
    ComplexMatrix marginal = ComplexMatrix::Zero(n, n);
    for (Index c = 0; c < k; ++c) {
      const ComplexMatrix f = fold(g.col(c), m, n);
      marginal += f * f.adjoint();
    }
    marginal /= marginal.trace().real();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sigma.matrix() - marginal,
                                                        Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = solver.eigenvalues();
    best = std::min(best, schatten_norm(std::span<const double>(ev.data(), ev.size()), p));
  }
  return best;
}

std::vector<SpectraPair> spectra_pair_census(Index m, Index n, const SamplerConfig& cfg) {
  if (m < 1 || n < 1) fail(ErrorKind::domain, "dimensions must be positive");
  Rng rng(cfg.seed);
  std::vector<SpectraPair> out;
  out.reserve(static_cast<std::size_t>(std::max<Index>(cfg.trials, 0)));
  for (Index trial = 0; trial < cfg.trials; ++trial) {
    const Index rank = rng.uniform_index(1, m * n);
    const BipartiteState s(m, n, random_density(m * n, rank, rng));
    out.push_back({eigenvalues(partial_trace_first(s)), s.rho().spectrum()});
  }
  return out;
}

Spectrum random_spectrum(Index d, Rng& rng, Index zeros) {
  zeros = std::clamp<Index>(zeros, 0, d - 1);
  std::vector<double> v = random_simplex(d - zeros, rng);
  v.resize(static_cast<std::size_t>(d), 0.0);
  return Spectrum(std::move(v));
}

Spectrum robin_hood_mix(std::vector<double> w, Index transfers, Rng& rng) {
  const auto d = static_cast<Index>(w.size());
  for (Index t = 0; t < transfers && d > 1; ++t) {
    const Index i = rng.uniform_index(0, d - 1);
    Index j = rng.uniform_index(0, d - 2);
    if (j >= i) ++j;
    double& a = w[static_cast<std::size_t>(i)];
    double& b = w[static_cast<std::size_t>(j)];
    double& hi = a >= b ? a : b;
    double& lo = a >= b ? b : a;
    const double delta = rng.uniform() * (hi - lo) / 2.0;
    hi -= delta;
    lo += delta;
  }
  return Spectrum(std::move(w));
}

SpectraPair majorized_pair(Index m, Index n, Rng& rng) {
  const Index zeros = rng.uniform() < 0.25 ? rng.uniform_index(0, m * n - 1) : 0;
  Spectrum mu = random_spectrum(m * n, rng, zeros);
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < m; ++j)
      w[static_cast<std::size_t>(k)] += mu[static_cast<std::size_t>(k * m + j)];
  Spectrum lambda = robin_hood_mix(std::move(w), rng.uniform_index(0, 3 * n), rng);
  return {std::move(lambda), std::move(mu)};
}

SpectraPair compatible_23_pair(Rng& rng) {
  for (;;) {
    const Index zeros = rng.uniform() < 0.5 ? rng.uniform_index(0, 4) : 0;
    Spectrum mu = random_spectrum(6, rng, zeros);
    const Index lambda_zeros = rng.uniform() < 0.25 ? rng.uniform_index(1, 2) : 0;
    Spectrum lambda = random_spectrum(3, rng, lambda_zeros);
    if (compat_2x3(lambda, mu).holds) return {std::move(lambda), std::move(mu)};
  }
}

}  // namespace redstate
