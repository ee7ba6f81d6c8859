#include "redstate/constructors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>

#include "redstate/feasibility.hpp"
#include "redstate/majorization.hpp"

namespace redstate {

namespace {

// sigma = V diag(d) V*, keeping only the r numerically nonzero eigenvalues.
struct EigenFrame {
  Index n = 0;
  Index r = 0;
  std::vector<double> d;
  ComplexMatrix basis;
};

EigenFrame frame_of(const DensityMatrix& sigma) {
  EigenDecomposition eig = hermitian_eig(sigma.hermitian());
  EigenFrame f;
  f.n = sigma.dim();
  f.r = sigma.rank();
  f.d.assign(eig.values.begin(), eig.values.begin() + f.r);
  f.basis = std::move(eig.vectors);
  return f;
}

// e_slot (x) e_coord in C^m (x) C^n.
Index flat(Index slot, Index coord, Index n) { return slot * n + coord; }

// sum_z (I (x) V) z z* (I (x) V)* for vectors z written in sigma's eigenbasis.
BipartiteState assemble(const std::vector<ComplexVector>& zs, Index m, const EigenFrame& f) {
  const Index n = f.n;
  ComplexMatrix rotated(m * n, static_cast<Index>(zs.size()));
  for (std::size_t c = 0; c < zs.size(); ++c)
    for (Index i = 0; i < m; ++i)
      rotated.col(static_cast<Index>(c)).segment(i * n, n) = f.basis * zs[c].segment(i * n, n);
  return BipartiteState::from(rotated * rotated.adjoint(), m, n);
}

Index ceil_div(Index a, Index b) { return (a + b - 1) / b; }

// k > r: one vector per nonzero diagonal entry.
std::vector<ComplexVector> spread_vectors(const EigenFrame& f, Index m, Index k) {
  const Index r = f.r;
  const Index q = (k - 1) / r;
  const Index s = k - q * r;
  std::vector<ComplexVector> zs;
  zs.reserve(static_cast<std::size_t>(k));
  for (Index j = 0; j < r; ++j) {
    const Index slots = j < s ? q + 1 : q;
    const double weight = std::sqrt(f.d[static_cast<std::size_t>(j)] / static_cast<double>(slots));
    for (Index i = 0; i < slots; ++i) {
      ComplexVector z = ComplexVector::Zero(m * f.n);
      z(flat(i, j, f.n)) = weight;
      zs.push_back(std::move(z));
    }
  }
  return zs;
}

// ceil(r/m) <= k <= r: vector j collects sqrt(d_l) e_i (x) e_l for l = i*k + j.
std::vector<ComplexVector> superposition_vectors(const EigenFrame& f, Index m, Index k) {
  const Index r = f.r;
  const Index q = (r - 1) / k;
  const Index s = r - q * k;
  std::vector<ComplexVector> zs;
  zs.reserve(static_cast<std::size_t>(k));
  for (Index j = 0; j < k; ++j) {
    const Index slots = j < s ? q + 1 : q;
    ComplexVector z = ComplexVector::Zero(m * f.n);
    for (Index i = 0; i < slots; ++i) {
      const Index l = i * k + j;
      z(flat(i, l, f.n)) = std::sqrt(f.d[static_cast<std::size_t>(l)]);
    }
    zs.push_back(std::move(z));
  }
  return zs;
}

void require_dims(Index m, Index k) {
  if (m < 1 || k < 1) fail(ErrorKind::domain, "m and k must be positive");
}

}  // namespace

BipartiteState purify(const DensityMatrix& sigma, Index m) {
  require_dims(m, 1);
  const EigenFrame f = frame_of(sigma);
  if (m < f.r) {
    std::ostringstream os;
    os << "purification needs m >= rank(sigma) = " << f.r << ", got m = " << m;
    fail(ErrorKind::infeasible_rank, os.str());
  }
  // W = [sqrt(d_1) x_1 | ... | sqrt(d_r) x_r | 0 ...], w = unfold(W).
  ComplexVector z = ComplexVector::Zero(m * f.n);
  for (Index j = 0; j < f.r; ++j) z(flat(j, j, f.n)) = std::sqrt(f.d[static_cast<std::size_t>(j)]);
  return assemble({z}, m, f);
}

BipartiteState construct_rank_k(const DensityMatrix& sigma, Index m, Index k) {
  require_dims(m, k);
  const EigenFrame f = frame_of(sigma);
  const RankRange range = element_rank_range(f.r, m);
  if (!range.contains(k)) {
    std::ostringstream os;
    os << "rank " << k << " outside [" << range.k_min << ", " << range.k_max
       << "] for rank(sigma) = " << f.r << ", m = " << m;
    fail(ErrorKind::infeasible_rank, os.str());
  }
  return assemble(k > f.r ? spread_vectors(f, m, k) : superposition_vectors(f, m, k), m, f);
}

ApproxResult optimal_low_rank(const DensityMatrix& sigma, Index m, Index k,
                              std::span<const double> norms) {
  require_dims(m, k);
  for (double p : norms)
    if (!(p >= 1.0)) fail(ErrorKind::domain, "Schatten norm needs p >= 1");

  const EigenFrame f = frame_of(sigma);
  const Index kept = m * k;
  std::optional<BipartiteState> rho;
  double mu = 0.0;
  const bool exact = kept >= f.r;
  if (exact) {
    rho = assemble(superposition_vectors(f, m, ceil_div(f.r, m)), m, f);
  } else {
    double tail = 0.0;
    for (Index j = kept; j < f.r; ++j) tail += f.d[static_cast<std::size_t>(j)];
    mu = tail / static_cast<double>(kept);
    // Round-robin: piece g purifies the lifted eigenvalues g, g + k, g + 2k, ...
    std::vector<ComplexVector> zs;
    for (Index g = 0; g < k; ++g) {
      ComplexVector z = ComplexVector::Zero(m * f.n);
      for (Index t = 0; t < m; ++t) {
        const Index l = g + t * k;
        z(flat(t, l, f.n)) = std::sqrt(f.d[static_cast<std::size_t>(l)] + mu);
      }
      zs.push_back(std::move(z));
    }
    rho = assemble(zs, m, f);
  }

  HermitianMatrix achieved = partial_trace_first(*rho);
  const Spectrum residual =
      eigenvalues(HermitianMatrix::from(sigma.matrix() - achieved.matrix()));
  ApproxResult out{std::move(*rho), std::move(achieved), residual.values(), mu, exact, {}};
  for (double p : norms) out.norms.push_back({p, schatten_norm(out.residual_spectrum, p)});
  return out;
}

HermitianMatrix constant_diagonal_conjugate(std::span<const double> d) {
  const auto m = static_cast<Index>(d.size());
  ComplexMatrix f(m, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(std::max<Index>(m, 1)));
  for (Index j = 0; j < m; ++j)
    for (Index k = 0; k < m; ++k) {
      // Reduce the exponent mod m so large products keep full angle precision.
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % m) /
                           static_cast<double>(m);
      f(j, k) = std::polar(scale, angle);
    }
  return HermitianMatrix::from(f.adjoint() * diagonal_matrix(d) * f);
}

ComplexMatrix horn_unitary(std::span<const double> w, std::span<const double> d) {
  if (w.size() != d.size()) fail(ErrorKind::dimension, "horn_unitary: length mismatch");
  const auto rep = majorizes(d, w);
  if (!rep.holds) {
    std::ostringstream os;
    os << "horn_unitary: target diagonal is not majorized by the spectrum (prefix "
       << rep.first_violation.value_or(0) << ")";
    fail(ErrorKind::precondition, os.str());
  }
  const auto n = static_cast<Index>(w.size());
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(n, n);
  std::vector<double> vals(w.begin(), w.end());

  std::vector<Index> targets(static_cast<std::size_t>(n));
  std::iota(targets.begin(), targets.end(), Index{0});
  std::stable_sort(targets.begin(), targets.end(), [&](Index a, Index b) {
    return d[static_cast<std::size_t>(a)] > d[static_cast<std::size_t>(b)];
  });

  std::vector<Index> free(targets.size());
  std::iota(free.begin(), free.end(), Index{0});
  std::vector<Index> home(targets.size());  // coordinate carrying target t

  auto val = [&](Index c) -> double& { return vals[static_cast<std::size_t>(c)]; };
  for (std::size_t step = 0; step + 1 < targets.size(); ++step) {
    const Index t = targets[step];
    const double target = d[static_cast<std::size_t>(t)];
    std::stable_sort(free.begin(), free.end(), [&](Index a, Index b) { return val(a) > val(b); });
    // Last free coordinate whose value still reaches the target; its successor
    // lies below, so a rotation of the pair hits the target exactly.
    std::size_t j = 0;
    while (j + 2 < free.size() && val(free[j + 1]) >= target) ++j;
    const Index p = free[j];
    const Index q = free[j + 1];
    const double a = val(p);
    const double b = val(q);
    const double c2 = a > b ? std::clamp((target - b) / (a - b), 0.0, 1.0) : 1.0;
    const double s2 = a > b ? std::clamp((a - target) / (a - b), 0.0, 1.0) : 0.0;
    const double c = std::sqrt(c2);
    const double s = std::sqrt(s2);
    const Eigen::VectorXd col_p = u.col(p);
    const Eigen::VectorXd col_q = u.col(q);
    u.col(p) = c * col_p - s * col_q;
    u.col(q) = s * col_p + c * col_q;
    val(p) = c2 * a + s2 * b;
    val(q) = s2 * a + c2 * b;
    home[static_cast<std::size_t>(t)] = p;
    free.erase(free.begin() + static_cast<std::ptrdiff_t>(j));
  }
  if (!targets.empty()) home[static_cast<std::size_t>(targets.back())] = free.front();

  ComplexMatrix out(n, n);
  for (Index t = 0; t < n; ++t) out.col(t) = u.col(home[static_cast<std::size_t>(t)]).cast<Complex>();
  return out;
}

BipartiteState construct_with_spectra(const Spectrum& lambda, const Spectrum& mu, Index m) {
  const auto n = static_cast<Index>(lambda.size());
  if (m < 1 || n < 1 || static_cast<Index>(mu.size()) != m * n) {
    std::ostringstream os;
    os << "spectra of lengths " << lambda.size() << " and " << mu.size()
       << " do not match m = " << m;
    fail(ErrorKind::dimension, os.str());
  }
  if (m < n) {
    std::ostringstream os;
    os << "construct_with_spectra needs m >= n, got m = " << m << ", n = " << n;
    fail(ErrorKind::unsupported_regime, os.str());
  }
  if (std::abs(lambda.sum() - 1.0) > 1e-9 || std::abs(mu.sum() - 1.0) > 1e-9)
    fail(ErrorKind::precondition, "spectra must sum to 1");

  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < m; ++j)
      w[static_cast<std::size_t>(k)] += mu[static_cast<std::size_t>(k * m + j)];
  if (!majorizes(lambda.values(), w).holds)
    fail(ErrorKind::precondition, "lambda is not majorized by the m-block sums of mu");

  // A = sum_k A_k (x) E_kk with A_k of constant diagonal w_k / m.
  ComplexMatrix a = ComplexMatrix::Zero(m * n, m * n);
  for (Index k = 0; k < n; ++k) {
    const std::span<const double> block(mu.values().data() + k * m, static_cast<std::size_t>(m));
    const ComplexMatrix ak = constant_diagonal_conjugate(block).matrix();
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) a(flat(i, k, n), flat(j, k, n)) = ak(i, j);
  }

  // U* diag(w) U has diagonal lambda; the phases D cancel every off-diagonal
  // entry of the summed diagonal blocks because |p - q| < n <= m.
  const ComplexMatrix u = horn_unitary(w, lambda.values());
  ComplexMatrix rho = conjugate_second_factor(a, u.adjoint(), m);
  ComplexVector phase(m * n);
  for (Index i = 0; i < m; ++i)
    for (Index p = 0; p < n; ++p) {
      const double angle =
          2.0 * std::numbers::pi * static_cast<double>((i * (p + 1)) % m) / static_cast<double>(m);
      phase(flat(i, p, n)) = std::polar(1.0, angle);
    }
  rho = phase.conjugate().asDiagonal() * rho * phase.asDiagonal();
  return BipartiteState::from(rho, m, n);
}

Eigen::Matrix2d Gadget::matrix() const {
  Eigen::Matrix2d g;
  g << corner, offdiag, offdiag, other_corner();
  return g;
}

Gadget gadget(double eig_hi, double eig_lo, double corner) {
  if (!(eig_lo <= eig_hi) || corner < eig_lo - kMajTol || corner > eig_hi + kMajTol) {
    std::ostringstream os;
    os.precision(17);
    os << "gadget: corner " << corner << " outside [" << eig_lo << ", " << eig_hi << "]";
    fail(ErrorKind::precondition, os.str());
  }
  const double c = std::clamp(corner, eig_lo, eig_hi);
  return {eig_hi, eig_lo, c, std::sqrt(std::max(0.0, (eig_hi - c) * (c - eig_lo)))};
}

namespace {

// Layout of a (2,3) state: positions 0..2 are block rho_11, 3..5 block rho_22,
// and tr_1 coordinate c collects positions c and c + 3.
//   coordinate 0: single mu[s1]            + gadget-1 corner (position 3)
//   coordinate 1: gadget-1 other (pos 1)   + gadget-2 other  (position 4)
//   coordinate 2: gadget-2 corner (pos 2)  + single mu[s2]   (position 5)
// Both gadgets couple rho_11 with rho_22 only, so tr_1 stays diagonal.
struct Plan {
  int first = 0;  // lambda index landing on coordinate 0
  int last = 2;   // lambda index landing on coordinate 2
  int s1 = 0;
  std::array<int, 2> g1{};
  std::array<int, 2> g2{};
  int s2 = 0;
};

struct Placement {
  Gadget g1;
  Gadget g2;
  double slack;
};

std::optional<Placement> place(const Plan& plan, const Spectrum& lambda, const Spectrum& mu,
                               double tol) {
  auto fit = [&](const std::array<int, 2>& g, double corner, double& slack) -> std::optional<Gadget> {
    const double hi = std::max(mu[static_cast<std::size_t>(g[0])], mu[static_cast<std::size_t>(g[1])]);
    const double lo = std::min(mu[static_cast<std::size_t>(g[0])], mu[static_cast<std::size_t>(g[1])]);
    slack = std::min(corner - lo, hi - corner);
    if (slack < -tol) return std::nullopt;
    return gadget(hi, lo, std::clamp(corner, lo, hi));
  };
  double slack1 = 0.0;
  double slack2 = 0.0;
  auto g1 = fit(plan.g1, lambda[static_cast<std::size_t>(plan.first)] - mu[static_cast<std::size_t>(plan.s1)], slack1);
  if (!g1) return std::nullopt;
  auto g2 = fit(plan.g2, lambda[static_cast<std::size_t>(plan.last)] - mu[static_cast<std::size_t>(plan.s2)], slack2);
  if (!g2) return std::nullopt;
  return Placement{*g1, *g2, std::min(slack1, slack2)};
}

ComplexMatrix assemble_23(const Plan& plan, const Placement& pl, const Spectrum& mu) {
  ComplexMatrix rho = ComplexMatrix::Zero(6, 6);
  rho(0, 0) = mu[static_cast<std::size_t>(plan.s1)];
  rho(3, 3) = pl.g1.corner;
  rho(1, 1) = pl.g1.other_corner();
  rho(1, 3) = rho(3, 1) = pl.g1.offdiag;
  rho(2, 2) = pl.g2.corner;
  rho(4, 4) = pl.g2.other_corner();
  rho(2, 4) = rho(4, 2) = pl.g2.offdiag;
  rho(5, 5) = mu[static_cast<std::size_t>(plan.s2)];

  // Relabel second-factor coordinates so tr_1(rho) = diag(lambda).
  const int middle = 3 - plan.first - plan.last;
  ComplexMatrix perm = ComplexMatrix::Zero(3, 3);
  perm(plan.first, 0) = 1.0;
  perm(middle, 1) = 1.0;
  perm(plan.last, 2) = 1.0;
  return conjugate_second_factor(rho, perm, 2);
}

std::vector<int> complement(std::initializer_list<int> used) {
  std::vector<int> rest;
  for (int i = 0; i < 6; ++i)
    if (std::find(used.begin(), used.end(), i) == used.end()) rest.push_back(i);
  return rest;
}

// The constructive case analysis: lambda_1 = mu_i + (corner in [mu_j, mu_k])
// for (i, j, k) read off the interval chain
//   mu5+mu4 <= mu5+mu3 <= mu5+mu2 <= mu4+mu2 <= mu3+mu2 <= mu1+mu2
// (plus mu6+mu2 <= lambda_1 <= mu1+mu2), then one of lambda_2, lambda_3 is
// realized from the three remaining eigenvalues either directly on
// coordinate 2 or next to the other corner of the first gadget.
std::optional<std::pair<Plan, Placement>> case_analysis(const Spectrum& lambda, const Spectrum& mu) {
  constexpr std::array<std::array<int, 3>, 6> kTriples{{
      {4, 3, 2}, {4, 2, 1}, {1, 4, 3}, {1, 3, 2}, {1, 2, 0}, {1, 5, 0}}};
  constexpr double kTol = 1e-12;
  for (const auto& [i, j, k] : kTriples) {
    if (lambda[0] < mu[static_cast<std::size_t>(i)] + mu[static_cast<std::size_t>(j)] - kTol ||
        lambda[0] > mu[static_cast<std::size_t>(i)] + mu[static_cast<std::size_t>(k)] + kTol)
      continue;
    std::vector<int> rest = complement({i, j, k});
    do {
      for (int ell : {1, 2}) {
        // ell on coordinate 2 (pairs with a single) or on coordinate 1
        // (pairs with the first gadget's other corner).
        for (int last : {ell, 3 - ell}) {
          Plan plan{0, last, i, {j, k}, {rest[1], rest[2]}, rest[0]};
          if (auto pl = place(plan, lambda, mu, kTol)) return std::make_pair(plan, *pl);
        }
      }
    } while (std::next_permutation(rest.begin(), rest.end()));
  }
  return std::nullopt;
}

// Every assignment of (first, last) lambda slots, two singles and two gadget
// pairs; keeps the one with the widest margin.
std::optional<std::pair<Plan, Placement>> exhaustive(const Spectrum& lambda, const Spectrum& mu,
                                                     double tol) {
  std::optional<std::pair<Plan, Placement>> best;
  for (int first = 0; first < 3; ++first)
    for (int last = 0; last < 3; ++last) {
      if (first == last) continue;
      for (int s1 = 0; s1 < 6; ++s1)
        for (int s2 = 0; s2 < 6; ++s2) {
          if (s1 == s2) continue;
          std::vector<int> rest = complement({s1, s2});
          // rest[0] pairs with rest[p]; the other two form the second gadget.
          for (int p = 1; p < 4; ++p) {
            std::array<int, 2> pa{rest[0], rest[static_cast<std::size_t>(p)]};
            std::array<int, 2> pb{};
            int idx = 0;
            for (int q = 1; q < 4; ++q)
              if (q != p) pb[static_cast<std::size_t>(idx++)] = rest[static_cast<std::size_t>(q)];
            for (int swap = 0; swap < 2; ++swap) {
              Plan plan{first, last, s1, swap ? pb : pa, swap ? pa : pb, s2};
              auto pl = place(plan, lambda, mu, tol);
              if (pl && (!best || pl->slack > best->second.slack)) best = std::make_pair(plan, *pl);
            }
          }
        }
    }
  return best;
}

}  // namespace

BipartiteState construct_23(const Spectrum& lambda, const Spectrum& mu) {
  const CompatReport rep = compat_2x3(lambda, mu);
  if (!rep.holds) {
    std::ostringstream os;
    os << "spectra fail the (2,3) compatibility inequalities:";
    for (const auto& c : rep.checks)
      if (!c.pass) os << ' ' << c.id << " (slack " << c.slack << ")";
    fail(ErrorKind::infeasible, os.str());
  }
  auto found = case_analysis(lambda, mu);
  if (!found) found = exhaustive(lambda, mu, 4.0 * kMajTol);
  if (!found) {
    std::ostringstream os;
    os.precision(17);
    os << "construct_23: no gadget assignment found for lambda = (";
    for (double v : lambda) os << v << ' ';
    os << "), mu = (";
    for (double v : mu) os << v << ' ';
    os << ")";
    fail(ErrorKind::internal, os.str());
  }
  return BipartiteState::from(assemble_23(found->first, found->second, mu), 2, 3);
}

BipartiteState nonextreme_of_rank_k(const DensityMatrix& sigma, Index m, Index k) {
  require_dims(m, k);
  const EigenFrame f = frame_of(sigma);
  const Index k_min = ceil_div(f.r, m);
  if (k <= k_min || k > f.r) {
    std::ostringstream os;
    os << "non-extreme rank-" << k << " members need " << k_min << " < k <= " << f.r;
    fail(ErrorKind::infeasible_rank, os.str());
  }
  std::vector<ComplexVector> zs = superposition_vectors(f, m, k - 1);
  // k - 1 < r, so z_1 occupies at least two first-factor slots.
  zs[0] /= std::numbers::sqrt2;
  ComplexVector twin = zs[0];
  twin.segment(0, f.n) *= -1.0;
  zs.push_back(std::move(twin));
  return assemble(zs, m, f);
}

}  // namespace redstate
