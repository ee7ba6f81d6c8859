// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "redstate/constructors.hpp"
#include "redstate/extremality.hpp"
#include "redstate/feasibility.hpp"
#include "redstate/majorization.hpp"
#include "redstate/oracle.hpp"

using namespace redstate;

namespace {

// Collects failures; the first few are echoed.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) notes_ << "\n    " << what;
  }
  bool ok() const { return failures_ == 0 && checks_ > 0; }
  std::string summary() const {
    std::ostringstream os;
    os << checks_ << " checks, " << failures_ << " failed" << notes_.str();
    return os.str();
  }

 private:
  long checks_ = 0;
  long failures_ = 0;
  std::ostringstream notes_;
};

double marginal_gap(const BipartiteState& s, const ComplexMatrix& sigma) {
  return max_abs(partial_trace_first(s).matrix() - sigma);
}

double spectrum_gap(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return kInf;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::vector<double> sorted_spectrum(const ComplexMatrix& a) { return hermitian_eig(a).values.values(); }

DensityMatrix maximally_mixed(Index n) {
  return validate_density(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

template <typename F>
bool rejects(F f, ErrorKind kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

void split_posts(Tally& t, const BipartiteState& s, const std::string& label) {
  const ExtremalityReport rep = is_extreme(s);
  t.expect(!rep.is_extreme && rep.certificate.has_value(), label + ": certified non-extreme");
  if (!rep.certificate) return;
  const auto [low, high] = split_nonextreme(s, *rep.certificate);
  const ComplexMatrix sigma = partial_trace_first(s).matrix();
  t.expect(marginal_gap(low, sigma) <= 1e-10 && marginal_gap(high, sigma) <= 1e-10,
           label + ": halves stay in S(sigma)");
  t.expect(max_abs((low.matrix() + high.matrix()) / 2.0 - s.matrix()) <= 1e-10,
           label + ": midpoint reproduces rho");
  t.expect(low.rank() < s.rank(), label + ": rank drop");
}

bool criterion1() {
  Tally t;
  const DensityMatrix sigma = maximally_mixed(3);
  for (Index k = 2; k <= 6; ++k) {
    const BipartiteState s = construct_rank_k(sigma, 2, k);
    t.expect(marginal_gap(s, sigma.matrix()) <= 1e-10, "k=" + std::to_string(k) + " marginal");
    t.expect(s.rank() == k, "k=" + std::to_string(k) + " rank");
  }
  for (Index k : {1, 7})
    t.expect(rejects([&] { construct_rank_k(sigma, 2, k); }, ErrorKind::infeasible_rank),
             "k=" + std::to_string(k) + " rejected");
  std::printf("    %s\n", t.summary().c_str());
  return t.ok();
}

bool criterion2() {
  Tally t;
  const DensityMatrix sigma = maximally_mixed(3);
  for (Index k : {2, 3}) {
    const ExtremalityReport rep = is_extreme(construct_rank_k(sigma, 2, k));
    t.expect(rep.is_extreme && !rep.marginal, "k=" + std::to_string(k) + " extreme");
  }
  for (Index k : {4, 5, 6}) split_posts(t, construct_rank_k(sigma, 2, k), "k=" + std::to_string(k));
  std::printf("    %s\n", t.summary().c_str());
  return t.ok();
}

bool criterion3() {
  Tally t;
  Rng rng(30001);
  const std::vector<double> ps{1.0, 2.0, kInf};
  long instances = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const Index n = rng.uniform_index(2, 6);
    const DensityMatrix sigma = random_density(n, rng.uniform_index(2, n), rng);
    const Index r = sigma.rank();
    for (Index m = 1; m < r; ++m)
      for (Index k = 1; m * k < r; ++k) {
        ++instances;
        const std::string label = "instance " + std::to_string(inst) + " m=" + std::to_string(m) +
                                  " k=" + std::to_string(k);
        const ApproxResult opt = optimal_low_rank(sigma, m, k, ps);
        t.expect(opt.rho.rank() <= k, label + ": rank");
        std::vector<double> want(static_cast<std::size_t>(n), 0.0);
        for (Index j = m * k; j < r; ++j)
          want[static_cast<std::size_t>(j - m * k)] = sigma.spectrum()[static_cast<std::size_t>(j)];
        for (Index j = 0; j < m * k; ++j) want[static_cast<std::size_t>(n - 1 - j)] = -opt.mu_shift;
        t.expect(spectrum_gap(opt.residual_spectrum, Spectrum(want).values()) <= 1e-10,
                 label + ": residual spectrum");

        // Competitors: Ginibre rank-<=k states, and perturbations of the optimum.
        const ComplexMatrix z = extremality_factor(opt.rho);
        for (int c = 0; c < 200; ++c) {
          ComplexMatrix other;
          if (c % 2 == 0) {
            other = random_density(m * n, rng.uniform_index(1, k), rng).matrix();
          } else {
            const ComplexMatrix g = z + (0.05 * rng.uniform()) * ginibre(z.rows(), z.cols(), rng);
            other = g * g.adjoint();
            other /= other.trace().real();
          }
          const Spectrum gap = eigenvalues(
              HermitianMatrix::from(sigma.matrix() - partial_trace_first(other, m, n)));
          t.expect(majorizes(opt.residual_spectrum, gap.values()).holds, label + ": majorization");
          for (const NormValue& nv : opt.norms)
            t.expect(nv.value <= schatten_norm(gap.values(), nv.p) + 1e-9, label + ": norm");
        }
      }
  }
  std::printf("    %ld (sigma, m, k) instances; %s\n", instances, t.summary().c_str());
  return t.ok();
}

bool criterion4() {
  Tally t;
  Rng rng(40001);
  for (int i = 0; i < 200; ++i) {
    const Index n = rng.uniform_index(1, 4);
    const Index m = rng.uniform_index(n, 4);
    const SpectraPair pair = majorized_pair(m, n, rng);
    const BipartiteState s = construct_with_spectra(pair.lambda, pair.mu, m);
    t.expect(spectrum_gap(sorted_spectrum(s.matrix()), pair.mu.values()) <= 1e-8, "spectrum");
    t.expect(marginal_gap(s, diagonal_matrix(pair.lambda.values())) <= 1e-10, "marginal");
  }
  std::printf("    %s\n", t.summary().c_str());
  return t.ok();
}

bool criterion5() {
  Tally t;
  for (const SpectraPair& pair : spectra_pair_census(2, 3, {50001, 1000, 4}))
    t.expect(compat_2x3(pair.lambda, pair.mu).holds, "necessity");
  Rng rng(50002);
  for (int i = 0; i < 1000; ++i) {
    const SpectraPair pair = compatible_23_pair(rng);
    try {
      const BipartiteState s = construct_23(pair.lambda, pair.mu);
      t.expect(spectrum_gap(sorted_spectrum(s.matrix()), pair.mu.values()) <= 1e-8, "global spectrum");
      t.expect(spectrum_gap(sorted_spectrum(partial_trace_first(s).matrix()), pair.lambda.values()) <= 1e-8,
               "marginal spectrum");
    } catch (const Error& e) {
      t.expect(false, std::string("construct_23 threw: ") + e.what());
    }
  }
  std::printf("    %s\n", t.summary().c_str());
  return t.ok();
}

bool criterion6() {
  Tally t;
  Rng rng(60001);
  int feasible = 0;
  for (int i = 0; i < 1000; ++i) {
    const Spectrum lambda = random_spectrum(2, rng, rng.uniform_index(0, 4) == 0 ? 1 : 0);
    const Spectrum mu = random_spectrum(4, rng, rng.uniform_index(0, 3));
    const bool predicted = compat_2x2(lambda, mu);
    bool realized = false;
    try {
      const BipartiteState s = construct_with_spectra(lambda, mu, 2);
      realized = spectrum_gap(sorted_spectrum(s.matrix()), mu.values()) <= 1e-8 &&
                 marginal_gap(s, diagonal_matrix(lambda.values())) <= 1e-10;
    } catch (const Error& e) {
      realized = false;
    }
    feasible += predicted;
    t.expect(predicted == realized, "constructive agreement");
  }
  for (const SpectraPair& pair : spectra_pair_census(2, 2, {60002, 1000, 4}))
    t.expect(compat_2x2(pair.lambda, pair.mu), "census necessity");
  std::printf("    %d of 1000 random pairs feasible; %s\n", feasible, t.summary().c_str());
  return t.ok();
}

bool criterion7() {
  Tally t;
  Rng rng(70001);
  long members = 0;
  for (Index n = 1; n <= 6; ++n)
    for (Index r = 1; r <= n; ++r) {
      const DensityMatrix sigma = random_density(n, r, rng);
      for (Index m = 1; m <= 4; ++m) {
        const RankRange range = element_rank_range(r, m);
        for (Index k = range.k_min; k <= range.k_max; ++k) {
          const std::string label = "n=" + std::to_string(n) + " r=" + std::to_string(r) +
                                    " m=" + std::to_string(m) + " k=" + std::to_string(k);
          const BipartiteState s = construct_rank_k(sigma, m, k);
          const ExtremalityReport rep = is_extreme(s);
          ++members;
          if (k == range.k_min) t.expect(rep.is_extreme, label + ": minimum rank extreme");
          if (k == 1) t.expect(rep.is_extreme, label + ": rank one extreme");
          if (k > n) t.expect(!rep.is_extreme, label + ": rank above n not extreme");
          if (!rep.is_extreme) split_posts(t, s, label);
          if (range.k_min < k && k <= r) {
            ++members;
            split_posts(t, nonextreme_of_rank_k(sigma, m, k), label + " (non-extreme family)");
          }
        }
        if (m >= r) {
          ++members;
          t.expect(is_extreme(purify(sigma, m)).is_extreme, "purification extreme");
        }
      }
    }
  std::printf("    %ld members; %s\n", members, t.summary().c_str());
  return t.ok();
}

bool criterion8() {
  Tally t;
  const Spectrum lambda{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const Spectrum mu{0.5, 0.1, 0.1, 0.1, 0.1, 0.1};
  const CompatReport nec = necessary_spectra_compat(lambda, mu, 2);
  for (const char* id : {"major-1", "major", "major2"}) t.expect(nec.check(id).pass, std::string(id) + " passes");
  const CompatReport exact = compat_2x3(lambda, mu);
  t.expect(!exact.holds, "compat_2x3 fails");
  t.expect(!exact.check("lambda3<=mu2+mu3").pass, "lambda3 <= mu2 + mu3 violated");
  t.expect(rejects([&] { construct_23(lambda, mu); }, ErrorKind::infeasible), "construct_23 refuses");
  std::printf("    necessary: all pass; lambda3 - (mu2 + mu3) = %.6f; %s\n",
              -exact.check("lambda3<=mu2+mu3").slack, t.summary().c_str());
  return t.ok();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<bool()>>> criteria{
      {"rank range of S(I3/3), m=2 is exactly 2..6", criterion1},
      {"extreme at ranks 2-3, split with rank drop at 4-6", criterion2},
      {"optimal rank-k residual spectrum, majorization and Schatten norms", criterion3},
      {"prescribed-spectra construction for m >= n", criterion4},
      {"(2,3) inequalities: necessity and constructive sufficiency", criterion5},
      {"(2,2) criterion agrees with construction and census", criterion6},
      {"extremality over the corpus", criterion7},
      {"majorization conditions pass on an infeasible (2,3) pair", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criteria[i].second();
    } catch (const std::exception& e) {
      std::printf("    unexpected exception: %s\n", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu: %s (%.2fs)\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first, secs);
    failed += !ok;
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
