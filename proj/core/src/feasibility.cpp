#include "redstate/feasibility.hpp"

#include <cmath>
#include <sstream>

namespace redstate {

namespace {

void require_positive(Index r, Index m) {
  if (r < 1 || m < 1) fail(ErrorKind::domain, "ranks and dimensions must be positive");
}

Index ceil_div(Index a, Index b) { return (a + b - 1) / b; }

void require_unit_sum(const Spectrum& s, const char* name) {
  if (std::abs(s.sum() - 1.0) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << name << " sums to " << s.sum() << ", expected 1";
    fail(ErrorKind::precondition, os.str());
  }
}

void require_sizes(const Spectrum& lambda, const Spectrum& mu, std::size_t n, std::size_t mn) {
  if (lambda.size() != n || mu.size() != mn) {
    std::ostringstream os;
    os << "spectra of lengths " << lambda.size() << " and " << mu.size() << ", expected "
       << n << " and " << mn;
    fail(ErrorKind::dimension, os.str());
  }
}

CompatCheck inequality(std::string id, double lhs, double rhs) {
  const double slack = rhs - lhs;
  return {std::move(id), slack >= -kMajTol, slack};
}

CompatReport finish(std::vector<CompatCheck> checks) {
  CompatReport rep{true, std::move(checks)};
  for (const auto& c : rep.checks) rep.holds = rep.holds && c.pass;
  return rep;
}

std::vector<double> block_sums(const std::vector<double>& v, std::size_t block,
                               std::size_t blocks) {
  std::vector<double> out(blocks, 0.0);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t j = 0; j < block; ++j) {
      const std::size_t idx = b * block + j;
      if (idx < v.size()) out[b] += v[idx];
    }
  return out;
}

}  // namespace

const CompatCheck& CompatReport::check(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return c;
  fail(ErrorKind::domain, "no check named " + id);
}

RankRange element_rank_range(Index r, Index m) {
  require_positive(r, m);
  return {ceil_div(r, m), r * m};
}

RankRange extreme_rank_range(Index r, Index m) {
  require_positive(r, m);
  return {ceil_div(r, m), r};
}

bool exact_low_rank_exists(Index r, Index m, Index k) {
  require_positive(r, m);
  if (k < 1) fail(ErrorKind::domain, "k must be positive");
  return m * k >= r;
}

CompatReport necessary_spectra_compat(const Spectrum& lambda, const Spectrum& mu, Index m) {
  if (m < 1) fail(ErrorKind::domain, "m must be positive");
  const std::size_t n = lambda.size();
  const auto mm = static_cast<std::size_t>(m);
  require_sizes(lambda, mu, n, mm * n);
  require_unit_sum(lambda, "lambda");
  require_unit_sum(mu, "mu");

  std::vector<double> spread;
  spread.reserve(mm * n);
  for (double l : lambda)
    for (std::size_t j = 0; j < mm; ++j) spread.push_back(l / static_cast<double>(m));

  const auto major1 = majorizes(spread, mu.values());
  const auto major = majorizes(lambda.values(), block_sums(mu.values(), mm, n));
  const auto major2 = majorizes(mu.values(), block_sums(lambda.values(), mm, mm * n));

  return finish({{"major-1", major1.holds, major1.slack},
                 {"major", major.holds, major.slack},
                 {"major2", major2.holds, major2.slack}});
}

bool compat_2x2(const Spectrum& lambda, const Spectrum& mu) {
  require_sizes(lambda, mu, 2, 4);
  require_unit_sum(lambda, "lambda");
  require_unit_sum(mu, "mu");
  return mu[0] + mu[1] >= lambda[0] - kMajTol;
}

CompatReport compat_2x3(const Spectrum& lambda, const Spectrum& mu) {
  require_sizes(lambda, mu, 3, 6);
  require_unit_sum(lambda, "lambda");
  require_unit_sum(mu, "mu");
  return finish({
      inequality("mu4+mu5<=lambda1", mu[3] + mu[4], lambda[0]),
      inequality("lambda1<=mu1+mu2", lambda[0], mu[0] + mu[1]),
      inequality("mu5+mu6<=lambda3", mu[4] + mu[5], lambda[2]),
      inequality("lambda3<=mu2+mu3", lambda[2], mu[1] + mu[2]),
  });
}

}  // namespace redstate
