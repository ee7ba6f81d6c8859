#include "redstate/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace redstate {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      c_ += (sum_ - t) + v;
    else
      c_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

}  // namespace

std::vector<double> sorted_prefix_sums(std::span<const double> x) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> out;
  out.reserve(sorted.size());
  CompensatedSum acc;
  for (double v : sorted) {
    acc.add(v);
    out.push_back(acc.value());
  }
  return out;
}

MajorizationReport majorizes(std::span<const double> x, std::span<const double> y,
                             Padding padding, double tol) {
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  if (xs.size() != ys.size()) {
    if (padding == Padding::none) {
      std::ostringstream os;
      os << "majorizes: lengths " << xs.size() << " and " << ys.size() << " differ";
      fail(ErrorKind::dimension, os.str());
    }
    const std::size_t len = std::max(xs.size(), ys.size());
    xs.resize(len, 0.0);
    ys.resize(len, 0.0);
  }
  MajorizationReport rep;
  rep.partial_sums_x = sorted_prefix_sums(xs);
  rep.partial_sums_y = sorted_prefix_sums(ys);
  const std::size_t len = xs.size();
  rep.holds = true;
  rep.slack = len > 1 ? kInf : 0.0;
  for (std::size_t k = 0; k + 1 < len; ++k) {
    const double gap = rep.partial_sums_y[k] - rep.partial_sums_x[k];
    rep.slack = std::min(rep.slack, gap);
    if (gap < -tol && rep.holds) {
      rep.holds = false;
      rep.first_violation = k + 1;
    }
  }
  if (len > 0) {
    const double total_gap = std::abs(rep.partial_sums_y.back() - rep.partial_sums_x.back());
    if (total_gap > tol) {
      rep.slack = std::min(rep.slack, -total_gap);
      if (rep.holds) {
        rep.holds = false;
        rep.first_violation = len;
      }
    }
  }
  return rep;
}

double schatten_norm(std::span<const double> eigenvalues, double p) {
  if (!(p >= 1.0)) fail(ErrorKind::domain, "Schatten norm needs p >= 1");
  if (eigenvalues.empty()) return 0.0;
  double top = 0.0;
  for (double v : eigenvalues) top = std::max(top, std::abs(v));
  if (std::isinf(p) || top == 0.0) return top;
  // Scale by the largest modulus to avoid overflow for large p.
  CompensatedSum acc;
  for (double v : eigenvalues) acc.add(std::pow(std::abs(v) / top, p));
  return top * std::pow(acc.value(), 1.0 / p);
}

double schatten_norm(const HermitianMatrix& a, double p) {
  return schatten_norm(eigenvalues(a).values(), p);
}

double von_neumann_entropy(std::span<const double> x) {
  CompensatedSum acc;
  for (double v : x) {
    if (v < -kMajTol) {
      std::ostringstream os;
      os << "entropy: negative entry " << v;
      fail(ErrorKind::domain, os.str());
    }
    if (v > 0.0) acc.add(-v * std::log(v));
  }
  return acc.value();
}

double sum_k_largest(std::span<const double> x, std::size_t k) {
  if (k < 1 || k > x.size()) {
    std::ostringstream os;
    os << "sum_k_largest: k = " << k << " outside [1, " << x.size() << "]";
    fail(ErrorKind::domain, os.str());
  }
  return sorted_prefix_sums(x)[k - 1];
}

}  // namespace redstate
