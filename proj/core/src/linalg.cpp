#include "redstate/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace redstate {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  std::stable_sort(values_.begin(), values_.end(), std::greater<>());
}

double Spectrum::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

bool Spectrum::is_probability(double tol) const {
  if (values_.empty()) return false;
  return values_.back() >= -tol && std::abs(sum() - 1.0) <= tol;
}

HermitianMatrix HermitianMatrix::from(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << "matrix is " << a.rows() << "x" << a.cols() << ", expected square";
    fail(ErrorKind::dimension, os.str());
  }
  if (!a.allFinite()) fail(ErrorKind::not_hermitian, "matrix has non-finite entries");
  const ComplexMatrix adj = a.adjoint();
  const double skew = a.size() ? max_abs(a - adj) : 0.0;
  const double scale = std::max(1.0, a.size() ? max_abs(a) : 0.0);
  if (skew > rel_tol * scale) {
    std::ostringstream os;
    os << "max |A - A*| = " << skew << " exceeds " << rel_tol * scale;
    fail(ErrorKind::not_hermitian, os.str());
  }
  return HermitianMatrix(0.5 * (a + adj));
}

BipartiteState::BipartiteState(Index m, Index n, DensityMatrix rho)
    : m_(m), n_(n), rho_(std::move(rho)) {
  if (m < 1 || n < 1 || rho_.dim() != m * n) {
    std::ostringstream os;
    os << "state of dimension " << rho_.dim() << " does not factor as " << m << "*" << n;
    fail(ErrorKind::dimension, os.str());
  }
}

BipartiteState BipartiteState::from(const ComplexMatrix& rho, Index m, Index n,
                                    const Tolerances& tol) {
  if (m < 1 || n < 1 || rho.rows() != m * n) {
    std::ostringstream os;
    os << "matrix of size " << rho.rows() << " does not factor as " << m << "*" << n;
    fail(ErrorKind::dimension, os.str());
  }
  return BipartiteState(m, n, validate_density(rho, tol));
}

ComplexMatrix BipartiteState::block(Index i, Index j) const {
  return matrix().block(i * n_, j * n_, n_, n_);
}

ComplexMatrix fold(const ComplexVector& w, Index m, Index n) {
  if (m < 1 || n < 1 || w.size() != m * n) {
    std::ostringstream os;
    os << "fold: vector length " << w.size() << " != " << m << "*" << n;
    fail(ErrorKind::dimension, os.str());
  }
  // Column-major storage makes this a plain reinterpretation.
  return Eigen::Map<const ComplexMatrix>(w.data(), n, m);
}

ComplexVector unfold(const ComplexMatrix& w) {
  return Eigen::Map<const ComplexVector>(w.data(), w.size());
}

namespace {

void check_factorization(const ComplexMatrix& rho, Index m, Index n) {
  if (m < 1 || n < 1 || rho.rows() != m * n || rho.cols() != m * n) {
    std::ostringstream os;
    os << "matrix " << rho.rows() << "x" << rho.cols() << " is not (" << m << "*" << n
       << ")-square";
    fail(ErrorKind::dimension, os.str());
  }
}

}  // namespace

ComplexMatrix partial_trace_first(const ComplexMatrix& rho, Index m, Index n) {
  check_factorization(rho, m, n);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < m; ++i) out += rho.block(i * n, i * n, n, n);
  return out;
}

ComplexMatrix partial_trace_second(const ComplexMatrix& rho, Index m, Index n) {
  check_factorization(rho, m, n);
  ComplexMatrix out(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) out(i, j) = rho.block(i * n, j * n, n, n).trace();
  return out;
}

HermitianMatrix partial_trace_first(const BipartiteState& s) {
  return HermitianMatrix::from(partial_trace_first(s.matrix(), s.m(), s.n()));
}

HermitianMatrix partial_trace_second(const BipartiteState& s) {
  return HermitianMatrix::from(partial_trace_second(s.matrix(), s.m(), s.n()));
}

EigenDecomposition hermitian_eig(const HermitianMatrix& a) {
  const Index d = a.dim();
  if (d == 0) return {};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::internal, "Hermitian eigensolver did not converge");
  const Eigen::VectorXd& vals = solver.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return vals(x) > vals(y); });
  std::vector<double> sorted(order.size());
  ComplexMatrix vecs(d, d);
  for (Index c = 0; c < d; ++c) {
    sorted[static_cast<std::size_t>(c)] = vals(order[static_cast<std::size_t>(c)]);
    vecs.col(c) = solver.eigenvectors().col(order[static_cast<std::size_t>(c)]);
  }
  return {Spectrum(std::move(sorted)), std::move(vecs)};
}

EigenDecomposition hermitian_eig(const ComplexMatrix& a) {
  return hermitian_eig(HermitianMatrix::from(a));
}

Spectrum eigenvalues(const HermitianMatrix& a) {
  if (a.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::internal, "Hermitian eigensolver did not converge");
  const Eigen::VectorXd& v = solver.eigenvalues();
  return Spectrum(std::vector<double>(v.data(), v.data() + v.size()));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix conjugate_second_factor(const ComplexMatrix& x, const ComplexMatrix& u,
                                      Index m) {
  const Index n = u.rows();
  check_factorization(x, m, n);
  ComplexMatrix out(m * n, m * n);
  const ComplexMatrix u_adj = u.adjoint();
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      out.block(i * n, j * n, n, n) = u * x.block(i * n, j * n, n, n) * u_adj;
  return out;
}

Index numerical_rank(const Spectrum& s, double rel_tol) {
  if (s.size() == 0) return 0;
  const double top = s[0];
  if (top <= 0.0) return 0;
  const double cut = rel_tol * top;
  return static_cast<Index>(
      std::count_if(s.begin(), s.end(), [cut](double v) { return v > cut; }));
}

DensityMatrix validate_density(const ComplexMatrix& a, const Tolerances& tol) {
  HermitianMatrix h = HermitianMatrix::from(a, tol.hermit);
  Spectrum spec = eigenvalues(h);
  if (spec.size() == 0) fail(ErrorKind::dimension, "empty matrix is not a state");
  const double scale = std::max(1.0, std::max(std::abs(spec[0]), std::abs(spec.values().back())));
  if (spec.values().back() < -tol.psd * scale) {
    std::ostringstream os;
    os.precision(17);
    os << "most negative eigenvalue " << spec.values().back();
    fail(ErrorKind::not_psd, os.str());
  }
  const double trace = h.matrix().trace().real();
  if (std::abs(trace - 1.0) > tol.trace) {
    std::ostringstream os;
    os.precision(17);
    os << "trace " << trace << " differs from 1";
    fail(ErrorKind::trace_not_one, os.str());
  }
  const Index rank = numerical_rank(spec, tol.rank_rel);
  return DensityMatrix(std::move(h), std::move(spec), rank);
}

double max_abs(const ComplexMatrix& a) {
  return a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
}

ComplexMatrix diagonal_matrix(std::span<const double> d) {
  const auto n = static_cast<Index>(d.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) out(i, i) = d[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace redstate
