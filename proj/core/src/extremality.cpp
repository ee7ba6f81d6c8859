#include "redstate/extremality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace redstate {

namespace {

// Column (i*r + j) holds vec(fold(y_i) fold(y_j)*).
ComplexMatrix product_vectors(const ComplexMatrix& y, Index m, Index n, Index count) {
  const Index r = y.cols();
  std::vector<ComplexMatrix> folded;
  folded.reserve(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) folded.push_back(fold(y.col(i), m, n));
  ComplexMatrix out(n * n, count);
  for (Index c = 0; c < count; ++c) {
    const ComplexMatrix prod = folded[static_cast<std::size_t>(c / r)] *
                               folded[static_cast<std::size_t>(c % r)].adjoint();
    out.col(c) = unfold(prod);
  }
  return out;
}

ComplexMatrix relation_sum(const ComplexMatrix& z, const ComplexMatrix& h, Index m, Index n) {
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < z.cols(); ++i) {
    const ComplexMatrix zi = fold(z.col(i), m, n);
    for (Index j = 0; j < z.cols(); ++j)
      if (h(i, j) != Complex(0.0)) total += h(i, j) * zi * fold(z.col(j), m, n).adjoint();
  }
  return total;
}

}  // namespace

ComplexMatrix extremality_factor(const BipartiteState& s) {
  const EigenDecomposition eig = hermitian_eig(s.rho().hermitian());
  const Index r = s.rank();
  ComplexMatrix z(s.matrix().rows(), r);
  for (Index i = 0; i < r; ++i)
    z.col(i) = eig.vectors.col(i) * std::sqrt(eig.values[static_cast<std::size_t>(i)]);
  return z;
}

ExtremalityReport is_extreme_factor(const ComplexMatrix& z, Index m, Index n) {
  const Index r = z.cols();
  ExtremalityReport rep;
  rep.rank = r;
  if (r == 0) return rep;

  // Rescaling z_i by c_i rescales fold(z_i) fold(z_j)* by c_i conj(c_j), which
  // preserves (in)dependence; unit columns keep the Gram matrix well scaled.
  Eigen::VectorXd norms = z.colwise().norm().transpose();
  if ((norms.array() <= 0.0).any()) fail(ErrorKind::domain, "factor has a zero column");
  const ComplexMatrix y = z * norms.cwiseInverse().asDiagonal();

  // More than n^2 products are always dependent; any n^2 + 1 of them carry a
  // relation.
  const Index total = r * r;
  const bool forced = total > n * n;
  const Index count = forced ? n * n + 1 : total;
  const ComplexMatrix vecs = product_vectors(y, m, n, count);
  const ComplexMatrix gram = vecs.adjoint() * vecs;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram);
  if (solver.info() != Eigen::Success) fail(ErrorKind::internal, "Gram eigensolver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  rep.gram_max_eig = ev(ev.size() - 1);
  rep.gram_min_eig = forced ? 0.0 : std::max(0.0, ev(0));

  const double ratio = rep.gram_max_eig > 0.0 ? rep.gram_min_eig / rep.gram_max_eig : 0.0;
  rep.is_extreme = ratio > kIndependenceTol;
  rep.marginal = rep.is_extreme != (ratio > kIndependenceTolLoose);
  if (rep.is_extreme) return rep;

  // Null vector -> relation G, Hermitized as e^{it} G + e^{-it} G*.
  const ComplexVector null = solver.eigenvectors().col(0);
  ComplexMatrix g = ComplexMatrix::Zero(r, r);
  for (Index c = 0; c < count; ++c) g(c / r, c % r) = null(c);
  const ComplexMatrix h_real = g + g.adjoint();
  const ComplexMatrix h_imag = Complex(0.0, 1.0) * g - Complex(0.0, 1.0) * g.adjoint();
  ComplexMatrix h = h_real.norm() >= h_imag.norm() ? h_real : h_imag;
  // Back to the columns of z: h_ij / (|z_i| |z_j|).
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) h(i, j) /= norms(i) * norms(j);
  h /= max_abs(h);
  rep.certificate = HermitianMatrix::from(h);
  return rep;
}

ExtremalityReport is_extreme(const BipartiteState& s) {
  return is_extreme_factor(extremality_factor(s), s.m(), s.n());
}

std::pair<BipartiteState, BipartiteState> split_nonextreme(const BipartiteState& s,
                                                           const HermitianMatrix& cert) {
  const ComplexMatrix z = extremality_factor(s);
  const ComplexMatrix& h = cert.matrix();
  if (h.rows() != z.cols()) {
    std::ostringstream os;
    os << "certificate is " << h.rows() << "x" << h.cols() << ", state has rank " << z.cols();
    fail(ErrorKind::invalid_certificate, os.str());
  }
  const double h_scale = max_abs(h);
  const double z_scale = z.colwise().squaredNorm().maxCoeff();
  const double residual = max_abs(relation_sum(z, h, s.m(), s.n()));
  if (h_scale == 0.0 || residual > 1e-9 * h_scale * z_scale * static_cast<double>(z.cols())) {
    std::ostringstream os;
    os << "certificate residual " << residual << " is not a dependency";
    fail(ErrorKind::invalid_certificate, os.str());
  }

  const Spectrum hs = eigenvalues(cert);
  const double top = hs[0];
  const double bottom = hs.values().back();
  // t = 1/max|eig(H)|: I - tH is singular when the extreme eigenvalue is
  // positive, I + tH when it is negative.
  const double sign = top >= -bottom ? -1.0 : 1.0;
  const double t = 1.0 / std::max(top, -bottom);
  const Index r = z.cols();
  const ComplexMatrix eye = ComplexMatrix::Identity(r, r);
  const ComplexMatrix singular = z * (eye + sign * t * h) * z.adjoint();
  const ComplexMatrix other = z * (eye - sign * t * h) * z.adjoint();
  return {BipartiteState::from(singular, s.m(), s.n()), BipartiteState::from(other, s.m(), s.n())};
}

}  // namespace redstate
