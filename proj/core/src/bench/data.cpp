#include "rapg/bench/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rapg/errors.hpp"

namespace rapg::bench {
namespace {

Matrix gaussian(Index rows, Index cols, std::mt19937_64& rng, double stddev = 1.0) {
  std::normal_distribution<double> normal(0.0, stddev);
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  return out;
}

Matrix orthonormal_columns(const Matrix& M) {
  Eigen::HouseholderQR<Matrix> qr(M);
  Matrix Q = qr.householderQ() * Matrix::Identity(M.rows(), M.cols());
  // Fix signs so that Q's columns agree in direction with those of M.
  const Matrix R = qr.matrixQR().topRows(M.cols()).triangularView<Eigen::Upper>();
  for (Index j = 0; j < M.cols(); ++j) {
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  }
  return Q;
}

}  // namespace

SphereData gen_spca_sphere_data(int m, int n, double c, std::uint64_t seed,
                                double support_fraction, double noise_variance) {
  if (!(m >= 2 && m < n)) throw InvalidParams("need 2 <= m < n");
  if (c < 0.0) throw InvalidParams("c must be nonnegative");
  std::mt19937_64 rng(seed);

  SphereData out;
  const Matrix U = orthonormal_columns(gaussian(m, m, rng));

  // The leading m columns share one sparse support, so the first column is
  // sparse and the directions that set the Hessian spectrum at x_* stay on
  // the coordinates that the l1 term leaves nonzero.
  const int support = std::max(m, static_cast<int>(std::ceil(support_fraction * n)));
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  const Matrix Q = orthonormal_columns(gaussian(support, m, rng));
  out.V = Matrix::Zero(n, m);
  for (int i = 0; i < support; ++i) out.V.row(idx[i]) = Q.row(i);
  out.singular_values.resize(m);
  out.singular_values(0) = m + c;
  for (int i = 1; i < m; ++i) out.singular_values(i) = m - i + 1;

  out.A = U * out.singular_values.asDiagonal() * out.V.transpose();
  if (noise_variance > 0.0) out.A += gaussian(m, n, rng, std::sqrt(noise_variance));
  return out;
}

ObliqueData gen_spca_oblique_data(int m, int n, int p, std::uint64_t seed) {
  if (!(m >= 2 && m < n)) throw InvalidParams("need 2 <= m < n");
  if (!(p >= 1 && p <= m)) throw InvalidParams("need 1 <= p <= m");
  std::mt19937_64 rng(seed);
  ObliqueData out;
  out.A = gaussian(m, n, rng);
  for (Index j = 0; j < n; ++j) {
    out.A.col(j).array() -= out.A.col(j).mean();
    out.A.col(j).normalize();
  }
  Eigen::BDCSVD<Matrix> svd(out.A, Eigen::ComputeThinV);
  out.d2 = svd.singularValues().head(p).array().square();
  out.V = svd.matrixV().leftCols(p);
  return out;
}

LassoData gen_lasso_data(int m, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LassoData out;
  out.B = gaussian(m, n, rng) / std::sqrt(static_cast<double>(m));
  Vector truth = Vector::Zero(n);
  for (int i = 0; i < std::max(1, n / 5); ++i) truth(i * 5 % n) = 1.0 + i % 3;
  out.b = out.B * truth + gaussian(m, 1, rng, 0.1).col(0);
  return out;
}

Matrix init_point_sphere(const Matrix& A, std::uint64_t seed, double noise_variance) {
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinV);
  std::mt19937_64 rng(seed);
  Vector x = svd.matrixV().col(0);
  if (noise_variance > 0.0) x += gaussian(A.cols(), 1, rng, std::sqrt(noise_variance)).col(0);
  return x.normalized();
}

Matrix init_point_oblique(const Matrix& A, int p) {
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinV);
  return svd.matrixV().leftCols(p);
}

Matrix riemannian_hessian_fd(const SmoothFunction& f, const Matrix& x, double h) {
  const Manifold& M = f.manifold();
  const Index amb = M.ambient_dim();
  const Index dim = M.tangent_dim();
  // Orthonormal tangent basis from the spectrum of the tangent projector.
  Matrix proj(amb, amb);
  for (Index k = 0; k < amb; ++k) {
    Matrix e = Matrix::Zero(M.rows(), M.cols());
    e(k % M.rows(), k / M.rows()) = 1.0;
    const Matrix t = M.project_tangent(x, e);
    proj.col(k) = Eigen::Map<const Vector>(t.data(), amb);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(proj);
  const Matrix basis = es.eigenvectors().rightCols(dim);

  Matrix H(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    Vector col = basis.col(k);
    const Matrix v = Eigen::Map<const Matrix>(col.data(), M.rows(), M.cols());
    const Matrix xp = M.exp(x, h * v);
    const Matrix xm = M.exp(x, -h * v);
    const Matrix gp = M.transport(xp, x, f.riem_grad(xp));
    const Matrix gm = M.transport(xm, x, f.riem_grad(xm));
    const Matrix hv = (gp - gm) / (2.0 * h);
    H.col(k) = basis.transpose() * Eigen::Map<const Vector>(hv.data(), amb);
  }
  return 0.5 * (H + H.transpose());
}

HessianExtremes hessian_extremes_fd(const SmoothFunction& f, const Matrix& x, double h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(riemannian_hessian_fd(f, x, h), Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

HessianExtremes spca_sphere_hessian_extremes(const Matrix& A, const Matrix& x) {
  const Index n = A.cols();
  const Index m = A.rows();
  const Vector xv = x.col(0);
  const double s = (A * xv).squaredNorm();
  // The nonzero spectrum of P A^T A P equals that of (A P)(A P)^T, which is m x m.
  const Matrix AP = A - (A * xv) * xv.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(AP * AP.transpose(), Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  double low = es.eigenvalues().minCoeff();
  // T_x has dimension n - 1; when it exceeds the rank m, P A^T A P has zero eigenvalues.
  if (n - 1 > m) low = std::min(low, 0.0);
  return {2.0 * s - 2.0 * top, 2.0 * s - 2.0 * low};
}

}  // namespace rapg::bench
