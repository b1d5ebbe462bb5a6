#pragma once

#include <cstdint>

#include "rapg/geometry.hpp"
#include "rapg/objective.hpp"

namespace rapg::bench {

struct SphereData {
  Matrix A;
  /// First m columns of the orthogonal V used to build A; column 0 is sparse.
  Matrix V;
  /// Noise-free singular values (m + c, m, m - 1, ..., 2).
  Vector singular_values;
};

/// A = U S V^T + e with e_ij ~ N(0, noise_variance).
SphereData gen_spca_sphere_data(int m, int n, double c, std::uint64_t seed,
                                double support_fraction = 0.1, double noise_variance = 1e-10);

struct ObliqueData {
  Matrix A;
  /// Squares of the p largest singular values of A (diagonal of D^2).
  Vector d2;
  /// Leading p right singular vectors of A.
  Matrix V;
};

/// Standard normal entries, then every column centered and scaled to unit norm.
ObliqueData gen_spca_oblique_data(int m, int n, int p, std::uint64_t seed);

struct LassoData {
  Matrix B;
  Vector b;
};

LassoData gen_lasso_data(int m, int n, std::uint64_t seed);

/// Leading right singular vector of A plus N(0, noise_variance) noise, normalized.
/// The default variance 1e-4 matches the notation used for the data noise.
Matrix init_point_sphere(const Matrix& A, std::uint64_t seed, double noise_variance = 1e-4);

/// First p right singular vectors of A.
Matrix init_point_oblique(const Matrix& A, int p);

struct HessianExtremes {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Riemannian Hessian in an orthonormal tangent basis, from central
/// differences of the transported Riemannian gradient.
Matrix riemannian_hessian_fd(const SmoothFunction& f, const Matrix& x, double h = 1e-5);

HessianExtremes hessian_extremes_fd(const SmoothFunction& f, const Matrix& x, double h = 1e-5);

/// Closed form for f1 = -x^T A^T A x: Hess = 2 ||Ax||^2 I - 2 P A^T A P on T_x.
HessianExtremes spca_sphere_hessian_extremes(const Matrix& A, const Matrix& x);

}  // namespace rapg::bench
