// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include <vector>

#include "otl/types.hpp"

namespace otl::oracle {

// Objective of the regularized matrix update:
// f(A) = ||A - A0||_F^2 + mu * sum_k ||A d_k||^2.
inline double update_objective(const Matrix& A, const Matrix& A0, double mu,
                               const std::vector<Vector>& diffs) {
  double f = (A - A0).squaredNorm();
  for (const Vector& d : diffs) f += mu * (A * d).squaredNorm();
  return f;
}

inline Matrix update_gradient(const Matrix& A, const Matrix& A0, double mu,
                              const std::vector<Vector>& diffs) {
  Matrix g = 2.0 * (A - A0);
  for (const Vector& d : diffs) g.noalias() += 2.0 * mu * (A * d) * d.transpose();
  return g;
}

// Central finite differences, for validating update_gradient itself.
inline Matrix update_gradient_fd(const Matrix& A, const Matrix& A0, double mu,
                                 const std::vector<Vector>& diffs,
                                 double h = 1e-6) {
  Matrix g(A.rows(), A.cols());
  Matrix Ap = A;
  for (int r = 0; r < A.rows(); ++r) {
    for (int c = 0; c < A.cols(); ++c) {
      Ap(r, c) = A(r, c) + h;
      const double fp = update_objective(Ap, A0, mu, diffs);
      Ap(r, c) = A(r, c) - h;
      const double fm = update_objective(Ap, A0, mu, diffs);
      Ap(r, c) = A(r, c);
      g(r, c) = (fp - fm) / (2.0 * h);
    }
  }
  return g;
}

// Gradient descent with the strong-convexity step size; the objective is
// 2-strongly convex so this converges to the global minimizer.
inline Matrix minimize_update_objective(const Matrix& A0, double mu,
                                        const std::vector<Vector>& diffs,
                                        int max_iters = 200000,
                                        double grad_tol = 1e-12) {
  double trace = 0.0;
  for (const Vector& d : diffs) trace += d.squaredNorm();
  const double lipschitz = 2.0 * (1.0 + mu * trace);
  const double step = 1.0 / lipschitz;

  Matrix A = A0;
  for (int it = 0; it < max_iters; ++it) {
    const Matrix g = update_gradient(A, A0, mu, diffs);
    if (g.cwiseAbs().maxCoeff() < grad_tol) break;
    A -= step * g;
  }
  return A;
}

}  // namespace otl::oracle
