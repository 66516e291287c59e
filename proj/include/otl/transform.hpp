#pragma once

#include <string>
#include <vector>

#include "otl/types.hpp"

namespace otl {

// d x m linear map into the adapted feature space for one source domain.
struct TransformMatrix {
  Matrix A;  // d x m
  std::string source_domain;

  int d() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(A.cols()); }
};

// Fixed means of one source domain, original feature space.
struct SourceStats {
  Vector overall_mean;       // m
  Matrix class_means;        // m x K
  IntVector class_counts;    // K
};

SourceStats compute_source_stats(const Dataset& d);

// Running means of the observed labeled target prefix, original space.
struct TargetRunningStats {
  long count = 0;
  Vector overall_mean;       // m
  Matrix class_means;        // m x K
  Eigen::VectorX<long> class_counts;  // K

  // Optional warm pool (offline unlabeled data) folded into the marginal
  // mean only, never into class terms.
  long warm_count = 0;
  Vector warm_mean;

  TargetRunningStats() = default;
  TargetRunningStats(int dim, int num_classes);

  void observe(const Vector& x, int y);
  void set_warm_pool(const Vector& mean, long n);

  // Mean used for the marginal (k = 0) discrepancy term; includes the
  // warm pool when one was set.
  Vector marginal_mean() const;
  long marginal_count() const { return count + warm_count; }
};

// Mean-difference vectors d_k feeding both the objective and the update:
// k = 0 is marginal, k >= 1 class-conditional. Terms with a zero count on
// either side are omitted.
std::vector<Vector> mean_differences(const SourceStats& src,
                                     const TargetRunningStats& tgt);

Vector project(const TransformMatrix& A, const Vector& x);

// sum_k || A d_k ||^2 over the retained terms.
double mmd_objective(const Matrix& A, const SourceStats& src,
                     const TargetRunningStats& tgt);

// Closed-form minimizer of ||A' - A||_F^2 + mu * sum_k ||A' d_k||^2:
// A' = A (I + mu sum_k d_k d_k^T)^{-1}, pseudo-inverse on ill-conditioning.
TransformMatrix update_matrix(const TransformMatrix& A, const SourceStats& src,
                              const TargetRunningStats& tgt, double mu);

bool should_update(long t, long time_window);

// Matrix file: CSV, d rows x m cols, header "d,m,domain_name".
void export_matrix(const TransformMatrix& A, const std::string& path);
TransformMatrix import_matrix(const std::string& path);

}  // namespace otl
