#include "otl/transform.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace otl {

SourceStats compute_source_stats(const Dataset& d) {
  SourceStats s;
  s.overall_mean = d.X.rowwise().mean();
  s.class_means = Matrix::Zero(d.dim(), d.num_classes);
  s.class_counts = IntVector::Zero(d.num_classes);
  for (int i = 0; i < d.size(); ++i) {
    s.class_means.col(d.labels[i]) += d.X.col(i);
    s.class_counts[d.labels[i]] += 1;
  }
  for (int k = 0; k < d.num_classes; ++k) {
    if (s.class_counts[k] > 0) s.class_means.col(k) /= s.class_counts[k];
  }
  return s;
}

TargetRunningStats::TargetRunningStats(int dim, int num_classes)
    : overall_mean(Vector::Zero(dim)),
      class_means(Matrix::Zero(dim, num_classes)),
      class_counts(Eigen::VectorX<long>::Zero(num_classes)) {}

void TargetRunningStats::observe(const Vector& x, int y) {
  if (y < 0 || y >= class_counts.size()) {
    throw std::runtime_error("TargetRunningStats::observe: label out of range");
  }
  ++count;
  overall_mean += (x - overall_mean) / static_cast<double>(count);
  ++class_counts[y];
  class_means.col(y) +=
      (x - class_means.col(y)) / static_cast<double>(class_counts[y]);
}

void TargetRunningStats::set_warm_pool(const Vector& mean, long n) {
  warm_mean = mean;
  warm_count = n;
}

Vector TargetRunningStats::marginal_mean() const {
  if (warm_count == 0) return overall_mean;
  if (count == 0) return warm_mean;
  const double total = static_cast<double>(count + warm_count);
  return (overall_mean * static_cast<double>(count) +
          warm_mean * static_cast<double>(warm_count)) / total;
}

std::vector<Vector> mean_differences(const SourceStats& src,
                                     const TargetRunningStats& tgt) {
  std::vector<Vector> diffs;
  if (tgt.marginal_count() > 0) {
    diffs.push_back(src.overall_mean - tgt.marginal_mean());
  }
  const int k = static_cast<int>(src.class_counts.size());
  for (int c = 0; c < k; ++c) {
    if (src.class_counts[c] > 0 && tgt.class_counts[c] > 0) {
      diffs.push_back(src.class_means.col(c) - tgt.class_means.col(c));
    }
  }
  return diffs;
}

Vector project(const TransformMatrix& A, const Vector& x) {
  if (x.size() != A.A.cols()) {
    throw std::runtime_error("project: dimension mismatch");
  }
  return A.A * x;
}

double mmd_objective(const Matrix& A, const SourceStats& src,
                     const TargetRunningStats& tgt) {
  double total = 0.0;
  for (const Vector& d : mean_differences(src, tgt)) {
    total += (A * d).squaredNorm();
  }
  return total;
}

TransformMatrix update_matrix(const TransformMatrix& A, const SourceStats& src,
                              const TargetRunningStats& tgt, double mu) {
  if (tgt.count < 1) {
    throw std::runtime_error("update_matrix: no target observations yet");
  }
  if (!A.A.allFinite()) throw std::runtime_error("update_matrix: non-finite A");

  const auto diffs = mean_differences(src, tgt);
  for (const Vector& d : diffs) {
    if (!d.allFinite()) {
      throw std::runtime_error("update_matrix: non-finite statistics");
    }
  }
  if (mu == 0.0 || diffs.empty()) return A;

  const int m = A.m();
  Matrix B = Matrix::Identity(m, m);
  double trace_extra = 0.0;
  for (const Vector& d : diffs) {
    B.noalias() += mu * (d * d.transpose());
    trace_extra += mu * d.squaredNorm();
  }

  TransformMatrix out = A;
  // Eigenvalues of B lie in [1, 1 + trace_extra]; 1 + trace_extra upper
  // bounds the condition number.
  if (1.0 + trace_extra < 1e12) {
    Eigen::LLT<Matrix> llt(B);
    if (llt.info() == Eigen::Success) {
      out.A = llt.solve(A.A.transpose()).transpose();
      return out;
    }
  }
  // Pseudo-inverse path via the symmetric eigendecomposition.
  Eigen::SelfAdjointEigenSolver<Matrix> es(B);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("update_matrix: eigendecomposition failed");
  }
  const Vector& ev = es.eigenvalues();
  const double cutoff = ev.cwiseAbs().maxCoeff() * m *
                        std::numeric_limits<double>::epsilon();
  Vector inv = Vector::Zero(m);
  for (int i = 0; i < m; ++i) {
    if (std::abs(ev[i]) > cutoff) inv[i] = 1.0 / ev[i];
  }
  out.A = A.A * es.eigenvectors() * inv.asDiagonal() *
          es.eigenvectors().transpose();
  return out;
}

bool should_update(long t, long time_window) {
  if (time_window <= 0) throw std::runtime_error("should_update: T_w must be >= 1");
  return t % time_window == 0;
}

void export_matrix(const TransformMatrix& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  out.precision(17);
  out << A.d() << ',' << A.m() << ',' << A.source_domain << '\n';
  for (int r = 0; r < A.d(); ++r) {
    for (int c = 0; c < A.m(); ++c) {
      if (c) out << ',';
      out << A.A(r, c);
    }
    out << '\n';
  }
}

TransformMatrix import_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty matrix file");
  std::stringstream header(line);
  std::string field;
  int d = 0, m = 0;
  if (!std::getline(header, field, ',')) throw std::runtime_error(path + ": bad header");
  d = std::stoi(field);
  if (!std::getline(header, field, ',')) throw std::runtime_error(path + ": bad header");
  m = std::stoi(field);
  TransformMatrix out;
  std::getline(header, out.source_domain, ',');
  if (d < 1 || m < 1) throw std::runtime_error(path + ": bad matrix shape in header");
  out.A.resize(d, m);
  for (int r = 0; r < d; ++r) {
    if (!std::getline(in, line)) {
      throw std::runtime_error(path + ": matrix body shorter than header claims");
    }
    std::stringstream ss(line);
    for (int c = 0; c < m; ++c) {
      if (!std::getline(ss, field, ',')) {
        throw std::runtime_error(path + ": matrix row " + std::to_string(r + 1) +
                                 " too short");
      }
      out.A(r, c) = std::stod(field);
    }
  }
  return out;
}

}  // namespace otl
