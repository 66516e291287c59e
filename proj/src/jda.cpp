#include "otl/jda.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace otl {

namespace {

// Sign convention: the first component whose magnitude is non-negligible
// is made positive, fixing the eigenvector sign ambiguity.
void fix_sign(Eigen::Ref<Vector> a) {
  const double tol = 1e-9 * a.norm();
  for (int j = 0; j < a.size(); ++j) {
    if (std::abs(a[j]) > tol) {
      if (a[j] < 0) a = -a;
      return;
    }
  }
}

// Mean-difference vectors between source and (pseudo-labeled) target:
// marginal first, then one per class present on both sides.
std::vector<Vector> jda_differences(const Dataset& source, const Matrix& Xu,
                                    const std::vector<int>* pseudo_labels) {
  std::vector<Vector> diffs;
  diffs.push_back(source.X.rowwise().mean() - Xu.rowwise().mean());
  if (!pseudo_labels) return diffs;

  const int k = source.num_classes;
  const int m = source.dim();
  Matrix src_sum = Matrix::Zero(m, k), tgt_sum = Matrix::Zero(m, k);
  IntVector src_cnt = IntVector::Zero(k), tgt_cnt = IntVector::Zero(k);
  for (int i = 0; i < source.size(); ++i) {
    src_sum.col(source.labels[i]) += source.X.col(i);
    ++src_cnt[source.labels[i]];
  }
  for (int i = 0; i < Xu.cols(); ++i) {
    const int y = (*pseudo_labels)[i];
    tgt_sum.col(y) += Xu.col(i);
    ++tgt_cnt[y];
  }
  for (int c = 0; c < k; ++c) {
    if (src_cnt[c] > 0 && tgt_cnt[c] > 0) {
      diffs.push_back(src_sum.col(c) / src_cnt[c] - tgt_sum.col(c) / tgt_cnt[c]);
    }
  }
  return diffs;
}

}  // namespace

TransformMatrix compute_jda(const Dataset& source, const Dataset& target_unlabeled,
                            const JdaConfig& cfg, unsigned long long seed) {
  if (source.dim() != target_unlabeled.dim()) {
    throw std::runtime_error("compute_jda: source/target dimension mismatch");
  }
  if (cfg.iterations < 1) throw std::runtime_error("compute_jda: iterations must be >= 1");
  const int m = source.dim();
  const int n_total = source.size() + target_unlabeled.size();
  int d = std::min(cfg.subspace_dim, std::min(m, n_total - 1));
  if (d < 1) throw std::runtime_error("compute_jda: no usable subspace dimension");

  // Scatter of the stacked source + unlabeled-target data (the centering
  // constraint side of the pencil).
  Matrix stacked(m, n_total);
  stacked << source.X, target_unlabeled.X;
  const Vector mean = stacked.rowwise().mean();
  const Matrix centered = stacked.colwise() - mean;
  const Matrix scatter = centered * centered.transpose();

  // Rank of the centered data limits how many directions carry variance.
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(scatter);
    const Vector& ev = es.eigenvalues();
    const double cutoff = std::max(ev.maxCoeff(), 0.0) * m *
                          std::numeric_limits<double>::epsilon();
    int rank = 0;
    for (int i = 0; i < m; ++i) {
      if (ev[i] > cutoff) ++rank;
    }
    if (d > rank) {
      std::cerr << "compute_jda: requested dimension " << d
                << " exceeds data rank " << rank << ", reducing\n";
      d = std::max(rank, 1);
    }
  }

  const double lambda = std::max(cfg.reg, 1e-12);
  TransformMatrix result;
  result.source_domain = source.name;
  std::vector<int> pseudo_labels;

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    // Cold start uses the marginal term only; later iterations add the
    // class-conditional terms with refreshed pseudo-labels.
    const auto diffs = jda_differences(source, target_unlabeled.X,
                                       iter == 0 ? nullptr : &pseudo_labels);
    Matrix discrepancy = lambda * Matrix::Identity(m, m);
    for (const Vector& diff : diffs) {
      discrepancy.noalias() += diff * diff.transpose();
    }

    // Pencil: scatter a = nu * (discrepancy) a, keep the d largest nu
    // (equivalently the smallest discrepancy-per-variance directions).
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(scatter, discrepancy);
    if (ges.info() != Eigen::Success) {
      throw std::runtime_error("compute_jda: generalized eigensolver failed for domain " +
                               source.name);
    }
    result.A.resize(d, m);
    for (int j = 0; j < d; ++j) {
      Vector a = ges.eigenvectors().col(m - 1 - j);
      const double nu = ges.eigenvalues()[m - 1 - j];
      // Rescale to unit variance along the direction when possible.
      if (nu > 1e-12) a /= std::sqrt(nu);
      fix_sign(a);
      result.A.row(j) = a.transpose();
    }

    if (iter + 1 == cfg.iterations) break;

    // Refresh pseudo-labels with a PA model trained on the projected source.
    Dataset projected = source;
    projected.X = result.A * source.X;
    const PAModel learner =
        train_offline(projected, cfg.pa_C, cfg.pa_epochs, seed + iter);
    pseudo_labels.resize(target_unlabeled.size());
    for (int i = 0; i < target_unlabeled.size(); ++i) {
      pseudo_labels[i] =
          predict_label(learner, result.A * target_unlabeled.X.col(i));
    }
  }
  return result;
}

OfflineArtifacts offline_stage(const std::vector<Dataset>& sources,
                               const Dataset& target_unlabeled,
                               const JdaConfig& jda, double C,
                               unsigned long long seed,
                               const std::vector<std::string>& import_paths) {
  if (sources.empty()) throw std::runtime_error("offline_stage: no source domains");
  if (!import_paths.empty() && import_paths.size() != sources.size()) {
    throw std::runtime_error("offline_stage: import path count must match source count");
  }
  const int m = target_unlabeled.dim();
  OfflineArtifacts artifacts;
  artifacts.jda_echo = jda;
  artifacts.pa_C = C;

  for (size_t i = 0; i < sources.size(); ++i) {
    const Dataset& src = sources[i];
    if (src.dim() != m) {
      throw std::runtime_error("offline_stage: domain '" + src.name +
                               "' dimension differs from target");
    }
    TransformMatrix A;
    try {
      if (!import_paths.empty()) {
        A = import_matrix(import_paths[i]);
        if (A.m() != m) {
          throw std::runtime_error("imported matrix has wrong column count");
        }
        if (!A.source_domain.empty() && A.source_domain != src.name) {
          std::cerr << "offline_stage: imported matrix names domain '"
                    << A.source_domain << "' but config says '" << src.name
                    << "', proceeding\n";
        }
        A.source_domain = src.name;
      } else {
        A = compute_jda(src, target_unlabeled, jda, seed + i);
      }
      Dataset projected = src;
      projected.X = A.A * src.X;
      artifacts.source_models.push_back(
          train_offline(projected, C, jda.pa_epochs, seed + 1000 + i));
    } catch (const std::exception& e) {
      throw std::runtime_error("offline_stage: domain '" + src.name +
                               "': " + e.what());
    }
    artifacts.matrices.push_back(std::move(A));
    artifacts.source_stats.push_back(compute_source_stats(src));
  }
  return artifacts;
}

}  // namespace otl
