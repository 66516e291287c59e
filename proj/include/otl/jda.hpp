#pragma once

#include <string>
#include <vector>

#include "otl/pa.hpp"
#include "otl/transform.hpp"
#include "otl/types.hpp"

namespace otl {

struct JdaConfig {
  int subspace_dim = 100;  // m', capped at min(m, n_total - 1)
  int iterations = 10;     // pseudo-label refresh rounds
  double reg = 0.1;        // lambda
  double pa_C = 5.0;       // aggressiveness of the pseudo-label learner
  int pa_epochs = 1;
};

// Linear joint distribution adaptation. Stacks source and unlabeled
// target data, minimizes marginal + class-conditional mean discrepancy
// under a variance constraint via the generalized symmetric eigenproblem,
// and refreshes target pseudo-labels each iteration with a PA model
// trained on the projected source. Rows of the result are the leading
// eigenvectors, sign-fixed so output is deterministic per seed.
TransformMatrix compute_jda(const Dataset& source, const Dataset& target_unlabeled,
                            const JdaConfig& cfg, unsigned long long seed);

struct OfflineArtifacts {
  std::vector<TransformMatrix> matrices;
  std::vector<PAModel> source_models;
  std::vector<SourceStats> source_stats;  // original-space means per source
  JdaConfig jda_echo;
  double pa_C = 5.0;
};

// Offline stage: per source domain, compute (or import) A_i, project the
// source data, train the averaged PA source classifier, and record the
// original-space means used by the online matrix update.
OfflineArtifacts offline_stage(const std::vector<Dataset>& sources,
                               const Dataset& target_unlabeled,
                               const JdaConfig& jda, double C,
                               unsigned long long seed,
                               const std::vector<std::string>& import_paths = {});

// On-disk layout: matrix_<i>.csv + model_<i>.csv per domain plus a
// manifest.json carrying the source means and dataset paths.
struct ArtifactsBundle {
  OfflineArtifacts artifacts;
  std::vector<std::string> source_paths;
  int dim = 0;
  int num_classes = 0;
};

void save_artifacts(const ArtifactsBundle& bundle, const std::string& dir);
ArtifactsBundle load_artifacts(const std::string& dir);

}  // namespace otl
