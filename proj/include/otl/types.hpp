#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace otl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

// One labeled example in the original m-dimensional feature space.
// Labels are 0-based internally; file formats use 1..K.
struct LabeledInstance {
  Vector features;
  int label = 0;
};

// A domain's data: instances are the columns of X, labels[i] in {0..K-1}.
struct Dataset {
  Matrix X;           // m x n, one instance per column
  IntVector labels;   // n
  int num_classes = 0;
  std::string name;

  int dim() const { return static_cast<int>(X.rows()); }
  int size() const { return static_cast<int>(X.cols()); }
  bool empty() const { return X.cols() == 0; }

  LabeledInstance instance(int i) const { return {X.col(i), labels[i]}; }
};

// 30/70-style partition of the target domain. Labels on the unlabeled
// part are kept for verification only and must not feed learning.
struct TargetSplit {
  Dataset unlabeled;
  Dataset online_stream;
  unsigned long long seed = 0;
};

}  // namespace otl
