#pragma once

#include <vector>

#include "otl/types.hpp"

namespace otl {

// 0/1 mistake indicators for one round: z for source experts, r for
// target experts.
struct RoundOutcome {
  std::vector<int> z;
  std::vector<int> r;
  bool ensemble_mistake = false;
};

// Hedge weights over n source + n target classifiers. Kept in log space
// so long streams with a bad expert cannot underflow; u()/v() return the
// normalized linear weights.
class EnsembleState {
 public:
  EnsembleState(int n, double beta);

  int n() const { return n_; }
  double beta() const { return beta_; }

  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& v() const { return v_; }

  void update(const RoundOutcome& outcome);

 private:
  void normalize();

  int n_;
  double beta_;
  std::vector<double> log_u_, log_v_;  // canonical
  std::vector<double> u_, v_;          // normalized views
};

EnsembleState init_weights(int n, double beta);

struct EnsemblePrediction {
  Vector combined;  // K
  int label;
};

EnsemblePrediction ensemble_predict(const std::vector<Vector>& src_scores,
                                    const std::vector<Vector>& tgt_scores,
                                    const EnsembleState& state);

// Theorem-style upper bound on the number of ensemble mistakes given the
// best expert's count.
double mistake_bound(long m_min, int n);

// The beta the bound analysis assumes, computable only with hindsight.
double theorem_beta(long m_min, int n);

// beta used in the experiments: sqrt(T) / (sqrt(T) + sqrt(ln 2)).
double stream_beta(long stream_length);

}  // namespace otl
