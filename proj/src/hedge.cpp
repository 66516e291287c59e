#include "otl/hedge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "otl/pa.hpp"

namespace otl {

EnsembleState::EnsembleState(int n, double beta) : n_(n), beta_(beta) {
  if (n < 1) throw std::runtime_error("EnsembleState: n must be >= 1");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::runtime_error("EnsembleState: beta must be in (0,1)");
  }
  const double init = std::log(1.0 / (2.0 * n));
  log_u_.assign(n, init);
  log_v_.assign(n, init);
  normalize();
}

EnsembleState init_weights(int n, double beta) { return EnsembleState(n, beta); }

void EnsembleState::normalize() {
  double max_log = log_u_[0];
  for (double w : log_u_) max_log = std::max(max_log, w);
  for (double w : log_v_) max_log = std::max(max_log, w);
  double z = 0.0;
  for (double w : log_u_) z += std::exp(w - max_log);
  for (double w : log_v_) z += std::exp(w - max_log);
  const double log_z = max_log + std::log(z);
  u_.resize(n_);
  v_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    log_u_[i] -= log_z;
    log_v_[i] -= log_z;
    u_[i] = std::exp(log_u_[i]);
    v_[i] = std::exp(log_v_[i]);
  }
}

void EnsembleState::update(const RoundOutcome& outcome) {
  if (static_cast<int>(outcome.z.size()) != n_ ||
      static_cast<int>(outcome.r.size()) != n_) {
    throw std::runtime_error("hedge_update: outcome size mismatch");
  }
  const double log_beta = std::log(beta_);
  for (int i = 0; i < n_; ++i) {
    if (outcome.z[i]) log_u_[i] += log_beta;
    if (outcome.r[i]) log_v_[i] += log_beta;
  }
  normalize();
}

EnsemblePrediction ensemble_predict(const std::vector<Vector>& src_scores,
                                    const std::vector<Vector>& tgt_scores,
                                    const EnsembleState& state) {
  const int n = state.n();
  if (static_cast<int>(src_scores.size()) != n ||
      static_cast<int>(tgt_scores.size()) != n) {
    throw std::runtime_error("ensemble_predict: expert count mismatch");
  }
  const auto k = src_scores[0].size();
  Vector combined = Vector::Zero(k);
  for (int i = 0; i < n; ++i) {
    if (src_scores[i].size() != k || tgt_scores[i].size() != k) {
      throw std::runtime_error("ensemble_predict: score length mismatch");
    }
    combined += state.u()[i] * src_scores[i] + state.v()[i] * tgt_scores[i];
  }
  return {combined, argmax_label(combined)};
}

double mistake_bound(long m_min, int n) {
  const double ln2n = std::log(2.0 * n);
  const double m = static_cast<double>(m_min);
  return m + 1.5 * std::sqrt(ln2n * m) + ln2n;
}

double theorem_beta(long m_min, int n) {
  const double root_m = std::sqrt(static_cast<double>(m_min));
  const double root_ln = std::sqrt(std::log(2.0 * n));
  if (root_m + root_ln == 0.0) return 0.5;
  const double beta = root_m / (root_m + root_ln);
  return std::clamp(beta, 1e-12, 1.0 - 1e-12);
}

double stream_beta(long stream_length) {
  const double root_t = std::sqrt(static_cast<double>(std::max(stream_length, 1L)));
  return root_t / (root_t + std::sqrt(std::log(2.0)));
}

}  // namespace otl
