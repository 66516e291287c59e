#pragma once

#include <string>

#include "otl/types.hpp"

namespace otl {

// Which step-size denominator to use. `Standard` is the multi-class PA-I
// step loss / (2 ||x||^2). `ScoreGap` divides by |w_r.x - w_s.x| instead
// (guarded against blow-up); kept for side-by-side study.
enum class TauRule { Standard, ScoreGap };

// Multi-class PA predictor: one weight vector per class, rows of W.
struct PAModel {
  Matrix W;  // K x d, zero-initialized

  PAModel() = default;
  PAModel(int num_classes, int dim) : W(Matrix::Zero(num_classes, dim)) {}

  int dim() const { return static_cast<int>(W.cols()); }
  int num_classes() const { return static_cast<int>(W.rows()); }
};

struct MarginViolation {
  int r = 0;        // true label
  int s = 0;        // hardest competitor, argmax over s != r
  double loss = 0;  // max(0, 1 - w_r.x + w_s.x)
};

Vector predict_scores(const PAModel& model, const Vector& x);

// Lowest index wins argmax ties.
int predict_label(const PAModel& model, const Vector& x);
int argmax_label(const Vector& scores);

MarginViolation margin_violation(const PAModel& model, const Vector& x, int y);

// Updates w_r += tau*x, w_s -= tau*x when loss > 0. No-op on zero loss or
// zero x. Returns the tau applied (0 for no-op).
double pa_update(PAModel& model, const Vector& x, int y, double C,
                 TauRule rule = TauRule::Standard);

// Sequential PA over shuffled passes; returns the average of all
// post-update iterates (the initial zero model is excluded).
PAModel train_offline(const Dataset& d, double C, int epochs,
                      unsigned long long seed,
                      TauRule rule = TauRule::Standard);

// CSV, K rows x d cols, header "K,d".
void save_model(const PAModel& model, const std::string& path);
PAModel load_model(const std::string& path);

}  // namespace otl
