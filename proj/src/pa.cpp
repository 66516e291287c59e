#include "otl/pa.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "otl/random.hpp"

namespace otl {

Vector predict_scores(const PAModel& model, const Vector& x) {
  if (x.size() != model.W.cols()) {
    throw std::runtime_error("predict_scores: dimension mismatch");
  }
  return model.W * x;
}

int argmax_label(const Vector& scores) {
  int best = 0;
  for (int k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

int predict_label(const PAModel& model, const Vector& x) {
  return argmax_label(predict_scores(model, x));
}

MarginViolation margin_violation(const PAModel& model, const Vector& x, int y) {
  const Vector scores = predict_scores(model, x);
  const int k = model.num_classes();
  int s = (y == 0) ? 1 : 0;
  for (int c = 0; c < k; ++c) {
    if (c == y) continue;
    if (scores[c] > scores[s]) s = c;
  }
  MarginViolation v;
  v.r = y;
  v.s = s;
  v.loss = std::max(0.0, 1.0 - scores[y] + scores[s]);
  return v;
}

double pa_update(PAModel& model, const Vector& x, int y, double C,
                 TauRule rule) {
  const MarginViolation v = margin_violation(model, x, y);
  if (v.loss <= 0.0) return 0.0;
  const double xx = x.squaredNorm();
  if (xx == 0.0) return 0.0;  // no update along x can reduce the loss

  double tau;
  if (rule == TauRule::Standard) {
    tau = std::min(C, v.loss / (2.0 * xx));
  } else {
    const double gap = std::abs(model.W.row(v.r).dot(x) - model.W.row(v.s).dot(x));
    tau = std::min(C, v.loss / std::max(gap, 1e-12));
  }
  model.W.row(v.r) += tau * x.transpose();
  model.W.row(v.s) -= tau * x.transpose();
  return tau;
}

PAModel train_offline(const Dataset& d, double C, int epochs,
                      unsigned long long seed, TauRule rule) {
  if (d.empty()) throw std::runtime_error("train_offline: empty dataset");
  PAModel model(d.num_classes, d.dim());
  Matrix sum = Matrix::Zero(model.num_classes(), model.dim());
  Rng rng(seed);
  long steps = 0;
  for (int e = 0; e < epochs; ++e) {
    auto order = identity_permutation(d.size());
    rng.shuffle(order);
    for (int i : order) {
      pa_update(model, d.X.col(i), d.labels[i], C, rule);
      sum += model.W;
      ++steps;
    }
  }
  PAModel avg(model.num_classes(), model.dim());
  avg.W = sum / static_cast<double>(steps);
  return avg;
}

void save_model(const PAModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out.precision(17);
  out << model.num_classes() << ',' << model.dim() << '\n';
  for (int r = 0; r < model.num_classes(); ++r) {
    for (int c = 0; c < model.dim(); ++c) {
      if (c) out << ',';
      out << model.W(r, c);
    }
    out << '\n';
  }
}

PAModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty model file");
  int k = 0, dim = 0;
  if (std::sscanf(line.c_str(), "%d,%d", &k, &dim) != 2 || k < 1 || dim < 1) {
    throw std::runtime_error(path + ": malformed model header");
  }
  PAModel model(k, dim);
  for (int r = 0; r < k; ++r) {
    if (!std::getline(in, line)) {
      throw std::runtime_error(path + ": model body shorter than header claims");
    }
    std::stringstream ss(line);
    std::string field;
    for (int c = 0; c < dim; ++c) {
      if (!std::getline(ss, field, ',')) {
        throw std::runtime_error(path + ": model row " + std::to_string(r + 1) +
                                 " too short");
      }
      model.W(r, c) = std::stod(field);
    }
  }
  return model;
}

}  // namespace otl
