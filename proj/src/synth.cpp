#include "otl/synth.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "otl/random.hpp"

namespace otl {

namespace {

// Rotation by `angle` in up to three disjoint leading coordinate planes;
// identity elsewhere. Acting on several planes makes the domain mismatch
// overlap the class structure instead of hiding in two coordinates.
Matrix leading_plane_rotation(int m, double angle) {
  Matrix r = Matrix::Identity(m, m);
  const int planes = std::min(3, m / 2);
  for (int p = 0; p < planes; ++p) {
    const int a = 2 * p, b = 2 * p + 1;
    r(a, a) = std::cos(angle);
    r(a, b) = -std::sin(angle);
    r(b, a) = std::sin(angle);
    r(b, b) = std::cos(angle);
  }
  return r;
}

Dataset sample_domain(const Matrix& class_means, int per_class, double noise_std,
                      Rng& rng, const std::string& name) {
  const int m = static_cast<int>(class_means.rows());
  const int k = static_cast<int>(class_means.cols());
  Dataset d;
  d.X.resize(m, per_class * k);
  d.labels.resize(per_class * k);
  int at = 0;
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < per_class; ++i, ++at) {
      for (int j = 0; j < m; ++j) {
        d.X(j, at) = class_means(j, c) + noise_std * rng.gaussian();
      }
      d.labels[at] = c;
    }
  }
  d.num_classes = k;
  d.name = name;
  return d;
}

}  // namespace

SyntheticTask gen_synthetic(const SyntheticSpec& spec) {
  if (spec.num_sources < 1 || spec.dim < 1 || spec.classes < 1 ||
      spec.per_class_count < 1 || spec.target_per_class < 1 ||
      spec.noise_std < 0) {
    throw std::runtime_error("gen_synthetic: invalid spec");
  }
  Rng rng(spec.seed);

  // Target class means drawn once; all domains derive from them. The
  // coordinates the per-domain rotation acts on are rescaled to carry a
  // fixed share of each mean's energy, so the domain gap does not vary
  // wildly with the draw.
  Matrix target_means(spec.dim, spec.classes);
  for (int c = 0; c < spec.classes; ++c) {
    for (int j = 0; j < spec.dim; ++j) {
      target_means(j, c) = rng.gaussian();
    }
  }
  const int rotated = 2 * std::min(3, spec.dim / 2);
  if (rotated > 0 && rotated < spec.dim) {
    const double share = 0.3;
    for (int c = 0; c < spec.classes; ++c) {
      const double head = target_means.col(c).head(rotated).norm();
      const double tail = target_means.col(c).tail(spec.dim - rotated).norm();
      const double total = target_means.col(c).norm();
      if (head > 1e-12 && tail > 1e-12) {
        target_means.col(c).head(rotated) *= std::sqrt(share) * total / head;
        target_means.col(c).tail(spec.dim - rotated) *=
            std::sqrt(1.0 - share) * total / tail;
      }
    }
  }
  target_means *= spec.class_sep;

  // Shift direction: part class-discriminative, part random. A purely
  // random translation is almost orthogonal to the few directions a
  // max-margin classifier uses and leaves no transfer gap; a translation
  // exactly along a class-mean difference makes two classes collapse once
  // that direction is suppressed. The blend yields a shift that misleads
  // source-trained classifiers while remaining fixable.
  Vector rand_dir(spec.dim);
  for (int j = 0; j < spec.dim; ++j) rand_dir[j] = rng.gaussian();
  if (rand_dir.norm() < 1e-12) rand_dir[0] = 1.0;
  rand_dir.normalize();
  Vector shift_dir = rand_dir;
  if (spec.classes >= 2) {
    Vector class_dir = target_means.col(1) - target_means.col(0);
    if (class_dir.norm() > 1e-12) {
      class_dir.normalize();
      shift_dir = 0.4 * class_dir + std::sqrt(1.0 - 0.16) * rand_dir;
      shift_dir.normalize();
    }
  }

  SyntheticTask task;
  for (int i = 0; i < spec.num_sources; ++i) {
    const double frac = static_cast<double>(i + 1) / spec.num_sources;
    // Alternate the translation sign so the sources straddle the target
    // instead of marching off in one direction; pooling them naively then
    // blurs rather than biases.
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const Matrix rot =
        leading_plane_rotation(spec.dim, sign * spec.rotation * frac);
    Matrix means = rot * target_means;
    means.colwise() += (sign * spec.shift * frac) * shift_dir;
    task.sources.push_back(sample_domain(means, spec.per_class_count,
                                         spec.noise_std, rng,
                                         "source_" + std::to_string(i)));
  }
  task.target = sample_domain(target_means, spec.target_per_class,
                              spec.noise_std, rng, "target");
  return task;
}

}  // namespace otl
