#include "otl/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "otl/data.hpp"

namespace otl {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::Fixed: return "fixed";
    case Variant::Pa: return "pa";
    case Variant::Paio: return "paio";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  if (name == "full") return Variant::Full;
  if (name == "fixed") return Variant::Fixed;
  if (name == "pa") return Variant::Pa;
  if (name == "paio") return Variant::Paio;
  throw std::runtime_error("unknown variant: " + name);
}

namespace {

double effective_beta(const RunConfig& cfg, long stream_length) {
  return cfg.beta_override > 0.0 ? cfg.beta_override
                                 : stream_beta(stream_length);
}

void record_mmd_checkpoint(TrialReport& report, long round,
                           const std::vector<TransformMatrix>& matrices,
                           const std::vector<SourceStats>& stats,
                           const TargetRunningStats& tgt) {
  report.mmd_rounds.push_back(round);
  for (size_t i = 0; i < matrices.size(); ++i) {
    report.mmd[i].push_back(mmd_objective(matrices[i].A, stats[i], tgt));
  }
}

}  // namespace

TrialReport run_homotl_oddm(const OfflineArtifacts& artifacts,
                            const Dataset& stream, const RunConfig& cfg,
                            const Dataset* warm_pool) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = static_cast<int>(artifacts.matrices.size());
  if (n == 0) throw std::runtime_error("run_homotl_oddm: no offline artifacts");
  const long T = stream.size();
  const int k = stream.num_classes;
  const bool update_matrices = cfg.variant != Variant::Fixed;

  TrialReport report;
  report.mmd.resize(n);
  if (T == 0) return report;
  for (const auto& A : artifacts.matrices) {
    if (A.m() != stream.dim()) {
      throw std::runtime_error("run_homotl_oddm: matrix/stream dimension mismatch");
    }
  }

  std::vector<TransformMatrix> matrices = artifacts.matrices;
  std::vector<PAModel> target_models;
  for (int i = 0; i < n; ++i) target_models.emplace_back(k, matrices[i].d());
  EnsembleState state(n, effective_beta(cfg, T));
  TargetRunningStats tgt_stats(stream.dim(), k);
  if (cfg.warm_stats && warm_pool != nullptr && !warm_pool->empty()) {
    tgt_stats.set_warm_pool(warm_pool->X.rowwise().mean(), warm_pool->size());
  }

  std::vector<Vector> projected(n), src_scores(n), tgt_scores(n);
  RoundOutcome outcome;
  outcome.z.resize(n);
  outcome.r.resize(n);
  report.mistake_seq.resize(T);
  report.src_expert_mistakes.assign(n, 0);
  report.tgt_expert_mistakes.assign(n, 0);

  for (long t = 1; t <= T; ++t) {
    const Vector x = stream.X.col(t - 1);
    const int y = stream.labels[t - 1];

    for (int i = 0; i < n; ++i) {
      projected[i] = matrices[i].A * x;
      src_scores[i] = predict_scores(artifacts.source_models[i], projected[i]);
      tgt_scores[i] = predict_scores(target_models[i], projected[i]);
    }
    const EnsemblePrediction pred = ensemble_predict(src_scores, tgt_scores, state);
    if (!pred.combined.allFinite()) {
      throw std::runtime_error("run_homotl_oddm: non-finite state at round " +
                               std::to_string(t));
    }
    const bool mistake = pred.label != y;
    report.mistake_seq[t - 1] = mistake ? 1 : 0;
    if (mistake) ++report.mistakes;

    for (int i = 0; i < n; ++i) {
      outcome.z[i] = argmax_label(src_scores[i]) != y;
      outcome.r[i] = argmax_label(tgt_scores[i]) != y;
      report.src_expert_mistakes[i] += outcome.z[i];
      report.tgt_expert_mistakes[i] += outcome.r[i];
    }
    outcome.ensemble_mistake = mistake;
    state.update(outcome);
    if (cfg.log_weights) {
      report.weights_u.push_back(state.u());
      report.weights_v.push_back(state.v());
    }

    for (int i = 0; i < n; ++i) {
      pa_update(target_models[i], projected[i], y, cfg.C, cfg.tau_rule);
    }
    tgt_stats.observe(x, y);

    if (cfg.log_mmd && t == 1) {
      record_mmd_checkpoint(report, t, matrices, artifacts.source_stats, tgt_stats);
    }
    if (should_update(t, cfg.time_window)) {
      if (update_matrices) {
        for (int i = 0; i < n; ++i) {
          matrices[i] = update_matrix(matrices[i], artifacts.source_stats[i],
                                      tgt_stats, cfg.mu);
        }
      }
      if (cfg.log_mmd) {
        record_mmd_checkpoint(report, t, matrices, artifacts.source_stats,
                              tgt_stats);
      }
    }
  }
  if (cfg.log_mmd && report.mmd_rounds.back() != T) {
    record_mmd_checkpoint(report, T, matrices, artifacts.source_stats, tgt_stats);
  }

  report.mistake_rate = static_cast<double>(report.mistakes) / T;
  report.final_u = state.u();
  report.final_v = state.v();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

TrialReport run_baseline(Variant variant, const Dataset& stream,
                         const RunConfig& cfg,
                         const std::vector<Dataset>& source_data) {
  if (variant != Variant::Pa && variant != Variant::Paio) {
    throw std::runtime_error("run_baseline: expected pa or paio");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const long T = stream.size();
  TrialReport report;
  if (T == 0) return report;

  PAModel model(stream.num_classes, stream.dim());
  if (variant == Variant::Paio) {
    if (source_data.empty()) {
      throw std::runtime_error("run_baseline: paio needs source datasets");
    }
    Dataset pool = concat_datasets(source_data);
    pool.num_classes = std::max(pool.num_classes, stream.num_classes);
    model = train_offline(pool, cfg.C, 1, cfg.seed, cfg.tau_rule);
  }

  report.mistake_seq.resize(T);
  for (long t = 1; t <= T; ++t) {
    const Vector x = stream.X.col(t - 1);
    const int y = stream.labels[t - 1];
    const bool mistake = predict_label(model, x) != y;
    report.mistake_seq[t - 1] = mistake ? 1 : 0;
    if (mistake) ++report.mistakes;
    pa_update(model, x, y, cfg.C, cfg.tau_rule);
    if (!model.W.allFinite()) {
      throw std::runtime_error("run_baseline: non-finite state at round " +
                               std::to_string(t));
    }
  }
  report.mistake_rate = static_cast<double>(report.mistakes) / T;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

void aggregate_trials(RunReport& report) {
  const int n = static_cast<int>(report.trials.size());
  if (n == 0) return;
  double sum = 0.0;
  for (const auto& t : report.trials) sum += t.mistake_rate;
  report.mean_rate = sum / n;
  double sq = 0.0;
  for (const auto& t : report.trials) {
    sq += (t.mistake_rate - report.mean_rate) * (t.mistake_rate - report.mean_rate);
  }
  report.std_rate = n > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
}

RunReport run_experiment(const TargetSplit& split, const RunConfig& cfg,
                         const OfflineArtifacts* artifacts,
                         const std::vector<Dataset>& sources) {
  const bool needs_artifacts =
      cfg.variant == Variant::Full || cfg.variant == Variant::Fixed;
  if (needs_artifacts && artifacts == nullptr) {
    throw std::runtime_error("run_experiment: variant needs offline artifacts");
  }

  RunReport report;
  report.config = cfg;
  report.num_domains =
      needs_artifacts ? static_cast<int>(artifacts->matrices.size()) : 1;
  report.stream_length = split.online_stream.size();

  for (int trial = 0; trial < cfg.trials; ++trial) {
    Dataset stream = permute_stream(split, cfg.seed + trial);
    TrialReport tr;
    if (needs_artifacts) {
      tr = run_homotl_oddm(*artifacts, stream, cfg, &split.unlabeled);
      if (cfg.theorem_beta_rule) {
        long m_min = tr.src_expert_mistakes[0];
        for (long m : tr.src_expert_mistakes) m_min = std::min(m_min, m);
        for (long m : tr.tgt_expert_mistakes) m_min = std::min(m_min, m);
        RunConfig second = cfg;
        second.beta_override = theorem_beta(m_min, report.num_domains);
        tr = run_homotl_oddm(*artifacts, stream, second, &split.unlabeled);
      }
    } else {
      tr = run_baseline(cfg.variant, stream, cfg, sources);
    }
    report.trials.push_back(std::move(tr));
  }
  aggregate_trials(report);
  return report;
}

}  // namespace otl
