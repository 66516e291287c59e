#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otl/hedge.hpp"
#include "otl/jda.hpp"
#include "otl/pa.hpp"
#include "otl/transform.hpp"
#include "otl/types.hpp"

namespace otl {

enum class Variant { Full, Fixed, Pa, Paio };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);

struct RunConfig {
  double C = 5.0;
  double mu = 1.0;
  long time_window = 50;
  double beta_override = 0.0;  // 0 means sqrt(T)/(sqrt(T)+sqrt(ln 2))
  // Two-pass rule: rerun each trial with beta set from the best expert's
  // hindsight mistake count (expert indicators do not depend on beta).
  bool theorem_beta_rule = false;
  int trials = 20;
  unsigned long long seed = 1;
  Variant variant = Variant::Full;
  TauRule tau_rule = TauRule::Standard;
  bool log_weights = false;
  bool log_mmd = false;
  bool warm_stats = false;
};

struct TrialReport {
  std::vector<std::uint8_t> mistake_seq;  // 0/1 per round
  long mistakes = 0;
  double mistake_rate = 0.0;
  std::vector<double> final_u, final_v;
  std::vector<long> src_expert_mistakes, tgt_expert_mistakes;  // sum z_i, sum r_i
  std::vector<long> mmd_rounds;                 // checkpoint round indices
  std::vector<std::vector<double>> mmd;         // [domain][checkpoint]
  std::vector<std::vector<double>> weights_u;   // [round][i], if logged
  std::vector<std::vector<double>> weights_v;
  double wall_seconds = 0.0;
};

struct RunReport {
  RunConfig config;
  int num_domains = 0;
  long stream_length = 0;
  std::vector<TrialReport> trials;
  double mean_rate = 0.0;
  double std_rate = 0.0;
};

// One pass of the online loop over a fixed stream. Matrix updates are
// skipped for the fixed variant; source models are never touched. When
// cfg.warm_stats is set, warm_pool feeds the marginal mean term.
TrialReport run_homotl_oddm(const OfflineArtifacts& artifacts,
                            const Dataset& stream, const RunConfig& cfg,
                            const Dataset* warm_pool = nullptr);

// pa: multi-class PA from zero in the original space. paio: same but
// initialized from the averaged classifier trained on the source union.
TrialReport run_baseline(Variant variant, const Dataset& stream,
                         const RunConfig& cfg,
                         const std::vector<Dataset>& source_data);

// Fills mean/std of per-trial mistake rates.
void aggregate_trials(RunReport& report);

// Multi-trial driver: permutes the online stream per trial (seed + trial
// index) and dispatches on cfg.variant. `artifacts` is required for
// full/fixed, `sources` for paio.
RunReport run_experiment(const TargetSplit& split, const RunConfig& cfg,
                         const OfflineArtifacts* artifacts,
                         const std::vector<Dataset>& sources);

}  // namespace otl
