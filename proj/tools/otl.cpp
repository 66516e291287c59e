// otl: multi-source online transfer learning toolkit.
//
// Subcommands: gen, zscore, init, run, sweep, report.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "otl/data.hpp"
#include "otl/jda.hpp"
#include "otl/report.hpp"
#include "otl/runner.hpp"
#include "otl/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

unsigned long long default_seed() {
  if (const char* env = std::getenv("OTL_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

// All loaded domains must agree on K.
void harmonize_classes(std::vector<otl::Dataset*> domains) {
  int k = 0;
  for (const auto* d : domains) k = std::max(k, d->num_classes);
  for (auto* d : domains) d->num_classes = k;
}

struct RunFlags {
  std::string artifacts_dir;
  std::string target_path;
  std::string variant = "full";
  std::string beta_rule = "paper";
  std::string tau_rule = "standard";
  std::string out_path = "report.json";
  double unlabeled_frac = 0.0;
  bool header = false;
  bool timings = false;
  otl::RunConfig cfg;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--artifacts", f.artifacts_dir,
                  "directory written by `otl init` (full/fixed/paio)");
  cmd->add_option("--target", f.target_path, "target dataset CSV")->required();
  cmd->add_option("--variant", f.variant, "full|fixed|pa|paio")
      ->check(CLI::IsMember({"full", "fixed", "pa", "paio"}));
  cmd->add_option("--C", f.cfg.C, "PA aggressiveness");
  cmd->add_option("--mu", f.cfg.mu, "matrix update regularization");
  cmd->add_option("--tw", f.cfg.time_window, "matrix update window T_w");
  cmd->add_option("--beta-rule", f.beta_rule, "paper|theorem")
      ->check(CLI::IsMember({"paper", "theorem"}));
  cmd->add_option("--beta", f.cfg.beta_override, "explicit Hedge discount");
  cmd->add_option("--tau-rule", f.tau_rule, "standard|paper PA step rule")
      ->check(CLI::IsMember({"standard", "paper"}));
  cmd->add_option("--trials", f.cfg.trials, "random stream permutations");
  cmd->add_option("--seed", f.cfg.seed, "base seed (env OTL_SEED)");
  cmd->add_option("--unlabeled-frac", f.unlabeled_frac,
                  "split this fraction off as an unlabeled pool first "
                  "(0 = use the whole file as the stream)");
  cmd->add_flag("--header", f.header, "skip the first CSV line");
  cmd->add_flag("--log-weights", f.cfg.log_weights, "record per-round weights");
  cmd->add_flag("--log-mmd", f.cfg.log_mmd, "record MMD checkpoints");
  cmd->add_flag("--warm-stats", f.cfg.warm_stats,
                "fold the unlabeled pool into the marginal mean");
  cmd->add_flag("--timings", f.timings,
                "include wall-clock times (breaks byte-reproducibility)");
  cmd->add_option("--out", f.out_path, "report JSON path");
}

otl::RunReport execute_run(RunFlags& f) {
  f.cfg.variant = otl::parse_variant(f.variant);
  f.cfg.tau_rule =
      f.tau_rule == "standard" ? otl::TauRule::Standard : otl::TauRule::ScoreGap;
  f.cfg.theorem_beta_rule = f.beta_rule == "theorem";

  const bool needs_artifacts = f.cfg.variant != otl::Variant::Pa;
  otl::ArtifactsBundle bundle;
  std::vector<otl::Dataset> sources;
  if (needs_artifacts) {
    if (f.artifacts_dir.empty()) {
      throw std::runtime_error("--artifacts is required for variant " + f.variant);
    }
    bundle = otl::load_artifacts(f.artifacts_dir);
    if (f.cfg.variant == otl::Variant::Paio) {
      for (const auto& path : bundle.source_paths) {
        if (path.empty()) {
          throw std::runtime_error("manifest lacks source paths; paio needs them");
        }
        sources.push_back(otl::load_dataset(path, f.header, bundle.num_classes));
      }
    }
  }

  otl::Dataset target = otl::load_dataset(
      f.target_path, f.header, needs_artifacts ? bundle.num_classes : 0);

  otl::TargetSplit split;
  if (f.unlabeled_frac > 0.0) {
    split = otl::split_target(target, f.unlabeled_frac, f.cfg.seed);
  } else {
    split.online_stream = target;
    split.seed = f.cfg.seed;
  }

  return otl::run_experiment(split, f.cfg,
                             needs_artifacts ? &bundle.artifacts : nullptr,
                             sources);
}

int cmd_gen(const otl::SyntheticSpec& spec, const std::string& out_dir,
            double unlabeled_frac) {
  fs::create_directories(out_dir);
  const otl::SyntheticTask task = otl::gen_synthetic(spec);
  for (size_t i = 0; i < task.sources.size(); ++i) {
    otl::save_dataset(task.sources[i],
                      out_dir + "/source_" + std::to_string(i) + ".csv");
  }
  otl::save_dataset(task.target, out_dir + "/target.csv");
  const otl::TargetSplit split =
      otl::split_target(task.target, unlabeled_frac, spec.seed);
  otl::save_dataset(split.unlabeled, out_dir + "/target_unlabeled.csv");
  otl::save_dataset(split.online_stream, out_dir + "/target_online.csv");
  std::cerr << "gen: wrote " << task.sources.size() << " sources + target ("
            << task.target.size() << " rows, " << split.unlabeled.size()
            << " unlabeled / " << split.online_stream.size() << " online) to "
            << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-source online transfer learning toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags override");

  // gen
  otl::SyntheticSpec spec;
  spec.seed = default_seed();
  std::string gen_out = "data";
  double gen_unlabeled_frac = 0.3;
  auto* gen = app.add_subcommand("gen", "generate a synthetic shifted-domain task");
  gen->add_option("--sources", spec.num_sources, "number of source domains");
  gen->add_option("--dim", spec.dim, "feature dimension");
  gen->add_option("--classes", spec.classes, "number of classes");
  gen->add_option("--per-class", spec.per_class_count, "source rows per class");
  gen->add_option("--target-per-class", spec.target_per_class);
  gen->add_option("--shift", spec.shift, "per-domain translation magnitude");
  gen->add_option("--rotation", spec.rotation, "per-domain rotation (radians)");
  gen->add_option("--noise-std", spec.noise_std);
  gen->add_option("--class-sep", spec.class_sep, "spread of class means");
  gen->add_option("--seed", spec.seed);
  gen->add_option("--unlabeled-frac", gen_unlabeled_frac);
  gen->add_option("--out", gen_out, "output directory");

  // zscore
  std::string z_in, z_out;
  bool z_header = false;
  auto* zs = app.add_subcommand("zscore", "standardize feature columns of a CSV");
  zs->add_option("--in", z_in)->required();
  zs->add_option("--out", z_out)->required();
  zs->add_flag("--header", z_header);

  // init
  std::vector<std::string> init_sources;
  std::string init_target_unlabeled, init_out = "artifacts", init_import;
  otl::JdaConfig jda;
  double init_C = 5.0;
  unsigned long long init_seed = default_seed();
  int init_classes = 0;
  bool init_header = false;
  auto* init = app.add_subcommand("init", "offline stage: matrices + source models");
  init->add_option("--source", init_sources, "source dataset CSVs")->required();
  init->add_option("--target-unlabeled", init_target_unlabeled)->required();
  init->add_option("--dim", jda.subspace_dim, "projected dimension m'");
  init->add_option("--iters", jda.iterations, "pseudo-label refresh iterations");
  init->add_option("--epochs", jda.pa_epochs, "source-model training epochs");
  init->add_option("--lambda", jda.reg, "eigenproblem regularization");
  init->add_option("--C", init_C, "PA aggressiveness");
  init->add_option("--classes", init_classes, "class count override");
  init->add_option("--seed", init_seed);
  init->add_option("--import-matrices", init_import,
                   "directory of matrix_<i>.csv to import instead of JDA");
  init->add_flag("--header", init_header);
  init->add_option("--out", init_out, "artifacts directory");

  // run
  RunFlags rf;
  rf.cfg.seed = default_seed();
  auto* run = app.add_subcommand("run", "online stage over the target stream");
  add_run_flags(run, rf);

  // sweep
  RunFlags sf;
  sf.cfg.seed = default_seed();
  std::string sweep_param = "C";
  std::vector<double> sweep_values;
  std::vector<std::string> sweep_variants = {"full", "fixed", "pa", "paio"};
  std::string sweep_out = "sweep.json";
  auto* sweep = app.add_subcommand("sweep", "re-run the protocol over a parameter grid");
  add_run_flags(sweep, sf);
  sweep->get_option("--out")->default_str("sweep.json");
  sweep->add_option("--param", sweep_param, "C|mu|tw|beta")
      ->check(CLI::IsMember({"C", "mu", "tw", "beta"}));
  sweep->add_option("--values", sweep_values, "grid values")->required();
  sweep->add_option("--variants", sweep_variants, "variants to sweep");

  // report
  std::string rep_in, rep_out, rep_kind = "mistake_curve";
  bool rep_mean = false;
  auto* rep = app.add_subcommand("report", "emit plottable CSV from a report");
  rep->add_option("--in", rep_in, "report or sweep JSON")->required();
  rep->add_option("--kind", rep_kind,
                  "mistake_curve|mmd_curve|weight_curve|sensitivity")
      ->check(CLI::IsMember(
          {"mistake_curve", "mmd_curve", "weight_curve", "sensitivity"}));
  rep->add_option("--out", rep_out, "output CSV")->required();
  rep->add_flag("--mean", rep_mean, "mean curve instead of per-trial curves");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(spec, gen_out, gen_unlabeled_frac);

    if (zs->parsed()) {
      otl::zscore_file(z_in, z_out, z_header);
      return 0;
    }

    if (init->parsed()) {
      std::vector<otl::Dataset> sources;
      for (size_t i = 0; i < init_sources.size(); ++i) {
        sources.push_back(otl::load_dataset(init_sources[i], init_header,
                                            init_classes,
                                            "source_" + std::to_string(i)));
      }
      otl::Dataset unlabeled = otl::load_dataset(init_target_unlabeled,
                                                 init_header, init_classes);
      std::vector<otl::Dataset*> all;
      for (auto& s : sources) all.push_back(&s);
      all.push_back(&unlabeled);
      harmonize_classes(all);

      std::vector<std::string> imports;
      if (!init_import.empty()) {
        for (size_t i = 0; i < sources.size(); ++i) {
          imports.push_back(init_import + "/matrix_" + std::to_string(i) + ".csv");
        }
      }
      otl::ArtifactsBundle bundle;
      bundle.artifacts =
          otl::offline_stage(sources, unlabeled, jda, init_C, init_seed, imports);
      bundle.source_paths = init_sources;
      bundle.dim = unlabeled.dim();
      bundle.num_classes = unlabeled.num_classes;
      otl::save_artifacts(bundle, init_out);
      std::cerr << "init: wrote " << sources.size() << " matrices + models to "
                << init_out << "\n";
      return 0;
    }

    if (run->parsed()) {
      const otl::RunReport report = execute_run(rf);
      otl::write_report(report, rf.out_path, rf.timings);
      std::cout << otl::variant_name(report.config.variant) << " mistake rate: "
                << report.mean_rate * 100 << " +- " << report.std_rate * 100
                << " % over " << report.trials.size() << " trials\n";
      return 0;
    }

    if (sweep->parsed()) {
      json results = json::array();
      for (double value : sweep_values) {
        for (const auto& variant : sweep_variants) {
          RunFlags point = sf;
          point.variant = variant;
          if (sweep_param == "C") point.cfg.C = value;
          else if (sweep_param == "mu") point.cfg.mu = value;
          else if (sweep_param == "tw") point.cfg.time_window = static_cast<long>(value);
          else point.cfg.beta_override = value;
          const otl::RunReport r = execute_run(point);
          results.push_back({{"param", sweep_param},
                             {"value", value},
                             {"variant", variant},
                             {"mean_mistake_rate", r.mean_rate},
                             {"std_mistake_rate", r.std_rate}});
          std::cerr << "sweep: " << sweep_param << "=" << value << " " << variant
                    << " -> " << r.mean_rate * 100 << " %\n";
        }
      }
      std::ofstream out(sf.out_path == "report.json" ? sweep_out : sf.out_path);
      out << results.dump(2) << '\n';
      return 0;
    }

    if (rep->parsed()) {
      if (rep_kind == "sensitivity") {
        std::ifstream in(rep_in);
        if (!in) throw std::runtime_error("cannot open " + rep_in);
        json results;
        in >> results;
        std::ofstream out(rep_out);
        if (!out) throw std::runtime_error("cannot write " + rep_out);
        out << "x,series_name,value\n";
        for (const auto& row : results) {
          out << row.at("value").get<double>() << ','
              << row.at("variant").get<std::string>() << ','
              << row.at("mean_mistake_rate").get<double>() << '\n';
        }
      } else {
        const otl::RunReport report = otl::read_report(rep_in);
        otl::emit_plot_data(report, otl::parse_plot_kind(rep_kind), rep_out,
                            rep_mean);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "otl: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
