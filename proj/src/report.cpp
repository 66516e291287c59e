#include "otl/report.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace otl {

namespace {

using nlohmann::json;

json config_to_json(const RunConfig& c) {
  return json{{"C", c.C},
              {"mu", c.mu},
              {"time_window", c.time_window},
              {"beta_override", c.beta_override},
              {"theorem_beta_rule", c.theorem_beta_rule},
              {"trials", c.trials},
              {"seed", c.seed},
              {"variant", variant_name(c.variant)},
              {"tau_rule", c.tau_rule == TauRule::Standard ? "standard" : "paper"},
              {"log_weights", c.log_weights},
              {"log_mmd", c.log_mmd},
              {"warm_stats", c.warm_stats}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.C = j.at("C");
  c.mu = j.at("mu");
  c.time_window = j.at("time_window");
  c.beta_override = j.at("beta_override");
  c.theorem_beta_rule = j.at("theorem_beta_rule");
  c.trials = j.at("trials");
  c.seed = j.at("seed");
  c.variant = parse_variant(j.at("variant"));
  c.tau_rule = j.at("tau_rule") == "standard" ? TauRule::Standard : TauRule::ScoreGap;
  c.log_weights = j.at("log_weights");
  c.log_mmd = j.at("log_mmd");
  c.warm_stats = j.at("warm_stats");
  return c;
}

}  // namespace

void write_report(const RunReport& report, const std::string& path,
                  bool include_timings) {
  json j;
  j["config"] = config_to_json(report.config);
  j["num_domains"] = report.num_domains;
  j["stream_length"] = report.stream_length;
  j["summary"] = {{"mean_mistake_rate", report.mean_rate},
                  {"std_mistake_rate", report.std_rate},
                  {"trials", report.trials.size()}};
  j["trials"] = json::array();
  for (const auto& t : report.trials) {
    json jt;
    jt["mistakes"] = t.mistakes;
    jt["mistake_rate"] = t.mistake_rate;
    jt["mistake_seq"] = t.mistake_seq;
    jt["final_u"] = t.final_u;
    jt["final_v"] = t.final_v;
    jt["src_expert_mistakes"] = t.src_expert_mistakes;
    jt["tgt_expert_mistakes"] = t.tgt_expert_mistakes;
    jt["mmd_rounds"] = t.mmd_rounds;
    jt["mmd"] = t.mmd;
    if (report.config.log_weights) {
      jt["weights_u"] = t.weights_u;
      jt["weights_v"] = t.weights_v;
    }
    if (include_timings) jt["wall_seconds"] = t.wall_seconds;
    j["trials"].push_back(std::move(jt));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report file: " + path);
  out << j.dump(2) << '\n';
}

RunReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report file: " + path);
  json j;
  in >> j;
  RunReport r;
  r.config = config_from_json(j.at("config"));
  r.num_domains = j.at("num_domains");
  r.stream_length = j.at("stream_length");
  r.mean_rate = j.at("summary").at("mean_mistake_rate");
  r.std_rate = j.at("summary").at("std_mistake_rate");
  for (const auto& jt : j.at("trials")) {
    TrialReport t;
    t.mistakes = jt.at("mistakes");
    t.mistake_rate = jt.at("mistake_rate");
    t.mistake_seq = jt.at("mistake_seq").get<std::vector<std::uint8_t>>();
    t.final_u = jt.at("final_u").get<std::vector<double>>();
    t.final_v = jt.at("final_v").get<std::vector<double>>();
    t.src_expert_mistakes = jt.at("src_expert_mistakes").get<std::vector<long>>();
    t.tgt_expert_mistakes = jt.at("tgt_expert_mistakes").get<std::vector<long>>();
    t.mmd_rounds = jt.at("mmd_rounds").get<std::vector<long>>();
    t.mmd = jt.at("mmd").get<std::vector<std::vector<double>>>();
    if (jt.contains("weights_u")) {
      t.weights_u = jt.at("weights_u").get<std::vector<std::vector<double>>>();
      t.weights_v = jt.at("weights_v").get<std::vector<std::vector<double>>>();
    }
    if (jt.contains("wall_seconds")) t.wall_seconds = jt.at("wall_seconds");
    r.trials.push_back(std::move(t));
  }
  return r;
}

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "mistake_curve") return PlotKind::MistakeCurve;
  if (name == "mmd_curve") return PlotKind::MmdCurve;
  if (name == "weight_curve") return PlotKind::WeightCurve;
  throw std::runtime_error("unknown plot kind: " + name);
}

void emit_plot_data(const RunReport& report, PlotKind kind,
                    const std::string& out_path, bool mean_only) {
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write plot file: " + out_path);
  out.precision(12);
  out << "x,series_name,value\n";

  switch (kind) {
    case PlotKind::MistakeCurve: {
      const long T = report.stream_length;
      if (mean_only) {
        std::vector<double> cum(report.trials.size(), 0.0);
        for (long t = 1; t <= T; ++t) {
          double sum = 0.0;
          for (size_t i = 0; i < report.trials.size(); ++i) {
            cum[i] += report.trials[i].mistake_seq[t - 1];
            sum += cum[i] / t;
          }
          out << t << ",mean," << sum / report.trials.size() << '\n';
        }
      } else {
        for (size_t i = 0; i < report.trials.size(); ++i) {
          long cum = 0;
          for (long t = 1; t <= T; ++t) {
            cum += report.trials[i].mistake_seq[t - 1];
            out << t << ",trial_" << i << ','
                << static_cast<double>(cum) / t << '\n';
          }
        }
      }
      break;
    }
    case PlotKind::MmdCurve: {
      bool any = false;
      for (size_t i = 0; i < report.trials.size(); ++i) {
        const auto& tr = report.trials[i];
        for (size_t dmn = 0; dmn < tr.mmd.size(); ++dmn) {
          for (size_t c = 0; c < tr.mmd[dmn].size(); ++c) {
            out << tr.mmd_rounds[c] << ",trial_" << i << "_domain_" << dmn
                << ',' << tr.mmd[dmn][c] << '\n';
            any = true;
          }
        }
      }
      if (!any) throw std::runtime_error("report has no MMD series (run with --log-mmd)");
      break;
    }
    case PlotKind::WeightCurve: {
      bool any = false;
      for (size_t i = 0; i < report.trials.size(); ++i) {
        const auto& tr = report.trials[i];
        for (size_t t = 0; t < tr.weights_u.size(); ++t) {
          for (size_t dmn = 0; dmn < tr.weights_u[t].size(); ++dmn) {
            out << t + 1 << ",trial_" << i << "_u" << dmn << ','
                << tr.weights_u[t][dmn] << '\n';
            out << t + 1 << ",trial_" << i << "_v" << dmn << ','
                << tr.weights_v[t][dmn] << '\n';
            any = true;
          }
        }
      }
      if (!any) throw std::runtime_error("report has no weight series (run with --log-weights)");
      break;
    }
  }
}

}  // namespace otl
