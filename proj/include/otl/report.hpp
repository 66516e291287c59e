#pragma once

#include <string>

#include "otl/runner.hpp"

namespace otl {

// Report JSON: config echo, per-trial arrays, summary block. Timings are
// excluded unless asked for so identical runs produce identical bytes.
void write_report(const RunReport& report, const std::string& path,
                  bool include_timings = false);
RunReport read_report(const std::string& path);

enum class PlotKind { MistakeCurve, MmdCurve, WeightCurve };
PlotKind parse_plot_kind(const std::string& name);

// CSV with header "x,series_name,value"; one row per sample point.
// mean_only collapses the per-trial mistake curves to their mean.
void emit_plot_data(const RunReport& report, PlotKind kind,
                    const std::string& out_path, bool mean_only = false);

}  // namespace otl
