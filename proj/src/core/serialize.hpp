#ifndef CSMAHS_CORE_SERIALIZE_HPP
#define CSMAHS_CORE_SERIALIZE_HPP

#include <string>

#include "metrics.hpp"
#include "simulator.hpp"
#include "solver.hpp"

namespace csmahs {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// Full metric bundle of a solved model.  Degenerate regimes are reported
// with goodput 0 and the flag set instead of failing the whole bundle.
struct MetricsReport {
    ModelParams params;
    double p_of = 0.0;
    double pi_idle = 0.0, pi_tx = 0.0, pi_rb = 0.0;
    TimeMetrics time;
    InterferenceReport interference;
    bool degenerate = false;
    SolveDiagnostics diagnostics;
    double goodput = 0.0;
};

MetricsReport compute_metrics_report(const SolvedModel& model);

std::string to_json_string(const MetricsReport& report);
std::string to_json_string(const SimReport& report);

} // namespace csmahs

#endif
