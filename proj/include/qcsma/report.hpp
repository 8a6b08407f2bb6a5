#ifndef QCSMA_REPORT_HPP
#define QCSMA_REPORT_HPP

#include <string>
#include <vector>

#include "qcsma/sim_engine.hpp"

namespace qcsma {

/// One metrics.csv row: a single run at a single parameter point.
struct MetricsRow {
    std::string algorithm;
    double rho_or_eps;
    std::uint64_t seed;
    long long horizon;
    double avg_queue;
    double slope;
    bool unstable;
};

std::vector<MetricsRow> metrics_rows(const std::string& algorithm, double rho_or_eps,
                                     long long horizon, const Metrics& m);

/// Header: algorithm,rho_or_eps,seed,horizon,avg_queue,slope,unstable_flag
std::string metrics_csv(const std::vector<MetricsRow>& rows);

/// Across-run mean of the per-slot mean queue, point by point.
std::vector<SlotTracePoint> mean_trace(const Metrics& m);

/// Header: t,mean_queue (single experiment).
std::string samplepath_csv(const std::vector<SlotTracePoint>& trace);

/// Header: algorithm,rho_or_eps,t,mean_queue (sweeps).
struct LabeledTrace {
    std::string algorithm;
    double rho_or_eps;
    std::vector<SlotTracePoint> trace;
};
std::string samplepath_sweep_csv(const std::vector<LabeledTrace>& traces);

/// Minimal self-contained SVG line chart.
struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<ChartSeries>& series,
                           bool log_y = false);

void write_file(const std::string& path, const std::string& content);

}  // namespace qcsma

#endif  // QCSMA_REPORT_HPP
