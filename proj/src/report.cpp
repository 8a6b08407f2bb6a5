#include "qcsma/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qcsma {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::vector<MetricsRow> metrics_rows(const std::string& algorithm, double rho_or_eps,
                                     long long horizon, const Metrics& m) {
    std::vector<MetricsRow> rows;
    for (const RunResult& r : m.runs)
        rows.push_back({algorithm, rho_or_eps, r.seed, horizon, r.avg_queue, r.fit.slope,
                        r.fit.unstable});
    return rows;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
    std::ostringstream os;
    os << "algorithm,rho_or_eps,seed,horizon,avg_queue,slope,unstable_flag\n";
    for (const auto& r : rows)
        os << r.algorithm << "," << num(r.rho_or_eps) << "," << r.seed << "," << r.horizon << ","
           << num(r.avg_queue) << "," << num(r.slope) << "," << (r.unstable ? 1 : 0) << "\n";
    return os.str();
}

std::vector<SlotTracePoint> mean_trace(const Metrics& m) {
    std::vector<SlotTracePoint> out;
    if (m.runs.empty()) return out;
    std::size_t len = m.runs.front().trace.size();
    for (const auto& r : m.runs) len = std::min(len, r.trace.size());
    for (std::size_t k = 0; k < len; ++k) {
        SlotTracePoint p = m.runs.front().trace[k];
        double q = 0.0;
        int sched = 0;
        for (const auto& r : m.runs) {
            q += r.trace[k].mean_queue;
            sched += r.trace[k].schedule_size;
        }
        p.mean_queue = q / double(m.runs.size());
        p.schedule_size = sched / int(m.runs.size());
        out.push_back(p);
    }
    return out;
}

std::string samplepath_csv(const std::vector<SlotTracePoint>& trace) {
    std::ostringstream os;
    os << "t,mean_queue\n";
    for (const auto& p : trace) os << p.t << "," << num(p.mean_queue) << "\n";
    return os.str();
}

std::string samplepath_sweep_csv(const std::vector<LabeledTrace>& traces) {
    std::ostringstream os;
    os << "algorithm,rho_or_eps,t,mean_queue\n";
    for (const auto& lt : traces)
        for (const auto& p : lt.trace)
            os << lt.algorithm << "," << num(lt.rho_or_eps) << "," << p.t << ","
               << num(p.mean_queue) << "\n";
    return os.str();
}

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<ChartSeries>& series,
                           bool log_y) {
    const double W = 840, H = 520, left = 70, right = 170, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

    double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            double yy = log_y ? std::log10(std::max(y, 1e-3)) : y;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, yy);
            ymax = std::max(ymax, yy);
        }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    ymin = std::min(ymin, 0.0);
    ymax += (ymax - ymin) * 0.05;

    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) {
        double yy = log_y ? std::log10(std::max(y, 1e-3)) : y;
        return top + ph - (yy - ymin) / (ymax - ymin) * ph;
    };

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << W / 2 << "' y='22' text-anchor='middle' font-size='16'>" << title
       << "</text>\n";
    os << "<line x1='" << left << "' y1='" << top + ph << "' x2='" << left + pw << "' y2='"
       << top + ph << "' stroke='black'/>\n";
    os << "<line x1='" << left << "' y1='" << top << "' x2='" << left << "' y2='" << top + ph
       << "' stroke='black'/>\n";

    for (int k = 0; k <= 5; ++k) {
        double xv = xmin + (xmax - xmin) * k / 5.0;
        double yv = ymin + (ymax - ymin) * k / 5.0;
        os << "<text x='" << px(xv) << "' y='" << top + ph + 18
           << "' text-anchor='middle' font-size='11'>" << num(xv) << "</text>\n";
        double y_display = log_y ? std::pow(10.0, yv) : yv;
        os << "<text x='" << left - 6 << "' y='" << top + ph - ph * k / 5.0 + 4
           << "' text-anchor='end' font-size='11'>" << num(y_display) << "</text>\n";
        os << "<line x1='" << left << "' y1='" << top + ph - ph * k / 5.0 << "' x2='" << left + pw
           << "' y2='" << top + ph - ph * k / 5.0 << "' stroke='#dddddd'/>\n";
    }
    os << "<text x='" << left + pw / 2 << "' y='" << H - 10
       << "' text-anchor='middle' font-size='13'>" << x_label << "</text>\n";
    os << "<text x='18' y='" << top + ph / 2 << "' text-anchor='middle' font-size='13' "
       << "transform='rotate(-90 18 " << top + ph / 2 << ")'>" << y_label << "</text>\n";

    int c = 0;
    for (const auto& s : series) {
        const char* color = colors[c % 8];
        os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.8' points='";
        for (auto [x, y] : s.points) os << px(x) << "," << py(y) << " ";
        os << "'/>\n";
        os << "<text x='" << left + pw + 12 << "' y='" << top + 16 + 18 * c
           << "' font-size='12' fill='" << color << "'>" << s.label << "</text>\n";
        ++c;
    }
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

}  // namespace qcsma
