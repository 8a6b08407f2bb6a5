#include "qcsma/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace qcsma {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

struct KeyValue {
    std::string value;
    int line;
};

using Section = std::map<std::string, KeyValue>;

struct RawConfig {
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_line;
};

RawConfig tokenize(std::string_view text) {
    RawConfig raw;
    std::string current;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(line_no, "unterminated section header");
            current = trim(t.substr(1, t.size() - 2));
            if (current.empty()) throw ConfigError(line_no, "empty section name");
            if (raw.sections.count(current))
                throw ConfigError(line_no, "duplicate section [" + current + "]");
            raw.sections[current];
            raw.section_line[current] = line_no;
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
        if (current.empty()) throw ConfigError(line_no, "key outside any section");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "empty key");
        auto [it, inserted] = raw.sections[current].emplace(key, KeyValue{value, line_no});
        if (!inserted) throw ConfigError(line_no, "duplicate key '" + key + "'");
    }
    return raw;
}

/// Pulls typed values out of one section and rejects leftovers.
class SectionReader {
public:
    SectionReader(const RawConfig& raw, const std::string& name) : name_(name) {
        auto it = raw.sections.find(name);
        if (it == raw.sections.end()) throw ConfigError(0, "missing [" + name + "] section");
        entries_ = it->second;
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string take_string(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError(0, "missing key '" + key + "' in [" + name_ + "]");
        std::string v = it->second.value;
        entries_.erase(it);
        return v;
    }

    std::string take_string(const std::string& key, const std::string& fallback) {
        return has(key) ? take_string(key) : fallback;
    }

    double take_double(const std::string& key) {
        auto [v, line] = take_raw(key);
        if (v == "inf") return std::numeric_limits<double>::infinity();
        try {
            std::size_t used = 0;
            double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError(line, "'" + v + "' is not a number for key '" + key + "'");
        }
    }

    double take_double(const std::string& key, double fallback) {
        return has(key) ? take_double(key) : fallback;
    }

    long long take_int(const std::string& key) {
        auto [v, line] = take_raw(key);
        try {
            std::size_t used = 0;
            long long i = std::stoll(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return i;
        } catch (const std::exception&) {
            throw ConfigError(line, "'" + v + "' is not an integer for key '" + key + "'");
        }
    }

    long long take_int(const std::string& key, long long fallback) {
        return has(key) ? take_int(key) : fallback;
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void finish() const {
        if (!entries_.empty()) {
            const auto& [key, kv] = *entries_.begin();
            throw ConfigError(kv.line, "unknown key '" + key + "' in [" + name_ + "]");
        }
    }

private:
    std::pair<std::string, int> take_raw(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError(0, "missing key '" + key + "' in [" + name_ + "]");
        auto kv = it->second;
        entries_.erase(it);
        return {kv.value, kv.line};
    }

    std::string name_;
    Section entries_;
};

std::string format_double(double v) {
    if (v == std::numeric_limits<double>::infinity()) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    if (std::stod(buf) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

WeightKind parse_weight_kind(const std::string& s, int line) {
    if (s == "linear") return WeightKind::linear;
    if (s == "log_scaled") return WeightKind::log_scaled;
    if (s == "loglog") return WeightKind::loglog;
    throw ConfigError(line, "unknown weight kind '" + s + "'");
}

std::string weight_kind_name(WeightKind k) {
    switch (k) {
        case WeightKind::linear: return "linear";
        case WeightKind::log_scaled: return "log_scaled";
        case WeightKind::loglog: return "loglog";
    }
    return "?";
}

}  // namespace

SchedulerConfig ParsedConfig::scheduler_for(Algorithm a) const {
    SchedulerConfig c = scheduler;
    c.algorithm = a;
    if (a == Algorithm::hybrid) c.W1 = hybrid_W1;
    return c;
}

ExperimentConfig ParsedConfig::experiment_for(Algorithm a) const {
    ExperimentConfig e;
    e.topology_name = topology_name();
    e.scheduler = scheduler_for(a);
    e.traffic = traffic;
    e.horizon = horizon;
    e.runs = runs;
    e.seed = seed;
    e.record_interval = record_interval;
    return e;
}

ConflictGraph ParsedConfig::build_graph() const {
    switch (topology.kind) {
        case TopologySpec::Kind::grid24: return grid24();
        case TopologySpec::Kind::ring9: return ring9(topology.k);
        case TopologySpec::Kind::file: return load_topology_file(topology.path);
    }
    throw ConfigError(0, "unknown topology kind");
}

std::string ParsedConfig::topology_name() const {
    switch (topology.kind) {
        case TopologySpec::Kind::grid24: return "grid24";
        case TopologySpec::Kind::ring9: return "ring9";
        case TopologySpec::Kind::file: return topology.path;
    }
    return "?";
}

ParsedConfig parse_config_text(std::string_view text) {
    RawConfig raw = tokenize(text);
    for (const auto& [name, _] : raw.sections)
        if (name != "topology" && name != "scheduler" && name != "traffic" && name != "run")
            throw ConfigError(raw.section_line.at(name), "unknown section [" + name + "]");

    ParsedConfig out;

    {
        SectionReader topo(raw, "topology");
        int kind_line = topo.line_of("kind");
        std::string kind = topo.take_string("kind");
        if (kind == "grid24") {
            out.topology.kind = TopologySpec::Kind::grid24;
        } else if (kind == "ring9") {
            out.topology.kind = TopologySpec::Kind::ring9;
            out.topology.k = int(topo.take_int("k", 2));
            if (out.topology.k < 1) throw ConfigError(kind_line, "interference hops must be >= 1");
        } else if (kind == "file") {
            out.topology.kind = TopologySpec::Kind::file;
            out.topology.path = topo.take_string("path");
        } else {
            throw ConfigError(kind_line, "unknown topology kind '" + kind + "'");
        }
        topo.finish();
    }

    {
        SectionReader sched(raw, "scheduler");
        int algo_line = sched.line_of("algorithm");
        for (const std::string& name : split_ws(sched.take_string("algorithm"))) {
            auto a = algorithm_from_name(name);
            if (!a) throw ConfigError(algo_line, "unknown algorithm '" + name + "'");
            out.algorithms.push_back(*a);
        }
        if (out.algorithms.empty()) throw ConfigError(algo_line, "empty algorithm list");
        out.scheduler.algorithm = out.algorithms.front();
        out.scheduler.W = int(sched.take_int("W", 48));
        out.scheduler.B = int(sched.take_int("B", 3));
        out.scheduler.b = sched.take_double("b", 8.0);
        out.scheduler.W1 = int(sched.take_int("W1", 16));
        out.scheduler.W0 = int(sched.take_int("W0", 5));
        out.hybrid_W1 = int(sched.take_int("hybrid_W1", 14));
        out.scheduler.q0 = sched.take_double("q0", 100.0);
        int weight_line = sched.line_of("weight");
        out.scheduler.weight.kind =
            parse_weight_kind(sched.take_string("weight", "log_scaled"), weight_line);
        out.scheduler.weight.alpha = sched.take_double("alpha", 0.1);
        out.scheduler.p_min = sched.take_double("p_min", 1e-6);
        sched.finish();
        for (Algorithm a : out.algorithms) {
            try {
                out.scheduler_for(a).validate();
            } catch (const DomainError& e) {
                throw ConfigError(algo_line, e.what());
            }
        }
    }

    {
        SectionReader traffic(raw, "traffic");
        int kind_line = traffic.line_of("kind");
        std::string kind = traffic.take_string("kind");
        if (kind == "bernoulli-grid") {
            out.traffic.kind = TrafficSpec::Kind::bernoulli_grid;
            out.traffic.rho = traffic.take_double("rho");
            if (out.traffic.rho < 0.0 || out.traffic.rho > 1.0)
                throw ConfigError(kind_line, "rho must lie in [0,1]");
        } else if (kind == "ring-adversarial") {
            out.traffic.kind = TrafficSpec::Kind::ring_adversarial;
            out.traffic.eps = traffic.take_double("eps");
            if (out.traffic.eps < 0.0 || out.traffic.eps >= 1.0)
                throw ConfigError(kind_line, "eps must lie in [0,1)");
        } else if (kind == "bernoulli" || kind == "poisson") {
            out.traffic.kind =
                kind == "bernoulli" ? TrafficSpec::Kind::bernoulli : TrafficSpec::Kind::poisson;
            int rates_line = traffic.line_of("rates");
            for (const std::string& tok : split_ws(traffic.take_string("rates"))) {
                try {
                    out.traffic.rates.push_back(std::stod(tok));
                } catch (const std::exception&) {
                    throw ConfigError(rates_line, "'" + tok + "' is not a rate");
                }
            }
            if (out.traffic.rates.empty()) throw ConfigError(rates_line, "empty rate list");
        } else {
            throw ConfigError(kind_line, "unknown traffic kind '" + kind + "'");
        }
        traffic.finish();
    }

    {
        SectionReader run(raw, "run");
        out.horizon = run.take_int("horizon");
        out.runs = int(run.take_int("runs"));
        out.seed = std::uint64_t(run.take_int("seed"));
        out.record_interval = run.take_int("record_interval", 100);
        if (out.horizon < 1) throw ConfigError(0, "horizon must be >= 1");
        if (out.runs < 1) throw ConfigError(0, "runs must be >= 1");
        if (out.record_interval < 1) throw ConfigError(0, "record_interval must be >= 1");
        run.finish();
    }

    return out;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string emit_config(const ParsedConfig& c) {
    std::ostringstream os;
    os << "[topology]\n";
    switch (c.topology.kind) {
        case TopologySpec::Kind::grid24:
            os << "kind = grid24\n";
            break;
        case TopologySpec::Kind::ring9:
            os << "kind = ring9\nk = " << c.topology.k << "\n";
            break;
        case TopologySpec::Kind::file:
            os << "kind = file\npath = " << c.topology.path << "\n";
            break;
    }
    os << "\n[scheduler]\n";
    os << "algorithm =";
    for (Algorithm a : c.algorithms) os << " " << algorithm_name(a);
    os << "\n";
    os << "W = " << c.scheduler.W << "\n";
    os << "B = " << c.scheduler.B << "\n";
    os << "b = " << format_double(c.scheduler.b) << "\n";
    os << "W1 = " << c.scheduler.W1 << "\n";
    os << "W0 = " << c.scheduler.W0 << "\n";
    os << "hybrid_W1 = " << c.hybrid_W1 << "\n";
    os << "q0 = " << format_double(c.scheduler.q0) << "\n";
    os << "weight = " << weight_kind_name(c.scheduler.weight.kind) << "\n";
    os << "alpha = " << format_double(c.scheduler.weight.alpha) << "\n";
    os << "p_min = " << format_double(c.scheduler.p_min) << "\n";
    os << "\n[traffic]\n";
    os << "kind = " << traffic_kind_name(c.traffic.kind) << "\n";
    switch (c.traffic.kind) {
        case TrafficSpec::Kind::bernoulli_grid:
            os << "rho = " << format_double(c.traffic.rho) << "\n";
            break;
        case TrafficSpec::Kind::ring_adversarial:
            os << "eps = " << format_double(c.traffic.eps) << "\n";
            break;
        case TrafficSpec::Kind::bernoulli:
        case TrafficSpec::Kind::poisson:
            os << "rates =";
            for (double r : c.traffic.rates) os << " " << format_double(r);
            os << "\n";
            break;
    }
    os << "\n[run]\n";
    os << "horizon = " << c.horizon << "\n";
    os << "runs = " << c.runs << "\n";
    os << "seed = " << c.seed << "\n";
    os << "record_interval = " << c.record_interval << "\n";
    return os.str();
}

ParsedConfig paper_defaults(std::string_view experiment) {
    ParsedConfig c;
    c.scheduler.W = 48;
    c.scheduler.B = 3;
    c.scheduler.b = 8.0;
    c.scheduler.W1 = 16;
    c.scheduler.W0 = 5;
    c.hybrid_W1 = 14;
    c.scheduler.q0 = 100.0;
    c.scheduler.weight = {WeightKind::log_scaled, 0.1};
    c.scheduler.p_min = 1e-6;
    c.horizon = 100000;
    c.runs = 10;
    c.seed = 1;
    c.record_interval = 100;
    if (experiment == "grid") {
        c.topology.kind = TopologySpec::Kind::grid24;
        c.algorithms = {Algorithm::dms, Algorithm::dgms, Algorithm::qcsma, Algorithm::hybrid,
                        Algorithm::gms};
        c.traffic.kind = TrafficSpec::Kind::bernoulli_grid;
        c.traffic.rho = 0.5;
    } else if (experiment == "ring") {
        c.topology.kind = TopologySpec::Kind::ring9;
        c.topology.k = 2;
        c.algorithms = {Algorithm::dms, Algorithm::dgms, Algorithm::qcsma, Algorithm::hybrid,
                        Algorithm::gms, Algorithm::cyclic};
        c.traffic.kind = TrafficSpec::Kind::ring_adversarial;
        c.traffic.eps = 0.09;
    } else {
        throw ConfigError(0, "unknown experiment '" + std::string(experiment) +
                                 "', expected 'grid' or 'ring'");
    }
    c.scheduler.algorithm = c.algorithms.front();
    return c;
}

ConflictGraph load_topology_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    int declared_nodes = -1;
    int khop = -1;
    std::map<int, std::pair<int, int>> links;
    std::vector<std::pair<int, int>> conflicts;

    while (std::getline(in, line)) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::string t = trim(line);
        if (t.empty()) continue;
        auto colon = t.find(':');
        if (colon == std::string::npos) throw ConfigError(line_no, "expected 'key: value'");
        std::string key = trim(t.substr(0, colon));
        std::vector<std::string> args = split_ws(trim(t.substr(colon + 1)));
        try {
            if (key == "nodes") {
                if (args.size() != 1) throw ConfigError(line_no, "nodes takes one value");
                declared_nodes = std::stoi(args[0]);
            } else if (key == "conflict") {
                if (args.size() != 2) throw ConfigError(line_no, "conflict takes two link ids");
                conflicts.push_back({std::stoi(args[0]), std::stoi(args[1])});
            } else if (key == "interference") {
                if (args.size() != 1 || args[0].size() < 5 ||
                    args[0].substr(args[0].size() - 4) != "-hop")
                    throw ConfigError(line_no, "interference must look like '2-hop'");
                khop = std::stoi(args[0].substr(0, args[0].size() - 4));
                if (khop < 1) throw ConfigError(line_no, "hop count must be >= 1");
            } else {
                int id = std::stoi(key);
                if (args.size() != 2) throw ConfigError(line_no, "a link needs two node ids");
                if (links.count(id)) throw ConfigError(line_no, "duplicate link id " + key);
                links[id] = {std::stoi(args[0]), std::stoi(args[1])};
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError(line_no, "malformed line '" + t + "'");
        }
    }

    if (links.empty()) throw ConfigError(0, "topology declares no links");
    int n = int(links.size());
    std::vector<std::pair<int, int>> ordered(n);
    int max_node = 0;
    for (const auto& [id, ends] : links) {
        if (id < 1 || id > n) throw ConfigError(0, "link ids must be 1.." + std::to_string(n));
        ordered[id - 1] = ends;
        max_node = std::max({max_node, ends.first, ends.second});
    }
    int node_count = declared_nodes > 0 ? declared_nodes : max_node;

    if (khop >= 1 && !conflicts.empty())
        throw ConfigError(0, "give either explicit conflicts or an interference model, not both");
    if (khop < 1 && conflicts.empty())
        throw ConfigError(0, "topology needs 'interference: k-hop' or explicit conflict pairs");

    if (khop >= 1) {
        NodeGraph ng;
        ng.node_count = node_count;
        ng.edges = ordered;
        try {
            return build_khop_conflicts(ng, ordered, khop);
        } catch (const TopologyError& e) {
            throw ConfigError(0, e.what());
        }
    }

    for (auto [u, v] : ordered)
        if (u < 1 || v < 1 || u > node_count || v > node_count)
            throw ConfigError(0, "link endpoint outside node range 1.." + std::to_string(node_count));
    ConflictGraph g(n);
    for (auto [i, j] : conflicts) {
        if (i < 1 || j < 1 || i > n || j > n)
            throw ConfigError(0, "conflict references unknown link");
        try {
            g.add_conflict(i - 1, j - 1);
        } catch (const TopologyError& e) {
            throw ConfigError(0, e.what());
        }
    }
    g.check_invariants();
    return g;
}

ConflictGraph load_topology_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open topology file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_topology_text(ss.str());
}

}  // namespace qcsma
