#include "soclattice/config.hpp"

#include "soclattice/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace soclattice {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text, int line) {
    const std::string t = trim(text);
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (!t.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
        throw ParseError(line, "cannot parse '" + t + "' as a number for " + key);
    return value;
}

int parse_int(const std::string& key, const std::string& text, int line) {
    const std::string t = trim(text);
    int value = 0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (!t.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (t.empty() || ec != std::errc() || ptr != end)
        throw ParseError(line, "cannot parse '" + t + "' as an integer for " + key);
    return value;
}

Spin parse_spin(const std::string& text, int line) {
    const std::string t = trim(text);
    if (t == "up" || t == "u") return Spin::up;
    if (t == "down" || t == "d") return Spin::down;
    throw ParseError(line, "spin must be 'up' or 'down', got '" + t + "'");
}

double positive(const std::string& key, double value, int line) {
    if (!(value > 0.0)) throw ParseError(line, key + " must be positive");
    return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    return parts;
}

std::vector<InitialAmplitude> parse_amplitudes(const std::string& text, int line) {
    std::vector<InitialAmplitude> out;
    for (const std::string& entry : split(text, ';')) {
        if (entry.empty()) continue;
        std::istringstream fields(entry);
        std::vector<std::string> f;
        for (std::string w; fields >> w;) f.push_back(w);
        if (f.size() < 3 || f.size() > 4)
            throw ParseError(line, "initial_amplitudes entries are 'site spin re [im]', got '" +
                                       entry + "'");
        InitialAmplitude a;
        a.site = parse_int("initial_amplitudes", f[0], line);
        a.spin = parse_spin(f[1], line);
        const double re = parse_double("initial_amplitudes", f[2], line);
        const double im = f.size() == 4 ? parse_double("initial_amplitudes", f[3], line) : 0.0;
        a.amplitude = {re, im};
        out.push_back(a);
    }
    if (out.empty()) throw ParseError(line, "initial_amplitudes is empty");
    return out;
}

}  // namespace

std::string to_string(RunKind kind) {
    switch (kind) {
        case RunKind::evolve: return "evolve";
        case RunKind::spectrum: return "spectrum";
        case RunKind::chi: return "chi";
        case RunKind::effective: return "effective";
        case RunKind::validity: return "validity";
        case RunKind::levels: return "levels";
    }
    return "evolve";
}

RunKind run_kind_from_string(const std::string& name) {
    for (RunKind k : {RunKind::evolve, RunKind::spectrum, RunKind::chi, RunKind::effective,
                      RunKind::validity, RunKind::levels})
        if (to_string(k) == name) return k;
    throw InvalidArgument("unknown run kind '" + name + "'");
}

LatticeParams ExperimentConfig::resolved_params(std::optional<double> omega) const {
    LatticeParams p = params;
    if (omega) p.drive_frequency = *omega;
    if (drive_ratio) p.drive_amplitude = *drive_ratio * p.drive_frequency;
    if (impurity_ratio) p.impurity = *impurity_ratio * p.drive_frequency;
    if (zeeman_ratio) p.zeeman = *zeeman_ratio * p.drive_frequency;
    return p;
}

SpinorWavefunction ExperimentConfig::initial_state(const LatticeParams& p) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(p.dimension());
    for (const InitialAmplitude& a : initial) {
        if (a.site < -p.half_width() || a.site > p.half_width())
            throw InvalidArgument("initial state site " + std::to_string(a.site) +
                                  " outside the lattice");
        v[state_index(p, a.site, a.spin)] += a.amplitude;
    }
    const double norm = v.norm();
    if (!(norm > 0.0)) throw InvalidArgument("initial state has zero norm");
    return SpinorWavefunction(p, v / norm);
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& value,
                   int line) {
    const std::string key = trim(raw_key);
    auto num = [&] { return parse_double(key, value, line); };
    auto integer = [&] { return parse_int(key, value, line); };
    LatticeParams& p = cfg.params;

    if (key == "n_sites" || key == "N") {
        const int n = integer();
        if (n < 3 || n % 2 == 0) throw ParseError(line, "n_sites must be odd and >= 3");
        p.n_sites = n;
    } else if (key == "hopping" || key == "v") {
        p.hopping = positive(key, num(), line);
    } else if (key == "alpha" || key == "soc_angle") {
        p.soc_angle = num();
    } else if (key == "zeeman" || key == "Omega") {
        p.zeeman = num();
        cfg.zeeman_ratio.reset();
    } else if (key == "impurity" || key == "eps0") {
        p.impurity = num();
        cfg.impurity_ratio.reset();
    } else if (key == "drive_amplitude" || key == "F") {
        p.drive_amplitude = num();
        cfg.drive_ratio.reset();
    } else if (key == "drive_frequency" || key == "omega") {
        p.drive_frequency = positive(key, num(), line);
    } else if (key == "drive_ratio" || key == "F_over_omega") {
        cfg.drive_ratio = num();
    } else if (key == "impurity_ratio" || key == "eps0_over_omega") {
        cfg.impurity_ratio = num();
    } else if (key == "zeeman_ratio" || key == "Omega_over_omega") {
        cfg.zeeman_ratio = num();
    } else if (key == "initial_site") {
        cfg.initial = {InitialAmplitude{integer(), cfg.initial.front().spin, 1.0}};
    } else if (key == "initial_spin") {
        cfg.initial = {InitialAmplitude{cfg.initial.front().site, parse_spin(value, line), 1.0}};
    } else if (key == "initial_amplitudes") {
        cfg.initial = parse_amplitudes(value, line);
    } else if (key == "run") {
        try {
            cfg.run = run_kind_from_string(trim(value));
        } catch (const InvalidArgument& e) {
            throw ParseError(line, e.what());
        }
    } else if (key == "t_max") {
        cfg.t_max = positive(key, num(), line);
    } else if (key == "steps_per_period") {
        const int n = integer();
        if (n < 1) throw ParseError(line, "steps_per_period must be positive");
        cfg.integrator.steps_per_period = n;
    } else if (key == "samples_per_period") {
        const int n = integer();
        if (n < 1) throw ParseError(line, "samples_per_period must be positive");
        cfg.integrator.samples_per_period = n;
    } else if (key == "frame") {
        const std::string f = trim(value);
        if (f == "rotating")
            cfg.integrator.frame = IntegrationFrame::rotating;
        else if (f == "lab")
            cfg.integrator.frame = IntegrationFrame::lab;
        else
            throw ParseError(line, "frame must be 'rotating' or 'lab'");
    } else if (key == "sweep_axis") {
        try {
            cfg.sweep_axis = sweep_axis_from_string(trim(value));
        } catch (const InvalidArgument& e) {
            throw ParseError(line, e.what());
        }
    } else if (key == "sweep_lo") {
        cfg.sweep_lo = num();
    } else if (key == "sweep_hi") {
        cfg.sweep_hi = num();
    } else if (key == "sweep_points") {
        const int n = integer();
        if (n < 1) throw ParseError(line, "sweep_points must be positive");
        cfg.sweep_points = n;
    } else if (key == "omega_lo") {
        cfg.omega_lo = positive(key, num(), line);
    } else if (key == "omega_hi") {
        cfg.omega_hi = positive(key, num(), line);
    } else if (key == "omega_points") {
        const int n = integer();
        if (n < 1) throw ParseError(line, "omega_points must be positive");
        cfg.omega_points = n;
    } else if (key == "averaging_window" || key == "delta_t") {
        cfg.averaging_window = positive(key, num(), line);
    } else if (key == "degeneracy_tol") {
        cfg.degeneracy_tol = positive(key, num(), line);
    } else if (key == "sites") {
        std::vector<int> sites;
        for (const std::string& s : split(value, ','))
            if (!s.empty()) sites.push_back(parse_int(key, s, line));
        if (sites.empty()) throw ParseError(line, "sites list is empty");
        cfg.sites = sites;
    } else if (key == "output" || key == "output_dir") {
        cfg.output_dir = trim(value);
    } else if (key == "name") {
        const std::string n = trim(value);
        if (n.empty()) throw ParseError(line, "name is empty");
        cfg.name = n;
    } else {
        throw ParseError(line, "unknown key '" + key + "'");
    }
}

void validate_config(const ExperimentConfig& cfg) {
    try {
        const LatticeParams p = cfg.resolved_params();
        p.validate();
        cfg.integrator.validate();
        for (int s : cfg.sites)
            if (s < -p.half_width() || s > p.half_width())
                throw InvalidArgument("output site " + std::to_string(s) + " outside the lattice");
        (void)cfg.initial_state(p);
        if (cfg.run == RunKind::spectrum || cfg.run == RunKind::chi) {
            if (cfg.sweep_points < 2) throw InvalidArgument("sweep_points must be >= 2");
            if (!(cfg.sweep_hi > cfg.sweep_lo)) throw InvalidArgument("need sweep_hi > sweep_lo");
        }
        if (cfg.run == RunKind::validity && cfg.omega_points > 1 && !(cfg.omega_hi > cfg.omega_lo))
            throw InvalidArgument("need omega_hi > omega_lo");
    } catch (const InvalidArgument& e) {
        throw ParseError(0, e.what());
    }
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
        const std::string key = trim(content.substr(0, eq));
        if (key.empty()) throw ParseError(line, "missing key");
        apply_setting(cfg, key, content.substr(eq + 1), line);
    }
    validate_config(cfg);
    return cfg;
}

}  // namespace soclattice
