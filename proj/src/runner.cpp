#include "soclattice/runner.hpp"

#include "soclattice/errors.hpp"
#include "soclattice/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace soclattice {

namespace {

std::string spin_name(Spin s) { return s == Spin::up ? "up" : "down"; }

std::string column(const std::string& prefix, const BasisLabel& b) {
    return prefix + "_" + std::to_string(b.site) + "_" + spin_name(b.spin);
}

std::filesystem::path write_file(const ExperimentConfig& cfg, const std::string& suffix,
                                 const std::string& content) {
    std::filesystem::create_directories(cfg.output_dir);
    const std::filesystem::path path =
        std::filesystem::path(cfg.output_dir) / (cfg.name + "_" + suffix + ".csv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw InvalidArgument("failed writing " + path.string());
    return path;
}

Spin flip(Spin s) { return s == Spin::up ? Spin::down : Spin::up; }

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return g;
}

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<int>& sites) {
    std::ostringstream out;
    out << "t";
    for (int s : sites)
        for (Spin sp : {Spin::up, Spin::down}) out << "," << column("P", BasisLabel{s, sp});
    out << ",msd\n";
    const ObservableSeries msd = mean_square_displacement(traj);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << format_number(traj.times[i]);
        for (int s : sites)
            for (Spin sp : {Spin::up, Spin::down})
                out << "," << format_number(std::norm(traj.states[i][state_index(traj.params, s, sp)]));
        out << "," << format_number(msd.values[i]) << "\n";
    }
    return out.str();
}

std::string sweep_csv(const SweepTable& table) {
    std::ostringstream out;
    out << to_string(table.axis);
    const std::size_t levels =
        table.points.empty() ? 0 : table.points.front().spectrum.quasienergies.size();
    for (std::size_t k = 1; k <= levels; ++k) out << ",eps_" << k;
    out << ",miniband_width,min_gap\n";
    for (const SweepPoint& pt : table.points) {
        out << format_number(pt.axis_value);
        for (double e : pt.spectrum.quasienergies) out << "," << format_number(e);
        out << "," << format_number(pt.diagnostics.miniband_width) << ","
            << format_number(pt.diagnostics.min_gap) << "\n";
    }
    return out.str();
}

std::string chi_csv(const std::vector<ChiRow>& rows) {
    std::ostringstream out;
    out << "F_over_omega,chi1,chi2,chi3,chi4,chi5,chi6,P,certificate\n";
    for (const ChiRow& r : rows) {
        out << format_number(r.drive_ratio);
        for (double c : r.chi.values) out << "," << format_number(c);
        out << "," << r.chi.truncation << "," << format_number(r.chi.last_term_magnitude) << "\n";
    }
    return out.str();
}

std::string validity_csv(const std::vector<ValidityRow>& rows) {
    std::ostringstream out;
    out << "omega,S1,S2\n";
    for (const ValidityRow& r : rows)
        out << format_number(r.omega) << "," << format_number(r.averages.s1) << ","
            << format_number(r.averages.s2) << "\n";
    return out.str();
}

std::string effective_csv(const EffectiveSeries& series) {
    std::ostringstream out;
    out << "t";
    for (const BasisLabel& b : series.basis) out << "," << column("Peff", b);
    out << "\n";
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        out << format_number(series.times[i]);
        for (double p : series.probabilities[i]) out << "," << format_number(p);
        out << "\n";
    }
    return out.str();
}

std::string levels_csv(const std::vector<LevelComparison>& rows) {
    std::ostringstream out;
    out << "label,analytic,numerical,difference,impurity\n";
    for (const LevelComparison& r : rows)
        out << r.label << "," << format_number(r.analytic) << "," << format_number(r.numerical)
            << "," << format_number(r.numerical - r.analytic) << "," << (r.impurity ? 1 : 0)
            << "\n";
    return out.str();
}

EffectiveSeries effective_prediction(const ExperimentConfig& cfg, const std::vector<double>& times) {
    const LatticeParams p = cfg.resolved_params();
    if (cfg.initial.size() != 1)
        throw InvalidArgument("effective comparison needs a single basis initial state");
    const BasisLabel init{cfg.initial.front().site, cfg.initial.front().spin};
    const ResonanceDecomposition dec = decompose_resonance(p);
    const Spin edge = init.site != 0 || is_spin_conserving(p) ? init.spin : flip(init.spin);

    EffectiveSeries series;
    series.times = times;
    auto index_of = [&](const std::array<BasisLabel, 3>& basis) {
        for (int i = 0; i < 3; ++i)
            if (basis[i] == init) return i;
        throw InvalidArgument("initial state " + to_string(init) +
                              " is outside the effective three-site basis");
    };

    if (std::abs(dec.u_prime) < 1e-9) {
        const ThreeSiteModel model = resonant_three_site(p, dec, edge);
        series.basis = model.basis;
        const int idx = index_of(model.basis);
        for (double t : times) series.probabilities.push_back(three_site_evolve(model, idx, t));
    } else {
        const ChiCoefficients chi = chi_coefficients(p.drive_ratio(), dec);
        const SecondOrderModel model = second_order_model(p, dec, chi, edge);
        series.basis = model.basis;
        SlowAmplitudes a0;
        a0.amplitudes[index_of(model.basis)] = 1.0;
        for (double t : times) {
            const SlowAmplitudes a = evolve_slow(model, a0, p.drive_frequency * t);
            series.probabilities.push_back(
                {std::norm(a.amplitudes[0]), std::norm(a.amplitudes[1]), std::norm(a.amplitudes[2])});
        }
    }
    return series;
}

std::vector<ValidityRow> validity_sweep(const ExperimentConfig& cfg, int threads) {
    const std::vector<double> omegas = grid(cfg.omega_lo, cfg.omega_hi, cfg.omega_points);
    std::vector<ValidityRow> rows(omegas.size());
    parallel_for(omegas.size(), threads, [&](std::size_t i) {
        const LatticeParams p = cfg.resolved_params(omegas[i]);
        const Trajectory traj =
            evolve(cfg.initial_state(p), 0.0, cfg.averaging_window, cfg.integrator, p);
        rows[i] = {omegas[i], validity_averages(traj, cfg.averaging_window)};
    });
    return rows;
}

std::vector<std::filesystem::path> run(const ExperimentConfig& cfg, int threads) {
    validate_config(cfg);
    const LatticeParams p = cfg.resolved_params();
    std::vector<std::filesystem::path> files;

    switch (cfg.run) {
        case RunKind::evolve: {
            const Trajectory traj = evolve(cfg.initial_state(p), 0.0, cfg.t_max, cfg.integrator, p);
            files.push_back(write_file(cfg, "trajectory", trajectory_csv(traj, cfg.sites)));
            break;
        }
        case RunKind::spectrum: {
            const SweepTable table =
                spectrum_sweep(p, cfg.sweep_axis, cfg.sweep_lo, cfg.sweep_hi, cfg.sweep_points,
                               cfg.integrator, cfg.degeneracy_tol * p.drive_frequency, threads);
            files.push_back(write_file(cfg, "spectrum", sweep_csv(table)));
            break;
        }
        case RunKind::chi: {
            const ResonanceDecomposition dec = decompose_resonance(p);
            std::vector<ChiRow> rows;
            for (double x : grid(cfg.sweep_lo, cfg.sweep_hi, cfg.sweep_points))
                rows.push_back({x, chi_coefficients(x, dec)});
            files.push_back(write_file(cfg, "chi", chi_csv(rows)));
            break;
        }
        case RunKind::effective: {
            const Trajectory traj = evolve(cfg.initial_state(p), 0.0, cfg.t_max, cfg.integrator, p);
            const EffectiveSeries eff = effective_prediction(cfg, traj.times);
            files.push_back(write_file(cfg, "trajectory", trajectory_csv(traj, cfg.sites)));
            files.push_back(write_file(cfg, "effective", effective_csv(eff)));
            break;
        }
        case RunKind::validity: {
            files.push_back(write_file(cfg, "validity", validity_csv(validity_sweep(cfg, threads))));
            break;
        }
        case RunKind::levels: {
            const ResonanceDecomposition dec = decompose_resonance(p);
            const ChiCoefficients chi = chi_coefficients(p.drive_ratio(), dec);
            const QuasienergySpectrum spec =
                quasienergies(monodromy(p, cfg.integrator, threads), p.drive_frequency);
            const auto rows = compare_levels(spec, analytic_quasienergies(p, dec, chi),
                                             cfg.degeneracy_tol * p.drive_frequency);
            files.push_back(write_file(cfg, "levels", levels_csv(rows)));
            break;
        }
    }
    return files;
}

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
// first collapse points quoted for the two hopping kinds
constexpr double kCollapseConserving = 2.405;
constexpr double kCollapseFlipping = 3.8317;

ExperimentConfig figure_base(const std::string& name, bool flipping, double impurity_ratio) {
    ExperimentConfig c;
    c.name = name;
    c.params.soc_angle = flipping ? kHalfPi : 0.0;
    c.params.drive_frequency = 20.0;
    c.params.hopping = 1.0;
    c.params.n_sites = 21;
    c.zeeman_ratio = 1.0;
    c.impurity_ratio = impurity_ratio;
    c.drive_ratio = flipping ? kCollapseFlipping : kCollapseConserving;
    return c;
}

}  // namespace

std::vector<std::string> figure_names() {
    return {"figure1a", "figure1b", "figure1c", "figure1d", "figure2a", "figure2b",
            "figure3a", "figure3b", "figure3c", "figure3d", "figure4a", "figure4b",
            "figure5a", "figure5b", "figure6a", "figure6b", "figure7a", "figure7b"};
}

std::vector<ExperimentConfig> figure_recipe(const std::string& name) {
    if (name.size() != 8 || name.rfind("figure", 0) != 0)
        throw InvalidArgument("unknown figure recipe '" + name + "'");
    const char fig = name[6];
    const char panel = name[7];

    // panels a/b: spin-conserving, c/d: spin-flipping; a/c resonant, b/d off-resonant
    auto four_panel = [&](bool& flipping, double& ratio) {
        if (panel < 'a' || panel > 'd') throw InvalidArgument("unknown figure recipe '" + name + "'");
        flipping = panel == 'c' || panel == 'd';
        ratio = (panel == 'a' || panel == 'c') ? 1.0 : 1.2;
    };
    // panels a/b: spin-conserving / spin-flipping
    auto two_panel = [&]() {
        if (panel != 'a' && panel != 'b') throw InvalidArgument("unknown figure recipe '" + name + "'");
        return panel == 'b';
    };

    switch (fig) {
        case '1': {
            bool flipping;
            double ratio;
            four_panel(flipping, ratio);
            ExperimentConfig c = figure_base(name, flipping, ratio);
            c.run = RunKind::spectrum;
            c.sweep_axis = SweepAxis::drive_ratio;
            c.sweep_lo = 0.0;
            c.sweep_hi = 8.0;
            c.sweep_points = 161;
            return {c};
        }
        case '2': {
            const bool flipping = two_panel();
            ExperimentConfig c = figure_base(name, flipping, 1.0);
            c.impurity_ratio.reset();
            c.drive_ratio = flipping ? kCollapseFlipping : 2.4045;
            c.run = RunKind::spectrum;
            c.sweep_axis = SweepAxis::impurity_ratio;
            c.sweep_lo = 0.5;
            c.sweep_hi = 3.5;
            c.sweep_points = 121;
            return {c};
        }
        case '3': {
            bool flipping;
            double ratio;
            four_panel(flipping, ratio);
            ExperimentConfig on = figure_base(name + "_collapse", flipping, ratio);
            on.run = RunKind::evolve;
            on.t_max = 50.0;
            ExperimentConfig off = on;
            off.name = name + "_offcollapse";
            off.drive_ratio = 1.5;
            return {on, off};
        }
        case '4':
        case '5': {
            const bool flipping = two_panel();
            ExperimentConfig c = figure_base(name, flipping, fig == '4' ? 1.0 : 1.2);
            c.run = fig == '4' ? RunKind::evolve : RunKind::effective;
            c.t_max = 100.0;
            return {c};
        }
        case '6': {
            const bool flipping = two_panel();
            ExperimentConfig c = figure_base(name, flipping, 1.2);
            c.run = RunKind::levels;
            return {c};
        }
        case '7': {
            const bool flipping = two_panel();
            ExperimentConfig c = figure_base(name, flipping, 1.2);
            c.run = RunKind::validity;
            c.omega_lo = 2.0;
            c.omega_hi = 30.0;
            c.omega_points = 15;
            c.averaging_window = 200.0;
            return {c};
        }
        default:
            throw InvalidArgument("unknown figure recipe '" + name + "'");
    }
}

}  // namespace soclattice
