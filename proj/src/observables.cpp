#include "soclattice/observables.hpp"

#include "soclattice/errors.hpp"

#include <cmath>
#include <string>

namespace soclattice {

namespace {

double site_probability(const Eigen::VectorXcd& a, const LatticeParams& p, int site,
                        std::optional<Spin> only_spin) {
    double total = 0.0;
    for (Spin s : {Spin::up, Spin::down}) {
        if (only_spin && *only_spin != s) continue;
        total += std::norm(a[state_index(p, site, s)]);
    }
    return total;
}

double inner_sites(const Eigen::VectorXcd& a, const LatticeParams& p, std::optional<Spin> spin) {
    return site_probability(a, p, -1, spin) + site_probability(a, p, 0, spin) +
           site_probability(a, p, 1, spin);
}

double edge_sites(const Eigen::VectorXcd& a, const LatticeParams& p, std::optional<Spin> spin) {
    return site_probability(a, p, -1, spin) + site_probability(a, p, 1, spin);
}

template <class Integrand>
ObservableSeries running_average(const Trajectory& traj, ObservableKind kind, Integrand f) {
    ObservableSeries out;
    out.kind = kind;
    out.times = traj.times;
    double integral = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double cur = f(traj.states[i]);
        if (i == 0) {
            out.values.push_back(cur);
        } else {
            integral += 0.5 * (prev + cur) * (traj.times[i] - traj.times[i - 1]);
            out.values.push_back(integral / (traj.times[i] - traj.times[0]));
        }
        prev = cur;
    }
    return out;
}

}  // namespace

ObservableSeries occupation(const Trajectory& traj, int site, Spin spin) {
    const int h = traj.params.half_width();
    if (site < -h || site > h)
        throw OutOfRange("occupation: site " + std::to_string(site) + " outside the lattice");
    ObservableSeries out;
    out.kind = ObservableKind::occupation;
    out.site = site;
    out.spin = spin;
    out.times = traj.times;
    const int idx = state_index(traj.params, site, spin);
    for (const auto& a : traj.states) out.values.push_back(std::norm(a[idx]));
    return out;
}

ObservableSeries mean_square_displacement(const Trajectory& traj) {
    ObservableSeries out;
    out.kind = ObservableKind::msd;
    out.times = traj.times;
    const LatticeParams& p = traj.params;
    for (const auto& a : traj.states) {
        double msd = 0.0;
        for (int i = 0; i < a.size(); ++i) {
            const int n = site_of(p, i);
            msd += static_cast<double>(n) * n * std::norm(a[i]);
        }
        out.values.push_back(msd);
    }
    return out;
}

std::vector<double> total_probability(const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.size());
    for (const auto& a : traj.states) out.push_back(a.squaredNorm());
    return out;
}

ValidityAverages validity_averages(const Trajectory& traj, double window,
                                   std::optional<Spin> only_spin) {
    if (!(window > 0.0)) throw InvalidArgument("validity_averages: window must be positive");
    if (traj.size() < 2) throw InvalidArgument("validity_averages: trajectory too short");
    const double t0 = traj.times.front();
    const double t_end = t0 + window;
    if (traj.times.back() < t_end - 1e-9 * std::max(1.0, window))
        throw InvalidArgument("validity_averages: trajectory spans " +
                              std::to_string(traj.times.back() - t0) + " < window " +
                              std::to_string(window));

    const LatticeParams& p = traj.params;
    double s1 = 0.0, s2 = 0.0;
    double prev1 = inner_sites(traj.states[0], p, only_spin);
    double prev2 = edge_sites(traj.states[0], p, only_spin);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double ta = traj.times[i - 1];
        if (ta >= t_end) break;
        const double tb = traj.times[i];
        double cur1 = inner_sites(traj.states[i], p, only_spin);
        double cur2 = edge_sites(traj.states[i], p, only_spin);
        double dt = tb - ta;
        if (tb > t_end) {
            // linear interpolation of the integrand to the window end
            const double w = (t_end - ta) / dt;
            cur1 = prev1 + w * (cur1 - prev1);
            cur2 = prev2 + w * (cur2 - prev2);
            dt = t_end - ta;
        }
        s1 += 0.5 * (prev1 + cur1) * dt;
        s2 += 0.5 * (prev2 + cur2) * dt;
        prev1 = cur1;
        prev2 = cur2;
    }
    return {s1 / window, s2 / window};
}

ObservableSeries running_s1(const Trajectory& traj) {
    return running_average(traj, ObservableKind::s1_running, [&](const Eigen::VectorXcd& a) {
        return inner_sites(a, traj.params, std::nullopt);
    });
}

ObservableSeries running_s2(const Trajectory& traj) {
    return running_average(traj, ObservableKind::s2_running, [&](const Eigen::VectorXcd& a) {
        return edge_sites(a, traj.params, std::nullopt);
    });
}

}  // namespace soclattice
