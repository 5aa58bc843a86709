#include "soclattice/floquet.hpp"

#include "soclattice/errors.hpp"
#include "soclattice/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace soclattice {

double fold_quasienergy(double energy, double zone) {
    double e = std::fmod(energy, zone);
    if (e < 0.0) e += zone;
    if (e >= zone) e -= zone;
    return e;
}

QuasienergySpectrum quasienergies(const MonodromyMatrix& u, double omega) {
    const Eigen::Index dim = u.entries.rows();
    const double period = 2.0 * std::numbers::pi / omega;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u.entries, true);
    if (solver.info() != Eigen::Success)
        throw SpectralAccuracyError("eigen-decomposition of the monodromy matrix failed");

    std::vector<double> eps(dim);
    std::vector<cplx> lambda(dim);
    std::vector<double> moduli(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const cplx l = solver.eigenvalues()[j];
        moduli[j] = std::abs(l);
        if (std::abs(moduli[j] - 1.0) > 1e-6) {
            std::ostringstream msg;
            msg << "monodromy eigenvalue modulus " << moduli[j] << " is off the unit circle";
            throw SpectralAccuracyError(msg.str());
        }
        lambda[j] = l / moduli[j];
        eps[j] = fold_quasienergy(-std::arg(lambda[j]) / period, omega);
    }

    std::vector<int> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return eps[a] < eps[b]; });

    QuasienergySpectrum spec;
    spec.zone_width = omega;
    spec.floquet_modes.resize(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        const int j = order[k];
        spec.quasienergies.push_back(eps[j]);
        spec.multipliers.push_back(lambda[j]);
        spec.eigenvalue_moduli.push_back(moduli[j]);
        spec.floquet_modes.col(k) = solver.eigenvectors().col(j).normalized();
    }
    return spec;
}

std::vector<int> degeneracy_groups(const std::vector<double>& sorted_values, double tol) {
    std::vector<int> groups;
    for (std::size_t i = 0; i < sorted_values.size(); ++i) {
        if (i > 0 && sorted_values[i] - sorted_values[i - 1] <= tol)
            ++groups.back();
        else
            groups.push_back(1);
    }
    return groups;
}

SpectralDiagnostics diagnostics(const std::vector<double>& levels, double delta_deg) {
    const int n = static_cast<int>(levels.size());
    if (n <= kOutlierCount)
        throw InvalidArgument("diagnostics: need at least 5 levels, got " + std::to_string(n));

    std::vector<double> sorted = levels;
    std::sort(sorted.begin(), sorted.end());
    const double median =
        n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(levels[a] - median) > std::abs(levels[b] - median);
    });

    SpectralDiagnostics d;
    d.outlier_indices.assign(order.begin(), order.begin() + kOutlierCount);
    std::sort(d.outlier_indices.begin(), d.outlier_indices.end(),
              [&](int a, int b) { return levels[a] < levels[b]; });
    for (int idx : d.outlier_indices) d.outlier_values.push_back(levels[idx]);

    double lo = INFINITY, hi = -INFINITY;
    for (int k = kOutlierCount; k < n; ++k) {
        lo = std::min(lo, levels[order[k]]);
        hi = std::max(hi, levels[order[k]]);
    }
    d.miniband_width = hi - lo;

    d.min_gap = INFINITY;
    for (int k = 1; k < kOutlierCount; ++k)
        d.min_gap = std::min(d.min_gap, d.outlier_values[k] - d.outlier_values[k - 1]);
    d.degeneracy_multiplicities = degeneracy_groups(d.outlier_values, delta_deg);

    // the selection is unambiguous only if the weakest outlier stands clear of the band
    const double weakest = std::abs(levels[order[kOutlierCount - 1]] - median);
    const double strongest_rest = std::abs(levels[order[kOutlierCount]] - median);
    d.valid = weakest - strongest_rest > delta_deg;
    return d;
}

SpectralDiagnostics diagnostics(const QuasienergySpectrum& spec, double delta_deg) {
    return diagnostics(spec.quasienergies, delta_deg);
}

std::string to_string(SweepAxis axis) {
    return axis == SweepAxis::drive_ratio ? "drive_ratio" : "impurity_ratio";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "drive_ratio" || name == "F_over_omega") return SweepAxis::drive_ratio;
    if (name == "impurity_ratio" || name == "eps0_over_omega") return SweepAxis::impurity_ratio;
    throw InvalidArgument("unknown sweep axis '" + name + "'");
}

LatticeParams apply_axis(const LatticeParams& base, SweepAxis axis, double value) {
    LatticeParams p = base;
    if (axis == SweepAxis::drive_ratio)
        p.drive_amplitude = value * base.drive_frequency;
    else
        p.impurity = value * base.drive_frequency;
    return p;
}

SweepTable spectrum_sweep(const LatticeParams& base, SweepAxis axis, double lo, double hi,
                          int n_points, const IntegratorConfig& cfg, double delta_deg,
                          int threads) {
    if (n_points < 2) throw InvalidArgument("spectrum_sweep: need at least 2 grid points");
    if (!(hi > lo)) throw InvalidArgument("spectrum_sweep: need hi > lo");
    base.validate();
    cfg.validate();

    SweepTable table;
    table.axis = axis;
    table.points.resize(n_points);
    parallel_for(n_points, threads, [&](std::size_t i) {
        SweepPoint& pt = table.points[i];
        pt.axis_value = lo + (hi - lo) * static_cast<double>(i) / (n_points - 1);
        pt.params = apply_axis(base, axis, pt.axis_value);
        const MonodromyMatrix u = monodromy(pt.params, cfg, 1);
        pt.spectrum = quasienergies(u, pt.params.drive_frequency);
        pt.diagnostics = diagnostics(pt.spectrum, delta_deg);
    });
    return table;
}

double floquet_mode_check(const MonodromyMatrix& u, const QuasienergySpectrum& spec,
                          const LatticeParams& params, const IntegratorConfig& cfg) {
    if (spec.floquet_modes.rows() != u.entries.rows())
        throw InvalidArgument("floquet_mode_check: spectrum and monodromy dimensions differ");
    // propagating every mode at once is the same linear map applied column-wise
    const MonodromyMatrix step = monodromy(params, cfg, 1);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < spec.floquet_modes.cols(); ++j) {
        const Eigen::VectorXcd v = spec.floquet_modes.col(j);
        const double r = (step.entries * v - spec.multipliers[j] * v).norm();
        worst = std::max(worst, r);
    }
    return worst;
}

std::vector<std::vector<int>> track_levels(const SweepTable& table) {
    std::vector<std::vector<int>> perms;
    if (table.points.empty()) return perms;
    const int dim = static_cast<int>(table.points.front().spectrum.quasienergies.size());
    std::vector<int> identity(dim);
    std::iota(identity.begin(), identity.end(), 0);
    perms.push_back(identity);

    for (std::size_t i = 1; i < table.points.size(); ++i) {
        const Eigen::MatrixXcd& prev = table.points[i - 1].spectrum.floquet_modes;
        const Eigen::MatrixXcd& cur = table.points[i].spectrum.floquet_modes;
        const Eigen::MatrixXd overlap = (prev.adjoint() * cur).cwiseAbs2();

        struct Cand {
            double weight;
            int a, b;
        };
        std::vector<Cand> cands;
        cands.reserve(static_cast<std::size_t>(dim) * dim);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) cands.push_back({overlap(a, b), a, b});
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Cand& x, const Cand& y) { return x.weight > y.weight; });

        std::vector<int> match(dim, -1);  // previous sorted index -> current sorted index
        std::vector<char> used(dim, 0);
        int assigned = 0;
        for (const Cand& c : cands) {
            if (match[c.a] >= 0 || used[c.b]) continue;
            match[c.a] = c.b;
            used[c.b] = 1;
            if (++assigned == dim) break;
        }
        std::vector<int> perm(dim);
        for (int k = 0; k < dim; ++k) perm[k] = match[perms.back()[k]];
        perms.push_back(std::move(perm));
    }
    return perms;
}

}  // namespace soclattice
