#include "soclattice/effective.hpp"

#include "soclattice/errors.hpp"
#include "soclattice/floquet.hpp"
#include "soclattice/specfun.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace soclattice {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kInitialChiWindow = 40;
constexpr int kChiWindowGrowth = 10;
constexpr int kMaxChiWindow = 190;

enum class Regime { spin_conserving, spin_flipping };

Regime regime_of(const LatticeParams& p) {
    const bool conserving = is_spin_conserving(p);
    const bool flipping = is_spin_flipping(p);
    if (conserving == flipping)
        throw EffectiveModelInapplicable(
            "effective models need purely spin-conserving (sin alpha = 0) or purely "
            "spin-flipping (cos alpha = 0) hopping");
    return conserving ? Regime::spin_conserving : Regime::spin_flipping;
}

void require_moderate_detuning(const ResonanceDecomposition& dec) {
    const double a = std::abs(dec.u_prime);
    if (a < kMinModerateDetuning)
        throw EffectiveModelInapplicable("|u/omega| = " + std::to_string(a) +
                                         " is too close to resonance for the second-order "
                                         "model; use the resonant three-site model");
    if (a > kMaxModerateDetuning)
        throw EffectiveModelInapplicable("|u/omega| exceeds 1/2");
}

Spin flip(Spin s) { return s == Spin::up ? Spin::down : Spin::up; }

// Denominator of series k (1-based) at index p.
double chi_denominator(int k, int p, const ResonanceDecomposition& d) {
    const double mp = d.m_prime + d.u_prime;
    switch (k) {
        case 1: return -p + mp;
        case 2: return p + mp;
        case 3: return p - d.m + mp;
        case 4: return -p - d.m + mp;
        case 5: return -p + d.m + mp;
        default: return p + d.m + mp;
    }
}

// J_p J_{-p} for odd series, J_p^2 for even series.
double chi_numerator(int k, double jp, double jm) { return k % 2 == 1 ? jp * jm : jp * jp; }

double chi_term(int k, int p, double x, const ResonanceDecomposition& d) {
    return chi_numerator(k, bessel_j(p, x), bessel_j(-p, x)) / chi_denominator(k, p, d);
}

void check_denominators(int window, const ResonanceDecomposition& d) {
    for (int k = 1; k <= 6; ++k)
        for (int p = -window; p <= window; ++p)
            if (std::abs(chi_denominator(k, p, d)) < kChiDenominatorFloor) {
                std::ostringstream msg;
                msg << "chi" << k << " has a vanishing denominator at p = " << p
                    << " (u/omega = " << d.u_prime << ")";
                throw ResonanceSingularity(msg.str());
            }
}

}  // namespace

ResonanceDecomposition decompose_resonance(const LatticeParams& p) {
    p.validate();
    const double omega = p.drive_frequency;
    const double ratio = p.zeeman / omega;
    const double m = std::round(ratio);
    if (std::abs(ratio - m) > 1e-9 || m < 1.0)
        throw EffectiveModelInapplicable("Omega/omega = " + std::to_string(ratio) +
                                         " is not a positive integer");
    const double mp = std::round(p.impurity / omega);
    if (mp < 1.0)
        throw OutOfRegime("eps0/omega = " + std::to_string(p.impurity / omega) +
                          " rounds to m' = 0; effective models need eps0 > omega/2");
    ResonanceDecomposition d;
    d.m = static_cast<int>(m);
    d.m_prime = static_cast<int>(mp);
    d.u = p.impurity - mp * omega;
    d.u_prime = d.u / omega;
    d.epsilon = p.hopping / omega;
    return d;
}

ChiCoefficients chi_coefficients_fixed(double drive_ratio, const ResonanceDecomposition& dec,
                                       int truncation) {
    if (truncation < 0 || truncation > kMaxChiWindow)
        throw OutOfRange("chi truncation outside [0, " + std::to_string(kMaxChiWindow) + "]");
    check_denominators(truncation, dec);
    ChiCoefficients c;
    c.truncation = truncation;
    for (int p = -truncation; p <= truncation; ++p) {
        const double jp = bessel_j(p, drive_ratio);
        const double jm = bessel_j(-p, drive_ratio);
        for (int k = 1; k <= 6; ++k)
            c.values[k - 1] += chi_numerator(k, jp, jm) / chi_denominator(k, p, dec);
    }
    double tail = 0.0;
    for (int k = 1; k <= 6; ++k)
        for (int p : {-truncation - 1, truncation + 1})
            if (std::abs(chi_denominator(k, p, dec)) >= kChiDenominatorFloor)
                tail = std::max(tail, std::abs(chi_term(k, p, drive_ratio, dec)));
    c.last_term_magnitude = tail;
    return c;
}

ChiCoefficients chi_coefficients(double drive_ratio, const ResonanceDecomposition& dec) {
    if (!std::isfinite(drive_ratio)) throw InvalidArgument("chi: non-finite F/omega");
    for (int window = kInitialChiWindow; window <= kMaxChiWindow; window += kChiWindowGrowth) {
        ChiCoefficients c = chi_coefficients_fixed(drive_ratio, dec, window);
        if (c.last_term_magnitude < kChiTermCutoff) return c;
    }
    throw OutOfRange("chi series did not converge within |p| <= " + std::to_string(kMaxChiWindow));
}

std::string to_string(const BasisLabel& b) {
    return "|" + std::to_string(b.site) + (b.spin == Spin::up ? ",up>" : ",down>");
}

Eigen::Matrix3d ThreeSiteModel::hamiltonian() const {
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) h(i, i) = diagonal[i];
    h(0, 1) = h(1, 0) = coupling_left;
    h(1, 2) = h(2, 1) = coupling_right;
    return h;
}

ThreeSiteModel resonant_three_site(const LatticeParams& p, const ResonanceDecomposition& dec,
                                   Spin edge_spin) {
    const Regime regime = regime_of(p);
    if (std::abs(dec.u_prime) > 1e-9)
        throw EffectiveModelInapplicable("resonant three-site model needs eps0 = m' omega");
    const double x = p.drive_ratio();
    const double v = p.hopping;
    ThreeSiteModel model;
    if (regime == Regime::spin_conserving) {
        const double c = std::cos(p.soc_angle);
        model.basis = {BasisLabel{-1, edge_spin}, BasisLabel{0, edge_spin}, BasisLabel{1, edge_spin}};
        model.coupling_left = -v * c * bessel_j(-dec.m_prime, x);
        model.coupling_right = -v * c * bessel_j(dec.m_prime, x);
    } else {
        const double s = std::sin(p.soc_angle);
        model.basis = {BasisLabel{-1, edge_spin}, BasisLabel{0, flip(edge_spin)},
                       BasisLabel{1, edge_spin}};
        if (edge_spin == Spin::up) {
            model.coupling_left = v * s * bessel_j(dec.m - dec.m_prime, x);
            model.coupling_right = -v * s * bessel_j(-dec.m + dec.m_prime, x);
        } else {
            model.coupling_left = -v * s * bessel_j(-dec.m - dec.m_prime, x);
            model.coupling_right = v * s * bessel_j(dec.m + dec.m_prime, x);
        }
    }
    return model;
}

std::array<double, 3> three_site_evolve(const ThreeSiteModel& model, int init, double t) {
    if (init < 0 || init > 2) throw InvalidArgument("three_site_evolve: init must be 0, 1 or 2");
    if (model.diagonal[0] != model.diagonal[1] || model.diagonal[1] != model.diagonal[2])
        throw InvalidArgument("three_site_evolve: closed form needs equal diagonal entries");

    const double gl = model.coupling_left;
    const double gr = model.coupling_right;
    const double g = std::hypot(gl, gr);
    std::array<double, 3> prob{};
    if (g == 0.0) {
        prob[init] = 1.0;
        return prob;
    }
    // exp(-iKt) = P0 + cos(gt)(1 - P0) - i sin(gt) K / g, with P0 the
    // projector on the zero mode (gr, 0, -gl) / g of the coupling matrix K
    const Eigen::Vector3d dark(gr / g, 0.0, -gl / g);
    Eigen::Matrix3d k = Eigen::Matrix3d::Zero();
    k(0, 1) = k(1, 0) = gl;
    k(1, 2) = k(2, 1) = gr;
    const Eigen::Matrix3d p0 = dark * dark.transpose();
    const double c = std::cos(g * t);
    const double s = std::sin(g * t);
    for (int i = 0; i < 3; ++i) {
        const double re = p0(i, init) + c * ((i == init ? 1.0 : 0.0) - p0(i, init));
        const double im = -s * k(i, init) / g;
        prob[i] = re * re + im * im;
    }
    return prob;
}

double SecondOrderModel::tunneling_rate() const {
    // generator entries carry eps^2 = v^2/omega^2; real time rate is omega |G_{-1,1}|
    return omega * std::abs(generator(0, 2));
}

SecondOrderModel second_order_model(const LatticeParams& p, const ResonanceDecomposition& dec,
                                    const ChiCoefficients& chi, Spin edge_spin) {
    const Regime regime = regime_of(p);
    require_moderate_detuning(dec);
    const double e2 = dec.epsilon * dec.epsilon;

    SecondOrderModel model;
    model.omega = p.drive_frequency;
    Eigen::Matrix3d& g = model.generator;
    if (regime == Regime::spin_conserving) {
        model.basis = {BasisLabel{-1, edge_spin}, BasisLabel{0, edge_spin}, BasisLabel{1, edge_spin}};
        model.tunneling_chi = chi.chi(1);
        model.shift_chi = chi.chi(2);
        g(0, 0) = g(2, 2) = -e2 * model.shift_chi;
        g(1, 1) = 2.0 * e2 * model.shift_chi;
        g(0, 2) = g(2, 0) = -e2 * model.tunneling_chi;
    } else {
        model.basis = {BasisLabel{-1, edge_spin}, BasisLabel{0, flip(edge_spin)},
                       BasisLabel{1, edge_spin}};
        model.tunneling_chi = edge_spin == Spin::up ? chi.chi(3) : chi.chi(5);
        model.shift_chi = edge_spin == Spin::up ? chi.chi(4) : chi.chi(6);
        g(0, 0) = g(2, 2) = -e2 * model.shift_chi;
        g(1, 1) = 2.0 * e2 * model.shift_chi;
        g(0, 2) = g(2, 0) = e2 * model.tunneling_chi;
    }
    return model;
}

SlowAmplitudes evolve_slow(const SecondOrderModel& model, const SlowAmplitudes& init, double tau) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(model.generator);
    const Eigen::Matrix3d& vecs = solver.eigenvectors();
    const Eigen::Vector3cd coeffs = vecs.transpose().cast<cplx>() * init.amplitudes;
    Eigen::Vector3cd phased;
    for (int j = 0; j < 3; ++j)
        phased[j] = coeffs[j] * std::exp(-kI * solver.eigenvalues()[j] * (tau - init.tau));
    return SlowAmplitudes{vecs.cast<cplx>() * phased, tau};
}

std::vector<AnalyticLevel> analytic_quasienergies(const LatticeParams& p,
                                                  const ResonanceDecomposition& dec,
                                                  const ChiCoefficients& chi) {
    const Regime regime = regime_of(p);
    require_moderate_detuning(dec);
    const double omega = p.drive_frequency;
    const double scale = p.hopping * p.hopping / omega;
    const double half_zeeman = 0.5 * p.zeeman;

    std::vector<AnalyticLevel> levels;
    auto push = [&](std::string label, double unfolded, bool impurity, Spin edge) {
        levels.push_back({std::move(label), unfolded, fold_quasienergy(unfolded, omega), impurity, edge});
    };
    if (regime == Regime::spin_conserving) {
        const double c1 = chi.chi(1), c2 = chi.chi(2);
        for (Spin s : {Spin::up, Spin::down}) {
            const double offset = spin_sign(s) * half_zeeman;
            const std::string tag = s == Spin::up ? "_up" : "_down";
            push("eps1" + tag, (-c2 + c1) * scale + offset, false, s);
            push("eps2" + tag, 2.0 * c2 * scale + dec.u + offset, true, s);
            push("eps3" + tag, (-c2 - c1) * scale + offset, false, s);
        }
    } else {
        const double c3 = chi.chi(3), c4 = chi.chi(4), c5 = chi.chi(5), c6 = chi.chi(6);
        push("eps1", (-c4 + c3) * scale + half_zeeman, false, Spin::up);
        push("eps2", 2.0 * c4 * scale + dec.u - half_zeeman, true, Spin::up);
        push("eps3", (-c4 - c3) * scale + half_zeeman, false, Spin::up);
        push("eps4", (-c6 + c5) * scale - half_zeeman, false, Spin::down);
        push("eps5", 2.0 * c6 * scale + dec.u + half_zeeman, true, Spin::down);
        push("eps6", (-c6 - c5) * scale - half_zeeman, false, Spin::down);
    }
    return levels;
}

std::array<AnalyticFloquetMode, 3> analytic_floquet_modes(const LatticeParams& p,
                                                          const ResonanceDecomposition& dec,
                                                          const ChiCoefficients& chi, double t,
                                                          Spin edge_spin) {
    const Regime regime = regime_of(p);
    const SecondOrderModel model = second_order_model(p, dec, chi, edge_spin);
    const std::vector<AnalyticLevel> all = analytic_quasienergies(p, dec, chi);

    std::array<AnalyticLevel, 3> levels;
    int found = 0;
    for (const AnalyticLevel& l : all)
        if (l.edge_spin == edge_spin && found < 3) levels[found++] = l;

    const double r = 1.0 / std::sqrt(2.0);
    // eigenvectors of the slow generator in the order eps1, eps2, eps3
    std::array<Eigen::Vector3d, 3> weights;
    if (regime == Regime::spin_conserving) {
        weights = {Eigen::Vector3d(r, 0.0, -r), Eigen::Vector3d(0.0, 1.0, 0.0),
                   Eigen::Vector3d(r, 0.0, r)};
    } else {
        weights = {Eigen::Vector3d(r, 0.0, r), Eigen::Vector3d(0.0, 1.0, 0.0),
                   Eigen::Vector3d(r, 0.0, -r)};
    }

    const double omega = p.drive_frequency;
    const double phi = drive_phase(t, p);
    std::array<AnalyticFloquetMode, 3> modes;
    for (int j = 0; j < 3; ++j) {
        const Eigen::Vector3d& w = weights[j];
        const double slow = w.dot(model.generator * w) * omega;  // E_j in real energy units
        modes[j].level = levels[j];
        for (int c = 0; c < 3; ++c) {
            const BasisLabel& b = model.basis[c];
            const double frame_rate =
                spin_sign(b.spin) * 0.5 * p.zeeman + (b.site == 0 ? p.impurity : 0.0);
            // eps - E - frame rate is an integer number of photons for an exact
            // resonance decomposition; rounding keeps the mode exactly periodic
            const double photons = std::round((levels[j].value - slow - frame_rate) / omega);
            modes[j].components[c] =
                w[c] * std::exp(-kI * (b.site * phi)) * std::exp(kI * (photons * omega * t));
        }
    }
    return modes;
}

std::vector<LevelComparison> compare_levels(const QuasienergySpectrum& spec,
                                            const std::vector<AnalyticLevel>& analytic,
                                            double delta_deg) {
    const double zone = spec.zone_width;
    std::vector<double> remaining = spec.quasienergies;
    std::vector<LevelComparison> out;
    std::vector<const AnalyticLevel*> plain;
    std::vector<LevelComparison> impurity;

    for (const AnalyticLevel& a : analytic) {
        if (!a.impurity) {
            plain.push_back(&a);
            continue;
        }
        if (remaining.empty()) throw InvalidArgument("compare_levels: spectrum exhausted");
        std::size_t best = 0;
        double best_dist = INFINITY;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            const double d = std::abs(remaining[i] - a.value);
            const double dist = std::min(d, zone - d);
            if (dist < best_dist) {
                best_dist = dist;
                best = i;
            }
        }
        impurity.push_back({a.label, a.value, remaining[best], true});
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }

    if (plain.size() != static_cast<std::size_t>(kOutlierCount))
        throw InvalidArgument("compare_levels: expected four non-impurity analytic levels");
    std::sort(plain.begin(), plain.end(),
              [](const AnalyticLevel* x, const AnalyticLevel* y) { return x->value < y->value; });
    const SpectralDiagnostics d = diagnostics(remaining, delta_deg);
    for (int k = 0; k < kOutlierCount; ++k)
        out.push_back({plain[k]->label, plain[k]->value, d.outlier_values[k], false});
    out.insert(out.end(), impurity.begin(), impurity.end());
    return out;
}

}  // namespace soclattice
