#pragma once

#include "soclattice/floquet.hpp"
#include "soclattice/lattice_model.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace soclattice {

/// Omega = m omega, eps0 = m' omega + u with |u| <= omega/2.
struct ResonanceDecomposition {
    int m = 0;
    int m_prime = 0;
    double u = 0.0;
    double u_prime = 0.0;  // u / omega
    double epsilon = 0.0;  // v / omega, the expansion parameter
};

/// Throws EffectiveModelInapplicable when Omega/omega is not an integer
/// m >= 1 (within 1e-9) and OutOfRegime when eps0 rounds to m' = 0.
ResonanceDecomposition decompose_resonance(const LatticeParams& p);

/// The six Bessel series of the second-order slow-amplitude equations.
///   chi1 = sum_p J_p J_{-p} / (-p + m' + u')
///   chi2 = sum_p J_p^2      / ( p + m' + u')
///   chi3 = sum_p J_p J_{-p} / ( p - m + m' + u')
///   chi4 = sum_p J_p^2      / (-p - m + m' + u')
///   chi5 = sum_p J_p J_{-p} / (-p + m + m' + u')
///   chi6 = sum_p J_p^2      / ( p + m + m' + u')
/// with J evaluated at F/omega.
struct ChiCoefficients {
    std::array<double, 6> values{};
    int truncation = 0;                // p runs over [-truncation, truncation]
    double last_term_magnitude = 0.0;  // largest term at |p| = truncation + 1

    double chi(int k) const { return values.at(k - 1); }
};

inline constexpr double kChiTermCutoff = 1e-12;
inline constexpr double kChiDenominatorFloor = 1e-6;

/// Sums the series on a symmetric window starting at |p| <= 40 and widened
/// by 10 until the first excluded terms fall below 1e-12. Throws
/// ResonanceSingularity if a denominator in the window is below 1e-6.
ChiCoefficients chi_coefficients(double drive_ratio, const ResonanceDecomposition& dec);

/// Same series at a fixed window, without the convergence loop.
ChiCoefficients chi_coefficients_fixed(double drive_ratio, const ResonanceDecomposition& dec,
                                       int truncation);

struct BasisLabel {
    int site = 0;
    Spin spin = Spin::up;
    bool operator==(const BasisLabel&) const = default;
};

std::string to_string(const BasisLabel& b);

/// Resonant (u = 0) three-level chain |-1,s>, |0,s'>, |1,s> in the rotating frame.
/// H = [[d, gL, 0], [gL, d, gR], [0, gR, d]].
struct ThreeSiteModel {
    std::array<BasisLabel, 3> basis{};
    double coupling_left = 0.0;   // between basis[0] and basis[1]
    double coupling_right = 0.0;  // between basis[1] and basis[2]
    std::array<double, 3> diagonal{};

    Eigen::Matrix3d hamiltonian() const;
};

/// Resonant first-order model. For spin-conserving hopping the basis keeps
/// edge_spin on all three sites; for spin-flipping hopping the impurity
/// carries the opposite spin. Throws EffectiveModelInapplicable for mixed
/// hopping or u != 0.
ThreeSiteModel resonant_three_site(const LatticeParams& p, const ResonanceDecomposition& dec,
                                   Spin edge_spin = Spin::up);

/// Closed-form occupation probabilities at time t starting from basis[init].
/// Requires equal diagonal entries.
std::array<double, 3> three_site_evolve(const ThreeSiteModel& model, int init, double t);

/// i dA/dtau = G A in the scaled time tau = omega t on the basis
/// (|-1,s>, |0,s'>, |1,s>).
struct SecondOrderModel {
    std::array<BasisLabel, 3> basis{};
    Eigen::Matrix3d generator = Eigen::Matrix3d::Zero();
    double omega = 0.0;
    // chi entering the edge-to-edge coupling and the edge self-energy
    double tunneling_chi = 0.0;
    double shift_chi = 0.0;

    /// Edge-to-edge tunneling rate v^2 |chi| / omega in real time units.
    double tunneling_rate() const;
};

inline constexpr double kMinModerateDetuning = 0.02;
inline constexpr double kMaxModerateDetuning = 0.5;

/// Second-order slow-amplitude model for off-resonant impurities. Refuses
/// |u'| < 0.02 (use the resonant model) and |u'| > 0.5.
SecondOrderModel second_order_model(const LatticeParams& p, const ResonanceDecomposition& dec,
                                    const ChiCoefficients& chi, Spin edge_spin = Spin::up);

struct SlowAmplitudes {
    Eigen::Vector3cd amplitudes = Eigen::Vector3cd::Zero();
    double tau = 0.0;
};

/// Exact propagation of the slow amplitudes from init.tau to tau.
SlowAmplitudes evolve_slow(const SecondOrderModel& model, const SlowAmplitudes& init, double tau);

struct AnalyticLevel {
    std::string label;     // eps1 ... eps6 (or eps1..3 with a spin suffix)
    double unfolded = 0.0; // carries the spin offset +-Omega/2
    double value = 0.0;    // folded into [0, omega)
    bool impurity = false; // the level of the captured-particle state
    Spin edge_spin = Spin::up;
};

/// Second-order quasienergies of the impurity region, six levels in all.
/// Spin-conserving: eps_{1,2,3} for each spin. Spin-flipping: eps_1..eps_6
/// (eps_1..3 for spin-up edges, eps_4..6 for spin-down edges).
std::vector<AnalyticLevel> analytic_quasienergies(const LatticeParams& p,
                                                  const ResonanceDecomposition& dec,
                                                  const ChiCoefficients& chi);

struct AnalyticFloquetMode {
    AnalyticLevel level;
    Eigen::Vector3cd components;  // periodic part on the model basis
};

/// Time-periodic parts of the three analytic Floquet solutions for the
/// given edge spin, in the order eps1, eps2, eps3 (or eps4..6). A full
/// solution is a_{n,s}(t) = component * exp(-i eps t).
std::array<AnalyticFloquetMode, 3> analytic_floquet_modes(const LatticeParams& p,
                                                          const ResonanceDecomposition& dec,
                                                          const ChiCoefficients& chi, double t,
                                                          Spin edge_spin = Spin::up);


struct LevelComparison {
    std::string label;
    double analytic = 0.0;
    double numerical = 0.0;
    bool impurity = false;
};

/// Pairs analytic levels with numerical quasienergies. Each impurity level
/// takes the nearest numerical level (distance measured around the zone);
/// the remaining spectrum's four outliers are then paired in ascending
/// order with the ascending non-impurity analytic levels.
std::vector<LevelComparison> compare_levels(const QuasienergySpectrum& spec,
                                            const std::vector<AnalyticLevel>& analytic,
                                            double delta_deg);

}  // namespace soclattice
