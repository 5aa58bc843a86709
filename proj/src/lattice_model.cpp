#include "soclattice/lattice_model.hpp"

#include "soclattice/errors.hpp"

#include <cmath>
#include <string>

namespace soclattice {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_dimension(const Eigen::VectorXcd& v, const LatticeParams& p) {
    if (v.size() != p.dimension())
        throw InvalidArgument("state dimension " + std::to_string(v.size()) +
                              " does not match 2N = " + std::to_string(p.dimension()));
}

// H_hop * psi: the v cos(alpha) and v sin(alpha) terms of the amplitude equations.
Eigen::VectorXcd apply_hopping(const Eigen::VectorXcd& psi, const LatticeParams& p) {
    const int h = p.half_width();
    const double vc = p.hopping * std::cos(p.soc_angle);
    const double vs = p.hopping * std::sin(p.soc_angle);
    auto at = [&](int site, Spin s) -> cplx {
        if (site < -h || site > h) return 0.0;
        return psi[state_index(p, site, s)];
    };
    Eigen::VectorXcd out(psi.size());
    for (int n = -h; n <= h; ++n) {
        const cplx up = -vc * (at(n + 1, Spin::up) + at(n - 1, Spin::up)) -
                        vs * (-at(n + 1, Spin::down) + at(n - 1, Spin::down));
        const cplx down = -vc * (at(n + 1, Spin::down) + at(n - 1, Spin::down)) -
                          vs * (at(n + 1, Spin::up) - at(n - 1, Spin::up));
        out[state_index(p, n, Spin::up)] = up;
        out[state_index(p, n, Spin::down)] = down;
    }
    return out;
}

}  // namespace

void LatticeParams::validate() const {
    if (n_sites < 3 || n_sites % 2 == 0)
        throw InvalidArgument("n_sites must be odd and >= 3, got " + std::to_string(n_sites));
    if (!(hopping > 0.0) || !std::isfinite(hopping))
        throw InvalidArgument("hopping must be positive and finite");
    if (!(drive_frequency > 0.0) || !std::isfinite(drive_frequency))
        throw InvalidArgument("drive_frequency must be positive and finite");
    if (!std::isfinite(soc_angle) || !std::isfinite(zeeman) || !std::isfinite(impurity) ||
        !std::isfinite(drive_amplitude))
        throw InvalidArgument("lattice parameters must be finite");
}

bool is_spin_conserving(const LatticeParams& p) { return std::abs(std::sin(p.soc_angle)) < 1e-12; }
bool is_spin_flipping(const LatticeParams& p) { return std::abs(std::cos(p.soc_angle)) < 1e-12; }

SpinorWavefunction::SpinorWavefunction(const LatticeParams& p, Eigen::VectorXcd amplitudes)
    : n_sites_(p.n_sites), amplitudes_(std::move(amplitudes)) {
    check_dimension(amplitudes_, p);
}

SpinorWavefunction SpinorWavefunction::basis(const LatticeParams& p, int site, Spin s) {
    if (site < -p.half_width() || site > p.half_width())
        throw OutOfRange("site " + std::to_string(site) + " outside the lattice");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(p.dimension());
    v[state_index(p, site, s)] = 1.0;
    return SpinorWavefunction(p, std::move(v));
}

double drive_field(double t, const LatticeParams& p) {
    return p.drive_amplitude * std::cos(p.drive_frequency * t);
}

double drive_phase(double t, const LatticeParams& p) {
    return p.drive_ratio() * std::sin(p.drive_frequency * t);
}

Eigen::VectorXcd apply_hamiltonian(double t, const Eigen::VectorXcd& psi, const LatticeParams& p) {
    check_dimension(psi, p);
    Eigen::VectorXcd h_psi = apply_hopping(psi, p);
    const double field = drive_field(t, p);
    const int h = p.half_width();
    for (int n = -h; n <= h; ++n) {
        const double onsite = field * n + (n == 0 ? p.impurity : 0.0);
        const int iu = state_index(p, n, Spin::up);
        const int id = state_index(p, n, Spin::down);
        h_psi[iu] += (onsite + 0.5 * p.zeeman) * psi[iu];
        h_psi[id] += (onsite - 0.5 * p.zeeman) * psi[id];
    }
    return -kI * h_psi;
}

Eigen::VectorXd frame_phases(double t, const LatticeParams& p) {
    const double phi = drive_phase(t, p);
    Eigen::VectorXd theta(p.dimension());
    for (int i = 0; i < p.dimension(); ++i) {
        const int n = site_of(p, i);
        theta[i] = n * phi + spin_sign(spin_of(i)) * 0.5 * p.zeeman * t +
                   (n == 0 ? p.impurity * t : 0.0);
    }
    return theta;
}

Eigen::VectorXcd apply_rotating_generator(double t, const Eigen::VectorXcd& b,
                                          const LatticeParams& p) {
    check_dimension(b, p);
    const Eigen::VectorXd theta = frame_phases(t, p);
    Eigen::VectorXcd lab(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) lab[i] = b[i] * std::polar(1.0, -theta[i]);
    Eigen::VectorXcd out = apply_hopping(lab, p);
    for (Eigen::Index i = 0; i < b.size(); ++i) out[i] *= -kI * std::polar(1.0, theta[i]);
    return out;
}

RotatingFrameState to_rotating_frame(const SpinorWavefunction& psi, double t,
                                     const LatticeParams& p) {
    check_dimension(psi.amplitudes(), p);
    const Eigen::VectorXd theta = frame_phases(t, p);
    RotatingFrameState b{psi.amplitudes(), t};
    for (Eigen::Index i = 0; i < theta.size(); ++i) b.amplitudes[i] *= std::polar(1.0, theta[i]);
    return b;
}

SpinorWavefunction from_rotating_frame(const RotatingFrameState& b, const LatticeParams& p) {
    check_dimension(b.amplitudes, p);
    const Eigen::VectorXd theta = frame_phases(b.time, p);
    Eigen::VectorXcd a = b.amplitudes;
    for (Eigen::Index i = 0; i < theta.size(); ++i) a[i] *= std::polar(1.0, -theta[i]);
    return SpinorWavefunction(p, std::move(a));
}

}  // namespace soclattice
