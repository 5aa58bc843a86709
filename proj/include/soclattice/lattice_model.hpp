#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace soclattice {

using cplx = std::complex<double>;

enum class Spin { up = 0, down = 1 };

inline constexpr double spin_sign(Spin s) { return s == Spin::up ? 1.0 : -1.0; }

/// Physical constants of the driven spin-orbit-coupled chain (hbar = 1).
///
/// Sites run n = -(N-1)/2 ... (N-1)/2 with the impurity at n = 0. The hopping
/// v is the energy unit by convention.
struct LatticeParams {
    int n_sites = 21;
    double hopping = 1.0;          // v
    double soc_angle = 0.0;        // alpha
    double zeeman = 20.0;          // Omega
    double impurity = 20.0;        // epsilon_0
    double drive_amplitude = 0.0;  // F
    double drive_frequency = 20.0; // omega

    int half_width() const { return (n_sites - 1) / 2; }
    int dimension() const { return 2 * n_sites; }
    double period() const { return 2.0 * std::numbers::pi / drive_frequency; }
    double drive_ratio() const { return drive_amplitude / drive_frequency; }

    /// Throws InvalidArgument on an even or too small chain, non-positive
    /// v or omega, or any non-finite field.
    void validate() const;
};

/// |sin alpha| < 1e-12: pure spin-conserving hopping.
bool is_spin_conserving(const LatticeParams& p);
/// |cos alpha| < 1e-12: pure spin-flipping hopping.
bool is_spin_flipping(const LatticeParams& p);

/// Storage index of |n, sigma>: site-major, spin interleaved.
inline int state_index(const LatticeParams& p, int site, Spin s) {
    return 2 * (site + p.half_width()) + static_cast<int>(s);
}
inline int site_of(const LatticeParams& p, int index) { return index / 2 - p.half_width(); }
inline Spin spin_of(int index) { return index % 2 == 0 ? Spin::up : Spin::down; }

/// Amplitudes a_{n,sigma} of a single atom on the chain.
class SpinorWavefunction {
public:
    SpinorWavefunction() = default;
    SpinorWavefunction(const LatticeParams& p, Eigen::VectorXcd amplitudes);

    /// The Fock state |site, spin>.
    static SpinorWavefunction basis(const LatticeParams& p, int site, Spin s);

    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    Eigen::VectorXcd& amplitudes() { return amplitudes_; }
    int n_sites() const { return n_sites_; }

    cplx amplitude(int site, Spin s) const {
        return amplitudes_[2 * (site + (n_sites_ - 1) / 2) + static_cast<int>(s)];
    }
    double probability(int site, Spin s) const { return std::norm(amplitude(site, s)); }
    double norm_squared() const { return amplitudes_.squaredNorm(); }

private:
    int n_sites_ = 0;
    Eigen::VectorXcd amplitudes_;
};

/// Amplitudes b_{n,sigma} = a_{n,sigma} exp{i[n Phi(t) + s Omega t/2 + eps0 delta_{n0} t]}.
struct RotatingFrameState {
    Eigen::VectorXcd amplitudes;
    double time = 0.0;
};

/// eps'(t) = F cos(omega t).
double drive_field(double t, const LatticeParams& p);

/// Phi(t) = (F/omega) sin(omega t), the integral of the drive field.
double drive_phase(double t, const LatticeParams& p);

/// d psi / dt = -i H(t) psi for the amplitude equations with open boundaries.
Eigen::VectorXcd apply_hamiltonian(double t, const Eigen::VectorXcd& psi, const LatticeParams& p);

/// Same generator written for the rotating-frame amplitudes b: only the
/// hopping terms survive, dressed by the frame phases.
Eigen::VectorXcd apply_rotating_generator(double t, const Eigen::VectorXcd& b,
                                          const LatticeParams& p);

/// Phase theta_{n,sigma}(t) of the rotating-frame transformation, per state index.
Eigen::VectorXd frame_phases(double t, const LatticeParams& p);

RotatingFrameState to_rotating_frame(const SpinorWavefunction& psi, double t,
                                     const LatticeParams& p);
SpinorWavefunction from_rotating_frame(const RotatingFrameState& b, const LatticeParams& p);

}  // namespace soclattice
