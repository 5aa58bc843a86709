#pragma once

#include "soclattice/lattice_model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace soclattice {

/// Which form of the amplitude equations the Runge-Kutta steps act on.
/// `rotating` integrates the hopping-only generator for b and maps back to
/// a exactly; its step error no longer scales with the drive amplitude
/// times the lattice extent. `lab` steps the amplitude equations for a
/// directly.
enum class IntegrationFrame { rotating, lab };

struct IntegratorConfig {
    int steps_per_period = 4096;
    int samples_per_period = 64;
    IntegrationFrame frame = IntegrationFrame::rotating;
    // evolve() throws IntegrationAccuracyError once |norm^2 - norm0^2| exceeds this
    double norm_tolerance = 1e-6;

    void validate() const;
};

struct Trajectory {
    LatticeParams params;
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> states;  // lab-frame amplitudes a_{n,sigma}

    std::size_t size() const { return times.size(); }
};

/// Fixed-step classical RK4 from t0 to t1. Samples every
/// period / samples_per_period and always at t1.
Trajectory evolve(const SpinorWavefunction& psi0, double t0, double t1,
                  const IntegratorConfig& cfg, const LatticeParams& params);

/// Final state only; same arithmetic as evolve().
Eigen::VectorXcd propagate(const Eigen::VectorXcd& psi0, double t0, double t1,
                           const IntegratorConfig& cfg, const LatticeParams& params);

struct MonodromyMatrix {
    Eigen::MatrixXcd entries;  // U(T, 0)
    LatticeParams params;

    /// max_{ij} |(U^dagger U - 1)_{ij}|
    double unitarity_defect() const;
};

/// One-period evolution operator, built column by column from the basis
/// states. Columns are split across `threads` workers; the result does not
/// depend on the split.
MonodromyMatrix monodromy(const LatticeParams& params, const IntegratorConfig& cfg,
                          int threads = 1);

}  // namespace soclattice
