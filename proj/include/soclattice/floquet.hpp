#pragma once

#include "soclattice/lattice_model.hpp"
#include "soclattice/propagator.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace soclattice {

/// Quasienergies folded into [0, omega), ascending, with matching
/// monodromy eigenvectors as the columns of floquet_modes.
struct QuasienergySpectrum {
    std::vector<double> quasienergies;
    Eigen::MatrixXcd floquet_modes;
    std::vector<cplx> multipliers;          // unit-modulus lambda_j, same order
    std::vector<double> eigenvalue_moduli;  // |lambda_j| before renormalization
    double zone_width = 0.0;                // omega
};

/// Folds an energy into [0, zone).
double fold_quasienergy(double energy, double zone);

/// Eigen-decomposes U and maps lambda_j = exp(-i eps_j T) to eps_j in [0, omega).
/// Throws SpectralAccuracyError if any |lambda_j| is off unity by more than 1e-6.
QuasienergySpectrum quasienergies(const MonodromyMatrix& u, double omega);

struct SpectralDiagnostics {
    bool valid = false;
    double miniband_width = 0.0;
    std::vector<int> outlier_indices;     // into the sorted spectrum
    std::vector<double> outlier_values;   // ascending
    double min_gap = 0.0;                 // smallest spacing among outliers
    std::vector<int> degeneracy_multiplicities;  // of the outlier levels, ascending by value
};

inline constexpr int kOutlierCount = 4;

/// Outliers are the four levels farthest from the median level; the
/// miniband is everything else. Levels within delta_deg of one another
/// count as one degenerate group.
SpectralDiagnostics diagnostics(const QuasienergySpectrum& spec, double delta_deg);

/// Same rule applied to a plain list of levels.
SpectralDiagnostics diagnostics(const std::vector<double>& levels, double delta_deg);

/// Sizes of groups of sorted values whose neighbours lie within tol.
std::vector<int> degeneracy_groups(const std::vector<double>& sorted_values, double tol);

enum class SweepAxis { drive_ratio, impurity_ratio };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

struct SweepPoint {
    double axis_value = 0.0;
    LatticeParams params;
    QuasienergySpectrum spectrum;
    SpectralDiagnostics diagnostics;
};

struct SweepTable {
    SweepAxis axis = SweepAxis::drive_ratio;
    std::vector<SweepPoint> points;  // grid order
};

/// Monodromy spectra on an evenly spaced grid of F/omega or eps0/omega
/// (both in units of the base params' omega). Grid points are independent
/// tasks spread over `threads` workers.
SweepTable spectrum_sweep(const LatticeParams& base, SweepAxis axis, double lo, double hi,
                          int n_points, const IntegratorConfig& cfg, double delta_deg,
                          int threads = 1);

/// Lattice parameters at one sweep coordinate.
LatticeParams apply_axis(const LatticeParams& base, SweepAxis axis, double value);

/// Propagates each Floquet mode over one period and returns
/// max_j || U(T) v_j - lambda_j v_j ||.
double floquet_mode_check(const MonodromyMatrix& u, const QuasienergySpectrum& spec,
                          const LatticeParams& params, const IntegratorConfig& cfg);

/// Reorders the levels of every sweep point so that level k follows the
/// eigenvector with maximal overlap with level k of the previous point.
/// Returns, per point, the permutation of sorted indices.
std::vector<std::vector<int>> track_levels(const SweepTable& table);

}  // namespace soclattice
