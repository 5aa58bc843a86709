#pragma once

#include "soclattice/lattice_model.hpp"
#include "soclattice/propagator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace soclattice {

enum class ObservableKind { occupation, msd, s1_running, s2_running };

struct ObservableSeries {
    ObservableKind kind = ObservableKind::occupation;
    std::vector<double> times;
    std::vector<double> values;
    int site = 0;            // occupation only
    Spin spin = Spin::up;    // occupation only
};

/// P_{n,sigma}(t) = |a_{n,sigma}(t)|^2 on the trajectory samples.
ObservableSeries occupation(const Trajectory& traj, int site, Spin spin);

/// <n^2>(t) = sum_{n,sigma} n^2 P_{n,sigma}(t).
ObservableSeries mean_square_displacement(const Trajectory& traj);

/// Summed probability over all states at each sample.
std::vector<double> total_probability(const Trajectory& traj);

struct ValidityAverages {
    double s1 = 0.0;  // sites -1, 0, 1
    double s2 = 0.0;  // sites -1, 1
};

/// Trapezoidal time averages over [t0, t0 + window] of the probability on
/// sites {-1, 0, 1} and {-1, 1}. With only_spin set, just that spin
/// component is summed. Throws InvalidArgument if the trajectory is shorter
/// than the window.
ValidityAverages validity_averages(const Trajectory& traj, double window,
                                   std::optional<Spin> only_spin = std::nullopt);

/// Running averages (1/t) int_0^t of the S1 / S2 integrands; the value at
/// the first sample is the instantaneous integrand.
ObservableSeries running_s1(const Trajectory& traj);
ObservableSeries running_s2(const Trajectory& traj);

}  // namespace soclattice
