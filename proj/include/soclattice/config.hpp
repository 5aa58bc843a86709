#pragma once

#include "soclattice/effective.hpp"
#include "soclattice/floquet.hpp"
#include "soclattice/lattice_model.hpp"
#include "soclattice/propagator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace soclattice {

enum class RunKind { evolve, spectrum, chi, effective, validity, levels };

std::string to_string(RunKind kind);
RunKind run_kind_from_string(const std::string& name);

struct InitialAmplitude {
    int site = -1;
    Spin spin = Spin::up;
    cplx amplitude{1.0, 0.0};
};

struct ExperimentConfig {
    LatticeParams params;
    // Ratios to omega; when set they override the absolute value once the
    // final omega is known (this is how a frequency sweep keeps F/omega fixed).
    std::optional<double> drive_ratio;
    std::optional<double> impurity_ratio;
    std::optional<double> zeeman_ratio;

    std::vector<InitialAmplitude> initial{InitialAmplitude{}};
    RunKind run = RunKind::evolve;
    IntegratorConfig integrator;

    double t_max = 100.0;
    SweepAxis sweep_axis = SweepAxis::drive_ratio;
    double sweep_lo = 0.0;
    double sweep_hi = 8.0;
    int sweep_points = 161;
    double omega_lo = 2.0;
    double omega_hi = 30.0;
    int omega_points = 15;
    double averaging_window = 200.0;
    double degeneracy_tol = 1e-6;  // in units of omega
    std::vector<int> sites{-1, 0, 1};

    std::string output_dir = ".";
    std::string name = "run";

    /// Lattice parameters with the ratio overrides applied at the given omega
    /// (default: the configured drive frequency).
    LatticeParams resolved_params(std::optional<double> omega = std::nullopt) const;

    /// Normalized initial state on the resolved lattice.
    SpinorWavefunction initial_state(const LatticeParams& p) const;
};

/// Parses line-oriented `key = value` text with `#` comments. Unknown keys,
/// unparsable values and violated invariants raise ParseError with the line.
ExperimentConfig parse_config(const std::string& text);

/// Applies one `key = value` assignment, as from a command-line override.
/// `line` is reported in errors (0 for overrides).
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                   int line);

/// Cross-key checks run after all settings are applied.
void validate_config(const ExperimentConfig& cfg);

}  // namespace soclattice
