#pragma once

#include "soclattice/config.hpp"
#include "soclattice/effective.hpp"
#include "soclattice/floquet.hpp"
#include "soclattice/observables.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace soclattice {

/// Fixed-width float formatting used by every CSV (12 significant digits).
std::string format_number(double value);

std::string trajectory_csv(const Trajectory& traj, const std::vector<int>& sites);
std::string sweep_csv(const SweepTable& table);

struct ChiRow {
    double drive_ratio = 0.0;
    ChiCoefficients chi;
};
std::string chi_csv(const std::vector<ChiRow>& rows);

struct ValidityRow {
    double omega = 0.0;
    ValidityAverages averages;
};
std::string validity_csv(const std::vector<ValidityRow>& rows);

struct EffectiveSeries {
    std::array<BasisLabel, 3> basis{};
    std::vector<double> times;
    std::vector<std::array<double, 3>> probabilities;
};
std::string effective_csv(const EffectiveSeries& series);
std::string levels_csv(const std::vector<LevelComparison>& rows);

/// Effective-model occupation probabilities at the given real times,
/// starting from the config's initial basis state. The resonant three-site
/// model is used when eps0 is an integer multiple of omega, the
/// second-order model otherwise.
EffectiveSeries effective_prediction(const ExperimentConfig& cfg, const std::vector<double>& times);

/// (S1, S2) over the configured omega grid; each omega is an independent task.
std::vector<ValidityRow> validity_sweep(const ExperimentConfig& cfg, int threads);

/// Executes the configured run and writes its CSV files into
/// cfg.output_dir. Returns the paths written.
std::vector<std::filesystem::path> run(const ExperimentConfig& cfg, int threads);

/// Preset configurations reproducing the published figures by name
/// (figure1a ... figure7b). Some figures expand to several runs.
std::vector<ExperimentConfig> figure_recipe(const std::string& name);
std::vector<std::string> figure_names();

}  // namespace soclattice
