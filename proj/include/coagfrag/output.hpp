#pragma once

#include "coagfrag/equilibrium.hpp"
#include "coagfrag/evolution.hpp"
#include "coagfrag/experiments.hpp"
#include "coagfrag/spectral.hpp"

#include <iosfwd>
#include <string>

namespace coagfrag {

inline constexpr const char* kTrajectoryHeader =
    "time,M0,M1,M2,dist_L1,dist_L1w1,dist_L1w2,entropy,mass_defect";
inline constexpr const char* kEquilibriumHeader = "x,Q";
inline constexpr const char* kSpectrumHeader = "epsilon,rho,n,x_max,abscissa,propagator_rate,gap_reference";

// Distance columns refer to the first reference of the run, or are NaN without one.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_equilibrium_csv(std::ostream& os, const EquilibriumResult& res);
// Keys: rho, epsilon, residual, iterations.
std::string equilibrium_sidecar_json(const EquilibriumResult& res);
void write_spectrum_csv(std::ostream& os, const SpectralReport& rep);
void write_experiment_csv(std::ostream& os, const ExperimentOutcome& out);

// Reads back a numeric CSV written by the functions above (header skipped).
std::vector<std::vector<double>> read_numeric_csv(std::istream& is, std::string* header = nullptr);

} // namespace coagfrag
