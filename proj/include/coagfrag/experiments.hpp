#pragma once

#include "coagfrag/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace coagfrag {

// "equilibrium", "exp(theta)" or "bump(center,width)", scaled to first moment rho.
Function initial_datum(GridPtr<double> grid, const std::string& spec, double rho);

// A zero-mass perturbation of unit L1 norm, smooth and localized near x = sqrt(rho).
Function zero_mass_perturbation(GridPtr<double> grid, double rho);

enum class ThresholdSource { Theory, Calibrated };

std::string to_string(ThresholdSource s);

struct Threshold {
    std::string name;
    double value{0};
    ThresholdSource source{ThresholdSource::Theory};
};

struct Measurement {
    std::string key;
    double value{0};
    std::string unit;
};

struct ExperimentOutcome {
    std::string name;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<Measurement> measured;
    std::vector<Threshold> thresholds;
    bool pass{false};
    // One row per parameter point.
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    double value(const std::string& key) const;
    std::string summary() const;
};

struct ExperimentSetup {
    GridPtr<double> grid;
    double rho{1};
    std::string kernel{"smooth-product"};
    double nu_star{1};
    double dt{1e-3};
    std::uint64_t seed{1};

    Kernel kernel_at(double epsilon) const;
    Assembly assembly_at(double epsilon) const;
};

// Grid defaults: n = 512, x_max = 25 sqrt(rho).
ExperimentSetup make_setup(double rho, const std::string& kernel, long n = 512, double x_max = 0);

// Log-log least-squares slope of ys against xs.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

ExperimentOutcome flow_stability_experiment(const ExperimentSetup& s, const std::vector<double>& eps_list,
                                            const Function& f0, double t_probe);

ExperimentOutcome initial_data_stability_experiment(const ExperimentSetup& s, const Function& f0,
                                                    const Function& g0, double epsilon, double t_probe);

// Family members are initial datum names, or "perturbed(delta)" for the computed
// equilibrium plus a zero-mass perturbation of L1 size delta.
ExperimentOutcome global_convergence_experiment(const ExperimentSetup& s, double epsilon,
                                                const std::vector<std::string>& family, double t_end = 10);

ExperimentOutcome equilibrium_stability_experiment(const ExperimentSetup& s, const std::vector<double>& eps_list);

ExperimentOutcome uniqueness_experiment(const ExperimentSetup& s, const std::vector<double>& eps_list,
                                        const std::vector<std::pair<std::string, std::string>>& seed_pairs);

ExperimentOutcome perturbed_gap_experiment(const ExperimentSetup& s, const std::vector<double>& eps_list);

} // namespace coagfrag
