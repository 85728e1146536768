#pragma once

#include "coagfrag/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coagfrag {

enum class EquilibriumMethod { ClosedForm, Newton, TimeMarchNewton };

std::string to_string(EquilibriumMethod m);

struct EquilibriumResult {
    Function state;
    double rho{0};
    double epsilon{0};
    double residual_l1{0};
    int iterations{0};
    EquilibriumMethod method{EquilibriumMethod::ClosedForm};
    std::vector<double> residual_history;
    long clipped_entries{0};
};

class SolveError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ||C(f, f) + F(f)||_{L1}.
double residual_l1(const Assembly& a, const Function& f);

// f scaled so that its discrete first moment equals rho.
Function normalize_mass(const Function& f, double rho);

// exp(-x / sqrt(rho)) sampled on the grid; the residual uses constant kernels.
EquilibriumResult closed_form_equilibrium(GridPtr<double> grid, double rho);

struct NewtonOptions {
    double tol{1e-11};
    int max_iterations{50};
    int max_halvings{30};
    double march_dt{1e-3};
    double march_time{0}; // 0 means 5 / sqrt(rho)
};

// Damped Newton on C(f, f) + F(f) = 0 bordered by M1(f) = rho.
EquilibriumResult find_equilibrium(const Assembly& a, double rho, const NewtonOptions& opt = {},
                                   const std::optional<Function>& seed = std::nullopt);

struct MomentAudit {
    double m0{0}, m0_bound{0};
    double m2{0}, m2_bound{0};
    double m3{0}, m3_bound{0};
    bool pass{false};
};

// Upper bound on M_m of an equilibrium for m > 1.
double equilibrium_moment_bound(double m, double rho, double epsilon);

MomentAudit equilibrium_moment_audit(const EquilibriumResult& res, double epsilon);

// L1_1 distance between the equilibria reached from two seeds.
double uniqueness_distance(const Assembly& a, double rho, const Function& seed1, const Function& seed2,
                           const NewtonOptions& opt = {});

} // namespace coagfrag
