#pragma once

#include "coagfrag/types.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coagfrag {

enum class TimeMethod { RK4, Euler };
enum class NonnegativityMode { Reject, ClipAndReport };

std::string to_string(TimeMethod m);
std::string to_string(NonnegativityMode m);
TimeMethod time_method_from_string(const std::string& s);
NonnegativityMode nonnegativity_mode_from_string(const std::string& s);

struct EvolutionConfig {
    double dt{1e-3};
    double t_end{1.0};
    TimeMethod method{TimeMethod::RK4};
    int observable_stride{1};
    NonnegativityMode nonnegativity{NonnegativityMode::Reject};
    // Store a snapshot every this many recorded observations; 0 keeps none.
    int snapshot_every{0};
    // Entropy is measured against this state; defaults to exp(-x/sqrt(M1(f0))).
    std::optional<Function> entropy_reference;

    void validate() const;
};

struct Observation {
    double time{0};
    std::array<double, 4> moments{}; // M0, M1, M2, M3
    // Distance to each reference in L1_alpha for alpha = 0, 1, 2.
    std::vector<std::array<double, 3>> dist;
    double entropy{0};
    double mass_defect{0};
};

struct Trajectory {
    std::vector<Observation> records;
    std::vector<std::pair<double, Function>> snapshots;
    Function final_state;
    double dt_cfl{0};
    long steps{0};
    long clip_events{0};
    double clipped_mass{0};

    std::vector<double> times() const;
    // Column of distances to reference r in L1_alpha.
    std::vector<double> distances(std::size_t r, int alpha) const;
    std::vector<double> moment_series(int m) const;
};

class EvolutionError : public std::runtime_error {
public:
    EvolutionError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

Function rhs(const Assembly& a, const Function& f);

// Step bound 1 / (2 (2 + eps) max(M0, max frag_total)).
double cfl_time_step(const Assembly& a, const Function& f0);

Trajectory evolve(const Assembly& a, const Function& f0, const EvolutionConfig& cfg,
                  const std::vector<Function>& refs = {});

struct MomentBoundCheck {
    bool pass{false};
    double sup{0};
    double bound{0};
};

// sup_t M_m(t) <= max(M_m(0), mu_m) (1 + tol), for recorded m in {0, 1, 2, 3}.
MomentBoundCheck check_moment_bound(const Trajectory& traj, int m, double mu_m, double tol = 1e-9);

} // namespace coagfrag
