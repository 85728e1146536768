#pragma once

#include "coagfrag/evolution.hpp"
#include "coagfrag/grid.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coagfrag {

enum class Command { Evolve, Equilibrium, Spectrum, Experiment };

std::string to_string(Command c);

class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct RunConfig {
    Command command{Command::Evolve};
    double rho{1};
    long n{512};
    std::optional<double> x_max; // unset means 25 sqrt(rho)
    GridScheme scheme{GridScheme::UniformMidpoint};
    std::string kernel{"constant"};
    double epsilon{0};
    double nu_star{1};
    double dt{1e-3};
    double t_end{10};
    TimeMethod method{TimeMethod::RK4};
    int stride{1};
    NonnegativityMode nonnegativity{NonnegativityMode::Reject};
    std::string initial{"equilibrium"};
    std::string experiment;
    std::vector<double> eps_list{0.025, 0.05, 0.1, 0.2};
    double t_probe{2};
    std::string output_dir{"."};
    std::uint64_t seed{1};
    double equilibrium_tol{1e-11};

    double effective_x_max() const;
    bool operator==(const RunConfig&) const = default;
};

// Line-oriented "key = value" text; '#' starts a comment.
RunConfig parse_config(const std::string& text);

std::string render_config(const RunConfig& cfg);

// Shortest decimal text that reads back to the same double (17 significant digits).
std::string format_number(double v);

// Dispatches the command, writing outputs under cfg.output_dir. Returns the exit
// status: 0 on success or experiment pass, 1 on experiment fail, 2 on error.
int run(const RunConfig& cfg, std::ostream& log);

} // namespace coagfrag
