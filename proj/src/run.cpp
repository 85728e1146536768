#include "coagfrag/config.hpp"
#include "coagfrag/output.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace coagfrag {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& p)
{
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
    return os;
}

std::string timestamp()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

NewtonOptions newton_options(const RunConfig& c)
{
    NewtonOptions o;
    o.tol = c.equilibrium_tol;
    o.march_dt = c.dt;
    return o;
}

int run_experiment(const RunConfig& c, const fs::path& dir, std::ostream& log)
{
    ExperimentSetup s = make_setup(c.rho, c.kernel, c.n, c.effective_x_max());
    s.dt = c.dt;
    s.nu_star = c.nu_star;
    s.seed = c.seed;

    ExperimentOutcome out;
    const std::string& name = c.experiment;
    if (name == "flow-stability") {
        out = flow_stability_experiment(s, c.eps_list, initial_datum(s.grid, c.initial, c.rho), c.t_probe);
    } else if (name == "initial-data-stability") {
        const Function f0 = initial_datum(s.grid, c.initial, c.rho);
        const Function g0(s.grid, f0.values + 1e-2 * zero_mass_perturbation(s.grid, c.rho).values);
        out = initial_data_stability_experiment(s, f0, g0, c.epsilon, c.t_probe);
    } else if (name == "global-convergence") {
        out = global_convergence_experiment(s, c.epsilon, {c.initial, "perturbed(1e-3)"}, c.t_end);
    } else if (name == "equilibrium-stability") {
        out = equilibrium_stability_experiment(s, c.eps_list);
    } else if (name == "uniqueness") {
        out = uniqueness_experiment(s, {c.epsilon}, {{"equilibrium", "bump(3,0.5)"}});
    } else if (name == "perturbed-gap") {
        out = perturbed_gap_experiment(s, c.eps_list);
    } else {
        throw ConfigError("experiment.name", "unknown experiment '" + name + "'");
    }
    auto os = open_out(dir / (name + "_" + timestamp() + ".csv"));
    write_experiment_csv(os, out);
    log << out.summary();
    return out.pass ? 0 : 1;
}

} // namespace

int run(const RunConfig& c, std::ostream& log)
{
    try {
        const fs::path dir(c.output_dir);
        fs::create_directories(dir);
        if (c.command == Command::Experiment) return run_experiment(c, dir, log);

        const auto grid = build_grid<double>(c.n, c.effective_x_max(), c.scheme);
        const Assembly a = assemble(grid, builtin_kernel<double>(c.kernel, c.epsilon, c.nu_star));
        const auto eq = find_equilibrium(a, c.rho, newton_options(c));

        if (c.command == Command::Evolve) {
            EvolutionConfig ec;
            ec.dt = c.dt;
            ec.t_end = c.t_end;
            ec.method = c.method;
            ec.observable_stride = c.stride;
            ec.nonnegativity = c.nonnegativity;
            // "equilibrium" starts from the discrete stationary state of the constant kernel.
            Function f0;
            if (c.initial != "equilibrium")
                f0 = initial_datum(grid, c.initial, c.rho);
            else if (c.epsilon == 0 || c.kernel == "constant")
                f0 = eq.state;
            else
                f0 = find_equilibrium(assemble(grid, builtin_kernel<double>(BuiltinKernel::Constant, 0.0)), c.rho,
                                      newton_options(c))
                         .state;
            const auto traj = evolve(a, f0, ec, {eq.state});
            auto os = open_out(dir / "trajectory.csv");
            write_trajectory_csv(os, traj);
            log << "evolve: " << traj.steps << " steps, final M1 = " << format_number(traj.records.back().moments[1])
                << ", clip events = " << traj.clip_events << "\n";
        } else if (c.command == Command::Equilibrium) {
            auto os = open_out(dir / "equilibrium.csv");
            write_equilibrium_csv(os, eq);
            auto js = open_out(dir / "equilibrium.json");
            js << equilibrium_sidecar_json(eq);
            log << "equilibrium: residual " << format_number(eq.residual_l1) << " after " << eq.iterations
                << " iterations (" << to_string(eq.method) << ")\n";
        } else {
            PropagatorOptions po;
            po.seed = c.seed;
            const auto rep = spectral_abscissa(project_zero_mass(assemble_linearized(a, eq.state)), c.rho, true, po);
            auto os = open_out(dir / "spectrum.csv");
            write_spectrum_csv(os, rep);
            log << "spectrum: abscissa " << format_number(rep.abscissa) << ", propagator rate "
                << format_number(rep.propagator_rate) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace coagfrag
