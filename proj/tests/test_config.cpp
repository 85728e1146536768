#include "coagfrag/config.hpp"
#include "coagfrag/output.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace coagfrag;

namespace fs = std::filesystem;

namespace {

std::string error_key(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "";
}

fs::path scratch_dir(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("coagfrag_test_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("parse_config examples")
{
    const auto c = parse_config("command = evolve\nrho = 1.0\nkernel.name = constant\nkernel.epsilon = 0.0");
    CHECK(c.command == Command::Evolve);
    CHECK(c.rho == 1.0);
    CHECK(c.n == 512);
    CHECK(c.effective_x_max() == 25.0);
    CHECK(c.dt == 1e-3);
    CHECK(c.scheme == GridScheme::UniformMidpoint);

    const auto s = parse_config("kernel.name = smooth-product\nkernel.epsilon = 0.1\ncommand = spectrum\nrho = 1");
    CHECK(s.command == Command::Spectrum);
    CHECK(s.kernel == "smooth-product");
    CHECK(s.epsilon == 0.1);

    CHECK(error_key("rho = -1") == "rho");
    CHECK(parse_config("command = evolve\nrho = 4").effective_x_max() == 50.0);
}

TEST_CASE("parse_config errors name the key")
{
    CHECK(error_key("command = evolve") == "rho");
    CHECK(error_key("rho = 1") == "command");
    CHECK(error_key("command = evolve\nrho = 1\ngrid.size = 4") == "grid.size");
    CHECK(error_key("command = evolve\nrho = 1\nrho = 2") == "rho");
    CHECK(error_key("command = evolve\nrho = 1x") == "rho");
    CHECK(error_key("command = evolve\nrho = nan") == "rho");
    CHECK(error_key("command = fly\nrho = 1") == "command");
    CHECK(error_key("command = evolve\nrho = 1\ngrid.n = 1") == "grid.n");
    CHECK(error_key("command = evolve\nrho = 1\ngrid.n = 12.5") == "grid.n");
    CHECK(error_key("command = evolve\nrho = 1\nkernel.name = gaussian") == "kernel.name");
    CHECK(error_key("command = evolve\nrho = 1\nkernel.epsilon = -0.1") == "kernel.epsilon");
    CHECK(error_key("command = evolve\nrho = 1\nevolution.method = leapfrog") == "evolution.method");
    CHECK(error_key("command = evolve\nrho = 1\nevolution.dt = 20") == "evolution.dt");
    CHECK(error_key("command = evolve\nrho = 1\nevolution.stride = 0") == "evolution.stride");
    CHECK(error_key("command = evolve\nrho = 1\ngrid.scheme = chebyshev") == "grid.scheme");
    CHECK(error_key("command = experiment\nrho = 1") == "experiment.name");
    CHECK(error_key("command = evolve\nrho = 1\nexperiment.eps_list = 0.1, -2") == "experiment.eps_list");
    CHECK(error_key("command = evolve\nrho") == "line 2");
    CHECK(error_key("command = evolve\nrho =") == "rho");
}

TEST_CASE("comments and whitespace")
{
    const auto c = parse_config("# header\n  command=evolve   # trailing\n\nrho=  2.5\n");
    CHECK(c.rho == 2.5);
}

TEST_CASE("render and parse round trip")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        RunConfig c;
        c.command = Command(t % 4);
        c.rho = 0.1 + 10 * U(rng);
        c.n = 2 + long(1000 * U(rng));
        if (t % 2) c.x_max = 1 + 100 * U(rng);
        c.scheme = t % 3 ? GridScheme::UniformMidpoint : GridScheme::Geometric;
        c.kernel = t % 3 == 1 ? "resonant-singular" : "smooth-product";
        c.epsilon = 0.2 * U(rng);
        c.nu_star = 0.5 + U(rng);
        c.dt = 1e-4 + 1e-2 * U(rng);
        c.t_end = 1 + 20 * U(rng);
        c.method = t % 2 ? TimeMethod::Euler : TimeMethod::RK4;
        c.stride = 1 + t;
        c.nonnegativity = t % 2 ? NonnegativityMode::Reject : NonnegativityMode::ClipAndReport;
        c.initial = "bump(3,0.5)";
        c.experiment = "perturbed-gap";
        c.eps_list = {U(rng) + 1e-3, U(rng) + 1e-3, 1.0 / 3};
        c.t_probe = 0.5 + U(rng);
        c.output_dir = "out/run" + std::to_string(t);
        c.seed = std::uint64_t(t * 7919);
        c.equilibrium_tol = 1e-12 * (1 + U(rng));
        CHECK(parse_config(render_config(c)) == c);
    }
}

TEST_CASE("numbers round trip through CSV text")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-50.0, 50.0);
    for (int t = 0; t < 1000; ++t) {
        const double v = std::exp(U(rng)) * (t % 2 ? -1 : 1);
        CHECK(std::stod(format_number(v)) == v);
    }
}

TEST_CASE("output headers")
{
    CHECK(std::string(kTrajectoryHeader) == "time,M0,M1,M2,dist_L1,dist_L1w1,dist_L1w2,entropy,mass_defect");
    CHECK(std::string(kEquilibriumHeader) == "x,Q");
    CHECK(std::string(kSpectrumHeader) == "epsilon,rho,n,x_max,abscissa,propagator_rate,gap_reference");
}

TEST_CASE("evolve command writes a trajectory that reads back exactly")
{
    const auto dir = scratch_dir("evolve");
    auto c = parse_config("command = evolve\nrho = 1\nkernel.name = constant\ngrid.n = 128\nevolution.dt = 0.01\n"
                          "evolution.t_end = 1\nevolution.stride = 10\noutput_dir = " + dir.string());
    std::ostringstream log;
    CHECK(run(c, log) == 0);
    std::ifstream in(dir / "trajectory.csv");
    std::string header;
    const auto rows = read_numeric_csv(in, &header);
    CHECK(header == kTrajectoryHeader);
    REQUIRE(rows.size() == 11);
    CHECK(rows.back()[0] == doctest::Approx(1.0));
    for (const auto& r : rows) {
        CHECK(r.size() == 9);
        CHECK(r[2] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r[4] < 1e-4);
    }
    fs::remove_all(dir);
}

TEST_CASE("equilibrium and spectrum commands")
{
    const auto dir = scratch_dir("eq");
    std::ostringstream log;
    CHECK(run(parse_config("command = equilibrium\nrho = 1\ngrid.n = 64\nkernel.name = smooth-product\n"
                           "kernel.epsilon = 0.1\noutput_dir = " + dir.string()),
              log) == 0);
    std::ifstream in(dir / "equilibrium.csv");
    std::string header;
    const auto rows = read_numeric_csv(in, &header);
    CHECK(header == "x,Q");
    CHECK(rows.size() == 64);
    std::ifstream js(dir / "equilibrium.json");
    std::stringstream text;
    text << js.rdbuf();
    CHECK(text.str().find("\"iterations\"") != std::string::npos);
    CHECK(text.str().find("\"epsilon\": 0.1") != std::string::npos);

    CHECK(run(parse_config("command = spectrum\nrho = 1\ngrid.n = 128\noutput_dir = " + dir.string()), log) == 0);
    std::ifstream sp(dir / "spectrum.csv");
    const auto srows = read_numeric_csv(sp, &header);
    CHECK(header == kSpectrumHeader);
    REQUIRE(srows.size() == 1);
    CHECK(srows[0][4] == doctest::Approx(-2.0).epsilon(0.1));
    CHECK(srows[0][6] == 2.0);
    fs::remove_all(dir);
}

TEST_CASE("experiment command and runtime errors")
{
    const auto dir = scratch_dir("exp");
    std::ostringstream log;
    CHECK(run(parse_config("command = experiment\nexperiment.name = uniqueness\nrho = 1\ngrid.n = 96\n"
                           "kernel.name = smooth-product\nkernel.epsilon = 0.1\noutput_dir = " + dir.string()),
              log) == 0);
    int files = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        CHECK(e.path().filename().string().rfind("uniqueness_", 0) == 0);
        ++files;
    }
    CHECK(files == 1);
    CHECK(log.str().find("experiment uniqueness: pass") != std::string::npos);

    CHECK(run(parse_config("command = experiment\nexperiment.name = nothing\nrho = 1\noutput_dir = " + dir.string()),
              log) == 2);
    CHECK(run(parse_config("command = evolve\nrho = 1\ninitial = spike\ngrid.n = 32\noutput_dir = " + dir.string()),
              log) == 2);
    fs::remove_all(dir);
}
