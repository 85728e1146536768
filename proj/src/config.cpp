#include "coagfrag/config.hpp"

#include "coagfrag/kernels.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace coagfrag {

std::string to_string(Command c)
{
    switch (c) {
    case Command::Evolve: return "evolve";
    case Command::Equilibrium: return "equilibrium";
    case Command::Spectrum: return "spectrum";
    case Command::Experiment: return "experiment";
    }
    return "?";
}

double RunConfig::effective_x_max() const { return x_max ? *x_max : 25 * std::sqrt(rho); }

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v)
{
    double out = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end || !std::isfinite(out)) throw ConfigError(key, "malformed number '" + v + "'");
    return out;
}

long parse_long(const std::string& key, const std::string& v)
{
    long out = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end) throw ConfigError(key, "malformed integer '" + v + "'");
    return out;
}

double positive(const std::string& key, double v)
{
    if (!(v > 0)) throw ConfigError(key, "must be positive");
    return v;
}

template <typename F>
auto checked(const std::string& key, F&& f)
{
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
    }
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    RunConfig c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (v.empty()) throw ConfigError(key, "empty value");
        if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");

        if (key == "command") {
            if (v == "evolve") c.command = Command::Evolve;
            else if (v == "equilibrium") c.command = Command::Equilibrium;
            else if (v == "spectrum") c.command = Command::Spectrum;
            else if (v == "experiment") c.command = Command::Experiment;
            else throw ConfigError(key, "unknown command '" + v + "'");
        } else if (key == "rho") {
            c.rho = positive(key, parse_double(key, v));
        } else if (key == "grid.n") {
            c.n = parse_long(key, v);
            if (c.n < 2) throw ConfigError(key, "must be at least 2");
        } else if (key == "grid.x_max") {
            c.x_max = positive(key, parse_double(key, v));
        } else if (key == "grid.scheme") {
            c.scheme = checked(key, [&] { return grid_scheme_from_string(v); });
        } else if (key == "kernel.name") {
            checked(key, [&] { return builtin_kernel_from_string(v); });
            c.kernel = v;
        } else if (key == "kernel.epsilon") {
            c.epsilon = parse_double(key, v);
            if (c.epsilon < 0) throw ConfigError(key, "must be nonnegative");
        } else if (key == "kernel.nu_star") {
            c.nu_star = positive(key, parse_double(key, v));
        } else if (key == "evolution.dt") {
            c.dt = positive(key, parse_double(key, v));
        } else if (key == "evolution.t_end") {
            c.t_end = positive(key, parse_double(key, v));
        } else if (key == "evolution.method") {
            c.method = checked(key, [&] { return time_method_from_string(v); });
        } else if (key == "evolution.stride") {
            const long s = parse_long(key, v);
            if (s < 1 || s > (1L << 30)) throw ConfigError(key, "must be a positive integer");
            c.stride = int(s);
        } else if (key == "evolution.nonnegativity") {
            c.nonnegativity = checked(key, [&] { return nonnegativity_mode_from_string(v); });
        } else if (key == "initial") {
            c.initial = v;
        } else if (key == "experiment.name") {
            c.experiment = v;
        } else if (key == "experiment.eps_list") {
            c.eps_list.clear();
            std::string item;
            std::istringstream items(v);
            while (std::getline(items, item, ',')) c.eps_list.push_back(positive(key, parse_double(key, trim(item))));
            if (c.eps_list.empty()) throw ConfigError(key, "empty list");
        } else if (key == "experiment.t_probe") {
            c.t_probe = positive(key, parse_double(key, v));
        } else if (key == "output_dir") {
            c.output_dir = v;
        } else if (key == "seed") {
            const long s = parse_long(key, v);
            if (s < 0) throw ConfigError(key, "must be nonnegative");
            c.seed = std::uint64_t(s);
        } else if (key == "equilibrium.tol") {
            c.equilibrium_tol = positive(key, parse_double(key, v));
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    if (!seen.count("command")) throw ConfigError("command", "missing required key");
    if (!seen.count("rho")) throw ConfigError("rho", "missing required key");
    if (!(c.dt < c.t_end)) throw ConfigError("evolution.dt", "must be smaller than evolution.t_end");
    if (c.command == Command::Experiment && c.experiment.empty())
        throw ConfigError("experiment.name", "required for command = experiment");
    return c;
}

std::string render_config(const RunConfig& c)
{
    std::ostringstream os;
    os << "command = " << to_string(c.command) << "\n";
    os << "rho = " << format_number(c.rho) << "\n";
    os << "grid.n = " << c.n << "\n";
    if (c.x_max) os << "grid.x_max = " << format_number(*c.x_max) << "\n";
    os << "grid.scheme = " << to_string(c.scheme) << "\n";
    os << "kernel.name = " << c.kernel << "\n";
    os << "kernel.epsilon = " << format_number(c.epsilon) << "\n";
    os << "kernel.nu_star = " << format_number(c.nu_star) << "\n";
    os << "evolution.dt = " << format_number(c.dt) << "\n";
    os << "evolution.t_end = " << format_number(c.t_end) << "\n";
    os << "evolution.method = " << to_string(c.method) << "\n";
    os << "evolution.stride = " << c.stride << "\n";
    os << "evolution.nonnegativity = " << to_string(c.nonnegativity) << "\n";
    os << "initial = " << c.initial << "\n";
    if (!c.experiment.empty()) os << "experiment.name = " << c.experiment << "\n";
    os << "experiment.eps_list = ";
    for (std::size_t i = 0; i < c.eps_list.size(); ++i) os << (i ? ", " : "") << format_number(c.eps_list[i]);
    os << "\n";
    os << "experiment.t_probe = " << format_number(c.t_probe) << "\n";
    os << "output_dir = " << c.output_dir << "\n";
    os << "seed = " << c.seed << "\n";
    os << "equilibrium.tol = " << format_number(c.equilibrium_tol) << "\n";
    return os.str();
}

} // namespace coagfrag
