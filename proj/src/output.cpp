#include "coagfrag/output.hpp"

#include "coagfrag/config.hpp"

#include <json.hpp>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace coagfrag {

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    os << kTrajectoryHeader << "\n";
    const double nan = std::nan("");
    for (const auto& r : traj.records) {
        const bool has = !r.dist.empty();
        os << format_number(r.time) << ',' << format_number(r.moments[0]) << ',' << format_number(r.moments[1])
           << ',' << format_number(r.moments[2]);
        for (int a = 0; a < 3; ++a) os << ',' << format_number(has ? r.dist[0][a] : nan);
        os << ',' << format_number(r.entropy) << ',' << format_number(r.mass_defect) << "\n";
    }
}

void write_equilibrium_csv(std::ostream& os, const EquilibriumResult& res)
{
    os << kEquilibriumHeader << "\n";
    const auto& x = res.state.grid->nodes;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        os << format_number(x(i)) << ',' << format_number(res.state.values(i)) << "\n";
}

std::string equilibrium_sidecar_json(const EquilibriumResult& res)
{
    nlohmann::json j;
    j["rho"] = res.rho;
    j["epsilon"] = res.epsilon;
    j["residual"] = res.residual_l1;
    j["iterations"] = res.iterations;
    return j.dump(2) + "\n";
}

void write_spectrum_csv(std::ostream& os, const SpectralReport& rep)
{
    os << kSpectrumHeader << "\n";
    os << format_number(rep.epsilon) << ',' << format_number(rep.rho) << ',' << rep.n << ','
       << format_number(rep.x_max) << ',' << format_number(rep.abscissa) << ','
       << format_number(rep.propagator_rate) << ',' << format_number(rep.gap_reference) << "\n";
}

void write_experiment_csv(std::ostream& os, const ExperimentOutcome& out)
{
    os << "experiment";
    for (const auto& c : out.columns) os << ',' << c;
    os << "\n";
    for (const auto& row : out.rows) {
        os << out.name;
        for (double v : row) os << ',' << format_number(v);
        os << "\n";
    }
}

std::vector<std::vector<double>> read_numeric_csv(std::istream& is, std::string* header)
{
    std::string line;
    std::vector<std::vector<double>> rows;
    if (!std::getline(is, line)) return rows;
    if (header) *header = line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace coagfrag
