#include "coagfrag/evolution.hpp"

#include "coagfrag/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace coagfrag {

std::string to_string(TimeMethod m) { return m == TimeMethod::RK4 ? "rk4" : "euler"; }

std::string to_string(NonnegativityMode m)
{
    return m == NonnegativityMode::Reject ? "reject" : "clip-and-report";
}

TimeMethod time_method_from_string(const std::string& s)
{
    if (s == "rk4") return TimeMethod::RK4;
    if (s == "euler") return TimeMethod::Euler;
    throw std::invalid_argument("unknown time method '" + s + "'");
}

NonnegativityMode nonnegativity_mode_from_string(const std::string& s)
{
    if (s == "reject") return NonnegativityMode::Reject;
    if (s == "clip-and-report") return NonnegativityMode::ClipAndReport;
    throw std::invalid_argument("unknown nonnegativity mode '" + s + "'");
}

void EvolutionConfig::validate() const
{
    if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
    if (!(t_end > 0)) throw std::invalid_argument("t_end must be positive");
    if (!(dt < t_end)) throw std::invalid_argument("dt must be smaller than t_end");
    if (observable_stride < 1) throw std::invalid_argument("observable stride must be >= 1");
    if (snapshot_every < 0) throw std::invalid_argument("snapshot_every must be >= 0");
}

std::vector<double> Trajectory::times() const
{
    std::vector<double> t;
    t.reserve(records.size());
    for (const auto& r : records) t.push_back(r.time);
    return t;
}

std::vector<double> Trajectory::distances(std::size_t r, int alpha) const
{
    std::vector<double> d;
    d.reserve(records.size());
    for (const auto& rec : records) d.push_back(rec.dist.at(r).at(alpha));
    return d;
}

std::vector<double> Trajectory::moment_series(int m) const
{
    std::vector<double> d;
    d.reserve(records.size());
    for (const auto& rec : records) d.push_back(rec.moments.at(m));
    return d;
}

namespace {

void rhs_into(const Assembly& a, const Vector& f, Vector& out, Vector& tmp)
{
    detail::self_coagulation(a, f, out);
    detail::fragmentation(a, f, tmp);
    out += tmp;
}

} // namespace

Function rhs(const Assembly& a, const Function& f)
{
    check_on_grid(a, f);
    Vector out, tmp;
    rhs_into(a, f.values, out, tmp);
    return Function(a.grid, std::move(out));
}

double cfl_time_step(const Assembly& a, const Function& f0)
{
    const double m0 = moment(f0, 0.0);
    return 1.0 / (2.0 * (2.0 + a.epsilon) * std::max(m0, a.frag_total.maxCoeff()));
}

Trajectory evolve(const Assembly& a, const Function& f0, const EvolutionConfig& cfg,
                  const std::vector<Function>& refs)
{
    cfg.validate();
    check_on_grid(a, f0);
    for (const auto& r : refs) check_on_grid(a, r);
    if ((f0.values.array() < 0).any()) throw std::invalid_argument("initial datum must be nonnegative");

    const auto grid = a.grid;
    const Function Q = cfg.entropy_reference
                           ? *cfg.entropy_reference
                           : sample<double>(grid, [s = std::sqrt(moment(f0, 1.0))](double x) {
                                 return std::exp(-x / s);
                             });
    check_on_grid(a, Q);

    Trajectory traj;
    traj.dt_cfl = cfl_time_step(a, f0);
    const long steps = std::lround(cfg.t_end / cfg.dt);
    const double dt = cfg.dt;

    Vector f = f0.values, k1, k2, k3, k4, stage, tmp;
    double defect = 0;
    int recorded = 0;

    auto record = [&](double t) {
        Function cur(grid, f);
        Observation o;
        o.time = t;
        for (int m = 0; m < 4; ++m) o.moments[m] = moment(cur, double(m));
        for (const auto& r : refs)
            o.dist.push_back({weighted_l1_distance(cur, r, 0.0), weighted_l1_distance(cur, r, 1.0),
                              weighted_l1_distance(cur, r, 2.0)});
        o.entropy = entropy(cur, Q);
        o.mass_defect = defect;
        traj.records.push_back(std::move(o));
        if (cfg.snapshot_every > 0 && recorded % cfg.snapshot_every == 0)
            traj.snapshots.emplace_back(t, cur);
        ++recorded;
    };

    record(0.0);
    for (long s = 1; s <= steps; ++s) {
        const double t = s * dt;
        defect += dt * truncation_defect(a, f, f);
        if (cfg.method == TimeMethod::RK4) {
            rhs_into(a, f, k1, tmp);
            stage = f + (dt / 2) * k1;
            rhs_into(a, stage, k2, tmp);
            stage = f + (dt / 2) * k2;
            rhs_into(a, stage, k3, tmp);
            stage = f + dt * k3;
            rhs_into(a, stage, k4, tmp);
            f += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        } else {
            rhs_into(a, f, k1, tmp);
            f += dt * k1;
        }
        if (!f.allFinite()) throw EvolutionError("non-finite state", t);
        if (f.minCoeff() < 0) {
            if (cfg.nonnegativity == NonnegativityMode::Reject)
                throw EvolutionError("negative density at t = " + std::to_string(t), t);
            for (Eigen::Index i = 0; i < f.size(); ++i)
                if (f(i) < 0) {
                    traj.clipped_mass -= f(i) * grid->nodes(i) * grid->weights(i);
                    f(i) = 0;
                }
            ++traj.clip_events;
        }
        if (s % cfg.observable_stride == 0 || s == steps) record(t);
    }
    traj.steps = steps;
    traj.final_state = Function(grid, f);
    return traj;
}

MomentBoundCheck check_moment_bound(const Trajectory& traj, int m, double mu_m, double tol)
{
    if (m < 0 || m > 3) throw std::invalid_argument("moment order not recorded");
    if (traj.records.empty()) throw std::invalid_argument("empty trajectory");
    MomentBoundCheck c;
    for (const auto& r : traj.records) c.sup = std::max(c.sup, r.moments[m]);
    c.bound = std::max(traj.records.front().moments[m], mu_m) * (1 + tol);
    c.pass = c.sup <= c.bound;
    return c;
}

} // namespace coagfrag
