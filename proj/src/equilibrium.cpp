#include "coagfrag/equilibrium.hpp"

#include "coagfrag/evolution.hpp"
#include "coagfrag/spectral.hpp"

#include <Eigen/LU>

#include <cmath>

namespace coagfrag {

std::string to_string(EquilibriumMethod m)
{
    switch (m) {
    case EquilibriumMethod::ClosedForm: return "closed-form";
    case EquilibriumMethod::Newton: return "newton";
    case EquilibriumMethod::TimeMarchNewton: return "time-march+newton";
    }
    return "?";
}

double residual_l1(const Assembly& a, const Function& f)
{
    return weighted_l1_norm(rhs(a, f), 0.0);
}

Function normalize_mass(const Function& f, double rho)
{
    const double m1 = moment(f, 1.0);
    if (!(m1 > 0)) throw std::invalid_argument("cannot normalize a function with nonpositive mass");
    return Function(f.grid, f.values * (rho / m1));
}

EquilibriumResult closed_form_equilibrium(GridPtr<double> grid, double rho)
{
    if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
    const double s = std::sqrt(rho);
    EquilibriumResult r;
    r.state = sample<double>(grid, [s](double x) { return std::exp(-x / s); });
    r.rho = rho;
    r.method = EquilibriumMethod::ClosedForm;
    r.residual_l1 = grid->uniform()
                        ? residual_l1(assemble(grid, builtin_kernel<double>(BuiltinKernel::Constant, 0.0)),
                                      r.state)
                        : std::nan("");
    return r;
}

namespace {

struct NewtonRun {
    Vector f;
    int iterations{0};
    bool converged{false};
    double residual{0};
};

NewtonRun newton(const Assembly& a, double rho, Vector f, const NewtonOptions& opt,
                 std::vector<double>& history)
{
    const auto n = a.size();
    const Vector m = a.grid->nodes.cwiseProduct(a.grid->weights);
    const double h = a.step();
    auto resid = [&](const Vector& v, Vector& R) {
        R = rhs(a, Function(a.grid, v)).values;
        return R.cwiseAbs().sum() * h;
    };

    NewtonRun run;
    Vector R;
    double r = resid(f, R);
    history.push_back(r);
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (r < opt.tol) {
            run.converged = true;
            break;
        }
        Matrix B = Matrix::Zero(n + 1, n + 1);
        B.topLeftCorner(n, n) = assemble_linearized(a, Function(a.grid, f)).matrix;
        B.col(n).head(n) = m;
        B.row(n).head(n) = m.transpose();
        Vector b(n + 1);
        b.head(n) = -R;
        b(n) = rho - m.dot(f);
        const Vector d = Eigen::PartialPivLU<Matrix>(B).solve(b).head(n);
        if (!d.allFinite()) break;

        double lambda = 1;
        bool accepted = false;
        Vector trial, Rt;
        for (int k = 0; k <= opt.max_halvings; ++k, lambda /= 2) {
            trial = f + lambda * d;
            const double rt = resid(trial, Rt);
            if (std::isfinite(rt) && rt < r) {
                f = trial;
                R = Rt;
                r = rt;
                accepted = true;
                break;
            }
        }
        ++run.iterations;
        history.push_back(r);
        if (!accepted) break;
    }
    if (r < opt.tol) run.converged = true;
    run.f = std::move(f);
    run.residual = r;
    return run;
}

} // namespace

EquilibriumResult find_equilibrium(const Assembly& a, double rho, const NewtonOptions& opt,
                                   const std::optional<Function>& seed)
{
    if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
    Function start = seed ? normalize_mass(*seed, rho) : closed_form_equilibrium(a.grid, rho).state;
    check_on_grid(a, start);

    EquilibriumResult res;
    res.rho = rho;
    res.epsilon = a.epsilon;
    res.method = EquilibriumMethod::Newton;

    NewtonRun run = newton(a, rho, start.values, opt, res.residual_history);
    if (!run.converged) {
        EvolutionConfig cfg;
        cfg.dt = opt.march_dt;
        cfg.t_end = opt.march_time > 0 ? opt.march_time : 5.0 / std::sqrt(rho);
        cfg.observable_stride = 1000000;
        cfg.nonnegativity = NonnegativityMode::ClipAndReport;
        Function marched = normalize_mass(evolve(a, start, cfg).final_state, rho);
        const int before = run.iterations;
        run = newton(a, rho, marched.values, opt, res.residual_history);
        run.iterations += before;
        res.method = EquilibriumMethod::TimeMarchNewton;
        if (!run.converged)
            throw SolveError("equilibrium solve did not converge (residual " + std::to_string(run.residual) + ")");
    }

    Vector f = std::move(run.f);
    const double fmax = f.maxCoeff();
    if (f.minCoeff() < -1e-12 * fmax) throw SolveError("equilibrium has negative entries");
    for (Eigen::Index i = 0; i < f.size(); ++i)
        if (f(i) < 0) {
            f(i) = 0;
            ++res.clipped_entries;
        }
    res.state = Function(a.grid, std::move(f));
    res.iterations = run.iterations;
    res.residual_l1 = res.clipped_entries ? residual_l1(a, res.state) : run.residual;
    return res;
}

double equilibrium_moment_bound(double m, double rho, double epsilon)
{
    if (!(m > 1)) throw std::invalid_argument("moment bound needs m > 1");
    const double inner = (m + 1) / (m - 1) * (2 + epsilon) * std::pow(rho, m / (m - 1)) *
                         std::pow(2 * rho + epsilon * epsilon / 4, 1 / (2 * m));
    return std::pow(inner, m * (m - 1) / (2 * m - 1));
}

MomentAudit equilibrium_moment_audit(const EquilibriumResult& res, double epsilon)
{
    MomentAudit a;
    a.m0 = moment(res.state, 0.0);
    a.m0_bound = std::sqrt(2 * res.rho + epsilon * epsilon / 4);
    a.m2 = moment(res.state, 2.0);
    a.m2_bound = equilibrium_moment_bound(2, res.rho, epsilon);
    a.m3 = moment(res.state, 3.0);
    a.m3_bound = equilibrium_moment_bound(3, res.rho, epsilon);
    a.pass = a.m0 <= a.m0_bound && a.m2 <= a.m2_bound && a.m3 <= a.m3_bound;
    return a;
}

double uniqueness_distance(const Assembly& a, double rho, const Function& seed1, const Function& seed2,
                           const NewtonOptions& opt)
{
    const auto q1 = find_equilibrium(a, rho, opt, seed1);
    const auto q2 = find_equilibrium(a, rho, opt, seed2);
    return weighted_l1_distance(q1.state, q2.state, 1.0);
}

} // namespace coagfrag
