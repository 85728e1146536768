#include "coagfrag/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace coagfrag {

double entropy(const Function& f, const Function& Q)
{
    require_same_grid(*f.grid, *Q.grid);
    if ((Q.values.array() <= 0.0).any()) throw std::invalid_argument("entropy reference must be positive");
    const auto& w = f.grid->weights;
    double s = 0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        const double fi = f.values(i);
        if (fi < 0) throw std::invalid_argument("entropy of a negative density");
        if (fi < 1e-300) continue;
        s += fi * (std::log(fi / Q.values(i)) - 1.0) * w(i);
    }
    return s;
}

DetailedBalanceResidual detailed_balance_residual(const Kernel& spec, const Function& Q)
{
    const auto& g = *Q.grid;
    if (!g.uniform()) throw std::invalid_argument("detailed balance residual needs a uniform grid");
    const auto n = g.size();
    const auto& x = g.nodes;
    const double h = g.step();
    DetailedBalanceResidual out;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto m = i + j + 1;
            if (m >= n) {
                ++out.skipped_pairs;
                continue;
            }
            const double qsum = std::sqrt(Q.values(m - 1) * Q.values(m));
            out.residual += std::abs(eval_coag(spec, x(i), x(j)) * Q.values(i) * Q.values(j) -
                                     eval_frag(spec, x(i), x(j)) * qsum);
        }
    }
    out.residual *= h * h;
    return out;
}

std::pair<double, double> default_fit_window(const std::vector<double>& times,
                                             const std::vector<double>& values)
{
    if (times.size() != values.size() || times.empty())
        throw std::invalid_argument("times and values must have equal nonzero length");
    std::size_t last = 0;
    bool any = false;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] > 1e-10) {
            last = i;
            any = true;
        }
    if (!any) throw std::invalid_argument("no values above 1e-10");
    const double t0 = times.front(), t1 = times[last];
    return {t0 + 0.2 * (t1 - t0), t0 + 0.8 * (t1 - t0)};
}

RateFit fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values,
                             std::pair<double, double> window)
{
    if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
    double st = 0, sy = 0, stt = 0, sty = 0, syy = 0;
    int m = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < window.first || t > window.second) continue;
        if (!(values[i] > 0)) throw std::invalid_argument("nonpositive value inside fit window");
        if (values[i] <= 1e-13) continue;
        const double y = std::log(values[i]);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
        syy += y * y;
        ++m;
    }
    if (m < 10) throw std::invalid_argument("fewer than 10 usable samples in fit window");
    const double ctt = stt - st * st / m, cty = sty - st * sy / m, cyy = syy - sy * sy / m;
    if (ctt <= 0) throw std::invalid_argument("degenerate fit window");
    const double slope = cty / ctt;
    RateFit fit;
    fit.rate = -slope;
    fit.prefactor = std::exp((sy - slope * st) / m);
    fit.window = window;
    fit.samples = m;
    fit.r_squared = cyy > 0 ? std::min(1.0, std::max(0.0, cty * cty / (ctt * cyy))) : 1.0;
    return fit;
}

RateFit fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values)
{
    return fit_exponential_rate(times, values, default_fit_window(times, values));
}

} // namespace coagfrag
