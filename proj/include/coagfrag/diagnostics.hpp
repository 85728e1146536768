#pragma once

#include "coagfrag/types.hpp"

#include <utility>
#include <vector>

namespace coagfrag {

// H_Q(f) = sum f (ln(f/Q) - 1) w, with 0 ln 0 = 0.
double entropy(const Function& f, const Function& Q);

struct DetailedBalanceResidual {
    double residual{0};
    long skipped_pairs{0};
};

// Sum over grid pairs of |K Q_i Q_j - F Q(x_i + x_j)| w_i w_j. The pair sum lies on
// a cell edge; Q there is the geometric mean of the two neighbouring nodes, which
// is exact for exponentials. Pairs without both neighbours are skipped and counted.
DetailedBalanceResidual detailed_balance_residual(const Kernel& spec, const Function& Q);

struct RateFit {
    double rate{0};
    double prefactor{0};
    std::pair<double, double> window{0, 0};
    double r_squared{0};
    int samples{0};
};

// 20% to 80% of the time span over which values stay above 1e-10.
std::pair<double, double> default_fit_window(const std::vector<double>& times,
                                             const std::vector<double>& values);

// Least squares of ln y against t; rate = -slope.
RateFit fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values,
                             std::pair<double, double> window);

RateFit fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values);

} // namespace coagfrag
