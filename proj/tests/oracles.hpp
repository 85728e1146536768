#pragma once

// Event-by-event reference implementations of the discrete operators, written
// independently of the vectorized library code.

#include "coagfrag/types.hpp"

#include <random>

namespace oracle {

using coagfrag::Assembly;
using coagfrag::Vector;

inline Vector coagulation(const Assembly& a, const Vector& f, const Vector& g)
{
    const long n = a.size();
    const double h = a.step();
    Vector out = Vector::Zero(n);
    for (long j = 0; j < n; ++j)
        for (long k = 0; k < n; ++k) {
            if (j + k + 1 > n - 1) continue;
            const double w = a.coag_table(j, k) * f(j) * g(k);
            out(j + k) += h / 4 * w;
            out(j + k + 1) += h / 4 * w;
            out(j) -= h / 2 * w;
            out(k) -= h / 2 * w;
        }
    return out;
}

inline Vector fragmentation(const Assembly& a, const Vector& f)
{
    const long n = a.size();
    Vector out = Vector::Zero(n);
    for (long p = 1; p < n; ++p) {
        const double R = 0.5 * a.frag_total(p) * f(p);
        out(p) -= R;
        for (long edge : {p, p + 1}) {
            double S = 0;
            for (long j = 0; j < edge; ++j) S += a.frag_table(j, edge - 1 - j);
            for (long j = 0; j < edge; ++j) {
                const long k = edge - 1 - j;
                const double share = 0.5 * R * a.frag_table(j, k) / S;
                out(j) += share;
                out(k) += share;
            }
        }
    }
    return out;
}

inline Vector random_vector(std::mt19937_64& rng, long n, double lo = 0.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> U(lo, hi);
    Vector v(n);
    for (long i = 0; i < n; ++i) v(i) = U(rng);
    return v;
}

// Random nonnegative density with an exponential envelope.
inline Vector random_density(std::mt19937_64& rng, const coagfrag::Grid& g)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double scale = 0.5 + 3.0 * U(rng);
    Vector v(g.size());
    for (long i = 0; i < g.size(); ++i) v(i) = U(rng) * std::exp(-g.nodes(i) / scale);
    return v;
}

// Composite Simpson rule on [a, b] with m (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, int m = 2000)
{
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3;
}

} // namespace oracle

namespace oracle {

inline double norm_alpha(const coagfrag::Grid& g, const Vector& v, double alpha)
{
    return ((1.0 + g.nodes.array()).pow(alpha) * v.array().abs() * g.weights.array()).sum();
}

struct BoundRatios {
    double coag{0}; // ||C(f, g)|| / ((3/2) sup K ||f|| ||g||)
    double frag{0}; // ||F_V(f)|| / ((3/2) nu_star ||f||)
};

// Ratios of the operator norms to the bounded-operator constants in L1_alpha.
inline BoundRatios bound_ratios(const Assembly& full, const Assembly& pert, double nu_star, const Vector& f,
                                const Vector& g, double alpha)
{
    const auto& grid = *full.grid;
    const coagfrag::Function F(full.grid, f), G(full.grid, g);
    const double ksup = full.coag_table.maxCoeff();
    BoundRatios r;
    r.coag = norm_alpha(grid, coagfrag::apply_coagulation(full, F, G).values, alpha) /
             (1.5 * ksup * norm_alpha(grid, f, alpha) * norm_alpha(grid, g, alpha));
    r.frag = norm_alpha(grid, coagfrag::apply_fragmentation(pert, F).values, alpha) /
             (1.5 * nu_star * norm_alpha(grid, f, alpha));
    return r;
}

} // namespace oracle
