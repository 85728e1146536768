#include "coagfrag/diagnostics.hpp"
#include "coagfrag/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace coagfrag;

TEST_CASE("entropy values")
{
    const auto g = build_grid<double>(1024, 30.0);
    const auto Q = sample<double>(g, [](double x) { return std::exp(-x); });
    CHECK(entropy(Q, Q) == doctest::Approx(-moment(Q, 0.0)).epsilon(1e-14));

    // f = exp(-2x): integrand f (-x - 1) integrates to -1/4 - 1/2.
    const auto f = sample<double>(g, [](double x) { return std::exp(-2 * x); });
    CHECK(entropy(f, Q) == doctest::Approx(-0.75).epsilon(1e-4));

    CHECK(entropy(Function::zero(g), Q) == 0.0);
    Function neg = f;
    neg.values(0) = -1;
    CHECK_THROWS_AS(entropy(neg, Q), std::invalid_argument);
    CHECK_THROWS_AS(entropy(f, Function::zero(g)), std::invalid_argument);
}

TEST_CASE("detailed balance residual")
{
    const auto g = build_grid<double>(128, 25.0);
    const auto Q = sample<double>(g, [](double x) { return std::exp(-x); });
    const auto r0 = detailed_balance_residual(builtin_kernel<double>(BuiltinKernel::Constant, 0.0), Q);
    CHECK(r0.residual < 1e-14);
    CHECK(r0.skipped_pairs == 128 * 129 / 2);

    const auto r1 = detailed_balance_residual(builtin_kernel<double>(BuiltinKernel::SmoothProduct, 0.2), Q);
    CHECK(r1.residual > 1e-3);

    const auto Q2 = sample<double>(g, [](double x) { return std::exp(-x * x); });
    CHECK(detailed_balance_residual(builtin_kernel<double>(BuiltinKernel::Constant, 0.0), Q2).residual > 1e-2);
    CHECK_THROWS_AS(detailed_balance_residual(builtin_kernel<double>(BuiltinKernel::Constant, 0.0),
                                              sample<double>(build_grid<double>(16, 5.0, GridScheme::Geometric),
                                                             [](double x) { return x; })),
                    std::invalid_argument);
}

TEST_CASE("exponential rate fit")
{
    std::vector<double> t, y;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(0.1 * i);
        y.push_back(3.0 * std::exp(-1.5 * t.back()));
    }
    const auto fit = fit_exponential_rate(t, y);
    CHECK(fit.rate == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.window.first == doctest::Approx(2.0));
    CHECK(fit.window.second == doctest::Approx(8.0));

    // Values under the floor shorten the default window.
    std::vector<double> z = y;
    for (auto& v : z) v = v < 1e-3 ? 0.0 : v;
    const auto w = default_fit_window(t, z);
    CHECK(w.second < 5.0);

    std::mt19937_64 rng(4);
    std::normal_distribution<double> N(0, 0.01);
    for (auto& v : y) v *= std::exp(N(rng));
    CHECK(fit_exponential_rate(t, y).rate == doctest::Approx(1.5).epsilon(0.01));
}

TEST_CASE("rate fit errors")
{
    std::vector<double> t{0, 1, 2}, y{1, 0.5, 0.25};
    CHECK_THROWS_AS(fit_exponential_rate(t, y), std::invalid_argument);
    CHECK_THROWS_AS(fit_exponential_rate(t, {1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(default_fit_window(t, {0.0, 0.0, 0.0}), std::invalid_argument);
}
