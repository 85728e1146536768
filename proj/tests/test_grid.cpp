#include "coagfrag/grid.hpp"

#include <doctest.h>

#include <cmath>

using namespace coagfrag;

TEST_CASE("uniform midpoint nodes and weights")
{
    auto g = build_grid<double>(4, 4.0);
    CHECK(g->nodes(0) == 0.5);
    CHECK(g->nodes(3) == 3.5);
    for (int i = 0; i < 4; ++i) CHECK(g->weights(i) == 1.0);

    auto g2 = build_grid<double>(2, 1.0);
    CHECK(g2->nodes(0) == 0.25);
    CHECK(g2->nodes(1) == 0.75);
    CHECK(g2->weights(0) == 0.5);

    auto g3 = build_grid<double>(64, 20.0);
    CHECK(g3->weights.sum() == 20.0);
}

TEST_CASE("grid invariants for both schemes")
{
    for (auto scheme : {GridScheme::UniformMidpoint, GridScheme::Geometric}) {
        auto g = build_grid<double>(100, 25.0, scheme);
        CHECK(g->size() == 100);
        for (int i = 1; i < 100; ++i) CHECK(g->nodes(i) > g->nodes(i - 1));
        CHECK(g->nodes(0) > 0);
        CHECK(g->nodes(99) < 25.0);
        CHECK((g->weights.array() > 0).all());
        CHECK(g->weights.sum() == doctest::Approx(25.0).epsilon(1e-12));
    }
    auto geo = build_grid<double>(50, 10.0, GridScheme::Geometric);
    CHECK(geo->weights(49) / geo->weights(0) == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("grid construction errors")
{
    CHECK_THROWS_AS(build_grid<double>(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid<double>(4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid<double>(4, -2.0), std::invalid_argument);
    auto g = build_grid<double>(4, 4.0);
    CHECK_THROWS_AS(GridFunction<double>(g, Vec<double>::Zero(3)), std::invalid_argument);
    CHECK_THROWS_AS(sample<double>(g, [](double x) { return 1.0 / (x - 0.5); }), std::domain_error);
}

TEST_CASE("moments of exponentials")
{
    auto g = build_grid<double>(512, 25.0);
    auto f = sample<double>(g, [](double x) { return std::exp(-x); });
    CHECK(std::abs(moment(f, 1.0) - 1.0) < 1e-3);
    auto g4 = build_grid<double>(512, 50.0);
    auto f4 = sample<double>(g4, [](double x) { return std::exp(-x / 2); });
    CHECK(std::abs(moment(f4, 0.0) - 2.0) < 1e-3);
    CHECK(moment(GridFunction<double>::zero(g), 1.5) == 0.0);
}

TEST_CASE("weighted norms of exp(-x)")
{
    auto g = build_grid<double>(512, 25.0);
    auto f = sample<double>(g, [](double x) { return std::exp(-x); });
    CHECK(std::abs(weighted_l1_norm(f, 0.0) - 1.0) < 1e-3);
    CHECK(std::abs(weighted_l1_norm(f, 1.0) - 2.0) < 1e-3);
    CHECK(std::abs(weighted_l1_norm(f, 2.0) - 5.0) < 1e-3);
    CHECK(weighted_l1_norm(f, 0.0) <= weighted_l1_norm(f, 1.5));
    CHECK(moment(f, 1.0) <= weighted_l1_norm(f, 1.0));
}

TEST_CASE("sample evaluates pointwise")
{
    auto g = build_grid<double>(2, 2.0);
    auto f = sample<double>(g, [](double x) { return std::exp(-x); });
    CHECK(f.values(0) == std::exp(-0.5));
    CHECK(f.values(1) == std::exp(-1.5));
    auto g4 = build_grid<double>(16, 50.0);
    auto q = sample<double>(g4, [](double x) { return std::exp(-x / std::sqrt(4.0)); });
    for (int i = 0; i < 16; ++i) CHECK(q.values(i) == std::exp(-g4->nodes(i) / 2));
}

TEST_CASE("moment quadrature converges at least first order")
{
    double prev = 0;
    for (int n : {64, 128, 256, 512}) {
        auto g = build_grid<double>(n, 30.0);
        auto f = sample<double>(g, [](double x) { return x * std::exp(-x); });
        const double err = std::abs(moment(f, 1.0) - 2.0);
        if (prev > 0) CHECK(prev / err > 1.9);
        prev = err;
    }
}

TEST_CASE("templated on the scalar type")
{
    auto g = build_grid<long double>(8, 4.0L);
    auto f = sample<long double>(g, [](long double x) { return x; });
    CHECK(static_cast<double>(moment(f, 0.0L)) == doctest::Approx(8.0));
}

TEST_CASE("structural grid equality")
{
    auto a = build_grid<double>(8, 4.0), b = build_grid<double>(8, 4.0), c = build_grid<double>(8, 5.0);
    CHECK(same_grid(*a, *b));
    CHECK_FALSE(same_grid(*a, *c));
    auto fa = sample<double>(a, [](double x) { return x; });
    auto fc = sample<double>(c, [](double x) { return x; });
    CHECK_THROWS_AS(weighted_l1_distance(fa, fc, 0.0), std::invalid_argument);
}
