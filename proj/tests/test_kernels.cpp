#include "coagfrag/kernels.hpp"

#include <doctest.h>

using namespace coagfrag;

TEST_CASE("builtin kernel values")
{
    auto c = builtin_kernel<double>(BuiltinKernel::Constant, 0.5);
    CHECK(eval_coag(c, 1.0, 1.0) == 2.0);
    CHECK(eval_frag(c, 1.0, 1.0) == 2.0);
    CHECK(eval_coag(c, 0.3, 7.0) == 2.0);

    auto s = builtin_kernel<double>(BuiltinKernel::SmoothProduct, 0.1);
    CHECK(eval_coag(s, 1.0, 1.0) == doctest::Approx(2.025).epsilon(1e-15));
    auto s1 = builtin_kernel<double>(BuiltinKernel::SmoothProduct, 1.0);
    CHECK(eval_coag(s1, 1.0, 1.0) == doctest::Approx(2.25).epsilon(1e-15));

    auto r = builtin_kernel<double>(BuiltinKernel::ResonantSingular, 0.1);
    CHECK(eval_frag(r, 1.0, 1.0) == doctest::Approx(2.05).epsilon(1e-15));
    auto r1 = builtin_kernel<double>(BuiltinKernel::ResonantSingular, 1.0);
    CHECK(eval_frag(r1, 0.5, 0.5) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("kernel errors")
{
    CHECK_THROWS_AS(builtin_kernel<double>(BuiltinKernel::Constant, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(builtin_kernel<double>("quadratic", 0.1), std::invalid_argument);
    auto c = builtin_kernel<double>(BuiltinKernel::Constant, 0.0);
    CHECK_THROWS_AS(eval_coag(c, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(eval_frag(c, 1.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(validate(c, {}), std::invalid_argument);
}

TEST_CASE("validation of builtin and invalid kernels")
{
    const auto pairs = log_spaced_pairs<double>();
    CHECK(pairs.size() == 10000);
    for (auto k : {BuiltinKernel::Constant, BuiltinKernel::SmoothProduct, BuiltinKernel::ResonantSingular}) {
        auto rep = validate(builtin_kernel<double>(k, 0.2), pairs);
        CHECK(rep.pass);
    }
    auto r = builtin_kernel<double>(BuiltinKernel::ResonantSingular, 0.2);
    for (const auto& [x, y] : pairs) CHECK((x + y) * r.frag_perturbation(x, y) == doctest::Approx(1.0).epsilon(1e-15));

    auto bad = builtin_kernel<double>(BuiltinKernel::Constant, 0.1);
    bad.coag_perturbation = [](double, double) { return 2.0; };
    auto rep = validate(bad, pairs);
    CHECK_FALSE(rep.pass);
    CHECK(rep.worst_violation == doctest::Approx(1.0));
    CHECK(rep.worst_check == "W <= 1");

    auto asym = builtin_kernel<double>(BuiltinKernel::Constant, 0.1);
    asym.frag_perturbation = [](double x, double y) { return x / ((1 + x + y) * (x + y)); };
    CHECK_FALSE(validate(asym, pairs).pass);
}

TEST_CASE("kernel symmetry and bound envelope")
{
    const auto pairs = log_spaced_pairs<double>(40);
    for (auto k : {BuiltinKernel::SmoothProduct, BuiltinKernel::ResonantSingular}) {
        const double eps = 0.2;
        auto spec = builtin_kernel<double>(k, eps);
        for (const auto& [x, y] : pairs) {
            CHECK(eval_coag(spec, x, y) == eval_coag(spec, y, x));
            CHECK(eval_frag(spec, x, y) == doctest::Approx(eval_frag(spec, y, x)).epsilon(1e-15));
            CHECK(eval_coag(spec, x, y) >= 2.0);
            CHECK(eval_coag(spec, x, y) <= 2.0 + eps);
            CHECK(eval_frag(spec, x, y) >= 2.0);
            CHECK(eval_frag(spec, x, y) <= 2.0 + eps / (x + y) * (1 + 1e-15));
        }
        auto zero = builtin_kernel<double>(k, 0.0);
        for (const auto& [x, y] : pairs) {
            CHECK(eval_coag(zero, x, y) == 2.0);
            CHECK(eval_frag(zero, x, y) == 2.0);
        }
    }
}
