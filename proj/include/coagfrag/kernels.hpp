#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coagfrag {

enum class BuiltinKernel { Constant, SmoothProduct, ResonantSingular };

inline std::string to_string(BuiltinKernel k)
{
    switch (k) {
    case BuiltinKernel::Constant: return "constant";
    case BuiltinKernel::SmoothProduct: return "smooth-product";
    case BuiltinKernel::ResonantSingular: return "resonant-singular";
    }
    return "?";
}

inline BuiltinKernel builtin_kernel_from_string(const std::string& s)
{
    if (s == "constant") return BuiltinKernel::Constant;
    if (s == "smooth-product") return BuiltinKernel::SmoothProduct;
    if (s == "resonant-singular") return BuiltinKernel::ResonantSingular;
    throw std::invalid_argument("unknown kernel '" + s + "'");
}

// K = 2 + eps*W and F = 2 + eps*V.
template <typename Scalar>
struct KernelSpec {
    using Fn = std::function<Scalar(Scalar, Scalar)>;

    std::string name{"custom"};
    Scalar epsilon{0};
    Fn coag_perturbation;
    Fn frag_perturbation;
    Scalar nu_star{1};
    // x -> integral of V(y, x-y) over (0, x), when known in closed form.
    std::function<Scalar(Scalar)> frag_perturbation_total;
};

template <typename Scalar>
void check_positive_args(Scalar x, Scalar y)
{
    if (!(x > Scalar(0)) || !(y > Scalar(0)))
        throw std::domain_error("kernel arguments must be positive");
}

template <typename Scalar>
Scalar eval_coag(const KernelSpec<Scalar>& k, Scalar x, Scalar y)
{
    check_positive_args(x, y);
    return Scalar(2) + k.epsilon * k.coag_perturbation(x, y);
}

template <typename Scalar>
Scalar eval_frag(const KernelSpec<Scalar>& k, Scalar x, Scalar y)
{
    check_positive_args(x, y);
    return Scalar(2) + k.epsilon * k.frag_perturbation(x, y);
}

template <typename Scalar = double>
KernelSpec<Scalar> builtin_kernel(BuiltinKernel which, Scalar epsilon, Scalar nu_star = Scalar(1))
{
    if (!(epsilon >= Scalar(0))) throw std::invalid_argument("epsilon must be nonnegative");
    if (!(nu_star > Scalar(0))) throw std::invalid_argument("nu_star must be positive");

    KernelSpec<Scalar> k;
    k.name = to_string(which);
    k.epsilon = epsilon;
    k.nu_star = nu_star;
    switch (which) {
    case BuiltinKernel::Constant:
        k.coag_perturbation = [](Scalar, Scalar) { return Scalar(0); };
        k.frag_perturbation = [](Scalar, Scalar) { return Scalar(0); };
        k.frag_perturbation_total = [](Scalar) { return Scalar(0); };
        break;
    case BuiltinKernel::SmoothProduct:
        k.coag_perturbation = [](Scalar x, Scalar y) {
            return x * y / ((Scalar(1) + x) * (Scalar(1) + y));
        };
        k.frag_perturbation = [](Scalar x, Scalar y) { return Scalar(1) / (Scalar(1) + x + y); };
        k.frag_perturbation_total = [](Scalar x) { return x / (Scalar(1) + x); };
        break;
    case BuiltinKernel::ResonantSingular:
        k.coag_perturbation = [](Scalar, Scalar) { return Scalar(1); };
        k.frag_perturbation = [](Scalar x, Scalar y) { return Scalar(1) / (x + y); };
        k.frag_perturbation_total = [](Scalar) { return Scalar(1); };
        break;
    }
    return k;
}

template <typename Scalar = double>
KernelSpec<Scalar> builtin_kernel(const std::string& name, Scalar epsilon,
                                  Scalar nu_star = Scalar(1))
{
    return builtin_kernel<Scalar>(builtin_kernel_from_string(name), epsilon, nu_star);
}

template <typename Scalar>
struct KernelValidation {
    bool pass{true};
    Scalar worst_violation{0};
    std::pair<Scalar, Scalar> worst_pair{0, 0};
    std::string worst_check;
};

template <typename Scalar = double>
std::vector<std::pair<Scalar, Scalar>> log_spaced_pairs(int per_axis = 100, Scalar lo = Scalar(1e-3),
                                                        Scalar hi = Scalar(1e3))
{
    std::vector<Scalar> axis(per_axis);
    const Scalar a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < per_axis; ++i)
        axis[i] = std::exp(a + (b - a) * Scalar(i) / Scalar(per_axis - 1));
    std::vector<std::pair<Scalar, Scalar>> out;
    out.reserve(per_axis * per_axis);
    for (Scalar x : axis)
        for (Scalar y : axis) out.emplace_back(x, y);
    return out;
}

// Checks symmetry, 0 <= W <= 1 and 0 <= (x+y)V <= nu_star at each pair.
template <typename Scalar>
KernelValidation<Scalar> validate(const KernelSpec<Scalar>& k,
                                  const std::vector<std::pair<Scalar, Scalar>>& pairs,
                                  Scalar tol = Scalar(1e-12))
{
    if (pairs.empty()) throw std::invalid_argument("empty sample set");
    KernelValidation<Scalar> rep;
    auto note = [&](Scalar v, Scalar x, Scalar y, const char* what) {
        if (v > tol) rep.pass = false;
        if (v > rep.worst_violation) {
            rep.worst_violation = v;
            rep.worst_pair = {x, y};
            rep.worst_check = what;
        }
    };
    for (const auto& [x, y] : pairs) {
        check_positive_args(x, y);
        const Scalar w = k.coag_perturbation(x, y), wt = k.coag_perturbation(y, x);
        const Scalar v = k.frag_perturbation(x, y), vt = k.frag_perturbation(y, x);
        if (!std::isfinite(double(w)) || !std::isfinite(double(v))) {
            note(std::numeric_limits<Scalar>::infinity(), x, y, "finite");
            continue;
        }
        note(std::abs(w - wt), x, y, "W symmetric");
        note(std::abs(v - vt), x, y, "V symmetric");
        note(-w, x, y, "W >= 0");
        note(w - Scalar(1), x, y, "W <= 1");
        note(-v, x, y, "V >= 0");
        note((x + y) * v - k.nu_star, x, y, "(x+y)V <= nu_star");
    }
    return rep;
}

} // namespace coagfrag
