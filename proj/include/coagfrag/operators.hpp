#pragma once

// Discrete coagulation and fragmentation operators on a uniform midpoint grid.
//
// A pair of cells (j, k) has total size (j + k + 1) h, which is the edge between
// cells j + k and j + k + 1. Coagulation of such a pair deposits half of the
// product into each of these two cells. Fragmentation runs the other way: a
// parent in cell p is treated half as a particle of size p h and half as one of
// size (p + 1) h, and each half splits into the pairs sitting on that edge in
// proportion to F. Both operators conserve the discrete first moment exactly.
// Pairs whose product would leave the grid are excluded from coagulation gain
// and loss alike; the mass they would carry is reported as the truncation defect.

#include "coagfrag/grid.hpp"
#include "coagfrag/kernels.hpp"

#include <functional>
#include <stdexcept>

namespace coagfrag {

template <typename Scalar>
struct OperatorAssembly {
    GridPtr<Scalar> grid;
    Scalar epsilon{0};
    Scalar nu_star{1};
    Mat<Scalar> coag_table;  // K(x_i, x_j)
    Mat<Scalar> frag_table;  // F(x_i, x_j)
    Vec<Scalar> frag_total;  // integral of F(y, x_i - y) over (0, x_i)
    Vec<Scalar> edge_weight; // S_m = sum of F over pairs j + k = m - 1, m = 1..n; entry 0 unused

    Eigen::Index size() const { return frag_total.size(); }
    Scalar step() const { return grid->step(); }
};

// Midpoint quadrature of y -> F(y, x_i - y) over (0, x_i) on the grid cells, with
// the last half cell [i h, x_i] sampled at its own midpoint.
template <typename Scalar>
Vec<Scalar> frag_total_by_quadrature(const SizeGrid<Scalar>& g,
                                     const std::function<Scalar(Scalar, Scalar)>& F)
{
    const auto n = g.size();
    const Scalar h = g.step();
    Vec<Scalar> out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar x = g.nodes(i);
        Scalar s = 0;
        for (Eigen::Index j = 0; j < i; ++j) s += F(g.nodes(j), x - g.nodes(j)) * h;
        const Scalar y = (Scalar(i) + Scalar(0.25)) * h;
        s += F(y, x - y) * h / Scalar(2);
        out(i) = s;
    }
    return out;
}

template <typename Scalar>
OperatorAssembly<Scalar> assemble_tables(GridPtr<Scalar> grid,
                                         const std::function<Scalar(Scalar, Scalar)>& K,
                                         const std::function<Scalar(Scalar, Scalar)>& F,
                                         const std::function<Scalar(Scalar)>& frag_total)
{
    if (!grid->uniform()) throw std::invalid_argument("operator assembly needs a uniform grid");
    const auto n = grid->size();
    const auto& x = grid->nodes;

    OperatorAssembly<Scalar> a;
    a.grid = grid;
    a.coag_table.resize(n, n);
    a.frag_table.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j; i < n; ++i) {
            const Scalar k = K(x(i), x(j)), f = F(x(i), x(j));
            if (!(k >= Scalar(0)) || !(f >= Scalar(0)) || !std::isfinite(double(k)) ||
                !std::isfinite(double(f)))
                throw std::domain_error("kernel table entry negative or not finite");
            a.coag_table(i, j) = a.coag_table(j, i) = k;
            a.frag_table(i, j) = a.frag_table(j, i) = f;
        }
    }
    if (frag_total) {
        a.frag_total.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) a.frag_total(i) = frag_total(x(i));
    } else {
        a.frag_total = frag_total_by_quadrature<Scalar>(*grid, F);
    }

    a.edge_weight = Vec<Scalar>::Zero(n + 1);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n - j; ++k) a.edge_weight(j + k + 1) += a.frag_table(j, k);
    return a;
}

template <typename Scalar>
OperatorAssembly<Scalar> assemble(GridPtr<Scalar> grid, const KernelSpec<Scalar>& spec)
{
    const Scalar eps = spec.epsilon;
    auto K = [&](Scalar x, Scalar y) { return Scalar(2) + eps * spec.coag_perturbation(x, y); };
    auto F = [&](Scalar x, Scalar y) { return Scalar(2) + eps * spec.frag_perturbation(x, y); };
    std::function<Scalar(Scalar)> ft;
    if (spec.frag_perturbation_total)
        ft = [&](Scalar x) { return Scalar(2) * x + eps * spec.frag_perturbation_total(x); };
    auto a = assemble_tables<Scalar>(std::move(grid), K, F, ft);
    a.epsilon = eps;
    a.nu_star = spec.nu_star;
    return a;
}

// Assembly of the perturbation alone: K = W and F = V.
template <typename Scalar>
OperatorAssembly<Scalar> assemble_perturbation(GridPtr<Scalar> grid, const KernelSpec<Scalar>& spec)
{
    auto a = assemble_tables<Scalar>(std::move(grid), spec.coag_perturbation,
                                     spec.frag_perturbation, spec.frag_perturbation_total);
    a.nu_star = spec.nu_star;
    return a;
}

namespace detail {

// out = C(f, g) for general f, g.
template <typename Scalar, typename VF, typename VG>
void coagulation(const OperatorAssembly<Scalar>& a, const VF& f, const VG& g, Vec<Scalar>& out)
{
    const auto n = a.size();
    const Scalar h = a.step();
    const auto& K = a.coag_table;
    Vec<Scalar> A = Vec<Scalar>::Zero(n + 1);
    out.resize(n);
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        const auto len = n - 1 - j;
        const auto Kj = K.col(j).head(len);
        if (f(j) != Scalar(0))
            A.segment(j + 1, len).noalias() += f(j) * Kj.cwiseProduct(g.head(len));
        const Scalar Kg = Kj.dot(g.head(len)), Kf = Kj.dot(f.head(len));
        out(j) = -(h / 2) * (f(j) * Kg + g(j) * Kf);
    }
    out(n - 1) = 0;
    out.array() += (h / 4) * (A.head(n).array() + A.tail(n).array());
}

// out = C(f, f), using the symmetry of the pair sum.
template <typename Scalar, typename VF>
void self_coagulation(const OperatorAssembly<Scalar>& a, const VF& f, Vec<Scalar>& out)
{
    const auto n = a.size();
    const Scalar h = a.step();
    const auto& K = a.coag_table;
    Vec<Scalar> A = Vec<Scalar>::Zero(n + 1);
    out.resize(n);
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        const auto len = n - 1 - j;
        const auto Kj = K.col(j).head(len);
        out(j) = -h * f(j) * Kj.dot(f.head(len));
        if (2 * j + 1 < n) {
            const auto m = n - 1 - 2 * j;
            A.segment(2 * j + 1, m).noalias() +=
                (Scalar(2) * f(j)) * K.col(j).segment(j, m).cwiseProduct(f.segment(j, m));
            A(2 * j + 1) -= K(j, j) * f(j) * f(j);
        }
    }
    out(n - 1) = 0;
    out.array() += (h / 4) * (A.head(n).array() + A.tail(n).array());
}

// Events per unit edge weight: c_m = (L_{m-1} + L_m) / (2 S_m), L_p = FT_p f_p for p >= 1.
template <typename Scalar, typename VF>
Vec<Scalar> edge_rates(const OperatorAssembly<Scalar>& a, const VF& f)
{
    const auto n = a.size();
    Vec<Scalar> L = Vec<Scalar>::Zero(n + 1);
    for (Eigen::Index p = 1; p < n; ++p) L(p) = a.frag_total(p) * f(p);
    Vec<Scalar> c = Vec<Scalar>::Zero(n + 1);
    for (Eigen::Index m = 1; m <= n; ++m)
        if (a.edge_weight(m) > Scalar(0)) c(m) = (L(m - 1) + L(m)) / (Scalar(2) * a.edge_weight(m));
    return c;
}

template <typename Scalar, typename VF>
void fragmentation(const OperatorAssembly<Scalar>& a, const VF& f, Vec<Scalar>& out)
{
    const auto n = a.size();
    const Vec<Scalar> c = edge_rates(a, f);
    out.resize(n);
    for (Eigen::Index j = 0; j < n; ++j)
        out(j) = a.frag_table.col(j).head(n - j).dot(c.segment(j + 1, n - j));
    for (Eigen::Index p = 1; p < n; ++p) out(p) -= a.frag_total(p) * f(p) / Scalar(2);
}

} // namespace detail

template <typename Scalar>
void check_on_grid(const OperatorAssembly<Scalar>& a, const GridFunction<Scalar>& f)
{
    require_same_grid(*a.grid, *f.grid);
}

template <typename Scalar>
GridFunction<Scalar> apply_coagulation(const OperatorAssembly<Scalar>& a,
                                       const GridFunction<Scalar>& f,
                                       const GridFunction<Scalar>& g)
{
    check_on_grid(a, f);
    check_on_grid(a, g);
    Vec<Scalar> out;
    if (&f == &g || f.values == g.values)
        detail::self_coagulation(a, f.values, out);
    else
        detail::coagulation(a, f.values, g.values, out);
    return GridFunction<Scalar>(a.grid, std::move(out));
}

template <typename Scalar>
GridFunction<Scalar> apply_fragmentation(const OperatorAssembly<Scalar>& a,
                                         const GridFunction<Scalar>& f)
{
    check_on_grid(a, f);
    Vec<Scalar> out;
    detail::fragmentation(a, f.values, out);
    return GridFunction<Scalar>(a.grid, std::move(out));
}

// Dense matrix of the (linear) fragmentation operator.
template <typename Scalar>
Mat<Scalar> fragmentation_matrix(const OperatorAssembly<Scalar>& a)
{
    const auto n = a.size();
    Mat<Scalar> M = Mat<Scalar>::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n - j; ++k) {
            const auto m = j + k + 1;
            if (a.edge_weight(m) <= Scalar(0)) continue;
            const Scalar w = a.frag_table(j, k) / (Scalar(2) * a.edge_weight(m));
            if (m - 1 >= 1) M(j, m - 1) += w * a.frag_total(m - 1);
            if (m < n) M(j, m) += w * a.frag_total(m);
        }
    }
    for (Eigen::Index p = 1; p < n; ++p) M(p, p) -= a.frag_total(p) / Scalar(2);
    return M;
}

// Mass per unit time carried by coagulating pairs whose product would leave the grid.
template <typename Scalar>
Scalar truncation_defect(const OperatorAssembly<Scalar>& a, const Vec<Scalar>& f,
                         const Vec<Scalar>& g)
{
    const auto n = a.size();
    const Scalar h = a.step();
    Scalar s = 0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = std::max<Eigen::Index>(0, n - 1 - j); k < n; ++k)
            s += a.coag_table(j, k) * f(j) * g(k) * Scalar(j + k + 1) * h;
    return s * h * h / Scalar(2);
}

template <typename Scalar>
struct WeakPairing {
    Scalar coag_part{0};
    Scalar frag_part{0};
    Scalar truncation_defect{0};
};

// Discrete weak forms: sum over events of (phi after - phi before).
template <typename Scalar>
WeakPairing<Scalar> weak_pairing(const OperatorAssembly<Scalar>& a, const GridFunction<Scalar>& f,
                                 const GridFunction<Scalar>& g,
                                 const std::function<Scalar(Scalar)>& phi)
{
    check_on_grid(a, f);
    check_on_grid(a, g);
    const auto n = a.size();
    const Scalar h = a.step();
    Vec<Scalar> p(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        p(i) = phi(a.grid->nodes(i));
        if (!std::isfinite(double(p(i)))) throw std::domain_error("phi not finite on grid");
    }

    WeakPairing<Scalar> out;
    for (Eigen::Index j = 0; j + 1 < n; ++j)
        for (Eigen::Index k = 0; j + k + 1 < n; ++k) {
            const auto m = j + k + 1;
            const Scalar jump = (p(m - 1) + p(m)) / Scalar(2) - p(j) - p(k);
            out.coag_part += a.coag_table(j, k) * f.values(j) * g.values(k) * jump;
        }
    out.coag_part *= h * h / Scalar(2);

    Vec<Scalar> L = Vec<Scalar>::Zero(n + 1);
    for (Eigen::Index q = 1; q < n; ++q) L(q) = a.frag_total(q) * f.values(q);
    for (Eigen::Index m = 1; m <= n; ++m) {
        if (a.edge_weight(m) <= Scalar(0)) continue;
        Scalar daughters = 0;
        for (Eigen::Index j = 0; j < m; ++j) daughters += a.frag_table(j, m - 1 - j) * (p(j) + p(m - 1 - j));
        daughters /= a.edge_weight(m);
        const Scalar parents = L(m - 1) * p(m - 1) + (m < n ? L(m) * p(m) : Scalar(0));
        out.frag_part += (L(m - 1) + L(m)) * daughters - parents;
    }
    out.frag_part *= h / Scalar(4);

    out.truncation_defect = truncation_defect(a, f.values, g.values);
    return out;
}

} // namespace coagfrag
