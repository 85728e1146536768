#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace coagfrag {

enum class GridScheme { UniformMidpoint, Geometric };

inline std::string to_string(GridScheme s)
{
    return s == GridScheme::UniformMidpoint ? "uniform-midpoint" : "geometric";
}

inline GridScheme grid_scheme_from_string(const std::string& s)
{
    if (s == "uniform-midpoint") return GridScheme::UniformMidpoint;
    if (s == "geometric") return GridScheme::Geometric;
    throw std::invalid_argument("unknown grid scheme '" + s + "'");
}

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Truncated size axis (0, x_max] with one node and one quadrature weight per cell.
template <typename Scalar>
struct SizeGrid {
    Vec<Scalar> nodes;
    Vec<Scalar> weights;
    Scalar x_max{};
    GridScheme scheme{GridScheme::UniformMidpoint};

    Eigen::Index size() const { return nodes.size(); }
    bool uniform() const { return scheme == GridScheme::UniformMidpoint; }
    // Cell width of a uniform grid.
    Scalar step() const { return weights(0); }

    bool operator==(const SizeGrid& o) const
    {
        return scheme == o.scheme && x_max == o.x_max && nodes.size() == o.nodes.size() &&
               nodes == o.nodes && weights == o.weights;
    }
};

template <typename Scalar>
using GridPtr = std::shared_ptr<const SizeGrid<Scalar>>;

template <typename Scalar>
struct GridFunction {
    GridPtr<Scalar> grid;
    Vec<Scalar> values;

    GridFunction() = default;
    GridFunction(GridPtr<Scalar> g, Vec<Scalar> v) : grid(std::move(g)), values(std::move(v))
    {
        if (!grid) throw std::invalid_argument("grid function without grid");
        if (values.size() != grid->size())
            throw std::invalid_argument("grid function length does not match grid");
        if (!values.allFinite()) throw std::invalid_argument("grid function has non-finite values");
    }

    static GridFunction zero(GridPtr<Scalar> g)
    {
        const auto n = g->size();
        return GridFunction(std::move(g), Vec<Scalar>::Zero(n));
    }

    Eigen::Index size() const { return values.size(); }
};

template <typename Scalar>
bool same_grid(const SizeGrid<Scalar>& a, const SizeGrid<Scalar>& b)
{
    return &a == &b || a == b;
}

template <typename Scalar>
void require_same_grid(const SizeGrid<Scalar>& a, const SizeGrid<Scalar>& b)
{
    if (!same_grid(a, b)) throw std::invalid_argument("grid mismatch");
}

template <typename Scalar = double>
GridPtr<Scalar> build_grid(Eigen::Index n, Scalar x_max,
                           GridScheme scheme = GridScheme::UniformMidpoint)
{
    if (n < 2) throw std::invalid_argument("grid needs at least 2 nodes");
    if (!(x_max > Scalar(0)) || !std::isfinite(static_cast<double>(x_max)))
        throw std::invalid_argument("x_max must be positive");

    auto g = std::make_shared<SizeGrid<Scalar>>();
    g->x_max = x_max;
    g->scheme = scheme;
    g->nodes.resize(n);
    g->weights.resize(n);
    if (scheme == GridScheme::UniformMidpoint) {
        const Scalar h = x_max / Scalar(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            g->nodes(i) = (Scalar(i) + Scalar(0.5)) * h;
            g->weights(i) = h;
        }
    } else {
        // Widths grow by a constant ratio; the last cell is 100 times wider than the first.
        using std::pow;
        const Scalar q = pow(Scalar(100), Scalar(1) / Scalar(n - 1));
        const Scalar first = x_max * (q - Scalar(1)) / (pow(q, Scalar(n)) - Scalar(1));
        Scalar left = 0, width = first;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Scalar right = (i == n - 1) ? x_max : left + width;
            g->nodes(i) = Scalar(0.5) * (left + right);
            g->weights(i) = right - left;
            left = right;
            width *= q;
        }
    }
    return g;
}

template <typename Scalar>
Scalar moment(const GridFunction<Scalar>& f, Scalar beta)
{
    const auto& g = *f.grid;
    return (g.nodes.array().pow(beta) * f.values.array() * g.weights.array()).sum();
}

template <typename Scalar>
Scalar weighted_l1_norm(const GridFunction<Scalar>& f, Scalar alpha)
{
    const auto& g = *f.grid;
    return ((Scalar(1) + g.nodes.array()).pow(alpha) * f.values.array().abs() * g.weights.array())
        .sum();
}

// Weighted L1 distance between two functions on the same grid.
template <typename Scalar>
Scalar weighted_l1_distance(const GridFunction<Scalar>& f, const GridFunction<Scalar>& g,
                            Scalar alpha)
{
    require_same_grid(*f.grid, *g.grid);
    const auto& gr = *f.grid;
    return ((Scalar(1) + gr.nodes.array()).pow(alpha) * (f.values - g.values).array().abs() *
            gr.weights.array())
        .sum();
}

template <typename Scalar>
GridFunction<Scalar> sample(GridPtr<Scalar> grid, const std::function<Scalar(Scalar)>& formula)
{
    Vec<Scalar> v(grid->size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = formula(grid->nodes(i));
        if (!std::isfinite(static_cast<double>(v(i))))
            throw std::domain_error("formula is not finite at node " + std::to_string(i));
    }
    return GridFunction<Scalar>(std::move(grid), std::move(v));
}

} // namespace coagfrag
