#include "coagfrag/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

namespace coagfrag {

LinearizedOperator assemble_linearized(const Assembly& a, const Function& Q)
{
    check_on_grid(a, Q);
    const auto n = a.size();
    const double h = a.step();
    const auto& K = a.coag_table;
    const Vector& q = Q.values;

    Matrix J = fragmentation_matrix(a);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        double KQ = 0;
        for (Eigen::Index j = 0; j + k + 1 < n; ++j) {
            const double kq = K(j, k) * q(j);
            J(j + k, k) += 0.5 * h * kq;
            J(j + k + 1, k) += 0.5 * h * kq;
            J(j, k) -= h * kq;
            KQ += kq;
        }
        J(k, k) -= h * KQ;
    }

    LinearizedOperator L;
    L.matrix = std::move(J);
    L.base_state = Q;
    L.grid = a.grid;
    L.epsilon = a.epsilon;
    return L;
}

RestrictedOperator project_zero_mass(const LinearizedOperator& L)
{
    const auto& g = *L.grid;
    const auto n = g.size();
    Vector m = g.nodes.cwiseProduct(g.weights);
    if (m.norm() == 0) throw std::invalid_argument("degenerate mass functional");

    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix Qfull = qr.householderQ() * Matrix::Identity(n, n);

    RestrictedOperator R;
    R.basis = Qfull.rightCols(n - 1);
    R.matrix = R.basis.transpose() * L.matrix * R.basis;
    R.mass = std::move(m);
    R.grid = L.grid;
    R.epsilon = L.epsilon;
    return R;
}

Function project_vector(const RestrictedOperator& Lr, const Function& h)
{
    require_same_grid(*Lr.grid, *h.grid);
    return Function(Lr.grid, Lr.basis * (Lr.basis.transpose() * h.values));
}

double dense_abscissa(const RestrictedOperator& Lr)
{
    Eigen::EigenSolver<Matrix> es(Lr.matrix, false);
    if (es.info() != Eigen::Success) throw SpectralError("eigensolver did not converge");
    return es.eigenvalues().real().maxCoeff();
}

double propagator_decay_rate(const RestrictedOperator& Lr, double rho, const PropagatorOptions& opt)
{
    if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
    const double s = std::sqrt(rho);
    const double tau = opt.step > 0 ? opt.step : 0.5 / s;
    const double horizon = opt.horizon > 0 ? opt.horizon : 40.0 / s;
    const int steps = std::max(4, int(std::lround(horizon / tau)));

    const Matrix E = (tau * Lr.matrix).exp();
    const auto& g = *Lr.grid;
    const Vector wnorm = (1.0 + g.nodes.array()).pow(opt.alpha).matrix().cwiseProduct(g.weights);

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Vector v(Lr.matrix.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = U(rng);

    auto norm = [&](const Vector& z) { return (Lr.basis * z).cwiseAbs().dot(wnorm); };
    v /= norm(v);

    // Cumulative log norm after each step; the fit uses the second half.
    std::vector<double> t, y;
    double logn = 0;
    for (int k = 1; k <= steps; ++k) {
        v = E * v;
        const double nv = norm(v);
        if (!(nv > 0) || !std::isfinite(nv)) throw SpectralError("propagator iteration broke down");
        logn += std::log(nv);
        v /= nv;
        t.push_back(k * tau);
        y.push_back(logn);
    }
    double st = 0, sy = 0, stt = 0, sty = 0;
    int m = 0;
    for (std::size_t i = t.size() / 2; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
        ++m;
    }
    const double slope = (sty - st * sy / m) / (stt - st * st / m);
    return -slope;
}

SpectralReport spectral_abscissa(const RestrictedOperator& Lr, double rho, bool with_propagator,
                                 const PropagatorOptions& opt)
{
    SpectralReport r;
    r.abscissa = dense_abscissa(Lr);
    r.propagator_rate = with_propagator ? propagator_decay_rate(Lr, rho, opt) : std::nan("");
    r.gap_reference = 2 * std::sqrt(rho);
    r.epsilon = Lr.epsilon;
    r.rho = rho;
    r.n = long(Lr.grid->size());
    r.x_max = Lr.grid->x_max;
    r.method = SpectralMethod::DenseEig;
    return r;
}

Function solve_linearized(const RestrictedOperator& Lr, const Function& h)
{
    require_same_grid(*Lr.grid, *h.grid);
    const double mass = Lr.mass.dot(h.values);
    if (std::abs(mass) > 1e-10)
        throw std::invalid_argument("right-hand side has nonzero mass " + std::to_string(mass));

    Eigen::FullPivLU<Matrix> lu(Lr.matrix);
    if (!lu.isInvertible()) throw SpectralError("restricted operator is singular");
    const Vector y = Lr.basis.transpose() * h.values;
    const Vector z = lu.solve(y);
    const double res = (Lr.matrix * z - y).norm();
    if (res > 1e-10 * std::max(1.0, y.norm())) throw SpectralError("linearized solve is inaccurate");
    return Function(Lr.grid, Lr.basis * z);
}

} // namespace coagfrag
