#pragma once

#include "coagfrag/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coagfrag {

// Dense matrix of h -> 2 C(Q, h) + F(h).
struct LinearizedOperator {
    Matrix matrix;
    Function base_state;
    GridPtr<double> grid;
    double epsilon{0};
};

// The operator restricted to {h : sum x_i h_i w_i = 0} in an orthonormal basis.
struct RestrictedOperator {
    Matrix matrix;  // (n-1) x (n-1)
    Matrix basis;   // n x (n-1), orthonormal columns spanning the zero-mass subspace
    Vector mass;    // x_i w_i
    GridPtr<double> grid;
    double epsilon{0};
};

enum class SpectralMethod { DenseEig, PowerOnPropagator };

struct SpectralReport {
    double abscissa{0};
    double propagator_rate{0};
    double gap_reference{0};
    double epsilon{0};
    double rho{0};
    long n{0};
    double x_max{0};
    SpectralMethod method{SpectralMethod::DenseEig};
};

class SpectralError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

LinearizedOperator assemble_linearized(const Assembly& a, const Function& Q);

RestrictedOperator project_zero_mass(const LinearizedOperator& L);

// Orthogonal projection of h onto the zero-mass subspace.
Function project_vector(const RestrictedOperator& Lr, const Function& h);

// Largest real part of the restricted spectrum.
double dense_abscissa(const RestrictedOperator& Lr);

struct PropagatorOptions {
    double step{0};      // 0 means 0.5 / sqrt(rho)
    double horizon{0};   // 0 means 40 / sqrt(rho)
    double alpha{0};     // norm weight (1 + x)^alpha
    std::uint64_t seed{1};
};

// Decay rate of ||exp(L t) h||_{L1_alpha} for a random zero-mass h, from the late
// part of a power iteration on exp(L step).
double propagator_decay_rate(const RestrictedOperator& Lr, double rho, const PropagatorOptions& opt = {});

SpectralReport spectral_abscissa(const RestrictedOperator& Lr, double rho, bool with_propagator = true,
                                 const PropagatorOptions& opt = {});

// Solves L g = h on the zero-mass subspace; rejects h with nonzero mass.
Function solve_linearized(const RestrictedOperator& Lr, const Function& h);

} // namespace coagfrag
