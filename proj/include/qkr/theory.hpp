#pragma once
// Closed-form and numeric realizations of the scaling theory, Eqs. (3)-(8):
// the q-generalized unvisited-region decay R(t), the coarse-graining time
// t_CG solving R(t) = D t, the power index theta(q), and the quantum time t_Q.

#include <stdexcept>

namespace qkr {

struct TheoryParams {
    double lambda_q = 1.0;  // generalized Lyapunov coefficient (1/time)
    double q = 1.0;         // entropic index, 0 < q <= 1
    double R0 = 1.0;        // initial unvisited-region measure
    double D = 0.0;         // noise intensity
    double hbar = 0.0;      // effective Planck constant (t_Q only)
    double lambda_1 = 1.0;  // ordinary Lyapunov coefficient (q = 1 branch)

    void validate() const;
};

// Eq. (3): R(t) = R0 / [1 + lambda_q (1-q) t]^{1/(1-q)};
// q = 1 uses the exact exponential limit R0 e^{-lambda_1 t}.
double r_model(double t, const TheoryParams& p);

// Eq. (4): unique positive root of R(t) - D t = 0, bracketing bisection to
// relative tolerance 1e-10.  Throws solver_error if no bracket in
// [0, 1e3 * R0 / D].
double solve_tcg(const TheoryParams& p);

// Eq. (7): theta = (1-q)/(2-q).
double theta(double q);

// Eq. (8): t_Q = ln(1/hbar)/lambda, onset of long-range quantum correlations.
double t_quantum(double hbar, double lambda);

struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parameter_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qkr
