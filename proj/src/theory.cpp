#include "qkr/theory.hpp"

#include <cmath>
#include <string>

namespace qkr {

void TheoryParams::validate() const {
    if (!(q > 0.0 && q <= 1.0)) throw parameter_error("theory: need 0 < q <= 1");
    if (!(R0 > 0.0)) throw parameter_error("theory: need R0 > 0");
    if (q < 1.0 && !(lambda_q > 0.0)) throw parameter_error("theory: need lambda_q > 0");
    if (q == 1.0 && !(lambda_1 > 0.0)) throw parameter_error("theory: need lambda_1 > 0");
}

double r_model(double t, const TheoryParams& p) {
    p.validate();
    if (t < 0.0) throw parameter_error("r_model: t >= 0 required");
    if (p.q == 1.0) return p.R0 * std::exp(-p.lambda_1 * t);
    const double omq = 1.0 - p.q;
    return p.R0 * std::pow(1.0 + p.lambda_q * omq * t, -1.0 / omq);
}

double solve_tcg(const TheoryParams& p) {
    p.validate();
    if (!(p.D > 0.0)) throw parameter_error("solve_tcg: D > 0 required");
    // f(t) = R(t) - D t: positive at 0 (R0 > 0), strictly decreasing, so the
    // root is unique once bracketed.
    auto f = [&](double t) { return r_model(t, p) - p.D * t; };
    const double t_max = 1e3 * p.R0 / p.D;
    double lo = 0.0, hi = 1.0;
    while (f(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > t_max) throw solver_error("solve_tcg: failed to bracket root");
    }
    // bisection to relative tolerance 1e-10
    while ((hi - lo) > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double theta(double q) {
    if (q > 1.0) throw parameter_error("theta: q <= 1 required");
    return (1.0 - q) / (2.0 - q);
}

double t_quantum(double hbar, double lambda) {
    if (!(hbar > 0.0 && hbar < 1.0)) throw parameter_error("t_quantum: need 0 < hbar < 1");
    if (!(lambda > 0.0)) throw parameter_error("t_quantum: need lambda > 0");
    return std::log(1.0 / hbar) / lambda;
}

}  // namespace qkr
