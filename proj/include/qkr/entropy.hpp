#pragma once
// Gibbs/von Neumann, Tsallis, and Renyi entropies over probability spectra
// (eigenvalues of the ensemble density matrix), Eqs. (1)-(2).

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qkr {

using Spectrum = std::vector<double>;

// S_G = -sum lam ln lam, with 0 ln 0 == 0.  Range [0, ln(len)].
double gibbs(const Spectrum& lam);

// S_q = (1 - sum lam^q) / (q - 1), q > 0; q == 1 routes to gibbs exactly.
// Zero eigenvalues contribute 0 for every q > 0.
double tsallis(const Spectrum& lam, double q);

// S^(beta) = ln(sum lam^beta) / (1 - beta), beta > 0, beta != 1.
// Default order 2 (the growth probe used for Fig. 1).
double renyi(const Spectrum& lam, double order = 2.0);

// Entropy functional tag: gibbs | tsallis(q) | renyi(order).
struct Functional {
    enum class Kind { Gibbs, Tsallis, Renyi } kind = Kind::Gibbs;
    double index = 1.0;  // q for Tsallis, order for Renyi; ignored for Gibbs

    static Functional gibbs_fn() { return {Kind::Gibbs, 1.0}; }
    static Functional tsallis_fn(double q) { return {Kind::Tsallis, q}; }
    static Functional renyi_fn(double order = 2.0) { return {Kind::Renyi, order}; }

    double operator()(const Spectrum& lam) const;
    std::string name() const;
};

// (kick, value) series of one entropy functional along a trajectory.
struct EntropySeries {
    Functional functional;
    std::vector<double> kicks;
    std::vector<double> values;
    std::string provenance;  // id of the SpectrumTrajectory it came from

    std::size_t size() const { return kicks.size(); }
};

struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qkr
