#include "qkr/entropy.hpp"

#include <cmath>

namespace qkr {

namespace {
constexpr double kNegTol = 1e-9;  // spectra are clamped upstream; reject worse

void check_spectrum(const Spectrum& lam) {
    if (lam.empty()) throw domain_error("entropy: empty spectrum");
    for (double x : lam) {
        if (!std::isfinite(x) || x < -kNegTol)
            throw domain_error("entropy: spectrum entry " + std::to_string(x) +
                               " outside probability range");
    }
}
}  // namespace

double gibbs(const Spectrum& lam) {
    check_spectrum(lam);
    double s = 0.0;
    for (double x : lam)
        if (x > 0.0) s -= x * std::log(x);
    return s;
}

double tsallis(const Spectrum& lam, double q) {
    if (q <= 0.0) throw domain_error("tsallis: q must be positive");
    if (q == 1.0) return gibbs(lam);
    check_spectrum(lam);
    double sum = 0.0;
    for (double x : lam)
        if (x > 0.0) sum += std::pow(x, q);  // 0^q == 0 by definition
    return (1.0 - sum) / (q - 1.0);
}

double renyi(const Spectrum& lam, double order) {
    if (order <= 0.0 || order == 1.0)
        throw domain_error("renyi: order must be positive and != 1");
    check_spectrum(lam);
    double sum = 0.0;
    for (double x : lam)
        if (x > 0.0) sum += std::pow(x, order);
    if (sum <= 0.0) throw domain_error("renyi: all-zero spectrum");
    return std::log(sum) / (1.0 - order);
}

double Functional::operator()(const Spectrum& lam) const {
    switch (kind) {
        case Kind::Gibbs:
            return qkr::gibbs(lam);
        case Kind::Tsallis:
            return qkr::tsallis(lam, index);
        case Kind::Renyi:
            return qkr::renyi(lam, index);
    }
    throw domain_error("entropy: unknown functional");
}

std::string Functional::name() const {
    switch (kind) {
        case Kind::Gibbs:
            return "gibbs";
        case Kind::Tsallis:
            return "tsallis(q=" + std::to_string(index) + ")";
        case Kind::Renyi:
            return "renyi(order=" + std::to_string(index) + ")";
    }
    return "?";
}

}  // namespace qkr
