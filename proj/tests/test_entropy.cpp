#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "qkr/entropy.hpp"

using qkr::Spectrum;

namespace {

// 40-digit mpmath references, frozen before the implementation was written
constexpr double kGibbs3 = 0.80181855254333730856;    // {0.7, 0.2, 0.1}
constexpr double kGibbs4 = 0.98842592463802904722;    // {0.62, 0.25, 0.09, 0.04}
constexpr double kTsallis3 = 1.4099175266368333542;   // {0.7, 0.2, 0.1}, q = 0.33
constexpr double kRenyi3 = 0.61618613942381698443;    // {0.7, 0.2, 0.1}, order 2

Spectrum random_spectrum(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Spectrum s(n);
    double total = 0.0;
    for (double& x : s) total += (x = u(rng) + 1e-12);
    for (double& x : s) x /= total;
    return s;
}

}  // namespace

TEST_CASE("gibbs entropy matches frozen references") {
    CHECK(qkr::gibbs({0.7, 0.2, 0.1}) == doctest::Approx(kGibbs3).epsilon(1e-14));
    CHECK(qkr::gibbs({0.62, 0.25, 0.09, 0.04}) ==
          doctest::Approx(kGibbs4).epsilon(1e-14));
}

TEST_CASE("gibbs trivial cases") {
    CHECK(qkr::gibbs({1.0}) == 0.0);               // pure state
    CHECK(qkr::gibbs({1.0, 0.0, 0.0}) == 0.0);     // zero eigenvalues ignored
    const int n = 10;
    const Spectrum uniform(n, 1.0 / n);
    CHECK(qkr::gibbs(uniform) == doctest::Approx(std::log(10.0)).epsilon(1e-14));
}

TEST_CASE("tsallis entropy matches frozen reference and closed forms") {
    CHECK(qkr::tsallis({0.7, 0.2, 0.1}, 0.33) ==
          doctest::Approx(kTsallis3).epsilon(1e-14));
    // uniform spectrum: S_q = (1 - n^{1-q})/(q-1)
    const int n = 16;
    const Spectrum uniform(n, 1.0 / n);
    for (double q : {0.3, 0.7, 2.0})
        CHECK(qkr::tsallis(uniform, q) ==
              doctest::Approx((1.0 - std::pow(n, 1.0 - q)) / (q - 1.0)).epsilon(1e-13));
    CHECK(qkr::tsallis({1.0}, 0.5) == 0.0);
}

TEST_CASE("tsallis q -> 1 recovers gibbs") {
    const Spectrum s{0.5, 0.3, 0.15, 0.05};
    CHECK(qkr::tsallis(s, 1.0) == qkr::gibbs(s));  // exact branch
    for (double dq : {1e-6, -1e-6})
        CHECK(qkr::tsallis(s, 1.0 + dq) ==
              doctest::Approx(qkr::gibbs(s)).epsilon(1e-4));
}

TEST_CASE("renyi entropy matches frozen reference and limits") {
    CHECK(qkr::renyi({0.7, 0.2, 0.1}, 2.0) ==
          doctest::Approx(kRenyi3).epsilon(1e-14));
    const int n = 8;
    const Spectrum uniform(n, 1.0 / n);
    for (double b : {0.5, 2.0, 3.0})  // uniform: S_R = ln n for every order
        CHECK(qkr::renyi(uniform, b) == doctest::Approx(std::log(8.0)).epsilon(1e-13));
    CHECK(qkr::renyi({1.0, 0.0}, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("entropies vanish only on pure states and are maximal on uniform") {
    std::mt19937_64 rng(12345);
    const int n = 12;
    const double smax_g = std::log(static_cast<double>(n));
    for (int trial = 0; trial < 1000; ++trial) {
        const Spectrum s = random_spectrum(rng, n);
        const double g = qkr::gibbs(s);
        CHECK(g >= 0.0);
        CHECK(g <= smax_g + 1e-12);
        const double t = qkr::tsallis(s, 0.4);
        CHECK(t >= 0.0);
        CHECK(t <= qkr::tsallis(Spectrum(n, 1.0 / n), 0.4) + 1e-12);
        const double r = qkr::renyi(s, 2.0);
        CHECK(r >= 0.0);
        CHECK(r <= smax_g + 1e-12);
    }
}

TEST_CASE("entropies are permutation invariant") {
    const Spectrum a{0.05, 0.6, 0.1, 0.25};
    const Spectrum b{0.6, 0.25, 0.1, 0.05};
    // summation order may differ in the last bit
    CHECK(qkr::gibbs(a) == doctest::Approx(qkr::gibbs(b)).epsilon(1e-15));
    CHECK(qkr::tsallis(a, 0.37) ==
          doctest::Approx(qkr::tsallis(b, 0.37)).epsilon(1e-15));
    CHECK(qkr::renyi(a, 2.0) == doctest::Approx(qkr::renyi(b, 2.0)).epsilon(1e-15));
}

TEST_CASE("mixing two spectra never decreases gibbs entropy") {
    // concavity: S(0.5 a + 0.5 b) >= 0.5 S(a) + 0.5 S(b)
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 200; ++trial) {
        const Spectrum a = random_spectrum(rng, 6);
        const Spectrum b = random_spectrum(rng, 6);
        Spectrum mix(6);
        for (int i = 0; i < 6; ++i) mix[i] = 0.5 * (a[i] + b[i]);
        CHECK(qkr::gibbs(mix) >= 0.5 * (qkr::gibbs(a) + qkr::gibbs(b)) - 1e-12);
    }
}

TEST_CASE("invalid spectra are rejected") {
    CHECK_THROWS_AS((void)qkr::gibbs({0.5, -0.1, 0.6}), qkr::domain_error);
    CHECK_THROWS_AS((void)qkr::tsallis({0.5, -0.1, 0.6}, 0.5), qkr::domain_error);
    CHECK_THROWS_AS((void)qkr::renyi({0.5, -0.1, 0.6}, 2.0), qkr::domain_error);
    CHECK_THROWS_AS((void)qkr::gibbs({}), qkr::domain_error);
    // tiny negative values from eigensolver noise are tolerated
    CHECK_NOTHROW((void)qkr::gibbs({1.0, -1e-12}));
}

TEST_CASE("functional wrapper dispatches and names correctly") {
    const Spectrum s{0.7, 0.2, 0.1};
    const qkr::Functional g = qkr::Functional::gibbs_fn();
    const qkr::Functional t = qkr::Functional::tsallis_fn(0.33);
    const qkr::Functional r = qkr::Functional::renyi_fn(2.0);
    CHECK(g(s) == qkr::gibbs(s));
    CHECK(t(s) == qkr::tsallis(s, 0.33));
    CHECK(r(s) == qkr::renyi(s, 2.0));
    CHECK(g.name() == "gibbs");
    CHECK(t.name().find("tsallis") != std::string::npos);
    CHECK(r.name().find("renyi") != std::string::npos);
}
