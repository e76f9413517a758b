#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qkr/analysis.hpp"

using qkr::EntropySeries;
using qkr::Spectrum;
using qkr::SpectrumTrajectory;

namespace {

EntropySeries make_series(int t_max, double (*f)(double)) {
    EntropySeries s;
    for (int t = 1; t <= t_max; ++t) {
        s.kicks.push_back(t);
        s.values.push_back(f(static_cast<double>(t)));
    }
    return s;
}

// ~n geometrically spaced integer kicks in [1, t_max], duplicates removed.
std::vector<long> geom_kicks(long t_max, int n) {
    std::set<long> ts;
    for (int i = 0; i < n; ++i)
        ts.insert(std::lround(std::exp(std::log(static_cast<double>(t_max)) * i / (n - 1))));
    return {ts.begin(), ts.end()};
}

// synthetic trajectory: spectrum at kick t uniform over W(t) = ceil(t^beta)
// states (a few explicit zeros appended to mimic a fixed larger basis), so
// S_q = (1 - W^{1-q})/(q - 1) exactly and alpha(q) = beta(1 - q).
SpectrumTrajectory support_growth_traj(double beta, long t_max, int n_samples) {
    SpectrumTrajectory traj;
    for (long t : geom_kicks(t_max, n_samples)) {
        const auto W =
            static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(t), beta)));
        Spectrum s(W, 1.0 / W);
        s.insert(s.end(), 4, 0.0);  // zero padding must not affect any entropy
        traj.times.push_back(static_cast<double>(t));
        traj.spectra.push_back(std::move(s));
    }
    return traj;
}

}  // namespace

TEST_CASE("fit_power_law recovers exact power laws") {
    const EntropySeries s =
        make_series(100, +[](double t) { return 3.0 * std::pow(t, 2.5); });
    const qkr::PowerLawFit fit = qkr::fit_power_law(s, 1.0, 100.0);
    CHECK(fit.alpha == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit.stderr_alpha <= 1e-10);
    CHECK(fit.points == 100);
    CHECK(fit.window_lo == 1.0);
    CHECK(fit.window_hi == 100.0);

    const EntropySeries lin = make_series(50, +[](double t) { return 7.0 * t; });
    CHECK(qkr::fit_power_law(lin, 1.0, 50.0).alpha ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_power_law tolerates multiplicative noise (100 trials)") {
    std::mt19937_64 rng(4321);
    std::uniform_real_distribution<double> eps(-0.01, 0.01);
    for (int trial = 0; trial < 100; ++trial) {
        EntropySeries s;
        for (int t = 1; t <= 100; ++t) {
            s.kicks.push_back(t);
            s.values.push_back(std::pow(t, 2.5) * (1.0 + eps(rng)));
        }
        CHECK(std::abs(qkr::fit_power_law(s, 1.0, 100.0).alpha - 2.5) < 0.05);
    }
}

TEST_CASE("fit_power_law preconditions") {
    const EntropySeries s = make_series(20, +[](double t) { return t * t; });
    CHECK_THROWS_AS((void)qkr::fit_power_law(s, 1.0, 7.0), qkr::fit_error);  // 7 pts
    CHECK_THROWS_AS((void)qkr::fit_power_law(s, 9.0, 3.0), qkr::fit_error);
    EntropySeries bad = s;
    bad.values[10] = 0.0;
    CHECK_THROWS_AS((void)qkr::fit_power_law(bad, 1.0, 20.0), qkr::domain_error);
}

TEST_CASE("classify_convexity trivial classes") {
    const EntropySeries sq = make_series(40, +[](double t) { return t * t; });
    const EntropySeries rt = make_series(40, +[](double t) { return std::sqrt(t); });
    const EntropySeries ln = make_series(40, +[](double t) { return t; });
    CHECK(qkr::classify_convexity(sq, 1, 40) == qkr::Convexity::Convex);
    CHECK(qkr::classify_convexity(rt, 1, 40) == qkr::Convexity::Concave);
    CHECK(qkr::classify_convexity(ln, 1, 40) == qkr::Convexity::Linear);
    CHECK(std::string(qkr::to_string(qkr::Convexity::Convex)) == "convex");
    CHECK(std::string(qkr::to_string(qkr::Convexity::Linear)) == "linear");
    CHECK(std::string(qkr::to_string(qkr::Convexity::Concave)) == "concave");
}

TEST_CASE("classification is invariant under positive rescaling") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> eps(-0.05, 0.05);
    EntropySeries s;
    for (int t = 1; t <= 60; ++t) {
        s.kicks.push_back(t);
        s.values.push_back(std::pow(t, 1.15) * (1.0 + eps(rng)));
    }
    const auto base = qkr::classify_convexity(s, 1, 60);
    const double alpha = qkr::fit_power_law(s, 1, 60).alpha;
    for (double c : {1e-6, 17.0, 1e6}) {
        EntropySeries scaled = s;
        for (double& v : scaled.values) v *= c;
        CHECK(qkr::classify_convexity(scaled, 1, 60) == base);
        CHECK(qkr::fit_power_law(scaled, 1, 60).alpha ==
              doctest::Approx(alpha).epsilon(1e-12));
    }
}

TEST_CASE("saturation_time: exponential approach crosses at tau ln 2") {
    const double tau = 12.0;
    EntropySeries s;
    for (int t = 1; t <= 120; ++t) {
        s.kicks.push_back(t);
        s.values.push_back(2.3 * (1.0 - std::exp(-t / tau)));
    }
    // within one sampling interval of the analytic crossing
    CHECK(std::abs(qkr::saturation_time(s, 0.5) - tau * std::log(2.0)) <= 1.0);
}

TEST_CASE("saturation_time: step series returns the step kick") {
    EntropySeries s;
    for (int t = 1; t <= 50; ++t) {
        s.kicks.push_back(t);
        s.values.push_back(t >= 20 ? 1.7 : 0.0);
    }
    CHECK(qkr::saturation_time(s, 0.5) == doctest::Approx(20.0));
}

TEST_CASE("saturation_time: linear interpolation locates an off-grid crossing") {
    // values cross half-plateau exactly at t = 37.25, between samples 37, 38
    EntropySeries s;
    const double plateau = 2.0;
    for (int t = 1; t <= 200; ++t) {
        s.kicks.push_back(t);
        s.values.push_back(std::min(plateau, plateau * 0.5 * t / 37.25));
    }
    CHECK(std::abs(qkr::saturation_time(s, 0.5) - 37.25) <= 0.05);
}

TEST_CASE("saturation_time error paths") {
    EntropySeries one;
    one.kicks = {1.0};
    one.values = {0.5};
    CHECK_THROWS_AS((void)qkr::saturation_time(one, 0.5), qkr::not_saturated_error);
    EntropySeries neg;  // never reaches fraction * plateau (plateau negative)
    for (int t = 1; t <= 20; ++t) {
        neg.kicks.push_back(t);
        neg.values.push_back(-1.0);
    }
    CHECK_THROWS_AS((void)qkr::saturation_time(neg, 0.5), qkr::not_saturated_error);
}

TEST_CASE("find_critical_q on the W(t) = ceil(t^beta) family: q_c = 1 - 1/beta") {
    // horizon/window per beta keep the affine transient ((W^{1-q}-1) vs the
    // pure power) below the 0.02 tolerance at bounded memory
    struct Cfg {
        double beta;
        long t_max;
        double window_lo;
    };
    for (const Cfg& c : {Cfg{1.5, 1000, 15.0}, Cfg{2.0, 600, 15.0},
                         Cfg{2.5, 300, 15.0}, Cfg{3.0, 150, 12.0}}) {
        CAPTURE(c.beta);
        const std::vector<SpectrumTrajectory> trajs{
            support_growth_traj(c.beta, c.t_max, 64)};
        const qkr::CriticalQResult res =
            qkr::find_critical_q(trajs, 0.155, 0.805, 0.005, c.window_lo);
        CHECK(std::abs(res.q_c - (1.0 - 1.0 / c.beta)) <= 0.02);
        CHECK(res.q_hi - res.q_lo <= 0.005 + 1e-12);
        CHECK(res.q_lo <= res.q_c);
        CHECK(res.q_c <= res.q_hi);
        CHECK_FALSE(res.alpha_increasing);  // support growth: alpha = beta(1-q)
        CHECK(res.alpha_lo > 1.0);          // bracket invariant for decreasing
        CHECK(res.alpha_hi <= 1.0);
        CHECK(res.iterations > 0);
        CHECK(res.alpha_table.size() >= 10);  // 5 scan points + bisection trace
        CHECK(res.tol == 0.005);
    }
}

TEST_CASE("find_critical_q single-trajectory overload matches the vector form") {
    const SpectrumTrajectory traj = support_growth_traj(2.0, 600, 64);
    const auto a = qkr::find_critical_q(traj, 0.155, 0.805, 0.005, 15.0);
    const auto b = qkr::find_critical_q(std::vector<SpectrumTrajectory>{traj}, 0.155,
                                        0.805, 0.005, 15.0);
    CHECK(a.q_c == b.q_c);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("find_critical_q reports bracket_error without a sign change") {
    // beta = 0.5: alpha(q) = 0.5(1 - q) < 1 over the whole range; dense times
    // keep the fast-saturating high-q windows populated
    SpectrumTrajectory traj;
    for (int t = 1; t <= 300; ++t) {
        const auto W = static_cast<std::size_t>(std::ceil(std::sqrt(t)));
        traj.times.push_back(t);
        traj.spectra.push_back(Spectrum(W, 1.0 / W));
    }
    CHECK_THROWS_AS((void)qkr::find_critical_q(traj, 0.155, 0.805), qkr::bracket_error);
}

TEST_CASE("find_critical_q rejects non-monotone alpha(q) with the table attached") {
    // two-block spectra: weight 0.99 spread over ceil(t^3) states plus weight
    // 0.01 spread over ceil(1e4 t^0.1) states; the q-dependent crossover
    // between the blocks makes alpha(q) rise then fall across the scan grid.
    SpectrumTrajectory traj;
    for (int t = 1; t <= 40; ++t) {
        const auto A = static_cast<std::size_t>(std::ceil(std::pow(t, 3.0)));
        const auto B = static_cast<std::size_t>(std::ceil(1e4 * std::pow(t, 0.1)));
        Spectrum s;
        s.reserve(A + B);
        s.insert(s.end(), A, 0.99 / A);
        s.insert(s.end(), B, 0.01 / B);
        traj.times.push_back(t);
        traj.spectra.push_back(std::move(s));
    }
    try {
        (void)qkr::find_critical_q(traj, 0.155, 0.805);
        FAIL("expected model_violation_error");
    } catch (const qkr::model_violation_error& e) {
        CHECK(e.alpha_table.size() == 5);  // the orientation scan grid
        for (std::size_t i = 1; i < e.alpha_table.size(); ++i)
            CHECK(e.alpha_table[i].first > e.alpha_table[i - 1].first);
        CHECK(std::string(e.what()).find("monotone") != std::string::npos);
    }
}

TEST_CASE("fit_theta exact scaling laws") {
    std::vector<std::pair<double, double>> pts;
    for (double D : {1e-8, 1e-7, 1e-6, 1e-5, 1e-4})
        pts.emplace_back(D, std::pow(D, -0.4));
    const auto [theta, se] = qkr::fit_theta(pts);
    CHECK(theta == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(se <= 1e-12);

    pts.clear();  // prefactor invariance
    for (double D : {1e-8, 1e-7, 1e-6, 1e-5})
        pts.emplace_back(D, 137.0 * std::pow(D, -0.5));
    CHECK(qkr::fit_theta(pts).first == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fit_theta preconditions") {
    std::vector<std::pair<double, double>> three{{1e-6, 10}, {1e-5, 5}, {1e-4, 2}};
    CHECK_THROWS_AS((void)qkr::fit_theta(three), qkr::fit_error);
    std::vector<std::pair<double, double>> bad{
        {1e-6, 10}, {1e-5, 5}, {0.0, 2}, {1e-3, 1}};
    CHECK_THROWS_AS((void)qkr::fit_theta(bad), qkr::fit_error);
}

TEST_CASE("average_series: pointwise mean, truncated to the shortest run") {
    const EntropySeries a = make_series(10, +[](double t) { return t; });
    const EntropySeries b = make_series(8, +[](double t) { return 3.0 * t; });
    const EntropySeries avg = qkr::average_series({a, b});
    REQUIRE(avg.size() == 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(avg.kicks[i] == a.kicks[i]);
        CHECK(avg.values[i] == doctest::Approx(2.0 * (i + 1)).epsilon(1e-15));
    }
    EntropySeries misaligned = b;
    misaligned.kicks[3] = 99.0;
    CHECK_THROWS_AS((void)qkr::average_series({a, misaligned}), qkr::fit_error);
    CHECK_THROWS_AS((void)qkr::average_series({}), qkr::fit_error);
}

TEST_CASE("mean_tsallis_series matches the closed form on synthetic spectra") {
    const double q = 0.4;
    const std::vector<SpectrumTrajectory> trajs{support_growth_traj(2.0, 50, 64),
                                                support_growth_traj(2.0, 50, 64)};
    const EntropySeries s = qkr::mean_tsallis_series(trajs, q);
    REQUIRE(s.size() == trajs[0].times.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double W = std::ceil(std::pow(s.kicks[i], 2.0));
        const double expect = (1.0 - std::pow(W, 1.0 - q)) / (q - 1.0);
        CHECK(s.values[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("default and classification windows track the saturation onset") {
    EntropySeries s;  // saturating exponential, plateau 3.0, tau = 15
    for (int t = 1; t <= 300; ++t) {
        s.kicks.push_back(t);
        s.values.push_back(3.0 * (1.0 - std::exp(-t / 15.0)));
    }
    const double t_s = qkr::saturation_time(s, 0.5);
    const auto dflt = qkr::default_fit_window(s);
    CHECK(dflt.first == 5.0);
    CHECK(dflt.second == doctest::Approx(t_s));
    const auto cls = qkr::classification_window(s);
    CHECK(cls.first == 2.0);
    CHECK(cls.second == doctest::Approx(std::max(t_s, 12.0)));
}
