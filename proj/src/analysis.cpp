#include "qkr/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace qkr {

namespace {

// alpha(q) on the averaged Tsallis series with the per-q window
// [window_lo, t_S(q)] (falling back to the series end when unsaturated).
double alpha_of_q(const std::vector<SpectrumTrajectory>& trajs, double q,
                  double window_lo) {
    EntropySeries s = mean_tsallis_series(trajs, q);
    double hi;
    try {
        hi = saturation_time(s, 0.5);
    } catch (const not_saturated_error&) {
        hi = s.kicks.back();
    }
    return fit_power_law(s, window_lo, hi).alpha;
}

}  // namespace

PowerLawFit fit_power_law(const EntropySeries& series, double lo, double hi) {
    if (!(lo < hi)) throw fit_error("fit_power_law: degenerate window");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.kicks[i];
        if (t < lo || t > hi) continue;
        if (!(t > 0.0)) throw domain_error("fit_power_law: nonpositive kick");
        const double v = series.values[i];
        if (!(v > 0.0))
            throw domain_error("fit_power_law: nonpositive series value in window");
        x.push_back(std::log(t));
        y.push_back(std::log(v));
    }
    const int n = static_cast<int>(x.size());
    if (n < 8) throw fit_error("fit_power_law: fewer than 8 points in window");

    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) mx += x[i], my += y[i];
    mx /= n, my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw fit_error("fit_power_law: no spread in window");

    PowerLawFit fit;
    fit.alpha = sxy / sxx;
    const double intercept = my - fit.alpha * mx;
    fit.prefactor = std::exp(intercept);
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (intercept + fit.alpha * x[i]);
        rss += r * r;
    }
    fit.stderr_alpha = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
    fit.window_lo = lo;
    fit.window_hi = hi;
    fit.points = n;
    return fit;
}

const char* to_string(Convexity c) {
    switch (c) {
        case Convexity::Convex: return "convex";
        case Convexity::Linear: return "linear";
        case Convexity::Concave: return "concave";
    }
    return "?";
}

Convexity classify_convexity(const EntropySeries& series, double lo, double hi,
                             double band) {
    const PowerLawFit fit = fit_power_law(series, lo, hi);
    if (fit.alpha - band * fit.stderr_alpha > 1.0) return Convexity::Convex;
    if (fit.alpha + band * fit.stderr_alpha < 1.0) return Convexity::Concave;
    return Convexity::Linear;
}

double saturation_time(const EntropySeries& series, double fraction) {
    const std::size_t n = series.size();
    if (n < 2) throw not_saturated_error("saturation_time: series too short");
    const std::size_t tail = std::max<std::size_t>(1, n / 10);
    double plateau = 0.0;
    for (std::size_t i = n - tail; i < n; ++i) plateau += series.values[i];
    plateau /= tail;
    const double target = fraction * plateau;
    for (std::size_t i = 0; i < n; ++i) {
        if (series.values[i] < target) continue;
        if (i == 0 || series.values[i - 1] <= 0.0)
            return series.kicks[i];  // no meaningful interpolation from zero
        const double v0 = series.values[i - 1], v1 = series.values[i];
        const double t0 = series.kicks[i - 1], t1 = series.kicks[i];
        return v1 == v0 ? t1 : t0 + (target - v0) * (t1 - t0) / (v1 - v0);
    }
    throw not_saturated_error("saturation_time: series never reaches fraction of plateau");
}

std::pair<double, double> default_fit_window(const EntropySeries& series) {
    double hi;
    try {
        hi = saturation_time(series, 0.5);
    } catch (const not_saturated_error&) {
        hi = series.kicks.empty() ? 0.0 : series.kicks.back();
    }
    return {5.0, hi};
}

std::pair<double, double> classification_window(const EntropySeries& series) {
    // Curvature class needs one uniform window across noise levels: start
    // after the first kick (the ensemble is still nearly pure at t = 1, which
    // biases the log-log slope up) and cover the growth regime through the
    // saturation onset, with a 12-kick floor so fast-saturating curves still
    // have >= 8 samples.
    double hi;
    try {
        hi = saturation_time(series, 0.5);
    } catch (const not_saturated_error&) {
        hi = series.kicks.empty() ? 0.0 : series.kicks.back();
    }
    return {2.0, std::max(hi, 12.0)};
}

EntropySeries average_series(const std::vector<EntropySeries>& runs) {
    if (runs.empty()) throw fit_error("average_series: no input series");
    std::size_t len = runs[0].size();
    for (const EntropySeries& r : runs) len = std::min(len, r.size());
    if (len == 0) throw fit_error("average_series: empty series");
    EntropySeries out;
    out.functional = runs[0].functional;
    out.provenance = runs[0].provenance + "+avg";
    out.kicks.assign(runs[0].kicks.begin(), runs[0].kicks.begin() + len);
    out.values.assign(len, 0.0);
    for (const EntropySeries& r : runs) {
        for (std::size_t i = 0; i < len; ++i) {
            if (r.kicks[i] != out.kicks[i])
                throw fit_error("average_series: sampling grids differ");
            out.values[i] += r.values[i];
        }
    }
    for (double& v : out.values) v /= runs.size();
    return out;
}

EntropySeries mean_tsallis_series(const std::vector<SpectrumTrajectory>& trajs,
                                  double q) {
    std::vector<EntropySeries> runs;
    runs.reserve(trajs.size());
    for (const SpectrumTrajectory& t : trajs)
        runs.push_back(entropy_series(t, Functional::tsallis_fn(q)));
    return average_series(runs);
}

CriticalQResult find_critical_q(const std::vector<SpectrumTrajectory>& trajs,
                                double q_min, double q_max, double tol,
                                double window_lo) {
    if (trajs.empty()) throw bracket_error("find_critical_q: no trajectories");
    if (!(q_min > 0.0 && q_min < q_max && q_max < 1.0))
        throw bracket_error("find_critical_q: need 0 < q_min < q_max < 1");

    CriticalQResult res;
    res.tol = tol;
    auto alpha = [&](double q) {
        const double a = alpha_of_q(trajs, q, window_lo);
        res.alpha_table.emplace_back(q, a);
        return a;
    };

    // orientation + monotonicity on a coarse grid
    constexpr int kGrid = 5;
    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i < kGrid; ++i) {
        const double q = q_min + (q_max - q_min) * i / (kGrid - 1);
        grid.emplace_back(q, alpha(q));
    }
    const bool increasing = grid.back().second > grid.front().second;
    res.alpha_increasing = increasing;
    for (int i = 1; i < kGrid; ++i) {
        const bool ok = increasing ? grid[i].second >= grid[i - 1].second
                                   : grid[i].second <= grid[i - 1].second;
        if (!ok)
            throw model_violation_error("find_critical_q: alpha(q) not monotone",
                                        res.alpha_table);
    }

    double lo = q_min, hi = q_max;
    double a_lo = grid.front().second, a_hi = grid.back().second;
    if ((a_lo - 1.0) * (a_hi - 1.0) > 0.0)
        throw bracket_error("find_critical_q: alpha(q) - 1 does not change sign in range");

    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double a_mid = alpha(mid);
        ++res.iterations;
        const bool below = increasing ? a_mid < 1.0 : a_mid > 1.0;
        if (below)
            lo = mid, a_lo = a_mid;
        else
            hi = mid, a_hi = a_mid;
        if (res.iterations > 64) break;
    }
    res.q_lo = lo;
    res.q_hi = hi;
    res.alpha_lo = a_lo;
    res.alpha_hi = a_hi;
    res.q_c = 0.5 * (lo + hi);
    std::sort(res.alpha_table.begin(), res.alpha_table.end());
    return res;
}

CriticalQResult find_critical_q(const SpectrumTrajectory& traj, double q_min,
                                double q_max, double tol, double window_lo) {
    return find_critical_q(std::vector<SpectrumTrajectory>{traj}, q_min, q_max, tol,
                           window_lo);
}

std::pair<double, double> fit_theta(
    const std::vector<std::pair<double, double>>& tS_points) {
    const int n = static_cast<int>(tS_points.size());
    if (n < 4) throw fit_error("fit_theta: need >= 4 points");
    std::vector<double> x, y;
    for (auto [D, tS] : tS_points) {
        if (!(D > 0.0 && tS > 0.0)) throw fit_error("fit_theta: nonpositive input");
        x.push_back(std::log(D));
        y.push_back(std::log(tS));
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) mx += x[i], my += y[i];
    mx /= n, my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw fit_error("fit_theta: degenerate D grid");
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (my + slope * (x[i] - mx));
        rss += r * r;
    }
    const double se = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
    return {-slope, se};
}

}  // namespace qkr
