#pragma once
// Empirical extraction of the paper's quantities from entropy series:
// power-law growth exponents (Fig. 1), convexity classes (Fig. 2), the
// critical entropic index q_c (Fig. 3), saturation times and the theta
// scaling exponent (Fig. 4).

#include <stdexcept>
#include <utility>
#include <vector>

#include "qkr/spectrum.hpp"

namespace qkr {

struct fit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct bracket_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct not_saturated_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// alpha(q) failed the monotonicity precondition; carries the sampled table.
struct model_violation_error : std::runtime_error {
    std::vector<std::pair<double, double>> alpha_table;
    model_violation_error(const std::string& what,
                          std::vector<std::pair<double, double>> table)
        : std::runtime_error(what), alpha_table(std::move(table)) {}
};

struct PowerLawFit {
    double alpha = 0.0;      // exponent: slope of ln S vs ln t
    double prefactor = 0.0;  // exp(intercept)
    double stderr_alpha = 0.0;
    double window_lo = 0.0;  // kick range actually fitted
    double window_hi = 0.0;
    int points = 0;
};

// Least squares in (ln t, ln S) over kicks in [lo, hi].  Requires >= 8 points
// with strictly positive values and kicks.
PowerLawFit fit_power_law(const EntropySeries& series, double lo, double hi);

enum class Convexity { Convex, Linear, Concave };
const char* to_string(Convexity c);

// convex if alpha - band*stderr > 1, concave if alpha + band*stderr < 1,
// else linear; default band = 2.
Convexity classify_convexity(const EntropySeries& series, double lo, double hi,
                             double band = 2.0);

// plateau = mean of the trailing 10% of samples; returns the first crossing
// of fraction*plateau, linearly interpolated between samples.
double saturation_time(const EntropySeries& series, double fraction = 0.5);

// Window policies.  Exponent fits use [5, t_S]: transient and saturation
// shoulder excluded.  Curvature classification uses one uniform window
// [2, max(t_S, 12)] for every noise level: t = 1 is dropped (nearly pure
// ensemble biases the slope) and the 12-kick floor keeps >= 8 samples on
// fast-saturating curves (Fig. 2 at large sqrt(D)).
std::pair<double, double> default_fit_window(const EntropySeries& series);
std::pair<double, double> classification_window(const EntropySeries& series);

struct CriticalQResult {
    double q_c = 0.0;
    double q_lo = 0.0, q_hi = 0.0;          // final bracket
    double alpha_lo = 0.0, alpha_hi = 0.0;  // exponents at the bracket ends
    bool alpha_increasing = false;          // orientation detected on the data
    int iterations = 0;
    double tol = 0.0;
    std::vector<std::pair<double, double>> alpha_table;  // sampled (q, alpha)
};

// Bisection on g(q) = alpha(q) - 1 over Tsallis series recomputed from the
// stored spectra (trajectories are averaged pointwise, never re-simulated).
// alpha(q) must be monotone over q_range; the orientation (increasing on
// physical cascade spectra, decreasing on growing-support models) is detected
// from the endpoints and enforced on a coarse grid.
CriticalQResult find_critical_q(const std::vector<SpectrumTrajectory>& trajs,
                                double q_min, double q_max, double tol = 0.005,
                                double window_lo = 5.0);
CriticalQResult find_critical_q(const SpectrumTrajectory& traj, double q_min,
                                double q_max, double tol = 0.005,
                                double window_lo = 5.0);

// (theta_hat, stderr): minus the log-log slope of t_S against D; >= 4 points.
std::pair<double, double> fit_theta(const std::vector<std::pair<double, double>>& tS_points);

// Pointwise mean of aligned entropy series (multiple noise realizations),
// truncated to the shortest; kicks must agree on the kept range.
EntropySeries average_series(const std::vector<EntropySeries>& runs);

// Mean Tsallis-q series across trajectories (the q-scan workhorse).
EntropySeries mean_tsallis_series(const std::vector<SpectrumTrajectory>& trajs, double q);

}  // namespace qkr
