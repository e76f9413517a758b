#pragma once
// Batch experiment runner reproducing the paper's four figures and the q(hbar)
// table: config parsing, deterministic seed fan-out over a worker pool, CSV +
// JSON emission with a reproducibility manifest.

#include <cstdint>
#include <string>
#include <vector>

#include "qkr/analysis.hpp"

namespace qkr {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string experiment = "custom";  // fig1|fig2|fig3|fig4|q-of-hbar|custom
    std::vector<double> hbar_list{0.1};
    double K = 7.1;
    int basis_size = 0;  // 0 = auto: 2^14 for hbar >= 0.05, 2^21 below
    double tail_tolerance = 1e-6;
    std::vector<double> sqrt_D_list{0.002};
    std::vector<double> q_list;          // fig3 curve set
    double q_min = 0.155, q_max = 0.805; // bisection range
    double q_tol = 0.005;
    int N = 10;
    long n_kicks = 0;  // 0 = auto horizon via the entropy stop rule
    Cadence cadence;
    std::uint64_t master_seed = 20010;
    int realizations = 8;
    double renyi_order = 2.0;
    double window_lo = 5.0;
    std::string out_dir = "out";
    bool long_runs = false;
    int workers = 1;

    // Fill the per-figure defaults (caption parameter lists; fast-profile
    // hbar for the minutes-scale tiers) and validate.
    static ExperimentConfig defaults_for(const std::string& tag);
    static ExperimentConfig from_file(const std::string& path);
    void set_key(const std::string& key, const std::string& value);
    void validate() const;

    std::string canonical() const;  // stable key=value dump, hashed in manifests
    int basis_for(double hbar) const;
    bool is_long(double hbar) const { return basis_for(hbar) >= (1 << 18); }
};

// One (hbar, sqrtD) combination simulated over all realizations.
struct ComboRuns {
    double hbar = 0.0;
    double sqrt_D = 0.0;
    int basis = 0;     // smallest power of two passing the aliasing guard
    long horizon = 0;
    std::vector<SpectrumTrajectory> trajs;  // one per master seed
};

// Simulate every eligible (hbar, sqrtD) combination of the config on a
// bounded worker pool; ineligible (long-tier) combos are skipped unless
// cfg.long_runs.  Deterministic: outputs depend only on config + seeds.
std::vector<ComboRuns> run_combos(const ExperimentConfig& cfg,
                                  const std::vector<double>& hbars,
                                  const std::vector<double>& sqrtDs,
                                  std::vector<double>* skipped_hbar = nullptr);

struct Fig1Result {
    struct Curve {
        double hbar;
        EntropySeries series;  // seed-averaged Renyi(order)
        PowerLawFit fit;
    };
    std::vector<Curve> curves;
    std::vector<double> skipped_hbar;
};

struct Fig2Result {
    struct Curve {
        double sqrt_D;
        EntropySeries series;  // seed-averaged Gibbs
        PowerLawFit fit;
        Convexity cls;
    };
    std::vector<Curve> curves;
    bool flip_found = false;
    double flip_sqrt_D = 0.0;  // first grid sqrtD classified concave
};

struct Fig3Result {
    std::vector<double> q_list;
    std::vector<EntropySeries> sq_series;  // one per listed q, seed-averaged
    CriticalQResult critical;
    int n_simulations = 0;  // evolve_ensemble calls, for the reuse contract
};

struct Fig4Result {
    std::vector<double> sqrt_D;
    std::vector<double> t_S;
    double theta_hat = 0.0, theta_se = 0.0;
    double theta_prediction = 0.0;  // theta(q_c) from the smallest-D combo
    double quantum_slope = 0.0, classical_slope = 0.0;
    bool classical_faster = false;
};

struct QOfHbarResult {
    struct Row {
        double hbar;
        CriticalQResult res;
    };
    std::vector<Row> rows;  // ordered as configured
    bool monotone = false;  // q_c increases as hbar decreases
    std::vector<double> skipped_hbar;
};

Fig1Result run_fig1(const ExperimentConfig& cfg);
Fig2Result run_fig2(const ExperimentConfig& cfg);
Fig3Result run_fig3(const ExperimentConfig& cfg);
Fig4Result run_fig4(const ExperimentConfig& cfg);
QOfHbarResult run_q_of_hbar(const ExperimentConfig& cfg);
void run_custom(const ExperimentConfig& cfg);

}  // namespace qkr
