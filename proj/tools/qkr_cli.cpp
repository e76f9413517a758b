#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "qkr/analysis.hpp"
#include "qkr/experiment.hpp"
#include "qkr/rotor.hpp"
#include "qkr/spectrum.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    bool long_runs = false;
    int workers = 0;
};

void add_common(CLI::App* sub, CliOverrides& ov) {
    sub->add_option("--config", ov.config_path, "key=value config file");
    sub->add_option("--out", ov.out_dir, "output directory (default: out)");
    sub->add_option("--seed", ov.seed, "master seed override");
    sub->add_flag("--long-runs", ov.long_runs, "enable large-basis (small hbar) combos");
    sub->add_option("--workers", ov.workers, "worker threads for realizations");
}

qkr::ExperimentConfig make_config(const std::string& tag, const CliOverrides& ov) {
    qkr::ExperimentConfig cfg = ov.config_path.empty()
                                    ? qkr::ExperimentConfig::defaults_for(tag)
                                    : qkr::ExperimentConfig::from_file(ov.config_path);
    cfg.experiment = tag;  // subcommand is authoritative
    if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
    if (ov.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(ov.seed);
    if (ov.long_runs) cfg.long_runs = true;
    if (ov.workers > 0) cfg.workers = ov.workers;
    cfg.validate();
    return cfg;
}

int dispatch(const std::string& tag, const CliOverrides& ov) {
    const qkr::ExperimentConfig cfg = make_config(tag, ov);
    if (tag == "fig1") {
        const qkr::Fig1Result r = qkr::run_fig1(cfg);
        for (const auto& c : r.curves) {
            if (c.fit.points == 0)
                std::printf("fig1 hbar=%-6g no fit (flat or degenerate series)\n", c.hbar);
            else
                std::printf("fig1 hbar=%-6g alpha=%.4f +/- %.4f  window=[%g,%g]\n", c.hbar,
                            c.fit.alpha, c.fit.stderr_alpha, c.fit.window_lo, c.fit.window_hi);
        }
    } else if (tag == "fig2") {
        const qkr::Fig2Result r = qkr::run_fig2(cfg);
        for (const auto& c : r.curves)
            std::printf("fig2 sqrtD=%-7g alpha=%.4f  class=%s\n", c.sqrt_D, c.fit.alpha,
                        qkr::to_string(c.cls));
        if (r.flip_found)
            std::printf("fig2 convex->concave flip at sqrt_D=%g\n", r.flip_sqrt_D);
        else
            std::printf("fig2 no concave curve in scanned range\n");
    } else if (tag == "fig3") {
        const qkr::Fig3Result r = qkr::run_fig3(cfg);
        std::printf("fig3 q_c=%.4f in [%.4f,%.4f]  alpha %s in q  (%d simulations)\n",
                    r.critical.q_c, r.critical.q_lo, r.critical.q_hi,
                    r.critical.alpha_increasing ? "increasing" : "decreasing",
                    r.n_simulations);
    } else if (tag == "fig4") {
        const qkr::Fig4Result r = qkr::run_fig4(cfg);
        std::printf("fig4 theta_hat=%.4f +/- %.4f  theta(q_c)=%.4f\n", r.theta_hat,
                    r.theta_se, r.theta_prediction);
        std::printf("fig4 quantum slope=%.4f classical slope=%.4f classical_faster=%s\n",
                    r.quantum_slope, r.classical_slope,
                    r.classical_faster ? "yes" : "no");
    } else if (tag == "q-of-hbar") {
        const qkr::QOfHbarResult r = qkr::run_q_of_hbar(cfg);
        for (const auto& row : r.rows)
            std::printf("q-of-hbar hbar=%-6g q_c=%.4f\n", row.hbar, row.res.q_c);
        std::printf("q-of-hbar monotone (q_c up as hbar down): %s\n",
                    r.monotone ? "yes" : "no");
    } else {
        qkr::run_custom(cfg);
        std::printf("custom run written to %s/%s\n", cfg.out_dir.c_str(),
                    cfg.experiment.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum kicked rotor entropy toolkit"};
    app.require_subcommand(1);
    const char* tags[] = {"fig1", "fig2", "fig3", "fig4", "q-of-hbar", "custom"};
    const char* blurbs[] = {"Renyi entropy growth vs hbar",
                            "Gibbs entropy curvature vs noise",
                            "Tsallis q scan and critical q",
                            "saturation-time scaling and theta",
                            "critical q as a function of hbar",
                            "raw trajectory dumps for a combo grid"};
    CliOverrides ov;
    std::string chosen;
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(tags[i], blurbs[i]);
        add_common(sub, ov);
        sub->callback([&chosen, t = std::string(tags[i])] { chosen = t; });
    }

    CLI11_PARSE(app, argc, argv);
    try {
        return dispatch(chosen, ov);
    } catch (const qkr::aliasing_error& e) {
        std::fprintf(stderr, "aliasing error: %s\n", e.what());
        return 2;
    } catch (const qkr::fit_error& e) {
        std::fprintf(stderr, "fit error: %s\n", e.what());
        return 3;
    } catch (const qkr::bracket_error& e) {
        std::fprintf(stderr, "bracket error: %s\n", e.what());
        return 3;
    } catch (const qkr::model_violation_error& e) {
        std::fprintf(stderr, "model violation: %s\n", e.what());
        return 3;
    } catch (const qkr::not_saturated_error& e) {
        std::fprintf(stderr, "saturation error: %s\n", e.what());
        return 3;
    } catch (const qkr::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
