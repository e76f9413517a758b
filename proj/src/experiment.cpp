#include "qkr/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qkr/theory.hpp"
#include "qkr/util.hpp"

namespace qkr {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t pos = 0;
        const double x = std::stod(cell, &pos);
        out.push_back(x);
    }
    if (out.empty()) throw config_error("empty list value: " + v);
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt17(v[i]);
    return s;
}

std::string num_tag(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

void run_parallel(std::vector<std::function<void()>>& tasks, int workers) {
    if (workers <= 1 || tasks.size() <= 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                tasks[i]();
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(workers, static_cast<int>(tasks.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

fs::path experiment_dir(const ExperimentConfig& cfg) {
    fs::path dir = fs::path(cfg.out_dir) / cfg.experiment;
    fs::create_directories(dir);
    return dir;
}

void write_manifest(const ExperimentConfig& cfg, const fs::path& dir,
                    const std::vector<ComboRuns>& combos,
                    const std::vector<double>& skipped) {
    json j;
    j["experiment"] = cfg.experiment;
    j["config"] = cfg.canonical();
    j["config_hash"] = hex64(fnv1a(cfg.canonical()));
    j["code_version"] = "1.0.0";
    std::vector<std::uint64_t> seeds;
    for (int r = 0; r < cfg.realizations; ++r) seeds.push_back(cfg.master_seed + r);
    j["seeds"] = seeds;
    json jc = json::array();
    for (const ComboRuns& c : combos)
        jc.push_back({{"hbar", c.hbar},
                      {"sqrt_D", c.sqrt_D},
                      {"basis_size", c.basis},
                      {"horizon", c.horizon},
                      {"status", "run"}});
    for (double h : skipped)
        jc.push_back({{"hbar", h},
                      {"basis_size", cfg.basis_for(h)},
                      {"status", "skipped: long tier, pass --long-runs"}});
    j["combos"] = jc;
    std::ofstream out(dir / "manifest.json");
    out << j.dump(2) << '\n';
}

void write_series_csv(const fs::path& path, const EntropySeries& s,
                      const std::string& col) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "kick," << col << '\n';
    for (std::size_t i = 0; i < s.size(); ++i)
        out << fmt17(s.kicks[i]) << ',' << fmt17(s.values[i]) << '\n';
}

json fit_json(const PowerLawFit& f, const std::string& inputs_hash) {
    return {{"alpha", f.alpha},           {"stderr", f.stderr_alpha},
            {"prefactor", f.prefactor},   {"window_lo", f.window_lo},
            {"window_hi", f.window_hi},   {"points", f.points},
            {"inputs_hash", inputs_hash}};
}

json critical_json(const CriticalQResult& r) {
    json table = json::array();
    for (auto [q, a] : r.alpha_table) table.push_back({{"q", q}, {"alpha", a}});
    return {{"q_c", r.q_c},
            {"q_lo", r.q_lo},
            {"q_hi", r.q_hi},
            {"alpha_lo", r.alpha_lo},
            {"alpha_hi", r.alpha_hi},
            {"alpha_increasing", r.alpha_increasing},
            {"iterations", r.iterations},
            {"tolerance", r.tol},
            {"alpha_table", table}};
}

double estimate_minutes(const ExperimentConfig& cfg, double hbar, long horizon) {
    // two length-M transforms per member-kick at ~8 ns per point
    const double per_kick = 2.0 * cfg.basis_for(hbar) * 8e-9 * cfg.N;
    return per_kick * horizon * (cfg.realizations + 1) / 60.0;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults_for(const std::string& tag) {
    ExperimentConfig cfg;
    cfg.experiment = tag;
    auto fill_q_list = [&] {
        for (double q = 0.155; q < 0.8051; q += 0.05) cfg.q_list.push_back(q);
    };
    if (tag == "fig1") {
        cfg.hbar_list = {0.1, 0.05, 0.01};  // caption set; 0.01 is long-tier
        cfg.sqrt_D_list = {0.002};
    } else if (tag == "fig2") {
        cfg.hbar_list = {0.1};  // fast profile; caption value 0.01 is long-tier
        cfg.sqrt_D_list = {0.002, 0.006, 0.01, 0.02, 0.05};
    } else if (tag == "fig3") {
        cfg.hbar_list = {0.1};
        cfg.sqrt_D_list = {0.002};
        fill_q_list();
    } else if (tag == "fig4") {
        cfg.hbar_list = {0.1};
        cfg.sqrt_D_list = {0.002, 0.004, 0.008, 0.016, 0.032, 0.064, 0.128, 0.256};
    } else if (tag == "q-of-hbar") {
        cfg.hbar_list = {0.1, 0.05, 0.01};  // 0.01 long-tier, skipped by default
        cfg.sqrt_D_list = {0.002};
    } else if (tag == "custom") {
        fill_q_list();
    } else {
        throw config_error("unknown experiment tag: " + tag);
    }
    return cfg;
}

void ExperimentConfig::set_key(const std::string& key, const std::string& value) {
    try {
        if (key == "experiment") experiment = value;
        else if (key == "hbar_list") hbar_list = parse_list(value);
        else if (key == "K") K = std::stod(value);
        else if (key == "basis_size") basis_size = std::stoi(value);
        else if (key == "tail_tolerance") tail_tolerance = std::stod(value);
        else if (key == "sqrt_D_list") sqrt_D_list = parse_list(value);
        else if (key == "q_list") q_list = parse_list(value);
        else if (key == "q_min") q_min = std::stod(value);
        else if (key == "q_max") q_max = std::stod(value);
        else if (key == "q_tol") q_tol = std::stod(value);
        else if (key == "N") N = std::stoi(value);
        else if (key == "n_kicks") n_kicks = std::stol(value);
        else if (key == "dense_limit") cadence.dense_limit = std::stoi(value);
        else if (key == "target_samples") cadence.target_samples = std::stoi(value);
        else if (key == "master_seed") master_seed = std::stoull(value);
        else if (key == "realizations") realizations = std::stoi(value);
        else if (key == "renyi_order") renyi_order = std::stod(value);
        else if (key == "window_lo") window_lo = std::stod(value);
        else if (key == "out_dir") out_dir = value;
        else if (key == "long_runs") long_runs = (value == "1" || value == "true");
        else if (key == "workers") workers = std::stoi(value);
        else throw config_error("unknown config key: " + key);
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw config_error("bad value for " + key + ": " + value + " (" + e.what() + ")");
    }
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    ExperimentConfig cfg;
    std::string line;
    bool tag_seen = false;
    // first pass to find the experiment tag so figure defaults apply first
    std::vector<std::pair<std::string, std::string>> kv;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw config_error("expected key = value: " + line);
        kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        if (kv.back().first == "experiment") {
            cfg = defaults_for(kv.back().second);
            tag_seen = true;
        }
    }
    if (!tag_seen) cfg = defaults_for("custom");
    for (auto& [k, v] : kv) cfg.set_key(k, v);
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (hbar_list.empty() || sqrt_D_list.empty())
        throw config_error("hbar_list and sqrt_D_list must be nonempty");
    for (double h : hbar_list)
        if (!(h > 0.0 && h < 1.0)) throw config_error("hbar out of (0,1)");
    for (double s : sqrt_D_list)
        if (s < 0.0) throw config_error("sqrt_D must be >= 0");
    if (!(K > 0.0)) throw config_error("K must be positive");
    if (N < 1) throw config_error("N >= 1 required");
    if (realizations < 1) throw config_error("realizations >= 1 required");
    if (workers < 1) throw config_error("workers >= 1 required");
    if (!(q_min > 0.0 && q_min < q_max && q_max < 1.0))
        throw config_error("need 0 < q_min < q_max < 1");
    if (!(renyi_order > 0.0) || renyi_order == 1.0)
        throw config_error("renyi_order must be positive and != 1");
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0))
        throw config_error("tail_tolerance in (0,1) required");
    if (basis_size != 0 && (basis_size < 2 || basis_size % 2))
        throw config_error("basis_size must be even and >= 2");
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os << "experiment=" << experiment << ";hbar_list=" << join(hbar_list)
       << ";K=" << fmt17(K) << ";basis_size=" << basis_size
       << ";tail_tolerance=" << fmt17(tail_tolerance)
       << ";sqrt_D_list=" << join(sqrt_D_list) << ";q_list=" << join(q_list)
       << ";q_min=" << fmt17(q_min) << ";q_max=" << fmt17(q_max)
       << ";q_tol=" << fmt17(q_tol) << ";N=" << N << ";n_kicks=" << n_kicks
       << ";dense_limit=" << cadence.dense_limit
       << ";target_samples=" << cadence.target_samples
       << ";master_seed=" << master_seed << ";realizations=" << realizations
       << ";renyi_order=" << fmt17(renyi_order)
       << ";window_lo=" << fmt17(window_lo) << ";long_runs=" << long_runs
       << ";workers=" << workers;
    return os.str();
}

int ExperimentConfig::basis_for(double hbar) const {
    if (basis_size > 0) return basis_size;
    return hbar >= 0.05 ? (1 << 14) : (1 << 21);
}

namespace {

// One (hbar, sqrtD) combination at a fixed basis size: probe the horizon in
// auto mode (stop rule, first seed), then run all realizations on one fixed
// sampling grid.  Throws aliasing_error if the basis is too small.
void run_one_combo(const ExperimentConfig& cfg, ComboRuns& c, int basis) {
    const RotorParams params =
        RotorParams::make(c.hbar, cfg.K, basis, cfg.tail_tolerance);
    if (cfg.n_kicks > 0) {
        c.horizon = cfg.n_kicks;
    } else {
        EvolveOptions probe;
        probe.n_kicks = 10000;
        probe.cadence = cfg.cadence;
        probe.stop_at_plateau = true;
        const NoiseModel noise{c.sqrt_D * c.sqrt_D, cfg.master_seed};
        const SpectrumTrajectory t = evolve_ensemble(params, noise, cfg.N, probe);
        c.horizon = std::max<long>(16, static_cast<long>(t.times.back()));
    }
    c.trajs.assign(cfg.realizations, {});
    std::vector<std::function<void()>> tasks;
    for (int r = 0; r < cfg.realizations; ++r) {
        tasks.push_back([&c, params, r, &cfg] {
            EvolveOptions opts;
            opts.n_kicks = c.horizon;
            opts.cadence = cfg.cadence;
            opts.stop_at_plateau = false;  // fixed grid across realizations
            const NoiseModel noise{c.sqrt_D * c.sqrt_D, cfg.master_seed + r};
            c.trajs[r] = evolve_ensemble(params, noise, cfg.N, opts);
        });
    }
    run_parallel(tasks, cfg.workers);
    c.basis = basis;
}

}  // namespace

std::vector<ComboRuns> run_combos(const ExperimentConfig& cfg,
                                  const std::vector<double>& hbars,
                                  const std::vector<double>& sqrtDs,
                                  std::vector<double>* skipped_hbar) {
    cfg.validate();
    std::vector<ComboRuns> combos;
    for (double h : hbars) {
        if (cfg.is_long(h) && !cfg.long_runs) {
            if (skipped_hbar) skipped_hbar->push_back(h);
            std::fprintf(stderr,
                         "[skip] hbar=%g needs M=2^%d (long tier); pass --long-runs "
                         "(rough cost ~%.0f min per sqrt_D combo)\n",
                         h, static_cast<int>(std::log2(cfg.basis_for(h))),
                         estimate_minutes(cfg, h, 400));
            continue;
        }
        for (double s : sqrtDs) {
            ComboRuns c;
            c.hbar = h;
            c.sqrt_D = s;
            combos.push_back(std::move(c));
        }
    }

    // smallest power of two passing the aliasing guard, growing from the
    // tier default; ballistic accelerator-mode transport can outrun it
    constexpr int kBasisCap = 1 << 22;
    for (ComboRuns& c : combos) {
        for (int basis = cfg.basis_for(c.hbar);; basis *= 2) {
            try {
                run_one_combo(cfg, c, basis);
                break;
            } catch (const aliasing_error& e) {
                if (2 * basis > kBasisCap) throw;
                std::fprintf(stderr,
                             "[basis] hbar=%g sqrtD=%g: %s at M=%d; retrying M=%d\n",
                             c.hbar, c.sqrt_D, e.what(), basis, 2 * basis);
            }
        }
    }
    return combos;
}

Fig1Result run_fig1(const ExperimentConfig& cfg) {
    Fig1Result res;
    const fs::path dir = experiment_dir(cfg);
    const double sqrtD = cfg.sqrt_D_list.front();
    const auto combos = run_combos(cfg, cfg.hbar_list, {sqrtD}, &res.skipped_hbar);
    json fits = json::array();
    for (const ComboRuns& c : combos) {
        std::vector<EntropySeries> runs;
        for (const SpectrumTrajectory& t : c.trajs)
            runs.push_back(entropy_series(t, Functional::renyi_fn(cfg.renyi_order)));
        Fig1Result::Curve curve;
        curve.hbar = c.hbar;
        curve.series = average_series(runs);
        const auto [lo, hi] = default_fit_window(curve.series);
        try {
            curve.fit = fit_power_law(curve.series, std::max(lo, cfg.window_lo), hi);
        } catch (const std::exception&) {
            curve.fit = {};  // flat/degenerate curve: points == 0 marks "no fit"
        }
        write_series_csv(dir / ("fig1_renyi_hbar" + num_tag(c.hbar) + ".csv"),
                         curve.series, "S_renyi");
        c.trajs.front().write_csv((dir / ("traj_" + c.trajs.front().id() + ".csv")).string());
        c.trajs.front().write_meta_json(
            (dir / ("traj_" + c.trajs.front().id() + ".json")).string());
        json f = fit_json(curve.fit, c.trajs.front().id());
        f["hbar"] = c.hbar;
        fits.push_back(f);
        res.curves.push_back(std::move(curve));
    }
    std::ofstream(dir / "fig1_fits.json") << fits.dump(2) << '\n';
    write_manifest(cfg, dir, combos, res.skipped_hbar);
    return res;
}

Fig2Result run_fig2(const ExperimentConfig& cfg) {
    Fig2Result res;
    const fs::path dir = experiment_dir(cfg);
    std::vector<double> skipped;
    const auto combos = run_combos(cfg, {cfg.hbar_list.front()}, cfg.sqrt_D_list, &skipped);
    json summary = json::array();
    for (const ComboRuns& c : combos) {
        std::vector<EntropySeries> runs;
        for (const SpectrumTrajectory& t : c.trajs)
            runs.push_back(entropy_series(t, Functional::gibbs_fn()));
        Fig2Result::Curve curve;
        curve.sqrt_D = c.sqrt_D;
        curve.series = average_series(runs);
        const auto [lo, hi] = classification_window(curve.series);
        curve.fit = fit_power_law(curve.series, lo, hi);
        curve.cls = classify_convexity(curve.series, lo, hi);
        write_series_csv(dir / ("fig2_gibbs_sqrtD" + num_tag(c.sqrt_D) + ".csv"),
                         curve.series, "S_gibbs");
        summary.push_back({{"sqrt_D", c.sqrt_D},
                           {"alpha", curve.fit.alpha},
                           {"stderr", curve.fit.stderr_alpha},
                           {"window_lo", curve.fit.window_lo},
                           {"window_hi", curve.fit.window_hi},
                           {"class", to_string(curve.cls)}});
        res.curves.push_back(std::move(curve));
    }
    // flip = first grid sqrt_D classified concave, scanning upward
    for (const auto& curve : res.curves) {
        if (curve.cls == Convexity::Concave) {
            res.flip_found = true;
            res.flip_sqrt_D = curve.sqrt_D;
            break;
        }
    }
    json j;
    j["curves"] = summary;
    j["flip_found"] = res.flip_found;
    j["flip_sqrt_D"] = res.flip_sqrt_D;
    std::ofstream(dir / "fig2_summary.json") << j.dump(2) << '\n';
    write_manifest(cfg, dir, combos, skipped);
    return res;
}

Fig3Result run_fig3(const ExperimentConfig& cfg) {
    Fig3Result res;
    const fs::path dir = experiment_dir(cfg);
    std::vector<double> skipped;
    const auto combos =
        run_combos(cfg, {cfg.hbar_list.front()}, {cfg.sqrt_D_list.front()}, &skipped);
    if (combos.empty()) throw config_error("fig3: configured combo is long-tier only");
    const ComboRuns& c = combos.front();
    res.n_simulations = static_cast<int>(c.trajs.size()) + (cfg.n_kicks > 0 ? 0 : 1);
    res.q_list = cfg.q_list;

    // one stored trajectory set serves every q
    for (double q : cfg.q_list)
        res.sq_series.push_back(mean_tsallis_series(c.trajs, q));
    res.critical = find_critical_q(c.trajs, cfg.q_min, cfg.q_max, cfg.q_tol, cfg.window_lo);

    std::ofstream csv(dir / "fig3_sq.csv");
    csv << "kick";
    for (double q : cfg.q_list) csv << ",Sq_" << num_tag(q);
    csv << '\n';
    const std::size_t len = res.sq_series.empty() ? 0 : res.sq_series.front().size();
    for (std::size_t i = 0; i < len; ++i) {
        csv << fmt17(res.sq_series.front().kicks[i]);
        for (const EntropySeries& s : res.sq_series) csv << ',' << fmt17(s.values[i]);
        csv << '\n';
    }
    std::ofstream(dir / "fig3_critical_q.json") << critical_json(res.critical).dump(2) << '\n';
    write_manifest(cfg, dir, combos, skipped);
    return res;
}

Fig4Result run_fig4(const ExperimentConfig& cfg) {
    Fig4Result res;
    const fs::path dir = experiment_dir(cfg);
    const double hbar = cfg.hbar_list.front();
    std::vector<double> skipped;
    const auto combos = run_combos(cfg, {hbar}, cfg.sqrt_D_list, &skipped);

    std::vector<std::pair<double, double>> quantum, classical;
    std::ofstream csv(dir / "fig4_ts.csv");
    csv << "sqrt_D,D,t_S\n";
    for (const ComboRuns& c : combos) {
        std::vector<EntropySeries> runs;
        for (const SpectrumTrajectory& t : c.trajs)
            runs.push_back(entropy_series(t, Functional::gibbs_fn()));
        const EntropySeries avg = average_series(runs);
        const double tS = saturation_time(avg, 0.5);
        res.sqrt_D.push_back(c.sqrt_D);
        res.t_S.push_back(tS);
        const double D = c.sqrt_D * c.sqrt_D;
        (c.sqrt_D <= hbar ? quantum : classical).emplace_back(D, tS);
        csv << fmt17(c.sqrt_D) << ',' << fmt17(D) << ',' << fmt17(tS) << '\n';
    }
    auto [theta_hat, theta_se] = fit_theta(quantum);
    res.theta_hat = theta_hat;
    res.theta_se = theta_se;
    res.quantum_slope = -theta_hat;

    // local log-log slope on the classical side (>= 2 points)
    if (classical.size() >= 2) {
        const auto& a = classical.front();
        const auto& b = classical.back();
        res.classical_slope = (std::log(b.second) - std::log(a.second)) /
                              (std::log(b.first) - std::log(a.first));
        res.classical_faster = std::abs(res.classical_slope) > std::abs(res.quantum_slope);
    }

    // theta(q_c) prediction from the smallest-noise combo of this run
    const CriticalQResult qc = find_critical_q(combos.front().trajs, cfg.q_min,
                                               cfg.q_max, cfg.q_tol, cfg.window_lo);
    res.theta_prediction = theta(qc.q_c);

    json j;
    j["theta_hat"] = res.theta_hat;
    j["theta_stderr"] = res.theta_se;
    j["theta_prediction_from_q_c"] = res.theta_prediction;
    j["q_c"] = qc.q_c;
    j["quantum_slope"] = res.quantum_slope;
    j["classical_slope"] = res.classical_slope;
    j["classical_faster"] = res.classical_faster;
    std::ofstream(dir / "fig4_theta.json") << j.dump(2) << '\n';
    write_manifest(cfg, dir, combos, skipped);
    return res;
}

QOfHbarResult run_q_of_hbar(const ExperimentConfig& cfg) {
    QOfHbarResult res;
    const fs::path dir = experiment_dir(cfg);
    const auto combos =
        run_combos(cfg, cfg.hbar_list, {cfg.sqrt_D_list.front()}, &res.skipped_hbar);
    std::ofstream csv(dir / "q_of_hbar.csv");
    csv << "hbar,q_c,q_lo,q_hi,alpha_lo,alpha_hi\n";
    json rows = json::array();
    for (const ComboRuns& c : combos) {
        QOfHbarResult::Row row;
        row.hbar = c.hbar;
        row.res = find_critical_q(c.trajs, cfg.q_min, cfg.q_max, cfg.q_tol, cfg.window_lo);
        csv << fmt17(row.hbar) << ',' << fmt17(row.res.q_c) << ',' << fmt17(row.res.q_lo)
            << ',' << fmt17(row.res.q_hi) << ',' << fmt17(row.res.alpha_lo) << ','
            << fmt17(row.res.alpha_hi) << '\n';
        json r = critical_json(row.res);
        r["hbar"] = row.hbar;
        rows.push_back(r);
        res.rows.push_back(std::move(row));
    }
    // paper ordering: q_c grows as hbar decreases
    res.monotone = res.rows.size() >= 2;
    for (std::size_t i = 1; i < res.rows.size(); ++i) {
        const bool hbar_desc = res.rows[i].hbar < res.rows[i - 1].hbar;
        const bool qc_asc = res.rows[i].res.q_c > res.rows[i - 1].res.q_c;
        if (hbar_desc != qc_asc) res.monotone = false;
    }
    json j;
    j["rows"] = rows;
    j["monotone_q_c_as_hbar_decreases"] = res.monotone;
    std::ofstream(dir / "q_of_hbar.json") << j.dump(2) << '\n';
    write_manifest(cfg, dir, combos, res.skipped_hbar);
    return res;
}

void run_custom(const ExperimentConfig& cfg) {
    const fs::path dir = experiment_dir(cfg);
    std::vector<double> skipped;
    const auto combos = run_combos(cfg, cfg.hbar_list, cfg.sqrt_D_list, &skipped);
    for (const ComboRuns& c : combos) {
        const std::string tag =
            "hbar" + num_tag(c.hbar) + "_sqrtD" + num_tag(c.sqrt_D);
        std::vector<EntropySeries> gibbs_runs, renyi_runs;
        for (std::size_t r = 0; r < c.trajs.size(); ++r) {
            c.trajs[r].write_csv((dir / ("traj_" + tag + "_seed" + std::to_string(r) +
                                         ".csv")).string());
            c.trajs[r].write_meta_json(
                (dir / ("traj_" + tag + "_seed" + std::to_string(r) + ".json")).string());
            gibbs_runs.push_back(entropy_series(c.trajs[r], Functional::gibbs_fn()));
            renyi_runs.push_back(
                entropy_series(c.trajs[r], Functional::renyi_fn(cfg.renyi_order)));
        }
        write_series_csv(dir / ("gibbs_" + tag + ".csv"), average_series(gibbs_runs),
                         "S_gibbs");
        write_series_csv(dir / ("renyi_" + tag + ".csv"), average_series(renyi_runs),
                         "S_renyi");
        for (double q : cfg.q_list)
            write_series_csv(dir / ("tsallis_q" + num_tag(q) + "_" + tag + ".csv"),
                             mean_tsallis_series(c.trajs, q), "S_q");
    }
    write_manifest(cfg, dir, combos, skipped);
}

}  // namespace qkr
