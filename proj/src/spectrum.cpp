#include "qkr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qkr/util.hpp"

namespace qkr {

void Ensemble::validate(const RotorParams& params) const {
    for (const WaveFunction& psi : members) {
        if (psi.size() != params.basis_size)
            throw rotor_error("ensemble: member basis size mismatch");
        if (std::abs(psi.norm() - 1.0) > 1e-10)
            throw rotor_error("ensemble: member not normalized");
    }
}

Eigen::MatrixXcd gram_matrix(const Ensemble& ens) {
    const int N = ens.N();
    if (N < 1) throw rotor_error("gram: empty ensemble");
    const int M = ens.members[0].size();
    for (const WaveFunction& psi : ens.members)
        if (psi.size() != M) throw rotor_error("gram: dimension mismatch");
    Eigen::MatrixXcd G(N, N);
    for (int i = 0; i < N; ++i) {
        G(i, i) = 1.0;
        for (int j = i + 1; j < N; ++j) {
            cplx g(0.0, 0.0);
            const cplx* a = ens.members[i].amp.data();
            const cplx* b = ens.members[j].amp.data();
            for (int n = 0; n < M; ++n) g += std::conj(a[n]) * b[n];
            G(i, j) = g;
            G(j, i) = std::conj(g);
        }
    }
    return G;
}

Spectrum rho_spectrum(const Eigen::MatrixXcd& G, int N) {
    if (G.rows() != G.cols()) throw domain_error("rho_spectrum: non-square Gram");
    if ((G - G.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
        throw domain_error("rho_spectrum: input not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    if (es.info() != Eigen::Success)
        throw rotor_error("rho_spectrum: eigen decomposition failed");
    Spectrum lam(G.rows());
    for (int i = 0; i < G.rows(); ++i) {
        double v = es.eigenvalues()(G.rows() - 1 - i) / N;  // descending
        lam[i] = v > 0.0 ? v : 0.0;                         // clamp round-off
    }
    double sum = 0.0;
    for (double v : lam) sum += v;
    if (std::abs(sum - 1.0) > 1e-9)
        throw rotor_error("rho_spectrum: trace deviates from 1 by " +
                          std::to_string(sum - 1.0));
    return lam;
}

std::vector<long> build_schedule(long n_kicks, const Cadence& cadence) {
    if (n_kicks < 1) throw domain_error("build_schedule: n_kicks >= 1 required");
    if (cadence.dense_limit < 1 || cadence.target_samples < 2)
        throw domain_error("build_schedule: invalid cadence");
    std::vector<long> sched;
    if (n_kicks <= cadence.dense_limit) {
        for (long t = 1; t <= n_kicks; ++t) sched.push_back(t);
        return sched;
    }
    const double ratio = std::pow(static_cast<double>(n_kicks),
                                  1.0 / (cadence.target_samples - 1));
    double x = 1.0;
    long last = 0;
    for (int i = 0; i < cadence.target_samples; ++i, x *= ratio) {
        long t = std::min<long>(n_kicks, std::llround(x));
        if (t > last) sched.push_back(t), last = t;
    }
    if (sched.back() != n_kicks) sched.push_back(n_kicks);
    return sched;
}

SpectrumTrajectory evolve_ensemble(const RotorParams& params, const NoiseModel& noise,
                                   int N, const EvolveOptions& opts,
                                   const WaveFunction* init) {
    if (N < 1) throw rotor_error("evolve_ensemble: N >= 1 required");
    params.validate();
    const Rotor rotor(params);
    WaveFunction start = init ? *init
                              : WaveFunction::momentum_eigenstate(params.basis_size);
    if (std::abs(start.norm() - 1.0) > 1e-10)
        throw rotor_error("evolve_ensemble: initial state not normalized");

    Ensemble ens;
    ens.members.assign(N, start);

    SpectrumTrajectory traj;
    traj.params = params;
    traj.D = noise.D;
    traj.master_seed = noise.master_seed;
    traj.N = N;
    traj.cadence = opts.cadence;

    const std::vector<long> schedule = build_schedule(opts.n_kicks, opts.cadence);
    const double stop_level = opts.stop_fraction * std::log(static_cast<double>(N));
    std::size_t si = 0;
    for (long t = 1; t <= opts.n_kicks && si < schedule.size(); ++t) {
        for (int i = 0; i < N; ++i)
            rotor.step(ens.members[i], noise, static_cast<std::uint64_t>(i),
                       static_cast<std::uint64_t>(t));
        if (t != schedule[si]) continue;
        ++si;
        for (const WaveFunction& psi : ens.members)
            if (tail_mass(psi, 0.1) >= params.tail_tolerance) throw aliasing_error(t);
        Spectrum lam = rho_spectrum(gram_matrix(ens), N);
        traj.times.push_back(static_cast<double>(t));
        traj.spectra.push_back(std::move(lam));
        if (opts.stop_at_plateau && t >= opts.min_kicks && N > 1 &&
            gibbs(traj.spectra.back()) > stop_level)
            break;
    }
    return traj;
}

EntropySeries entropy_series(const SpectrumTrajectory& traj, const Functional& fn) {
    EntropySeries s;
    s.functional = fn;
    s.provenance = traj.id();
    s.kicks = traj.times;
    s.values.reserve(traj.spectra.size());
    for (const Spectrum& lam : traj.spectra) s.values.push_back(fn(lam));
    return s;
}

std::string SpectrumTrajectory::id() const {
    std::ostringstream os;
    os << fmt17(params.hbar) << '|' << fmt17(params.capital_K) << '|'
       << params.basis_size << '|' << fmt17(D) << '|' << master_seed << '|' << N;
    return hex64(fnv1a(os.str()));
}

void SpectrumTrajectory::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "kick";
    for (int i = 1; i <= N; ++i) out << ",lambda_" << i;
    out << '\n';
    for (std::size_t r = 0; r < times.size(); ++r) {
        out << fmt17(times[r]);
        for (double v : spectra[r]) out << ',' << fmt17(v);
        out << '\n';
    }
}

void SpectrumTrajectory::write_meta_json(const std::string& path) const {
    nlohmann::json j;
    j["id"] = id();
    j["hbar"] = params.hbar;
    j["K"] = params.capital_K;
    j["k"] = params.k;
    j["basis_size"] = params.basis_size;
    j["tail_tolerance"] = params.tail_tolerance;
    j["D"] = D;
    j["master_seed"] = master_seed;
    j["N"] = N;
    j["cadence"] = {{"dense_limit", cadence.dense_limit},
                    {"target_samples", cadence.target_samples}};
    j["samples"] = times.size();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

SpectrumTrajectory SpectrumTrajectory::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    SpectrumTrajectory traj;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv " + path);
    traj.N = static_cast<int>(std::count(line.begin(), line.end(), ','));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        traj.times.push_back(std::strtod(cell.c_str(), nullptr));
        Spectrum lam;
        while (std::getline(ls, cell, ',')) lam.push_back(std::strtod(cell.c_str(), nullptr));
        traj.spectra.push_back(std::move(lam));
    }
    return traj;
}

}  // namespace qkr
