#pragma once
// Ensemble evolution and density-matrix spectrum extraction, Eq. (11):
// rho(n) = (1/N) sum_i |phi_i(n)><phi_i(n)|.  The nonzero spectrum of rho is
// computed from the N x N Gram matrix G_ij = <phi_i|phi_j> as spec(G)/N -- an
// exact rank-N reduction that avoids ever forming the M x M matrix.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qkr/entropy.hpp"
#include "qkr/rotor.hpp"

namespace qkr {

struct aliasing_error : std::runtime_error {
    long kick_index;
    explicit aliasing_error(long kick)
        : std::runtime_error("aliasing guard tripped at kick " + std::to_string(kick)),
          kick_index(kick) {}
};

struct Ensemble {
    std::vector<WaveFunction> members;

    int N() const { return static_cast<int>(members.size()); }
    void validate(const RotorParams& params) const;
};

// Hermitian PSD N x N overlap matrix; G_ii = 1 for normalized members.
Eigen::MatrixXcd gram_matrix(const Ensemble& ens);

// Eigenvalues of G/N clamped at 0, sorted descending; sums to 1 within 1e-9.
Spectrum rho_spectrum(const Eigen::MatrixXcd& G, int N);

// Sampling cadence: every kick while the horizon fits dense_limit, otherwise
// ~target_samples geometrically spaced kicks.
struct Cadence {
    int dense_limit = 512;
    int target_samples = 200;
};

std::vector<long> build_schedule(long n_kicks, const Cadence& cadence);

struct EvolveOptions {
    long n_kicks = 10000;       // hard cap on the horizon
    Cadence cadence;
    bool stop_at_plateau = true;   // stop once S_G > stop_fraction * ln N
    double stop_fraction = 0.9;
    long min_kicks = 16;           // always record at least this horizon
};

// Time series of density-matrix spectra plus the metadata needed to
// reproduce it byte-for-byte.
struct SpectrumTrajectory {
    std::vector<double> times;
    std::vector<Spectrum> spectra;  // each length N, descending

    RotorParams params;
    double D = 0.0;
    std::uint64_t master_seed = 0;
    int N = 0;
    Cadence cadence;

    std::string id() const;  // metadata hash, used as provenance link

    void write_csv(const std::string& path) const;
    void write_meta_json(const std::string& path) const;
    static SpectrumTrajectory read_csv(const std::string& path);
};

// Evolve N members from a shared initial state, each on its own noise
// substream; record rho_spectrum at every scheduled kick.  Throws
// aliasing_error (carrying the kick index) if any member's tail mass exceeds
// params.tail_tolerance at a sampled time.
SpectrumTrajectory evolve_ensemble(const RotorParams& params, const NoiseModel& noise,
                                   int N, const EvolveOptions& opts,
                                   const WaveFunction* init = nullptr);

// Map an entropy functional over the trajectory (lives here rather than in
// the entropy module because it consumes SpectrumTrajectory).
EntropySeries entropy_series(const SpectrumTrajectory& traj, const Functional& fn);

}  // namespace qkr
