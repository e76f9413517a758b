#pragma once
// Quantum kicked-rotor core, Eqs. (9)-(10): one-period Floquet map
//   |phi(n+1)> = exp(-i (hbar m + F(n))^2 / (2 hbar)) exp(-i k cos theta) |phi(n)>
// over an M-point momentum basis (T = I = 1 convention), with the optional
// Gaussian momentum-shift noise F(n) of variance D realizing the
// coarse-graining process.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qkr {

using cplx = std::complex<double>;

struct rotor_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RotorParams {
    double hbar = 0.1;        // effective Planck constant
    double capital_K = 7.1;   // classical stochasticity parameter
    double k = 71.0;          // kick strength, derived k = K/hbar
    int basis_size = 1 << 14; // M, even; m in {-M/2, ..., M/2-1}
    double tail_tolerance = 1e-6;  // aliasing guard on the outer momentum band

    // k is derived from (K, hbar) with the standard-map convention K = hbar*k,
    // under which the classical limit of the quantum map is the standard map
    // with stochasticity parameter capital_K.
    static RotorParams make(double hbar, double K, int M, double tail_tol = 1e-6);
    void validate() const;
};

// Momentum-basis amplitudes in FFT frequency order: index i holds quantum
// number m = i for i < M/2 and m = i - M otherwise.
struct WaveFunction {
    std::vector<cplx> amp;

    int size() const { return static_cast<int>(amp.size()); }
    double norm() const;

    static WaveFunction momentum_eigenstate(int M, int m = 0);
};

inline int momentum_of_index(int i, int M) { return i < M / 2 ? i : i - M; }

// Gaussian momentum-shift process F(n): mean 0, variance D (momentum-quanta
// units), fully determined by (master_seed, member, kick_index) so draws are
// independent of evaluation order and thread scheduling.
struct NoiseModel {
    double D = 0.0;
    std::uint64_t master_seed = 0;
};

double sample_noise(const NoiseModel& noise, std::uint64_t member,
                    std::uint64_t kick_index);

// Precomputes the kick/kinetic phase tables and FFT plans for one RotorParams;
// evolves wavefunctions in place.  F below is the physical momentum shift
// (p-units); step() converts the quanta-unit noise draw via F = hbar * draw.
class Rotor {
  public:
    explicit Rotor(const RotorParams& params);

    const RotorParams& params() const { return params_; }

    void kick(WaveFunction& psi) const;                 // exp(-i k cos theta)
    void kinetic(WaveFunction& psi, double F) const;    // exp(-i(hbar m+F)^2/(2 hbar))
    void step(WaveFunction& psi, const NoiseModel& noise, std::uint64_t member,
              std::uint64_t kick_index) const;

  private:
    RotorParams params_;
    std::vector<cplx> kick_phase_;    // exp(-i k cos theta_j) / M (FFT norm folded in)
    std::vector<cplx> kinetic_free_;  // exp(-i hbar m^2 / 2)
};

// Contract-level wrappers returning fresh states (tests and small uses; the
// ensemble evolver holds a Rotor directly).
WaveFunction kick_step(const WaveFunction& psi, const RotorParams& params);
WaveFunction kinetic_step(const WaveFunction& psi, const RotorParams& params, double F);
WaveFunction step(const WaveFunction& psi, const RotorParams& params,
                  const NoiseModel& noise, std::uint64_t member, std::uint64_t kick_index);

// Total probability on the outermost `fraction` of momentum indices
// (fraction*M/2 states on each side) -- the aliasing guard observable.
double tail_mass(const WaveFunction& psi, double fraction);

}  // namespace qkr
