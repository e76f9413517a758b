#include "qkr/rotor.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace qkr {

namespace {

// Shared in-place FFT plans per basis size.  FFTW_ESTIMATE keeps planning
// deterministic; FFTW_UNALIGNED lets one plan serve any buffer.
class FftEngine {
  public:
    static FftEngine& get(int M) {
        static std::mutex mu;
        static std::map<int, FftEngine*> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(M);
        if (it == cache.end())
            it = cache.emplace(M, new FftEngine(M)).first;
        return *it->second;
    }

    void forward(cplx* buf) const {  // momentum <- angle, unnormalized
        fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(buf),
                         reinterpret_cast<fftw_complex*>(buf));
    }
    void backward(cplx* buf) const {  // angle <- momentum, unnormalized
        fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(buf),
                         reinterpret_cast<fftw_complex*>(buf));
    }

  private:
    explicit FftEngine(int M) {
        std::vector<cplx> tmp(M);
        auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
        fwd_ = fftw_plan_dft_1d(M, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd_ = fftw_plan_dft_1d(M, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!fwd_ || !bwd_) throw rotor_error("FFTW plan creation failed");
    }

    fftw_plan fwd_;
    fftw_plan bwd_;
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

void check_state(const WaveFunction& psi, const RotorParams& params) {
    if (psi.size() != params.basis_size)
        throw rotor_error("wavefunction/basis dimension mismatch");
    for (const cplx& c : psi.amp)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw rotor_error("non-finite amplitude");
}

}  // namespace

RotorParams RotorParams::make(double hbar, double K, int M, double tail_tol) {
    RotorParams p;
    p.hbar = hbar;
    p.capital_K = K;
    p.k = K / hbar;
    p.basis_size = M;
    p.tail_tolerance = tail_tol;
    p.validate();
    return p;
}

void RotorParams::validate() const {
    if (!(hbar > 0.0)) throw rotor_error("params: hbar > 0 required");
    if (!(capital_K > 0.0)) throw rotor_error("params: K > 0 required");
    if (std::abs(capital_K - hbar * k) > 1e-12 * capital_K)
        throw rotor_error("params: K = hbar * k violated");
    if (basis_size < 2 || basis_size % 2 != 0)
        throw rotor_error("params: basis size must be even and >= 2");
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0))
        throw rotor_error("params: tail_tolerance in (0,1) required");
}

double WaveFunction::norm() const {
    double s = 0.0;
    for (const cplx& c : amp) s += std::norm(c);
    return std::sqrt(s);
}

WaveFunction WaveFunction::momentum_eigenstate(int M, int m) {
    if (M < 2 || m < -M / 2 || m >= M / 2)
        throw rotor_error("momentum eigenstate out of basis range");
    WaveFunction psi;
    psi.amp.assign(M, cplx(0.0, 0.0));
    psi.amp[m >= 0 ? m : m + M] = cplx(1.0, 0.0);
    return psi;
}

double sample_noise(const NoiseModel& noise, std::uint64_t member,
                    std::uint64_t kick_index) {
    if (noise.D < 0.0) throw rotor_error("noise: D >= 0 required");
    if (noise.D == 0.0) return 0.0;
    const std::uint64_t stream = splitmix64(noise.master_seed ^ splitmix64(member));
    const std::uint64_t s1 = splitmix64(stream ^ splitmix64(kick_index));
    const std::uint64_t s2 = splitmix64(s1);
    const double u1 = static_cast<double>((s1 >> 11) + 1) * 0x1p-53;  // (0, 1]
    const double u2 = static_cast<double>(s2 >> 11) * 0x1p-53;       // [0, 1)
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
    return std::sqrt(noise.D) * z;
}

Rotor::Rotor(const RotorParams& params) : params_(params) {
    params_.validate();
    const int M = params_.basis_size;
    FftEngine::get(M);  // build plans up front
    kick_phase_.resize(M);
    kinetic_free_.resize(M);
    for (int j = 0; j < M; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / M;
        kick_phase_[j] = std::polar(1.0 / M, -params_.k * std::cos(theta));
    }
    for (int i = 0; i < M; ++i) {
        const double m = momentum_of_index(i, M);
        kinetic_free_[i] = std::polar(1.0, -0.5 * params_.hbar * m * m);
    }
}

void Rotor::kick(WaveFunction& psi) const {
    check_state(psi, params_);
    auto& fft = FftEngine::get(params_.basis_size);
    fft.backward(psi.amp.data());  // to the angle grid
    for (int j = 0; j < params_.basis_size; ++j) psi.amp[j] *= kick_phase_[j];
    fft.forward(psi.amp.data());   // back to momentum
}

void Rotor::kinetic(WaveFunction& psi, double F) const {
    check_state(psi, params_);
    if (!std::isfinite(F)) throw rotor_error("kinetic: non-finite F");
    const int M = params_.basis_size;
    // exp(-i(hbar m + F)^2/(2 hbar)) = exp(-i hbar m^2/2) exp(-i m F) exp(-i F^2/(2 hbar));
    // the m-rotation runs as a complex recurrence, rephased exactly every 4096
    // elements to stop round-off drift.
    const cplx rot_step = std::polar(1.0, -F);
    const cplx global = std::polar(1.0, -F * F / (2.0 * params_.hbar));
    cplx rot = global;  // m = 0 start, global phase folded in
    for (int i = 0; i < M / 2; ++i) {
        psi.amp[i] *= kinetic_free_[i] * rot;
        rot = (i + 1) % 4096 == 0 ? global * std::polar(1.0, -F * (i + 1)) : rot * rot_step;
    }
    rot = global * std::polar(1.0, F * (M / 2.0));  // m = -M/2 start
    for (int i = M / 2; i < M; ++i) {
        psi.amp[i] *= kinetic_free_[i] * rot;
        const int n = i + 1 - M / 2;
        rot = n % 4096 == 0 ? global * std::polar(1.0, F * (M / 2.0 - n)) : rot * rot_step;
    }
}

void Rotor::step(WaveFunction& psi, const NoiseModel& noise, std::uint64_t member,
                 std::uint64_t kick_index) const {
    kick(psi);
    // the noise draw is in momentum-quanta units; the kinetic phase takes the
    // physical shift F = hbar * draw
    kinetic(psi, params_.hbar * sample_noise(noise, member, kick_index));
}

WaveFunction kick_step(const WaveFunction& psi, const RotorParams& params) {
    WaveFunction out = psi;
    Rotor(params).kick(out);
    return out;
}

WaveFunction kinetic_step(const WaveFunction& psi, const RotorParams& params, double F) {
    WaveFunction out = psi;
    Rotor(params).kinetic(out, F);
    return out;
}

WaveFunction step(const WaveFunction& psi, const RotorParams& params,
                  const NoiseModel& noise, std::uint64_t member, std::uint64_t kick_index) {
    WaveFunction out = psi;
    Rotor(params).step(out, noise, member, kick_index);
    return out;
}

double tail_mass(const WaveFunction& psi, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw rotor_error("tail_mass: fraction in (0,1) required");
    const int M = psi.size();
    const int per_side = static_cast<int>(fraction * M / 2);
    double mass = 0.0;
    // most negative momenta: indices M/2 .. M/2 + per_side - 1
    for (int i = M / 2; i < M / 2 + per_side; ++i) mass += std::norm(psi.amp[i]);
    // most positive momenta: indices M/2 - per_side .. M/2 - 1
    for (int i = M / 2 - per_side; i < M / 2; ++i) mass += std::norm(psi.amp[i]);
    return mass;
}

}  // namespace qkr
