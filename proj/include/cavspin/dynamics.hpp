#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "cavspin/compiler.hpp"
#include "cavspin/params.hpp"
#include "cavspin/rng.hpp"

namespace cavspin {

using cplx = std::complex<double>;

// Mode amplitudes (compiler order) at a time instant.
struct CavityState {
    std::vector<cplx> amplitudes;
    double time = 0.0;

    std::size_t size() const { return amplitudes.size(); }
    cplx operator[](std::size_t k) const { return amplitudes[k]; }
};

// Independent complex Gaussian per mode, std noise_amp per quadrature.
// noise_amp == 0 yields the zero state.
CavityState init_noise(const CavityNetwork& network, double noise_amp, std::uint64_t seed);
CavityState init_noise(const CavityNetwork& network, double noise_amp, Rng& rng);
void add_noise(CavityState& state, double noise_amp, Rng& rng);

// Right-hand side of the mean-field equations:
//   dpsi_m/dt = (1/2 (P_m - gamma) - Gamma_NL |psi_m|^2) psi_m + iJ sum_e (s_mS chi_S + s_mA chi_A)
//   dchi/dt   = (-gamma/2 - Gamma'_NL |chi|^2) chi + iJ (s_aX psi_a + s_bX psi_b)
void rhs(const CavityNetwork& network, const SimParams& params, std::span<const cplx> y,
         std::span<cplx> dy);

// Classical fixed-step RK4 with reusable scratch buffers.
class Rk4 {
public:
    explicit Rk4(std::size_t n_modes);

    // Advances by params.dt. Throws Divergence on a non-finite amplitude.
    void advance(const CavityNetwork& network, const SimParams& params, CavityState& state);

private:
    std::vector<cplx> k1_, k2_, k3_, k4_, tmp_;
};

// Number of dt steps covering `duration` (ceil, robust to round-off).
std::size_t step_count(double duration, double dt);

CavityState step(const CavityNetwork& network, const CavityState& state, const SimParams& params);

using StateObserver = std::function<void(const CavityState&)>;

// ceil(duration / dt) RK4 steps. If `observer` is set it is called on the
// initial state and then after every `stride` steps (and at the end).
CavityState evolve(const CavityNetwork& network, CavityState state, const SimParams& params,
                   double duration, const StateObserver& observer = {}, std::size_t stride = 0);

// True when every mode changes slower than `tol` relative to its magnitude:
// max_k |next_k - prev_k| / (dt (|next_k| + eps)) < tol, with
// eps = floor_fraction * max_k |next_k| and a common phase rotation between
// the two states removed first. A floor_fraction of 1 turns the test into a
// rate bound relative to the largest amplitude.
bool is_stationary(const CavityState& prev, const CavityState& next, double tol,
                   double floor_fraction = 1e-12);

// Evolves in chunks of `check_every` until is_stationary(tol) holds across
// one step or `max_time` has elapsed. Returns the final state; `converged`
// reports which of the two happened.
CavityState relax(const CavityNetwork& network, CavityState state, const SimParams& params,
                  double max_time, double tol, bool* converged = nullptr,
                  double check_every = 10.0);

// CSV with columns time,mode_index,re,im.
class TrajectoryWriter {
public:
    explicit TrajectoryWriter(std::ostream& out);
    void append(const CavityState& state);

private:
    std::ostream& out_;
};

}  // namespace cavspin
