#include "cavspin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cavspin/errors.hpp"
#include "cavspin/format.hpp"

namespace cavspin {

namespace {

// i * c * z without a full complex multiply.
inline cplx times_i(double c, cplx z) { return {-c * z.imag(), c * z.real()}; }

void check_size(const CavityNetwork& network, const CavityState& state) {
    if (state.size() != network.n_modes()) {
        throw InvalidInstance("state has " + std::to_string(state.size()) + " modes, network " +
                              std::to_string(network.n_modes()));
    }
}

}  // namespace

CavityState init_noise(const CavityNetwork& network, double noise_amp, Rng& rng) {
    if (!(noise_amp >= 0.0)) throw InvalidParameter("noise_amp must be non-negative");
    CavityState s;
    s.amplitudes.assign(network.n_modes(), cplx{0.0, 0.0});
    add_noise(s, noise_amp, rng);
    return s;
}

CavityState init_noise(const CavityNetwork& network, double noise_amp, std::uint64_t seed) {
    Rng rng(seed);
    return init_noise(network, noise_amp, rng);
}

void add_noise(CavityState& state, double noise_amp, Rng& rng) {
    if (noise_amp == 0.0) return;
    for (cplx& z : state.amplitudes) {
        const double re = rng.normal();
        const double im = rng.normal();
        z += cplx{noise_amp * re, noise_amp * im};
    }
}

void rhs(const CavityNetwork& network, const SimParams& params, std::span<const cplx> y,
         std::span<cplx> dy) {
    const double gnl = params.gamma_nl;
    const double gnl_c = params.gamma_nl_prime;
    const double half_gamma = 0.5 * params.gamma;
    const double j = params.j;

    for (std::size_t m = 0; m < network.n_spin_modes; ++m) {
        const double g = 0.5 * (network.pump[m] - params.gamma) - gnl * std::norm(y[m]);
        dy[m] = g * y[m];
    }
    for (const EdgeRecord& e : network.edges) {
        const cplx pa = y[e.spin_a];
        const cplx pb = y[e.spin_b];
        const cplx cs = y[e.s_mode];
        const cplx ca = y[e.a_mode];
        const auto& s = e.sign;

        dy[e.s_mode] = (-half_gamma - gnl_c * std::norm(cs)) * cs +
                       times_i(j, double(s[0]) * pa + double(s[1]) * pb);
        dy[e.a_mode] = (-half_gamma - gnl_c * std::norm(ca)) * ca +
                       times_i(j, double(s[2]) * pa + double(s[3]) * pb);
        dy[e.spin_a] += times_i(j, double(s[0]) * cs + double(s[2]) * ca);
        dy[e.spin_b] += times_i(j, double(s[1]) * cs + double(s[3]) * ca);
    }
}

Rk4::Rk4(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

void Rk4::advance(const CavityNetwork& network, const SimParams& params, CavityState& state) {
    const std::size_t n = state.size();
    const double h = params.dt;
    std::vector<cplx>& y = state.amplitudes;

    rhs(network, params, y, k1_);
    for (std::size_t k = 0; k < n; ++k) tmp_[k] = y[k] + (0.5 * h) * k1_[k];
    rhs(network, params, tmp_, k2_);
    for (std::size_t k = 0; k < n; ++k) tmp_[k] = y[k] + (0.5 * h) * k2_[k];
    rhs(network, params, tmp_, k3_);
    for (std::size_t k = 0; k < n; ++k) tmp_[k] = y[k] + h * k3_[k];
    rhs(network, params, tmp_, k4_);

    const double w = h / 6.0;
    for (std::size_t k = 0; k < n; ++k) {
        y[k] += w * (k1_[k] + 2.0 * (k2_[k] + k3_[k]) + k4_[k]);
    }
    state.time += h;
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(y[k].real()) || !std::isfinite(y[k].imag())) {
            throw Divergence(k, state.time);
        }
    }
}

std::size_t step_count(double duration, double dt) {
    const double ratio = duration / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(ratio));
}

CavityState step(const CavityNetwork& network, const CavityState& state, const SimParams& params) {
    check_size(network, state);
    CavityState next = state;
    Rk4(state.size()).advance(network, params, next);
    return next;
}

CavityState evolve(const CavityNetwork& network, CavityState state, const SimParams& params,
                   double duration, const StateObserver& observer, std::size_t stride) {
    check_size(network, state);
    if (!(duration >= params.dt * (1.0 - 1e-12))) {
        throw InvalidParameter("duration must be at least one time step");
    }
    const std::size_t steps = step_count(duration, params.dt);
    Rk4 integrator(state.size());
    if (observer) observer(state);
    for (std::size_t s = 1; s <= steps; ++s) {
        integrator.advance(network, params, state);
        if (observer && stride > 0 && (s % stride == 0 || s == steps)) observer(state);
    }
    if (observer && stride == 0) observer(state);
    return state;
}

bool is_stationary(const CavityState& prev, const CavityState& next, double tol,
                   double floor_fraction) {
    if (prev.size() != next.size()) throw InvalidInstance("state size mismatch");
    const double dt = next.time - prev.time;
    if (!(dt > 0.0)) throw InvalidParameter("next state must be later than prev");

    cplx overlap{0.0, 0.0};
    double scale = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k) {
        overlap += std::conj(prev[k]) * next[k];
        scale = std::max(scale, std::abs(next[k]));
    }
    if (scale == 0.0) {
        return std::all_of(prev.amplitudes.begin(), prev.amplitudes.end(),
                           [](cplx z) { return z == cplx{0.0, 0.0}; });
    }
    const cplx unrotate =
        std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : cplx{1.0, 0.0};
    const double eps = floor_fraction * scale;
    for (std::size_t k = 0; k < next.size(); ++k) {
        const double change = std::abs(next[k] * unrotate - prev[k]);
        if (change / (dt * (std::abs(next[k]) + eps)) >= tol) return false;
    }
    return true;
}

CavityState relax(const CavityNetwork& network, CavityState state, const SimParams& params,
                  double max_time, double tol, bool* converged, double check_every) {
    check_size(network, state);
    Rk4 integrator(state.size());
    const std::size_t chunk = std::max<std::size_t>(1, step_count(check_every, params.dt));
    const std::size_t total = step_count(max_time, params.dt);
    std::size_t done = 0;
    if (converged) *converged = false;
    while (done < total) {
        const std::size_t n = std::min(chunk, total - done);
        for (std::size_t s = 0; s + 1 < n; ++s) integrator.advance(network, params, state);
        const CavityState before = state;
        integrator.advance(network, params, state);
        done += n;
        if (is_stationary(before, state, tol)) {
            if (converged) *converged = true;
            break;
        }
    }
    return state;
}

TrajectoryWriter::TrajectoryWriter(std::ostream& out) : out_(out) {
    out_ << "time,mode_index,re,im\n";
}

void TrajectoryWriter::append(const CavityState& state) {
    for (std::size_t k = 0; k < state.size(); ++k) {
        out_ << fmt_double(state.time) << ',' << k << ',' << fmt_double(state[k].real()) << ','
             << fmt_double(state[k].imag()) << '\n';
    }
}

}  // namespace cavspin
