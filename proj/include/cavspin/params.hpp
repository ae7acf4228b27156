#pragma once

namespace cavspin {

// Physical and numerical parameters. Rates are in units of the spin-site
// nonlinear loss gamma_nl (normally 1), times in units of 1/gamma_nl.
struct SimParams {
    double p = 12.0;               // base gain on spin sites
    double gamma = 4.0;            // linear decay, all modes
    double gamma_nl = 1.0;         // nonlinear loss, spin modes
    double gamma_nl_prime = 0.0;   // nonlinear loss, connecting modes (0: XY, >0: Ising)
    double j = 0.5;                // Josephson coupling
    double dt = 0.01;
    double noise_amp = 2e-3;       // per-quadrature std of the initial noise
    double duration = 1000.0;

    // Throws InvalidParameter when any invariant fails, including the
    // step-size guard dt * max(p, gamma, 4j) < kStabilityGuard.
    void validate() const;

    bool ising() const { return gamma_nl_prime > 0.0; }
};

inline constexpr double kStabilityGuard = 0.2;

}  // namespace cavspin
