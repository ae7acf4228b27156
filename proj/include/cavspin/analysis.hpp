#pragma once

#include <cstddef>
#include <vector>

#include "cavspin/compiler.hpp"
#include "cavspin/dynamics.hpp"
#include "cavspin/graph.hpp"
#include "cavspin/params.hpp"

namespace cavspin {

// Closed-form stationary predictions for one spin site.
struct StationaryPrediction {
    double i0 = 0.0;             // linear-regime intensity
    double chi_abs_ising = 0.0;  // connecting amplitude from the cubic (0 below threshold)
    double i0_mod = 0.0;         // intensity corrected by the connecting nonlinear loss
    bool below_threshold = false;

    // (8 J^2 / gamma^2) i0 (1 +- cos(phase_diff)).
    double chi_s_intensity(const SimParams& params, double phase_diff) const;
};

// (pump - gamma) / (2 Gamma_NL) - 4 degree J^2 / (gamma Gamma_NL). May be
// <= 0, meaning the site is below threshold.
double predicted_i0(const SimParams& params, double pump, std::size_t degree);

inline bool below_threshold(double intensity) { return !(intensity > 0.0); }

double predicted_chi_intensity(const SimParams& params, double i0, double phase_diff, Branch branch);

// Positive root of Gamma'_NL x^3 + (gamma/2) x - 2 J sqrt((p - gamma) / (2 Gamma_NL)) = 0.
// Throws BelowThreshold when p <= gamma.
double solve_chi_cubic(const SimParams& params);

// Value of the cubic above at x.
double chi_cubic_residual(const SimParams& params, double x);

// (p - gamma)/(2 Gamma_NL) - 4 degree J^2 / ((gamma + 2 chi_abs^2 Gamma'_NL) Gamma_NL).
double i0_mod(const SimParams& params, std::size_t degree, double chi_abs);

StationaryPrediction predict_stationary(const SimParams& params, double pump, std::size_t degree);

// Intensity each spin site is expected to settle at given its own pump:
// predicted_i0 in the XY regime, the cubic-corrected value otherwise.
std::vector<double> predicted_site_intensities(const CavityNetwork& network);

// Mean predicted intensity over the non-extra spin sites.
double reference_intensity(const CavityNetwork& network);

struct SpinReadout {
    SpinConfig config;
    std::vector<double> intensity;
};

// arg(psi) and |psi|^2 per spin site. Throws EmptyCondensate when a site
// holds less than 1e-6 of the reference intensity.
SpinReadout extract_spins(const CavityNetwork& network, const CavityState& state);

// max over non-extra sites of | |psi|^2 - mean | / mean.
double homogeneity_deviation(const CavityNetwork& network, const CavityState& state);

enum class Calibration { XY, Ising };

struct ReadoutEnergy {
    double sum_chi2 = 0.0;  // sum over original edges of |chi_X|^2, X from the readout selector
    double e_spin = 0.0;    // n_edges - kappa * sum_chi2
    double kappa = 0.0;
};

// XY: kappa = gamma^2 / (8 J^2 I0) with I0 the reference intensity.
// Ising: kappa = 2 / chi_abs^2 with chi_abs from the cubic.
ReadoutEnergy readout_energy(const CavityNetwork& network, const CavityState& state,
                             Calibration calibration);

Calibration calibration_for(const SimParams& params);

// Builds the analytic stationary state for `config` and returns the largest
// modulus of the equations-of-motion right-hand side there. In the Ising
// regime config must be binary (InvalidInstance otherwise).
double ising_fixed_point_residual(const CavityNetwork& network, const SpinConfig& config,
                                  const SimParams& params);

// The analytic state used by ising_fixed_point_residual.
CavityState candidate_fixed_point(const CavityNetwork& network, const SpinConfig& config,
                                  const SimParams& params);

// True when every phase difference within a connected component lies
// within tol of 0 or pi.
bool is_binary(const SpinGraph& graph, const SpinConfig& config, double tol);

// Largest distance of any intra-component phase difference from {0, pi}.
double binarization_error(const SpinGraph& graph, const SpinConfig& config);

// Ising spins (+1/-1) relative to the first site of each component.
std::vector<int> binarize(const SpinGraph& graph, const SpinConfig& config);

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace cavspin
