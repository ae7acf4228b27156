#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "cavspin/compiler.hpp"
#include "cavspin/dynamics.hpp"
#include "cavspin/graph.hpp"
#include "cavspin/params.hpp"

namespace cavspin {

// Linear feedback ramp mu(j) = mu0 + mu_slope j.
struct Schedule {
    double mu0 = 0.0;
    double mu_slope = 0.0;
    std::size_t n_pulses = 100;
    double pulse_duration = 1000.0;  // readout half + feedback half
    double reset_noise_amp = 2e-3;
    // Replace mu0/mu_slope by a ramp fitted to the graph (see auto_schedule).
    bool auto_mu = false;

    double mu(std::size_t j) const { return mu0 + mu_slope * static_cast<double>(j); }
    void validate() const;
};

struct PulseRecord {
    std::size_t pulse_index = 0;
    double mu = 0.0;
    double sum_chi2 = 0.0;
    double p_f = 0.0;
    double e_spin = 0.0;
    bool survived = false;
    double homogeneity_dev = 0.0;
    bool converged = true;  // readout state passed the stationarity check
    SpinConfig config;      // readout phases, all spin sites
};

// Fraction of the reference intensity the condensate must keep at the end
// of the feedback half to count as surviving.
inline constexpr double kSurvivalFraction = 0.1;

struct RunOptions {
    PumpStrategy strategy = PumpStrategy::Compensated;
    // Readouts changing faster than this (per unit time, relative to the
    // largest amplitude) are flagged unconverged.
    double readout_tol = 1e-6;
    // Skip the rest of a half-pulse once the state is stationary (rate below
    // 1e-9 of the largest amplitude per unit time), or once a feedback half
    // has decayed below 1e-12 of the reference intensity while the empty
    // state is linearly stable. Off by default.
    bool fast_forward = false;
    // Called with the readout network and state of every pulse.
    std::function<void(std::size_t, const CavityNetwork&, const CavityState&)> on_readout;
};

struct PulsedRun {
    std::vector<PulseRecord> records;
    Schedule schedule;            // effective schedule (after auto_mu)
    double survival_pump = 0.0;   // calibrated P_f threshold, 0 when not calibrated
    CavityState final_state;
    CavityNetwork readout_network;
};

// Pulsed readout/feedback annealing. Each pulse evolves half the pulse under
// spin pump p_r (plus compensation offsets), reads sum |chi_X|^2 and the
// spin energy, evolves the second half under P_f = mu(j) sum |chi_X|^2 (plus
// the same offsets), then either perturbs the surviving condensate with
// reset noise or restarts from pure noise.
PulsedRun run_pulsed(const SpinGraph& graph, const SimParams& params, const Schedule& schedule,
                     double p_r, std::uint64_t seed, const RunOptions& options = {});

// Smallest feedback pump that keeps the condensate above the survival
// fraction, found by bisection starting from `readout_state`.
double calibrate_survival_pump(const CavityNetwork& readout_network, const SimParams& params,
                               const CavityState& readout_state, double feedback_duration,
                               bool fast_forward = false);

// Ramp from 0.95 P_surv / Sigma_max to 1.05 P_surv / Sigma_min over 70% of
// the pulses, where [Sigma_min, Sigma_max] bounds the ground-state readout
// sum (half to all edges satisfied).
Schedule auto_schedule(const CavityNetwork& readout_network, const Schedule& base,
                       double survival_pump);

// Running minimum of e_spin minus the ground energy, per pulse.
std::vector<std::pair<std::size_t, double>> excess_energy_trace(
    const std::vector<PulseRecord>& records, double ground_energy);

// Index of the first pulse from which every later pulse survives, or
// records.size() when the run never locks in.
std::size_t lock_in_pulse(const std::vector<PulseRecord>& records);

struct BatchSpec {
    std::vector<std::size_t> sizes;
    std::size_t graphs_per_size = 30;
    SimParams params;
    Schedule schedule;
    double p_r = 12.0;
    std::uint64_t seed = 1;
    double connectivity = 0.5;
    double fm_fraction = 0.5;
    PumpStrategy strategy = PumpStrategy::Compensated;
    bool dangling = false;
    bool fast_forward = false;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct GraphOutcome {
    std::size_t size = 0;
    std::size_t graph_index = 0;
    double ground_energy = 0.0;
    double final_energy = 0.0;
    bool success = false;
    std::size_t lock_in = 0;
    std::vector<double> excess;  // per pulse
    double wall_seconds = 0.0;
};

struct SizeSummary {
    std::size_t size = 0;
    std::vector<double> mean_excess;  // per pulse, averaged over graphs
    double success_rate = 0.0;
    double wall_seconds = 0.0;
    std::vector<GraphOutcome> graphs;
};

struct BatchResult {
    std::vector<SizeSummary> sizes;
};

inline constexpr std::size_t kXyOracleBound = 12;
inline constexpr double kSuccessTolerance = 1e-3;

BatchResult batch_run(const BatchSpec& spec);

// CSV: pulse_index,mu,p_f,sum_chi2,e_spin,survived,homogeneity_dev
void write_pulses_csv(std::ostream& out, const std::vector<PulseRecord>& records);

}  // namespace cavspin
