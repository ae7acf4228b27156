#include "cavspin/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "cavspin/analysis.hpp"
#include "cavspin/errors.hpp"
#include "cavspin/format.hpp"
#include "cavspin/oracle.hpp"
#include "cavspin/rng.hpp"

namespace cavspin {

namespace {

double mean_spin_intensity(const CavityNetwork& network, const CavityState& state) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t m = 0; m < network.n_spin_modes; ++m) {
        if (network.extra[m]) continue;
        sum += std::norm(state[m]);
        ++count;
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::vector<double> feedback_pumps(const std::vector<double>& offsets, double p_f) {
    std::vector<double> pump(offsets.size());
    for (std::size_t m = 0; m < offsets.size(); ++m) pump[m] = p_f + offsets[m];
    return pump;
}

// Runs `steps` RK4 steps; `before_last` receives the state one step before
// the end.
void integrate(const CavityNetwork& network, const SimParams& params, CavityState& state,
               std::size_t steps, Rk4& rk, CavityState* before_last = nullptr) {
    for (std::size_t s = 0; s < steps; ++s) {
        if (before_last && s + 1 == steps) *before_last = state;
        rk.advance(network, params, state);
    }
}

// Whether the empty state is linearly stable. In the linear regime each
// spin site couples only to the symmetric combination of its private
// connecting modes, giving the 2x2 block [[g, iJ sqrt(n)], [2iJ sqrt(n), -gamma/2]]
// with g = (P_m - gamma)/2.
bool zero_state_stable(const CavityNetwork& network, const SimParams& params) {
    for (std::size_t m = 0; m < network.n_spin_modes; ++m) {
        const double g = 0.5 * (network.pump[m] - params.gamma);
        const double n = static_cast<double>(network.degree[m]);
        if (n == 0.0) {
            if (!(g < 0.0)) return false;
        } else if (!(g < 0.5 * params.gamma && 0.5 * g * params.gamma < 2.0 * params.j * params.j * n)) {
            return false;
        }
    }
    return true;
}

enum class StageEnd { Completed, Decayed };

constexpr double kFastForwardRate = 1e-9;
constexpr double kDecayedFraction = 1e-12;
constexpr double kCheckInterval = 10.0;
// Readout convergence is a rate bound relative to the largest amplitude:
// nearly empty connecting modes keep shrinking long after the readout sum
// has settled.
constexpr double kConvergenceFloor = 1.0;

// One half-pulse. With fast-forward the remaining steps are skipped once the
// state is stationary (time is still advanced) or, when `decay_floor` > 0,
// once the state has collapsed below it with the empty state stable.
StageEnd run_stage(const CavityNetwork& network, const SimParams& params, CavityState& state,
                   std::size_t steps, Rk4& rk, bool fast_forward, double decay_floor,
                   CavityState* before_last = nullptr) {
    if (!fast_forward) {
        integrate(network, params, state, steps, rk, before_last);
        return StageEnd::Completed;
    }
    const bool can_decay = decay_floor > 0.0 && zero_state_stable(network, params);
    const std::size_t chunk = std::max<std::size_t>(2, step_count(kCheckInterval, params.dt));
    CavityState before;
    std::size_t done = 0;
    while (done < steps) {
        const std::size_t n = std::min(chunk, steps - done);
        integrate(network, params, state, n, rk, &before);
        done += n;
        if (done == steps) break;
        const std::size_t remaining = steps - done;
        if (can_decay) {
            double peak = 0.0;
            for (const cplx& z : state.amplitudes) peak = std::max(peak, std::norm(z));
            if (peak < decay_floor) {
                state.time += static_cast<double>(remaining) * params.dt;
                return StageEnd::Decayed;
            }
        }
        if (is_stationary(before, state, kFastForwardRate, 1.0)) {
            state.time += static_cast<double>(remaining) * params.dt;
            before.time = state.time - params.dt;
            break;
        }
    }
    if (before_last) *before_last = before;
    return StageEnd::Completed;
}

bool feedback_survives(const CavityNetwork& readout_network, const SimParams& params,
                       const CavityState& readout_state, double p_f, std::size_t steps,
                       double reference, bool fast_forward) {
    const CavityNetwork net =
        readout_network.with_pumps(feedback_pumps(readout_network.pump_offsets(), p_f));
    CavityState s = readout_state;
    Rk4 rk(s.size());
    const StageEnd end =
        run_stage(net, params, s, steps, rk, fast_forward, kDecayedFraction * reference);
    return end == StageEnd::Completed && mean_spin_intensity(net, s) > kSurvivalFraction * reference;
}

// Bounds of the readout sum for the best configuration: at least half of
// the original edges can always be satisfied.
std::pair<double, double> ground_readout_bounds(const CavityNetwork& network) {
    const SimParams& params = network.params;
    const double n_edges = static_cast<double>(network.n_original_edges());
    double full = 0.0;
    if (params.ising()) {
        const double chi = solve_chi_cubic(params);
        full = chi * chi * n_edges;
    } else {
        const double c = 8.0 * params.j * params.j * reference_intensity(network) /
                         (params.gamma * params.gamma);
        full = 2.0 * c * n_edges;
    }
    return {0.5 * full, full};
}

}  // namespace

void Schedule::validate() const {
    if (!(mu_slope >= 0.0)) throw InvalidParameter("mu_slope must be non-negative");
    if (!(pulse_duration > 0.0)) throw InvalidParameter("pulse_duration must be positive");
    if (n_pulses < 1) throw InvalidParameter("n_pulses must be at least 1");
    if (!(reset_noise_amp >= 0.0)) throw InvalidParameter("reset_noise_amp must be non-negative");
}

double calibrate_survival_pump(const CavityNetwork& readout_network, const SimParams& params,
                               const CavityState& readout_state, double feedback_duration,
                               bool fast_forward) {
    const std::size_t steps = step_count(feedback_duration, params.dt);
    const double reference = reference_intensity(readout_network);
    double lo = 0.0;
    double hi = readout_network.params.p;
    while (!feedback_survives(readout_network, params, readout_state, hi, steps, reference,
                              fast_forward)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw BelowThreshold("no feedback pump keeps the condensate alive");
    }
    for (int it = 0; it < 14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool alive = feedback_survives(readout_network, params, readout_state, mid, steps,
                                             reference, fast_forward);
        (alive ? hi : lo) = mid;
    }
    return hi;
}

Schedule auto_schedule(const CavityNetwork& readout_network, const Schedule& base,
                       double survival_pump) {
    Schedule s = base;
    s.auto_mu = false;
    const auto [sigma_min, sigma_max] = ground_readout_bounds(readout_network);
    if (!(sigma_min > 0.0)) {
        s.mu0 = 0.0;
        s.mu_slope = 0.0;
        return s;
    }
    const double mu_lo = 0.95 * survival_pump / sigma_max;
    const double mu_hi = 1.05 * survival_pump / sigma_min;
    const double span = 0.7 * static_cast<double>(std::max<std::size_t>(1, s.n_pulses - 1));
    s.mu0 = mu_lo;
    s.mu_slope = (mu_hi - mu_lo) / span;
    return s;
}

PulsedRun run_pulsed(const SpinGraph& graph, const SimParams& params, const Schedule& schedule,
                     double p_r, std::uint64_t seed, const RunOptions& options) {
    schedule.validate();
    SimParams readout_params = params;
    readout_params.p = p_r;
    readout_params.validate();

    PulsedRun run;
    run.readout_network = compile(graph, readout_params, options.strategy);
    const CavityNetwork& net = run.readout_network;
    const double reference = reference_intensity(net);
    if (below_threshold(reference)) {
        throw BelowThreshold("readout pump p_r=" + std::to_string(p_r) +
                             " leaves the spin sites below threshold");
    }
    const std::vector<double> offsets = net.pump_offsets();
    const Calibration calibration = calibration_for(readout_params);
    const double half = 0.5 * schedule.pulse_duration;
    const std::size_t half_steps = step_count(half, readout_params.dt);
    if (half_steps == 0) throw InvalidParameter("pulse shorter than two time steps");

    Rng rng(seed);
    CavityState state = init_noise(net, params.noise_amp, rng);
    Rk4 rk(state.size());

    run.schedule = schedule;
    if (schedule.auto_mu) {
        // Separate stream so the pulse sequence does not depend on calibration.
        Rng cal_rng(derive_seed(seed, 0xca11b8a7e));
        CavityState probe = init_noise(net, params.noise_amp, cal_rng);
        run_stage(net, readout_params, probe, half_steps, rk, options.fast_forward, 0.0);
        run.survival_pump =
            calibrate_survival_pump(net, readout_params, probe, half, options.fast_forward);
        run.schedule = auto_schedule(net, schedule, run.survival_pump);
    }

    run.records.reserve(schedule.n_pulses);
    CavityState before;
    for (std::size_t j = 0; j < schedule.n_pulses; ++j) {
        PulseRecord rec;
        rec.pulse_index = j;
        rec.mu = run.schedule.mu(j);

        run_stage(net, readout_params, state, half_steps, rk, options.fast_forward, 0.0, &before);
        rec.converged = is_stationary(before, state, options.readout_tol, kConvergenceFloor);
        if (options.on_readout) options.on_readout(j, net, state);

        const ReadoutEnergy readout = readout_energy(net, state, calibration);
        rec.sum_chi2 = readout.sum_chi2;
        rec.e_spin = readout.e_spin;
        try {
            rec.config = extract_spins(net, state).config;
        } catch (const EmptyCondensate&) {
            rec.converged = false;
            rec.config.phases.resize(net.n_spin_modes);
            for (std::size_t m = 0; m < net.n_spin_modes; ++m) rec.config.phases[m] = std::arg(state[m]);
        }
        rec.homogeneity_dev = homogeneity_deviation(net, state);

        rec.p_f = rec.mu * rec.sum_chi2;
        const CavityNetwork feedback = net.with_pumps(feedback_pumps(offsets, rec.p_f));
        const StageEnd end = run_stage(feedback, readout_params, state, half_steps, rk,
                                       options.fast_forward, kDecayedFraction * reference);
        rec.survived = end == StageEnd::Completed &&
                       mean_spin_intensity(net, state) > kSurvivalFraction * reference;
        if (rec.survived) {
            add_noise(state, schedule.reset_noise_amp, rng);
        } else {
            const double t = state.time;
            state = init_noise(net, schedule.reset_noise_amp, rng);
            state.time = t;
        }
        run.records.push_back(std::move(rec));
    }
    run.final_state = std::move(state);
    return run;
}

std::vector<std::pair<std::size_t, double>> excess_energy_trace(
    const std::vector<PulseRecord>& records, double ground_energy) {
    if (records.empty()) throw InvalidParameter("excess energy trace of an empty run");
    std::vector<std::pair<std::size_t, double>> trace;
    trace.reserve(records.size());
    double best = records.front().e_spin;
    for (const PulseRecord& r : records) {
        best = std::min(best, r.e_spin);
        trace.emplace_back(r.pulse_index, best - ground_energy);
    }
    return trace;
}

std::size_t lock_in_pulse(const std::vector<PulseRecord>& records) {
    std::size_t k = records.size();
    while (k > 0 && records[k - 1].survived) --k;
    return k;
}

namespace {

RunOptions run_options(const BatchSpec& spec) {
    RunOptions o;
    o.strategy = spec.strategy;
    o.fast_forward = spec.fast_forward;
    return o;
}

GraphOutcome run_one(const BatchSpec& spec, std::size_t size, std::size_t index) {
    const auto start = std::chrono::steady_clock::now();
    GraphOutcome out;
    out.size = size;
    out.graph_index = index;

    const SpinGraph base = generate_random_graph(size, spec.connectivity, spec.fm_fraction,
                                                 derive_seed(spec.seed, size, index));
    const SpinGraph graph = spec.dangling ? extend_with_dangling(base) : base;
    const bool ising = spec.params.ising();
    std::vector<std::vector<int>> ground_configs;
    if (ising) {
        IsingGround g = ising_ground(base);
        out.ground_energy = g.energy;
        ground_configs = std::move(g.configs);
    } else {
        out.ground_energy =
            xy_ground_estimate(base, 0, derive_seed(spec.seed, size, index ^ 0xc0ffee)).energy;
    }

    const PulsedRun run = run_pulsed(graph, spec.params, spec.schedule, spec.p_r,
                                     derive_seed(spec.seed, size, index + (1ULL << 32)),
                                     run_options(spec));
    for (const auto& [j, de] : excess_energy_trace(run.records, out.ground_energy)) {
        out.excess.push_back(de);
    }
    const PulseRecord& last = run.records.back();
    out.final_energy = last.e_spin;
    out.lock_in = lock_in_pulse(run.records);
    out.success = std::abs(last.e_spin - out.ground_energy) <= kSuccessTolerance;
    if (ising && out.success) {
        std::vector<int> spins = binarize(graph, last.config);
        spins.resize(base.n_sites());
        out.success = std::find(ground_configs.begin(), ground_configs.end(), spins) !=
                      ground_configs.end();
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace

BatchResult batch_run(const BatchSpec& spec) {
    const std::size_t bound = spec.params.ising() ? kEnumerationBound : kXyOracleBound;
    for (std::size_t n : spec.sizes) {
        if (n > bound) {
            throw CapacityError("size " + std::to_string(n) + " exceeds the oracle bound " +
                                std::to_string(bound));
        }
        if (n < 2) throw InvalidInstance("graph sizes must be at least 2");
    }

    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t n : spec.sizes) {
        for (std::size_t g = 0; g < spec.graphs_per_size; ++g) jobs.emplace_back(n, g);
    }
    std::vector<GraphOutcome> outcomes(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            try {
                outcomes[k] = run_one(spec, jobs[k].first, jobs[k].second);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    unsigned threads = spec.threads ? spec.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, jobs.size())));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    BatchResult result;
    std::size_t k = 0;
    for (std::size_t n : spec.sizes) {
        SizeSummary s;
        s.size = n;
        s.mean_excess.assign(spec.schedule.n_pulses, 0.0);
        std::size_t successes = 0;
        for (std::size_t g = 0; g < spec.graphs_per_size; ++g, ++k) {
            GraphOutcome& o = outcomes[k];
            for (std::size_t j = 0; j < o.excess.size(); ++j) s.mean_excess[j] += o.excess[j];
            successes += o.success ? 1 : 0;
            s.wall_seconds += o.wall_seconds;
            s.graphs.push_back(std::move(o));
        }
        const double count = static_cast<double>(std::max<std::size_t>(1, spec.graphs_per_size));
        for (double& v : s.mean_excess) v /= count;
        s.success_rate = static_cast<double>(successes) / count;
        result.sizes.push_back(std::move(s));
    }
    return result;
}

void write_pulses_csv(std::ostream& out, const std::vector<PulseRecord>& records) {
    out << "pulse_index,mu,p_f,sum_chi2,e_spin,survived,homogeneity_dev\n";
    for (const PulseRecord& r : records) {
        out << r.pulse_index << ',' << fmt_double(r.mu) << ',' << fmt_double(r.p_f) << ','
            << fmt_double(r.sum_chi2) << ',' << fmt_double(r.e_spin) << ','
            << (r.survived ? 1 : 0) << ',' << fmt_double(r.homogeneity_dev) << '\n';
    }
}

}  // namespace cavspin
