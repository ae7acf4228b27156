// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion
// numbers as arguments to run a subset.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cavspin/analysis.hpp"
#include "cavspin/dynamics.hpp"
#include "cavspin/errors.hpp"
#include "cavspin/io.hpp"
#include "cavspin/oracle.hpp"
#include "cavspin/protocol.hpp"
#include "cavspin/rng.hpp"

using namespace cavspin;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

SimParams xy_params() {
    SimParams p;
    p.p = 12.0;
    p.gamma = 4.0;
    p.j = 0.5;
    p.gamma_nl = 1.0;
    return p;
}

SimParams ising_params() {
    SimParams p = xy_params();
    p.gamma_nl_prime = 1.0;
    return p;
}

// A site with n edges has a non-rotating stationary state only while
// 2 n J^2 < (gamma/2)^2; beyond that it lases at a shifted frequency. The
// random graphs below reach degree 11, so J is lowered to 0.4 (bound 0.426).
constexpr double kRegimeJ = 0.4;

bool outside_regime(const SpinGraph& g, double j, double gamma) {
    return 2.0 * static_cast<double>(g.max_degree()) * j * j >= 0.25 * gamma * gamma;
}

// The 30 random instances shared by criteria 2-4 and 6: five per size 7..12.
std::vector<SpinGraph> homogeneity_graphs() {
    std::vector<SpinGraph> out;
    for (std::size_t n = 7; n <= 12; ++n)
        for (std::uint64_t k = 0; k < 5; ++k) out.push_back(generate_random_graph(n, 0.5, 0.5, derive_seed(2024, n, k)));
    return out;
}

struct Relaxed {
    SpinGraph graph;
    CavityNetwork network;
    CavityState state;
    bool converged = false;
};

std::vector<Relaxed> relax_all(const SimParams& params, double max_time, double tol) {
    std::vector<Relaxed> out;
    std::uint64_t seed = 0;
    for (const SpinGraph& g : homogeneity_graphs()) {
        Relaxed r{g, compile(g, params, PumpStrategy::Compensated), {}, false};
        r.state = relax(r.network, init_noise(r.network, params.noise_amp, ++seed), params, max_time, tol);
        // rate test relative to the largest amplitude: empty connecting
        // modes keep shrinking geometrically at any finite time
        r.converged = is_stationary(r.state, step(r.network, r.state, params), tol, 1.0);
        out.push_back(std::move(r));
    }
    return out;
}

const std::vector<Relaxed>& xy_runs() {
    static const std::vector<Relaxed> runs = [] {
        SimParams p = xy_params();
        p.j = kRegimeJ;
        return relax_all(p, 3000.0, 1e-9);
    }();
    return runs;
}

const std::vector<Relaxed>& ising_runs() {
    static const std::vector<Relaxed> runs = [] {
        SimParams p = ising_params();
        p.j = kRegimeJ;
        return relax_all(p, 3000.0, 1e-9);
    }();
    return runs;
}

Outcome stationary_intensity() {
    const auto t0 = Clock::now();
    SimParams p = xy_params();
    p.p = 14.0;
    const CavityNetwork net = compile(SpinGraph(2, {{0, 1, Coupling::FM}}), p, PumpStrategy::Uniform);
    const CavityState s = evolve(net, init_noise(net, p.noise_amp, 1), p, 1000.0);
    const double secs = seconds_since(t0);
    const double expect = 4.75;
    const double err = std::max(std::abs(std::norm(s[0]) - expect), std::abs(std::norm(s[1]) - expect)) / expect;
    return {err < 1e-4 && secs < 1.0,
            fmt("two-site FM plaquette at P=14: |psi|^2 = %.10f, %.10f (rel err %.1e, want < 1e-4), %.3f s",
                std::norm(s[0]), std::norm(s[1]), err, secs)};
}

Outcome amplitude_homogeneity() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::size_t unconverged = 0;
    for (const Relaxed& r : xy_runs()) {
        worst = std::max(worst, homogeneity_deviation(r.network, r.state));
        unconverged += r.converged ? 0 : 1;
    }
    // Negative control: uniform pump on an irregular path, no extra sites.
    const SimParams p = xy_params();
    const CavityNetwork path = compile(SpinGraph(3, {{0, 1, Coupling::FM}, {1, 2, Coupling::AFM}}), p, PumpStrategy::Uniform);
    const CavityState s = relax(path, init_noise(path, p.noise_amp, 5), p, 3000.0, 1e-9);
    const double control = homogeneity_deviation(path, s);
    const double secs = seconds_since(t0);
    std::size_t beyond = 0;
    for (const SpinGraph& g : homogeneity_graphs()) beyond += outside_regime(g, p.j, p.gamma) ? 1 : 0;
    return {worst < 1e-4 && unconverged == 0 && control > 1e-2 && secs < 60.0,
            fmt("30 graphs n=7-12, compensated XY, J=%.1f: max deviation %.2e (want < 1e-4), %zu unconverged; "
                "uniform-pump path control %.3f (want > 1e-2); %.1f s [at J=%.1f, %zu of these graphs have a site "
                "with 2 n J^2 >= (gamma/2)^2, which lases off resonance]",
                kRegimeJ, worst, unconverged, control, secs, p.j, beyond)};
}

Outcome connecting_intensity_law() {
    SimParams p = xy_params();
    p.j = kRegimeJ;
    const double scale = 8.0 * p.j * p.j / (p.gamma * p.gamma);
    double worst = 0.0;
    std::size_t edges = 0;
    for (const Relaxed& r : xy_runs()) {
        for (const EdgeRecord& e : r.network.edges) {
            const double i0 = predicted_i0(p, r.network.pump[e.spin_a], r.network.degree[e.spin_a]);
            const double dphi = std::arg(r.state[e.spin_a]) - std::arg(r.state[e.spin_b]);
            const double floor = 1e-6 * 2.0 * scale * i0;
            const double ps = predicted_chi_intensity(p, i0, dphi, Branch::S);
            const double pa = predicted_chi_intensity(p, i0, dphi, Branch::A);
            worst = std::max(worst, std::abs(std::norm(r.state[e.s_mode]) - ps) / std::max(ps, floor));
            worst = std::max(worst, std::abs(std::norm(r.state[e.a_mode]) - pa) / std::max(pa, floor));
            ++edges;
        }
    }
    return {worst < 1e-3 && edges > 0,
            fmt("%zu edges x 2 modes: max rel err %.2e against (8J^2/gamma^2) I0 (1 +- cos dphi) (want < 1e-3)",
                edges, worst)};
}

Outcome ising_binarization() {
    double worst_phase = 0.0, worst_ratio = 0.0;
    std::size_t unconverged = 0, edges = 0;
    for (const Relaxed& r : ising_runs()) {
        unconverged += r.converged ? 0 : 1;
        const SpinReadout sr = extract_spins(r.network, r.state);
        worst_phase = std::max(worst_phase, binarization_error(r.graph, sr.config));
        for (const EdgeRecord& e : r.network.edges) {
            const double s = std::norm(r.state[e.s_mode]), a = std::norm(r.state[e.a_mode]);
            worst_ratio = std::max(worst_ratio, std::min(s, a) / std::max(s, a));
            ++edges;
        }
    }
    return {worst_phase < 1e-3 && worst_ratio < 1e-6 && unconverged == 0,
            fmt("30 graphs, J=0.4, Gamma'=1: max phase distance from {0,pi} %.2e rad (want < 1e-3); "
                "max empty/full connecting ratio over %zu edges %.2e (want < 1e-6); %zu unconverged",
                worst_phase, edges, worst_ratio, unconverged)};
}

Outcome cubic_and_fixed_points() {
    const auto t0 = Clock::now();
    double worst_cubic = 0.0;
    for (double pv : {5.0, 12.0, 14.0, 20.0})
        for (double gp : {0.1, 1.0, 5.0}) {
            SimParams p = ising_params();
            p.p = pv;
            p.gamma_nl_prime = gp;
            worst_cubic = std::max(worst_cubic, std::abs(chi_cubic_residual(p, solve_chi_cubic(p))));
        }

    const SimParams p = ising_params();
    double worst = 0.0;
    std::size_t graphs = 0, configs = 0;
    auto check_graph = [&](const SpinGraph& g) {
        const CavityNetwork net = compile(g, p, PumpStrategy::Compensated);
        const std::size_t n = g.n_sites();
        SpinConfig c;
        c.phases.assign(n, 0.0);
        for (std::uint64_t mask = 0; mask < (1ULL << (n - 1)); ++mask) {
            for (std::size_t i = 1; i < n; ++i) c.phases[i] = (mask >> (i - 1)) & 1 ? std::numbers::pi : 0.0;
            worst = std::max(worst, ising_fixed_point_residual(net, c, p));
            ++configs;
        }
        ++graphs;
    };
    // Every signed graph for n <= 5 (3 choices per pair), sampled for n = 6.
    for (std::size_t n = 2; n <= 5; ++n) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
        std::uint64_t total = 1;
        for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;
        for (std::uint64_t code = 0; code < total; ++code) {
            std::vector<Edge> edges;
            std::uint64_t c = code;
            for (const auto& [a, b] : pairs) {
                if (c % 3 == 1) edges.push_back({a, b, Coupling::FM});
                if (c % 3 == 2) edges.push_back({a, b, Coupling::AFM});
                c /= 3;
            }
            check_graph(SpinGraph(n, std::move(edges)));
        }
    }
    for (std::uint64_t k = 0; k < 3000; ++k) {
        check_graph(generate_random_graph(6, 0.2 + 0.6 * static_cast<double>(k % 4) / 3.0, 0.5, derive_seed(6, k)));
    }
    return {worst_cubic < 1e-12 && worst < 1e-6,
            fmt("cubic residual at root %.1e (want < 1e-12); fixed-point residual %.1e over %zu binary configs "
                "on %zu graphs: all signed graphs n=2-5, 3000 random n=6 (want < 1e-6); %.1f s",
                worst_cubic, worst, configs, graphs, seconds_since(t0))};
}

Outcome readout_calibration() {
    double worst = 0.0;
    std::size_t readouts = 0;
    auto check = [&](const SpinGraph& g, const CavityNetwork& net, const CavityState& s, Calibration cal) {
        const double e = readout_energy(net, s, cal).e_spin;
        worst = std::max(worst, std::abs(e - spin_energy(g, extract_spins(net, s).config)));
        ++readouts;
    };
    for (const Relaxed& r : xy_runs()) check(r.graph, r.network, r.state, Calibration::XY);
    for (const Relaxed& r : ising_runs()) check(r.graph, r.network, r.state, Calibration::Ising);

    // Every converged readout of short annealing runs, both modes.
    std::size_t skipped = 0;
    for (const SimParams& p : {xy_params(), ising_params()}) {
        for (std::uint64_t k = 0; k < 4; ++k) {
            const SpinGraph g = generate_random_graph(5 + k, 0.5, 0.5, derive_seed(66, k));
            Schedule s;
            s.n_pulses = 60;
            s.auto_mu = true;
            RunOptions o;
            o.fast_forward = true;
            const PulsedRun run = run_pulsed(g, p, s, 12.0, derive_seed(67, k), o);
            for (const PulseRecord& r : run.records) {
                if (!r.converged) {
                    ++skipped;
                    continue;
                }
                worst = std::max(worst, std::abs(r.e_spin - spin_energy(g, r.config)));
                ++readouts;
            }
        }
    }
    return {worst < 1e-3 && readouts > 60,
            fmt("%zu converged readouts (XY and Ising, %zu unconverged skipped): max |e_spin - spin_energy| %.2e "
                "(want < 1e-3)",
                readouts, skipped, worst)};
}

Outcome sampling_distribution() {
    const auto t0 = Clock::now();
    // connected, frustrated four-site instance
    const SpinGraph g(4, {{0, 1, Coupling::FM}, {1, 2, Coupling::AFM}, {2, 3, Coupling::FM},
                          {0, 3, Coupling::FM}, {0, 2, Coupling::AFM}});
    Schedule s;
    s.mu0 = 0.0;
    s.mu_slope = 0.0;
    s.n_pulses = 2000;
    RunOptions o;
    o.fast_forward = true;
    const PulsedRun run = run_pulsed(g, ising_params(), s, 12.0, 2718, o);

    std::map<std::vector<int>, std::size_t> visits;
    std::map<long, std::size_t> by_energy;
    std::size_t bad = 0;
    for (const PulseRecord& r : run.records) {
        if (r.survived || !r.converged || !is_binary(g, r.config, 1e-3)) {
            ++bad;
            continue;
        }
        ++visits[binarize(g, r.config)];
        ++by_energy[std::lround(r.e_spin)];
    }
    const double samples = static_cast<double>(s.n_pulses - bad);
    const double states = 8.0;
    const double q = 1.0 / states;
    const double sigma = std::sqrt(samples * q * (1.0 - q));
    double worst_z = 0.0;
    for (const auto& [cfg, n] : visits) worst_z = std::max(worst_z, std::abs(static_cast<double>(n) - samples * q) / sigma);

    const DensityOfStates dos = ising_density_of_states(g);
    double worst_ez = 0.0;
    std::size_t seen_levels = 0;
    for (std::size_t k = 0; k < dos.energies.size(); ++k) {
        const double qk = static_cast<double>(dos.multiplicity[k]) / static_cast<double>(dos.total());
        const auto it = by_energy.find(std::lround(dos.energies[k]));
        const double n = it == by_energy.end() ? 0.0 : static_cast<double>(it->second);
        seen_levels += it == by_energy.end() ? 0 : 1;
        worst_ez = std::max(worst_ez, std::abs(n - samples * qk) / std::sqrt(samples * qk * (1.0 - qk)));
    }
    const double secs = seconds_since(t0);
    return {visits.size() == 8 && bad == 0 && worst_z <= 3.0 && worst_ez <= 3.0 &&
                seen_levels == by_energy.size() && secs < 300.0,
            fmt("mu=0, n=4, 2000 pulses: %zu/8 states visited, max |z| %.2f per state and %.2f per energy level "
                "(want <= 3); %zu survived/unconverged/non-binary; %.1f s",
                visits.size(), worst_z, worst_ez, bad, secs)};
}

Outcome ground_state_lock_in() {
    const auto t0 = Clock::now();
    BatchSpec spec;
    spec.sizes = {2, 3, 4, 5, 6, 7, 8};
    spec.graphs_per_size = 30;
    spec.params = ising_params();
    spec.schedule.n_pulses = 1000;
    spec.schedule.pulse_duration = 1000.0;
    spec.schedule.auto_mu = true;
    spec.p_r = 12.0;
    spec.seed = 31415;
    spec.fast_forward = true;
    const BatchResult res = batch_run(spec);

    bool ok = true;
    std::ostringstream detail;
    detail << "Ising sweep, 30 graphs/size, 1000 pulses:";
    for (const SizeSummary& s : res.sizes) {
        bool monotone = true;
        for (std::size_t j = 1; j < s.mean_excess.size(); ++j) monotone &= s.mean_excess[j] <= s.mean_excess[j - 1];
        const double last = s.mean_excess.back();
        const std::size_t n = s.mean_excess.size();
        detail << fmt("\n    n=%zu success %.2f  mean dE at pulse 0/250/500/750/999: %.3f %.3f %.3f %.3f %.2e%s", s.size,
                      s.success_rate, s.mean_excess[0], s.mean_excess[n / 4], s.mean_excess[n / 2],
                      s.mean_excess[3 * n / 4], last, monotone ? "" : "  NOT MONOTONE");
        ok &= monotone;
        if (s.size <= 6) ok &= last < 1e-3 && s.success_rate >= 0.9;
    }
    detail << fmt("\n    (n <= 6 must reach dE < 1e-3 and success >= 0.9; %.0f s)", seconds_since(t0));
    return {ok, detail.str()};
}

Outcome heterogeneity() {
    const SpinGraph tri(3, {{0, 1, Coupling::FM}, {1, 2, Coupling::FM}, {0, 2, Coupling::AFM}});
    const HeterogeneityResult h = heterogeneity_counterexample(tri);
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    for (const Edge& e : tri.edges()) {
        const auto ia = static_cast<Eigen::Index>(e.a), ib = static_cast<Eigen::Index>(e.b);
        a(ia, ib) = a(ib, ia) = coupling_sign(e.coupling);
    }
    const double bound = -1.5 * Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(a).eigenvalues().maxCoeff();
    double lo = 1e9, hi = 0.0;
    for (const auto& z : h.amplitudes) {
        lo = std::min(lo, std::abs(z));
        hi = std::max(hi, std::abs(z));
    }
    const double ground = ising_ground(tri).energy;
    return {h.counterexample && h.analogue_energy < ground && hi - lo > 1e-3 &&
                std::abs(h.analogue_energy - bound) < 1e-6,
            fmt("frustrated triangle: analogue energy %.10f < Ising ground %.0f, amplitudes %.4f..%.4f, "
                "eigenvalue bound %.10f (diff %.1e)",
                h.analogue_energy, ground, lo, hi, bound, std::abs(h.analogue_energy - bound))};
}

Outcome determinism() {
    auto anneal_bytes = [](std::uint64_t seed) {
        const SpinGraph g = generate_random_graph(6, 0.5, 0.5, 8);
        Schedule s;
        s.n_pulses = 40;
        s.auto_mu = true;
        const PulsedRun run = run_pulsed(g, ising_params(), s, 12.0, seed);
        std::ostringstream os;
        write_pulses_csv(os, run.records);
        os << schedule_to_json(run.schedule).dump() << state_to_json(run.final_state).dump();
        return os.str();
    };
    auto sweep_bytes = [](unsigned threads) {
        BatchSpec spec;
        spec.sizes = {3, 4};
        spec.graphs_per_size = 4;
        spec.params = ising_params();
        spec.schedule.n_pulses = 20;
        spec.schedule.pulse_duration = 200.0;
        spec.schedule.auto_mu = true;
        spec.fast_forward = true;
        spec.threads = threads;
        std::ostringstream os;
        for (const SizeSummary& s : batch_run(spec).sizes) {
            for (double v : s.mean_excess) os << v << ',';
            for (const GraphOutcome& g : s.graphs) os << g.final_energy << ',' << g.lock_in << ';';
        }
        return os.str();
    };
    const std::string a = anneal_bytes(5), b = anneal_bytes(5), c = anneal_bytes(6);
    const std::string s1 = sweep_bytes(1), s3 = sweep_bytes(3);
    return {a == b && a != c && s1 == s3,
            fmt("repeat anneal bytes %s (%zu bytes), other seed %s, sweep with 1 vs 3 threads %s",
                a == b ? "identical" : "DIFFER", a.size(), a != c ? "differs" : "IDENTICAL", s1 == s3 ? "identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"stationary intensity", stationary_intensity},
        {"amplitude homogeneity", amplitude_homogeneity},
        {"connecting-intensity law", connecting_intensity_law},
        {"Ising binarization", ising_binarization},
        {"cubic root and fixed points", cubic_and_fixed_points},
        {"energy readout calibration", readout_calibration},
        {"sampling distribution", sampling_distribution},
        {"ground-state lock-in", ground_state_lock_in},
        {"heterogeneity counterexample", heterogeneity},
        {"determinism", determinism},
    };
    std::set<std::size_t> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));

    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        if (!only.empty() && !only.contains(k + 1)) continue;
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
