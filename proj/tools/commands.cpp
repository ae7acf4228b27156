#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "cavspin/analysis.hpp"
#include "cavspin/dynamics.hpp"
#include "cavspin/errors.hpp"
#include "cavspin/format.hpp"
#include "cavspin/oracle.hpp"

namespace cavspin::cli {

namespace fs = std::filesystem;

namespace {

fs::path prepare_out(const RunConfig& c) {
    const fs::path dir(c.out);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

const char* mode_kind(const CavityNetwork& net, std::size_t k) {
    if (k >= net.n_spin_modes) return "connecting";
    return net.extra[k] ? "extra" : "spin";
}

void append_polar(std::ostream& out, const CavityNetwork& net, const CavityState& s) {
    for (std::size_t k = 0; k < s.size(); ++k) {
        out << k << ',' << mode_kind(net, k) << ',' << fmt_double(std::abs(s[k])) << ','
            << fmt_double(std::arg(s[k])) << ',' << fmt_double(s.time) << '\n';
    }
}

bool within_oracle(const SpinGraph& g) { return g.n_original_sites() <= kEnumerationBound; }

}  // namespace

void cmd_simulate(const RunConfig& c) {
    const SpinGraph graph = load_instance(c);
    const CavityNetwork net = compile(graph, c.params, c.strategy());
    const double reference = reference_intensity(net);
    if (below_threshold(reference)) {
        throw BelowThreshold("pump p=" + std::to_string(c.params.p) + " leaves the spin sites below threshold");
    }
    const fs::path dir = prepare_out(c);

    std::ostringstream polar, traj;
    polar << "site_index,kind,radius,angle,time\n";
    TrajectoryWriter trajectory(traj);

    CavityState state = init_noise(net, c.params.noise_amp, c.seed);
    const double chunk = c.snapshot_every > 0.0 ? c.snapshot_every : 10.0;
    const bool snapshots = c.snapshot_every > 0.0;
    if (snapshots) append_polar(polar, net, state);
    if (c.trajectory) trajectory.append(state);

    // Evolve in chunks until one further step moves no mode by more than
    // tol per unit time, relative to the largest amplitude.
    bool converged = false;
    Rk4 rk(state.size());
    while (state.time < c.params.duration - 0.5 * c.params.dt) {
        const double span = std::min(chunk, c.params.duration - state.time);
        state = evolve(net, std::move(state), c.params, span);
        if (snapshots) append_polar(polar, net, state);
        if (c.trajectory) trajectory.append(state);
        CavityState probe = state;
        rk.advance(net, c.params, probe);
        if (is_stationary(state, probe, c.tol, 1.0)) {
            converged = true;
            break;
        }
    }
    if (!snapshots) append_polar(polar, net, state);

    const SpinReadout readout = extract_spins(net, state);
    const std::vector<double> predicted = predicted_site_intensities(net);
    json report;
    report["config"] = config_to_json(c);
    report["graph"] = graph_to_json(graph);
    report["converged"] = converged;
    report["time"] = state.time;
    report["reference_intensity"] = reference;
    report["homogeneity_deviation"] = homogeneity_deviation(net, state);
    json sites = json::array();
    for (std::size_t m = 0; m < net.n_spin_modes; ++m) {
        sites.push_back({{"index", m},
                         {"kind", mode_kind(net, m)},
                         {"degree", net.degree[m]},
                         {"pump", net.pump[m]},
                         {"predicted_intensity", predicted[m]},
                         {"measured_intensity", readout.intensity[m]},
                         {"phase", readout.config.phases[m]}});
    }
    report["sites"] = std::move(sites);

    json edges = json::array();
    const double i_ref = reference;
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const EdgeRecord& r = net.edges[e];
        const double dphi = readout.config.phases[r.spin_a] - readout.config.phases[r.spin_b];
        json row = {{"a", r.spin_a},
                    {"b", r.spin_b},
                    {"coupling", to_string(graph.edges()[e].coupling)},
                    {"readout_selector", to_string(r.readout)},
                    {"chi_s_intensity", std::norm(state[r.s_mode])},
                    {"chi_a_intensity", std::norm(state[r.a_mode])}};
        if (!c.params.ising()) {
            row["predicted_chi_s_intensity"] = predicted_chi_intensity(c.params, i_ref, dphi, Branch::S);
            row["predicted_chi_a_intensity"] = predicted_chi_intensity(c.params, i_ref, dphi, Branch::A);
        }
        edges.push_back(std::move(row));
    }
    report["edges"] = std::move(edges);

    const ReadoutEnergy energy = readout_energy(net, state, calibration_for(c.params));
    report["readout"] = {{"sum_chi2", energy.sum_chi2}, {"e_spin", energy.e_spin}, {"kappa", energy.kappa}};
    report["spin_energy"] = spin_energy(graph, readout.config);
    if (c.params.ising()) {
        report["binarization_error"] = binarization_error(graph, readout.config);
        report["binary"] = is_binary(graph, readout.config, 1e-3);
        report["spins"] = binarize(graph, readout.config);
    }

    write_text(dir / "polar.csv", polar.str());
    write_json(dir / "report.json", report);
    write_json(dir / "network.json", network_to_json(net));
    write_json(dir / "state.json", state_to_json(state));
    if (c.trajectory) write_text(dir / "trajectory.csv", traj.str());
}

void cmd_anneal(const RunConfig& c) {
    const SpinGraph graph = load_instance(c);
    const fs::path dir = prepare_out(c);

    std::ostringstream dumps;
    RunOptions options;
    options.strategy = c.strategy();
    options.fast_forward = c.fast_forward;
    if (c.dump_states) {
        options.on_readout = [&](std::size_t j, const CavityNetwork&, const CavityState& s) {
            json line = {{"pulse_index", j}, {"state", state_to_json(s)}};
            dumps << line.dump() << '\n';
        };
    }
    const PulsedRun run = run_pulsed(graph, c.params, c.schedule, c.p_r, c.seed, options);

    std::ostringstream csv;
    write_pulses_csv(csv, run.records);

    json summary;
    summary["config"] = config_to_json(c);
    summary["graph"] = graph_to_json(graph);
    summary["effective_schedule"] = schedule_to_json(run.schedule);
    summary["survival_pump"] = run.survival_pump;
    const std::size_t lock = lock_in_pulse(run.records);
    summary["locked_in"] = lock < run.records.size();
    summary["lock_in_pulse"] = lock;
    const PulseRecord& last = run.records.back();
    double best = last.e_spin;
    for (const PulseRecord& r : run.records) best = std::min(best, r.e_spin);
    summary["final_e_spin"] = last.e_spin;
    summary["best_e_spin"] = best;
    summary["final_phases"] = last.config.phases;
    if (c.params.ising()) summary["final_spins"] = binarize(graph, last.config);
    std::size_t unconverged = 0;
    for (const PulseRecord& r : run.records) unconverged += r.converged ? 0 : 1;
    summary["unconverged_readouts"] = unconverged;

    if (within_oracle(graph)) {
        const SpinGraph original = graph.original_subgraph();
        const IsingGround ground = ising_ground(original);
        json oracle = {{"ising_ground", ground.energy}};
        if (c.params.ising()) {
            oracle["final_is_ground"] = std::abs(last.e_spin - ground.energy) <= kSuccessTolerance;
            // Histogram of converged readout energies against the density of
            // states scaled to the same number of samples.
            const DensityOfStates dos = ising_density_of_states(original);
            std::map<long, std::size_t> counts;
            std::size_t samples = 0;
            for (const PulseRecord& r : run.records) {
                if (!r.converged) continue;
                ++counts[std::lround(r.e_spin)];
                ++samples;
            }
            json hist = json::array();
            for (std::size_t k = 0; k < dos.energies.size(); ++k) {
                const long e = std::lround(dos.energies[k]);
                const auto it = counts.find(e);
                const std::size_t seen = it == counts.end() ? 0 : it->second;
                if (it != counts.end()) counts.erase(it);
                hist.push_back({{"energy", dos.energies[k]},
                                {"count", seen},
                                {"dos_multiplicity", dos.multiplicity[k]},
                                {"expected_count", static_cast<double>(samples) *
                                                       static_cast<double>(dos.multiplicity[k]) /
                                                       static_cast<double>(dos.total())}});
            }
            std::size_t stray = 0;
            for (const auto& [e, n] : counts) stray += n;
            oracle["energy_histogram"] = std::move(hist);
            oracle["samples"] = samples;
            oracle["off_spectrum_samples"] = stray;
        } else if (original.n_sites() <= kXyOracleBound) {
            const XyGround xy = xy_ground_estimate(original, 0, derive_seed(c.seed, 0x0c1e));
            oracle["xy_ground_estimate"] = xy.energy;
            oracle["final_is_ground"] = std::abs(last.e_spin - xy.energy) <= kSuccessTolerance;
        }
        summary["oracle"] = std::move(oracle);
    }

    write_text(dir / "pulses.csv", csv.str());
    write_json(dir / "summary.json", summary);
    if (c.dump_states) write_text(dir / "readouts.jsonl", dumps.str());
}

void cmd_sweep(const RunConfig& c) {
    const std::size_t bound = c.params.ising() ? kEnumerationBound : kXyOracleBound;
    std::string problems;
    for (std::size_t n : c.sizes) {
        if (n > bound) {
            problems += "size " + std::to_string(n) + ": exceeds the oracle bound " + std::to_string(bound) + "\n";
        } else if (n < 2) {
            problems += "size " + std::to_string(n) + ": graphs need at least 2 sites\n";
        }
    }
    if (!problems.empty()) throw CapacityError(problems.substr(0, problems.size() - 1));
    if (!c.graph.file.empty()) throw InvalidParameter("sweep generates its own graphs; drop --graph");

    BatchSpec spec;
    spec.sizes = c.sizes;
    spec.graphs_per_size = c.graphs_per_size;
    spec.params = c.params;
    spec.schedule = c.schedule;
    spec.p_r = c.p_r;
    spec.seed = c.seed;
    spec.connectivity = c.graph.connectivity;
    spec.fm_fraction = c.graph.fm_fraction;
    spec.strategy = c.strategy();
    spec.dangling = c.dangling();
    spec.fast_forward = c.fast_forward;
    spec.threads = c.threads;
    const fs::path dir = prepare_out(c);
    const BatchResult result = batch_run(spec);

    std::ostringstream csv;
    csv << "size,pulse_index,mean_excess\n";
    json summary;
    json config = config_to_json(c);
    config.erase("graph");
    config["sizes"] = c.sizes;
    config["graphs_per_size"] = c.graphs_per_size;
    config["connectivity"] = c.graph.connectivity;
    config["fm_fraction"] = c.graph.fm_fraction;
    summary["config"] = std::move(config);
    json sizes = json::array(), timing = json::array();
    for (const SizeSummary& s : result.sizes) {
        for (std::size_t j = 0; j < s.mean_excess.size(); ++j) {
            csv << s.size << ',' << j << ',' << fmt_double(s.mean_excess[j]) << '\n';
        }
        json graphs = json::array(), walls = json::array();
        for (const GraphOutcome& g : s.graphs) {
            graphs.push_back({{"graph_index", g.graph_index},
                              {"ground_energy", g.ground_energy},
                              {"final_energy", g.final_energy},
                              {"success", g.success},
                              {"lock_in_pulse", g.lock_in}});
            walls.push_back(g.wall_seconds);
        }
        sizes.push_back({{"size", s.size},
                         {"success_rate", s.success_rate},
                         {"final_mean_excess", s.mean_excess.empty() ? 0.0 : s.mean_excess.back()},
                         {"graphs", std::move(graphs)}});
        timing.push_back({{"size", s.size}, {"wall_seconds", s.wall_seconds}, {"per_graph", std::move(walls)}});
    }
    summary["sizes"] = std::move(sizes);

    write_text(dir / "sweep.csv", csv.str());
    write_json(dir / "summary.json", summary);
    write_json(dir / "timing.json", json{{"sizes", std::move(timing)}});
}

void cmd_oracle(const RunConfig& c, bool to_file) {
    const SpinGraph graph = load_instance(c);
    const json report = oracle_report(graph, c.xy_restarts, c.seed);
    std::cout << report.dump(2) << '\n';
    if (to_file) write_json(prepare_out(c) / "oracle.json", report);
}

}  // namespace cavspin::cli
