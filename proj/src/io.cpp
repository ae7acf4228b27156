#include "cavspin/io.hpp"

#include <fstream>
#include <sstream>

#include "cavspin/errors.hpp"

namespace cavspin {

json graph_to_json(const SpinGraph& graph) {
    json j;
    j["n_sites"] = graph.n_sites();
    json edges = json::array();
    for (const Edge& e : graph.edges()) edges.push_back(json::array({e.a, e.b, to_string(e.coupling)}));
    j["edges"] = std::move(edges);
    if (graph.has_extra_sites()) {
        json flags = json::array();
        for (bool f : graph.extra_flags()) flags.push_back(f);
        j["extra_flags"] = std::move(flags);
    }
    return j;
}

SpinGraph graph_from_json(const json& j) {
    try {
        if (!j.is_object()) throw InvalidInstance("graph must be a JSON object");
        const auto n = j.at("n_sites").get<std::size_t>();
        std::vector<Edge> edges;
        for (const json& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) {
                throw InvalidInstance("each edge must be [a, b, \"FM\"|\"AFM\"]");
            }
            edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(),
                             parse_coupling(e[2].get<std::string>())});
        }
        std::vector<bool> extra;
        if (j.contains("extra_flags")) extra = j.at("extra_flags").get<std::vector<bool>>();
        return SpinGraph(n, std::move(edges), std::move(extra));
    } catch (const json::exception& e) {
        throw InvalidInstance(std::string("malformed graph JSON: ") + e.what());
    }
}

SpinGraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInstance("cannot open graph file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidInstance("cannot parse graph file '" + path + "': " + e.what());
    }
    return graph_from_json(j);
}

void write_graph_file(const std::string& path, const SpinGraph& graph) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << graph_to_json(graph).dump(2) << '\n';
}

json network_to_json(const CavityNetwork& network) {
    json j;
    j["n_spin_modes"] = network.n_spin_modes;
    j["n_modes"] = network.n_modes();
    json edges = json::array();
    for (const EdgeRecord& e : network.edges) {
        edges.push_back({{"spin_a", e.spin_a},
                         {"spin_b", e.spin_b},
                         {"s_mode", e.s_mode},
                         {"a_mode", e.a_mode},
                         {"readout_selector", to_string(e.readout)},
                         {"original", e.original},
                         {"coupling_sign", e.sign}});
    }
    j["edge_records"] = std::move(edges);
    j["pump"] = network.pump;
    j["degree"] = network.degree;
    json flags = json::array();
    for (bool f : network.extra) flags.push_back(f);
    j["extra_flags"] = std::move(flags);
    j["pump_strategy"] = to_string(network.strategy);
    j["params"] = params_to_json(network.params);
    return j;
}

json state_to_json(const CavityState& state) {
    json amps = json::array();
    for (const cplx& z : state.amplitudes) amps.push_back(json::array({z.real(), z.imag()}));
    return {{"time", state.time}, {"amplitudes", std::move(amps)}};
}

CavityState state_from_json(const json& j) {
    CavityState s;
    s.time = j.at("time").get<double>();
    for (const json& z : j.at("amplitudes")) s.amplitudes.emplace_back(z[0].get<double>(), z[1].get<double>());
    return s;
}

json params_to_json(const SimParams& p) {
    return {{"p", p.p},
            {"gamma", p.gamma},
            {"gamma_nl", p.gamma_nl},
            {"gamma_nl_prime", p.gamma_nl_prime},
            {"j", p.j},
            {"dt", p.dt},
            {"noise_amp", p.noise_amp},
            {"duration", p.duration}};
}

void update_params(SimParams& p, const json& j) {
    auto take = [&](const char* key, double& field) {
        if (j.contains(key)) field = j.at(key).get<double>();
    };
    take("p", p.p);
    take("gamma", p.gamma);
    take("gamma_nl", p.gamma_nl);
    take("gamma_nl_prime", p.gamma_nl_prime);
    take("j", p.j);
    take("dt", p.dt);
    take("noise_amp", p.noise_amp);
    take("duration", p.duration);
}

json schedule_to_json(const Schedule& s) {
    return {{"mu0", s.mu0},
            {"mu_slope", s.mu_slope},
            {"n_pulses", s.n_pulses},
            {"pulse_duration", s.pulse_duration},
            {"reset_noise_amp", s.reset_noise_amp},
            {"auto_mu", s.auto_mu}};
}

void update_schedule(Schedule& s, const json& j) {
    if (j.contains("mu0")) s.mu0 = j.at("mu0").get<double>();
    if (j.contains("mu_slope")) s.mu_slope = j.at("mu_slope").get<double>();
    if (j.contains("n_pulses")) s.n_pulses = j.at("n_pulses").get<std::size_t>();
    if (j.contains("pulse_duration")) s.pulse_duration = j.at("pulse_duration").get<double>();
    if (j.contains("reset_noise_amp")) s.reset_noise_amp = j.at("reset_noise_amp").get<double>();
    if (j.contains("auto_mu")) s.auto_mu = j.at("auto_mu").get<bool>();
}

json oracle_report(const SpinGraph& graph, std::size_t xy_restarts, std::uint64_t seed) {
    const SpinGraph g = graph.has_extra_sites() ? graph.original_subgraph() : graph;
    json j;
    j["n_sites"] = g.n_sites();
    j["n_edges"] = g.n_edges();

    const IsingGround ground = ising_ground(g);
    j["ising_ground"] = {{"energy", ground.energy}, {"configs", ground.configs}};

    const DensityOfStates dos = ising_density_of_states(g);
    json table = json::array();
    for (std::size_t k = 0; k < dos.energies.size(); ++k) {
        table.push_back({{"energy", dos.energies[k]}, {"multiplicity", dos.multiplicity[k]}});
    }
    j["density_of_states"] = std::move(table);

    const XyGround xy = xy_ground_estimate(g, xy_restarts, seed);
    j["xy_ground"] = {{"energy", xy.energy},
                      {"phases", xy.config.phases},
                      {"gradient_norm", xy.gradient_norm}};

    const HeterogeneityResult het = heterogeneity_counterexample(g);
    json amps = json::array();
    for (const auto& z : het.amplitudes) amps.push_back(json::array({z.real(), z.imag()}));
    j["heterogeneity"] = {{"counterexample", het.counterexample},
                          {"analogue_energy", het.analogue_energy},
                          {"ising_energy", het.ising_energy},
                          {"amplitudes", std::move(amps)}};
    return j;
}

}  // namespace cavspin
