#include "run_config.hpp"

#include <filesystem>
#include <fstream>

#include "cavspin/errors.hpp"

namespace cavspin::cli {

namespace {

Mode parse_mode(const std::string& s) {
    if (s == "xy") return Mode::XY;
    if (s == "ising") return Mode::Ising;
    throw InvalidParameter("mode must be \"xy\" or \"ising\", got \"" + s + "\"");
}

Homogenization parse_homogenization(const std::string& s) {
    if (s == "none") return Homogenization::None;
    if (s == "dangling") return Homogenization::Dangling;
    if (s == "pump") return Homogenization::Pump;
    if (s == "both") return Homogenization::Both;
    throw InvalidParameter("homogenization must be none|dangling|pump|both, got \"" + s + "\"");
}

void read_graph_source(GraphSource& g, const json& j, const std::filesystem::path& base) {
    if (j.is_string()) {
        g.file = j.get<std::string>();
    } else if (j.contains("file")) {
        g.file = j.at("file").get<std::string>();
    } else if (j.contains("generate")) {
        const json& gen = j.at("generate");
        g.file.clear();
        if (gen.contains("n_sites")) g.n_sites = gen.at("n_sites").get<std::size_t>();
        if (gen.contains("connectivity")) g.connectivity = gen.at("connectivity").get<double>();
        if (gen.contains("fm_fraction")) g.fm_fraction = gen.at("fm_fraction").get<double>();
        if (gen.contains("seed")) g.seed = gen.at("seed").get<std::uint64_t>();
        return;
    } else {
        throw InvalidParameter("graph must be a file path, {\"file\": ...} or {\"generate\": {...}}");
    }
    // relative paths in a config file are relative to that file
    if (!g.file.empty() && std::filesystem::path(g.file).is_relative() && !base.empty()) {
        g.file = (base / g.file).string();
    }
}

}  // namespace

const char* to_string(Mode m) { return m == Mode::XY ? "xy" : "ising"; }

const char* to_string(Homogenization h) {
    switch (h) {
        case Homogenization::None: return "none";
        case Homogenization::Dangling: return "dangling";
        case Homogenization::Pump: return "pump";
        case Homogenization::Both: return "both";
    }
    return "?";
}

PumpStrategy RunConfig::strategy() const {
    return homogenization == Homogenization::Pump || homogenization == Homogenization::Both
               ? PumpStrategy::Compensated
               : PumpStrategy::Uniform;
}

bool RunConfig::dangling() const {
    return homogenization == Homogenization::Dangling || homogenization == Homogenization::Both;
}

RunConfig load_config(const std::string& path, const Overrides& ov) {
    RunConfig c;
    std::optional<Mode> mode;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw InvalidParameter("cannot open config file '" + path + "'");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw InvalidParameter("cannot parse config file '" + path + "': " + e.what());
        }
        if (!j.is_object()) throw InvalidParameter("config must be a JSON object");
        try {
            const std::filesystem::path base = std::filesystem::path(path).parent_path();
            if (j.contains("mode")) mode = parse_mode(j.at("mode").get<std::string>());
            if (j.contains("graph")) read_graph_source(c.graph, j.at("graph"), base);
            if (j.contains("params")) update_params(c.params, j.at("params"));
            if (j.contains("schedule")) update_schedule(c.schedule, j.at("schedule"));
            if (j.contains("homogenization"))
                c.homogenization = parse_homogenization(j.at("homogenization").get<std::string>());
            if (j.contains("p_r")) c.p_r = j.at("p_r").get<double>();
            if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
            if (j.contains("out")) c.out = j.at("out").get<std::string>();
            if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
            if (j.contains("fast_forward")) c.fast_forward = j.at("fast_forward").get<bool>();
            if (j.contains("tol")) c.tol = j.at("tol").get<double>();
            if (j.contains("snapshot_every")) c.snapshot_every = j.at("snapshot_every").get<double>();
            if (j.contains("trajectory")) c.trajectory = j.at("trajectory").get<bool>();
            if (j.contains("dump_states")) c.dump_states = j.at("dump_states").get<bool>();
            if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<std::size_t>>();
            if (j.contains("graphs_per_size")) c.graphs_per_size = j.at("graphs_per_size").get<std::size_t>();
            if (j.contains("xy_restarts")) c.xy_restarts = j.at("xy_restarts").get<std::size_t>();
        } catch (const json::exception& e) {
            throw InvalidParameter("bad value in config file '" + path + "': " + e.what());
        }
    }

    if (ov.graph) c.graph.file = *ov.graph;
    if (ov.seed) c.seed = *ov.seed;
    if (ov.pulses) c.schedule.n_pulses = *ov.pulses;
    if (ov.out) c.out = *ov.out;
    if (ov.threads) c.threads = *ov.threads;

    if (!mode) mode = c.params.gamma_nl_prime > 0.0 ? Mode::Ising : Mode::XY;
    c.mode = *mode;
    if (c.mode == Mode::XY) {
        c.params.gamma_nl_prime = 0.0;
    } else if (!(c.params.gamma_nl_prime > 0.0)) {
        throw InvalidParameter("mode \"ising\" needs params.gamma_nl_prime > 0");
    }
    if (!c.graph.file.empty() && !std::filesystem::exists(c.graph.file)) {
        throw InvalidInstance("graph file '" + c.graph.file + "' does not exist");
    }
    if (!(c.tol > 0.0)) throw InvalidParameter("tol must be positive");
    if (!(c.snapshot_every >= 0.0)) throw InvalidParameter("snapshot_every must be non-negative");
    c.params.validate();
    c.schedule.validate();
    return c;
}

json config_to_json(const RunConfig& c) {
    json j;
    j["mode"] = to_string(c.mode);
    if (c.graph.file.empty()) {
        j["graph"] = {{"generate",
                       {{"n_sites", c.graph.n_sites},
                        {"connectivity", c.graph.connectivity},
                        {"fm_fraction", c.graph.fm_fraction},
                        {"seed", c.graph.seed}}}};
    } else {
        j["graph"] = {{"file", std::filesystem::path(c.graph.file).filename().string()}};
    }
    j["params"] = params_to_json(c.params);
    j["schedule"] = schedule_to_json(c.schedule);
    j["homogenization"] = to_string(c.homogenization);
    j["p_r"] = c.p_r;
    j["seed"] = c.seed;
    j["fast_forward"] = c.fast_forward;
    return j;
}

SpinGraph load_instance(const RunConfig& c) {
    SpinGraph g = c.graph.file.empty()
                      ? generate_random_graph(c.graph.n_sites, c.graph.connectivity,
                                              c.graph.fm_fraction, c.graph.seed)
                      : read_graph_file(c.graph.file);
    if (c.dangling() && !g.has_extra_sites()) g = extend_with_dangling(g);
    return g;
}

}  // namespace cavspin::cli
