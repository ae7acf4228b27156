#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cavspin/compiler.hpp"
#include "cavspin/graph.hpp"
#include "cavspin/io.hpp"
#include "cavspin/params.hpp"
#include "cavspin/protocol.hpp"

namespace cavspin::cli {

enum class Mode { XY, Ising };
enum class Homogenization { None, Dangling, Pump, Both };

struct GraphSource {
    std::string file;
    // generator spec, used when file is empty
    std::size_t n_sites = 7;
    double connectivity = 0.5;
    double fm_fraction = 0.5;
    std::uint64_t seed = 1;
};

struct RunConfig {
    Mode mode = Mode::XY;
    GraphSource graph;
    SimParams params;
    Schedule schedule;
    Homogenization homogenization = Homogenization::Pump;
    double p_r = 12.0;
    std::uint64_t seed = 1;
    std::string out = "out";
    unsigned threads = 0;
    bool fast_forward = false;

    // simulate
    double tol = 1e-9;
    double snapshot_every = 0.0;  // 0: final state only
    bool trajectory = false;

    // anneal
    bool dump_states = false;

    // sweep
    std::vector<std::size_t> sizes{2, 3, 4, 5, 6};
    std::size_t graphs_per_size = 30;

    // oracle
    std::size_t xy_restarts = 0;

    PumpStrategy strategy() const;
    bool dangling() const;
};

// Flags given on the command line; each one overrides the config file.
struct Overrides {
    std::optional<std::string> graph;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> pulses;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
};

// Reads the JSON config (empty path: defaults), applies overrides and
// checks the mode invariants. Throws InvalidParameter / InvalidInstance.
RunConfig load_config(const std::string& path, const Overrides& overrides);

json config_to_json(const RunConfig& config);

// The instance the config points at, extended when homogenization asks for it.
SpinGraph load_instance(const RunConfig& config);

const char* to_string(Mode m);
const char* to_string(Homogenization h);

}  // namespace cavspin::cli
