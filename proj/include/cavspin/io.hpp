#pragma once

#include <string>

#include "json.hpp"

#include "cavspin/compiler.hpp"
#include "cavspin/dynamics.hpp"
#include "cavspin/graph.hpp"
#include "cavspin/oracle.hpp"
#include "cavspin/params.hpp"
#include "cavspin/protocol.hpp"

namespace cavspin {

using json = nlohmann::ordered_json;

// {"n_sites": n, "edges": [[a, b, "FM"|"AFM"], ...], "extra_flags": [...]}
json graph_to_json(const SpinGraph& graph);
SpinGraph graph_from_json(const json& j);  // throws InvalidInstance on malformed input

SpinGraph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const SpinGraph& graph);

json network_to_json(const CavityNetwork& network);
json state_to_json(const CavityState& state);
CavityState state_from_json(const json& j);

json params_to_json(const SimParams& params);
// Missing keys keep the values already in `params`.
void update_params(SimParams& params, const json& j);

json schedule_to_json(const Schedule& schedule);
void update_schedule(Schedule& schedule, const json& j);

json oracle_report(const SpinGraph& graph, std::size_t xy_restarts, std::uint64_t seed);

}  // namespace cavspin
