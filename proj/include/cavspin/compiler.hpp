#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "cavspin/graph.hpp"
#include "cavspin/params.hpp"

namespace cavspin {

enum class Branch { S, A };
enum class PumpStrategy { Uniform, Compensated };

const char* to_string(Branch b);
const char* to_string(PumpStrategy s);
PumpStrategy parse_pump_strategy(const std::string& s);

// One spin-spin edge realised as a symmetric/antisymmetric pair of
// connecting modes.
struct EdgeRecord {
    std::size_t spin_a = 0;
    std::size_t spin_b = 0;
    std::size_t s_mode = 0;
    std::size_t a_mode = 0;
    Branch readout = Branch::S;  // S for FM edges, A for AFM edges
    bool original = true;        // false when the edge touches an extra site
    // Josephson signs in the order (a-S, b-S, a-A, b-A).
    std::array<int, 4> sign{1, 1, 1, -1};
};

// Compiled coupled-cavity layout. Modes are indexed spin modes first (graph
// order), then S and A of each edge in edge order.
struct CavityNetwork {
    std::size_t n_spin_modes = 0;
    std::vector<EdgeRecord> edges;
    std::vector<double> pump;         // per spin mode
    std::vector<std::size_t> degree;  // per spin mode
    std::vector<bool> extra;          // per spin mode
    SimParams params;                 // parameters the network was compiled with
    PumpStrategy strategy = PumpStrategy::Uniform;

    std::size_t n_modes() const { return n_spin_modes + 2 * edges.size(); }
    std::size_t n_original_edges() const;

    // Same layout, spin pumps replaced (pump[m] = base + offset[m]).
    CavityNetwork with_pumps(std::vector<double> new_pump) const;

    // Pump offsets above params.p introduced by compensation.
    std::vector<double> pump_offsets() const;
};

// Builds the network for `graph`. Under Compensated, the pump of every spin
// site is raised by its coupling loss (XY form for gamma_nl_prime == 0,
// Ising form with the cubic connecting amplitude otherwise).
CavityNetwork compile(const SpinGraph& graph, const SimParams& params, PumpStrategy strategy);

struct SignViolation {
    std::size_t edge_index;
    std::array<int, 4> found;
};

// Edges whose sign pattern differs from (+1, +1, +1, -1). Empty on pass.
std::vector<SignViolation> edge_sign_audit(const CavityNetwork& network);

}  // namespace cavspin
