#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cavspin/graph.hpp"

namespace cavspin {

// Largest number of original sites the exhaustive enumerators accept.
inline constexpr std::size_t kEnumerationBound = 24;

struct IsingGround {
    double energy = 0.0;
    // Every minimiser over the original sites, spin 0 fixed to +1, in
    // increasing order of the enumeration index.
    std::vector<std::vector<int>> configs;
};

// Exhaustive scan over the 2^(n-1) assignments of the original subgraph
// (Gray-code order, incremental energy updates).
IsingGround ising_ground(const SpinGraph& graph);

struct DensityOfStates {
    std::vector<double> energies;            // sorted, distinct
    std::vector<std::uint64_t> multiplicity;  // configs per energy, up to global flip

    std::uint64_t total() const;
};

// Histogram of the Ising energy over all assignments up to global flip,
// each evaluated from scratch.
DensityOfStates ising_density_of_states(const SpinGraph& graph);

struct XyGround {
    double energy = 0.0;
    SpinConfig config;       // over the original sites
    double gradient_norm = 0.0;
};

// Multi-start gradient descent (step 0.1, backtracking halving) on the XY
// energy of the original subgraph. restarts == 0 selects 100 n.
XyGround xy_ground_estimate(const SpinGraph& graph, std::size_t restarts, std::uint64_t seed);

// Gradient of the XY energy: dH/dtheta_i = sum_j (+-) sin(theta_i - theta_j).
std::vector<double> xy_gradient(const SpinGraph& graph, const std::vector<double>& phases);

struct HeterogeneityResult {
    double analogue_energy = 0.0;
    std::vector<std::complex<double>> amplitudes;  // sum |psi|^2 = n
    double ising_energy = 0.0;
    bool counterexample = false;  // analogue_energy strictly below ising_energy
};

// -Re sum_edges (+-) conj(psi_a) psi_b over the original subgraph.
double analogue_energy(const SpinGraph& graph, const std::vector<std::complex<double>>& psi);

// Minimises the analogue energy under sum |psi|^2 = n by projected gradient
// descent started from an Ising ground state. When no lower energy exists
// the Ising optimum with unit amplitudes is returned, flagged.
HeterogeneityResult heterogeneity_counterexample(const SpinGraph& graph);

}  // namespace cavspin
