#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cavspin {

enum class Coupling { FM, AFM };

// +1 for ferromagnetic, -1 for antiferromagnetic.
constexpr int coupling_sign(Coupling c) { return c == Coupling::FM ? 1 : -1; }

const char* to_string(Coupling c);
Coupling parse_coupling(const std::string& s);

struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    Coupling coupling = Coupling::FM;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// A spin-glass instance: sites joined by signed (FM/AFM) edges. Sites
// flagged `extra` are degree-1 dangling sites appended by
// extend_with_dangling; they are not part of the original problem.
// Immutable once constructed; the constructor validates all invariants.
class SpinGraph {
public:
    SpinGraph() = default;
    SpinGraph(std::size_t n_sites, std::vector<Edge> edges, std::vector<bool> extra_flags = {});

    std::size_t n_sites() const { return n_sites_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t n_edges() const { return edges_.size(); }
    const std::vector<bool>& extra_flags() const { return extra_; }
    bool is_extra(std::size_t site) const { return extra_[site]; }
    bool has_extra_sites() const;

    std::size_t degree(std::size_t site) const { return degree_[site]; }
    const std::vector<std::size_t>& degrees() const { return degree_; }
    std::size_t max_degree() const;

    // Number of sites / edges belonging to the original problem.
    std::size_t n_original_sites() const;
    std::size_t n_original_edges() const;
    bool is_original_edge(const Edge& e) const { return !extra_[e.a] && !extra_[e.b]; }

    // Subgraph induced by the non-extra sites. Extra sites are always
    // appended after the original ones, so indices are preserved.
    SpinGraph original_subgraph() const;

    // Connected-component label per site (labels are 0..k-1 in order of
    // first appearance).
    std::vector<std::size_t> components() const;

    friend bool operator==(const SpinGraph&, const SpinGraph&) = default;

private:
    std::size_t n_sites_ = 0;
    std::vector<Edge> edges_;
    std::vector<bool> extra_;
    std::vector<std::size_t> degree_;
};

// Per-site phase angles in radians. Ising configurations carry phases in
// {0, pi} up to a global rotation.
struct SpinConfig {
    std::vector<double> phases;

    std::size_t size() const { return phases.size(); }
};

// One Bernoulli(connectivity) draw per unordered pair (row-major over i<j),
// followed by one Bernoulli(fm_fraction) draw per accepted edge, in edge
// order, all from Rng(seed).
SpinGraph generate_random_graph(std::size_t n_sites, double connectivity, double fm_fraction,
                                std::uint64_t seed);

// Raises every original site to the input's maximum degree by attaching
// degree-1 extra sites through FM edges. Extra sites are appended after the
// original ones, in order of the site they hang from.
SpinGraph extend_with_dangling(const SpinGraph& graph);

// Gain that cancels the coupling loss of a site with `degree` neighbours in
// the linear (XY) regime: base_p + 8 degree j^2 / gamma.
double compensated_pump_xy(double base_p, std::size_t degree, double j, double gamma);

// Same compensation with the connecting-mode decay enhanced by the
// nonlinear loss at amplitude chi_abs:
// base_p + 8 degree j^2 / (gamma + 2 gamma_nl_prime chi_abs^2).
double compensated_pump_ising(double base_p, std::size_t degree, double j, double gamma,
                              double gamma_nl_prime, double chi_abs);

// -sum over edges of (+-) cos(theta_a - theta_b), + for FM, - for AFM.
// With include_extra = false, edges touching extra sites are skipped.
double spin_energy(const SpinGraph& graph, const SpinConfig& config, bool include_extra = false);

// Integer-valued energy of an Ising assignment (spins[i] in {+1,-1}) over
// the original edges.
int ising_energy(const SpinGraph& graph, const std::vector<int>& spins);

}  // namespace cavspin
