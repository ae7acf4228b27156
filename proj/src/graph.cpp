#include "cavspin/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "cavspin/errors.hpp"
#include "cavspin/rng.hpp"

namespace cavspin {

const char* to_string(Coupling c) { return c == Coupling::FM ? "FM" : "AFM"; }

Coupling parse_coupling(const std::string& s) {
    if (s == "FM") return Coupling::FM;
    if (s == "AFM") return Coupling::AFM;
    throw InvalidInstance("unknown coupling '" + s + "' (expected FM or AFM)");
}

SpinGraph::SpinGraph(std::size_t n_sites, std::vector<Edge> edges, std::vector<bool> extra_flags)
    : n_sites_(n_sites), edges_(std::move(edges)), extra_(std::move(extra_flags)) {
    if (extra_.empty()) extra_.assign(n_sites_, false);
    if (extra_.size() != n_sites_) {
        throw InvalidInstance("extra_flags has " + std::to_string(extra_.size()) +
                              " entries for " + std::to_string(n_sites_) + " sites");
    }
    degree_.assign(n_sites_, 0);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const Edge& e : edges_) {
        if (e.a >= n_sites_ || e.b >= n_sites_) {
            throw InvalidInstance("edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                                  ") out of range");
        }
        if (e.a == e.b) throw InvalidInstance("self-loop on site " + std::to_string(e.a));
        if (!seen.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second) {
            throw InvalidInstance("duplicate edge (" + std::to_string(e.a) + ", " +
                                  std::to_string(e.b) + ")");
        }
        ++degree_[e.a];
        ++degree_[e.b];
    }
    bool seen_extra = false;
    for (std::size_t i = 0; i < n_sites_; ++i) {
        if (extra_[i]) {
            seen_extra = true;
            if (degree_[i] != 1) {
                throw InvalidInstance("extra site " + std::to_string(i) + " has degree " +
                                      std::to_string(degree_[i]));
            }
        } else if (seen_extra) {
            throw InvalidInstance("extra sites must follow all original sites");
        }
    }
    for (const Edge& e : edges_) {
        if (extra_[e.a] && extra_[e.b]) throw InvalidInstance("edge joins two extra sites");
    }
}

bool SpinGraph::has_extra_sites() const {
    return std::find(extra_.begin(), extra_.end(), true) != extra_.end();
}

std::size_t SpinGraph::max_degree() const {
    return degree_.empty() ? 0 : *std::max_element(degree_.begin(), degree_.end());
}

std::size_t SpinGraph::n_original_sites() const {
    return static_cast<std::size_t>(std::count(extra_.begin(), extra_.end(), false));
}

std::size_t SpinGraph::n_original_edges() const {
    return static_cast<std::size_t>(std::count_if(
        edges_.begin(), edges_.end(), [this](const Edge& e) { return is_original_edge(e); }));
}

SpinGraph SpinGraph::original_subgraph() const {
    std::vector<Edge> kept;
    for (const Edge& e : edges_) {
        if (is_original_edge(e)) kept.push_back(e);
    }
    return SpinGraph(n_original_sites(), std::move(kept));
}

std::vector<std::size_t> SpinGraph::components() const {
    std::vector<std::size_t> parent(n_sites_);
    for (std::size_t i = 0; i < n_sites_; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Edge& e : edges_) parent[find(e.a)] = find(e.b);

    std::vector<std::size_t> label(n_sites_);
    std::vector<std::size_t> root_label(n_sites_, n_sites_);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n_sites_; ++i) {
        const std::size_t r = find(i);
        if (root_label[r] == n_sites_) root_label[r] = next++;
        label[i] = root_label[r];
    }
    return label;
}

SpinGraph generate_random_graph(std::size_t n_sites, double connectivity, double fm_fraction,
                                std::uint64_t seed) {
    if (n_sites < 2) throw InvalidInstance("random graph needs at least 2 sites");
    if (!(connectivity >= 0.0 && connectivity <= 1.0) ||
        !(fm_fraction >= 0.0 && fm_fraction <= 1.0)) {
        throw InvalidInstance("connectivity and fm_fraction must lie in [0, 1]");
    }
    Rng rng(seed);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n_sites; ++i) {
        for (std::size_t k = i + 1; k < n_sites; ++k) {
            if (rng.bernoulli(connectivity)) edges.push_back({i, k, Coupling::FM});
        }
    }
    for (Edge& e : edges) e.coupling = rng.bernoulli(fm_fraction) ? Coupling::FM : Coupling::AFM;
    return SpinGraph(n_sites, std::move(edges));
}

SpinGraph extend_with_dangling(const SpinGraph& graph) {
    if (graph.has_extra_sites()) {
        throw InvalidInstance("graph already carries extra sites");
    }
    const std::size_t target = graph.max_degree();
    std::vector<Edge> edges = graph.edges();
    std::size_t next = graph.n_sites();
    for (std::size_t i = 0; i < graph.n_sites(); ++i) {
        for (std::size_t d = graph.degree(i); d < target; ++d) {
            edges.push_back({i, next++, Coupling::FM});
        }
    }
    std::vector<bool> extra(next, false);
    std::fill(extra.begin() + static_cast<std::ptrdiff_t>(graph.n_sites()), extra.end(), true);
    return SpinGraph(next, std::move(edges), std::move(extra));
}

double compensated_pump_xy(double base_p, std::size_t degree, double j, double gamma) {
    if (!(gamma > 0.0)) throw InvalidParameter("gamma must be positive");
    return base_p + 8.0 * static_cast<double>(degree) * j * j / gamma;
}

double compensated_pump_ising(double base_p, std::size_t degree, double j, double gamma,
                              double gamma_nl_prime, double chi_abs) {
    const double effective_decay = gamma + 2.0 * gamma_nl_prime * chi_abs * chi_abs;
    if (!(effective_decay > 0.0)) throw InvalidParameter("effective decay must be positive");
    return base_p + 8.0 * static_cast<double>(degree) * j * j / effective_decay;
}

double spin_energy(const SpinGraph& graph, const SpinConfig& config, bool include_extra) {
    if (config.size() != graph.n_sites()) {
        throw InvalidInstance("config has " + std::to_string(config.size()) +
                              " phases for " + std::to_string(graph.n_sites()) + " sites");
    }
    double energy = 0.0;
    for (const Edge& e : graph.edges()) {
        if (!include_extra && !graph.is_original_edge(e)) continue;
        energy -= coupling_sign(e.coupling) * std::cos(config.phases[e.a] - config.phases[e.b]);
    }
    return energy;
}

int ising_energy(const SpinGraph& graph, const std::vector<int>& spins) {
    if (spins.size() != graph.n_sites() && spins.size() != graph.n_original_sites()) {
        throw InvalidInstance("spin assignment size mismatch");
    }
    int energy = 0;
    for (const Edge& e : graph.edges()) {
        if (!graph.is_original_edge(e)) continue;
        energy -= coupling_sign(e.coupling) * spins[e.a] * spins[e.b];
    }
    return energy;
}

}  // namespace cavspin
