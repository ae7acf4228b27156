#include "cavspin/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "cavspin/errors.hpp"
#include "cavspin/rng.hpp"

namespace cavspin {

namespace {

SpinGraph checked_original(const SpinGraph& graph) {
    SpinGraph g = graph.has_extra_sites() ? graph.original_subgraph() : graph;
    if (g.n_sites() > kEnumerationBound) {
        throw CapacityError("enumeration limited to " + std::to_string(kEnumerationBound) +
                            " sites, graph has " + std::to_string(g.n_sites()));
    }
    return g;
}

// Signed neighbour lists: (neighbour, +1 FM / -1 AFM).
std::vector<std::vector<std::pair<std::size_t, int>>> neighbours(const SpinGraph& g) {
    std::vector<std::vector<std::pair<std::size_t, int>>> nb(g.n_sites());
    for (const Edge& e : g.edges()) {
        nb[e.a].push_back({e.b, coupling_sign(e.coupling)});
        nb[e.b].push_back({e.a, coupling_sign(e.coupling)});
    }
    return nb;
}

double xy_energy(const SpinGraph& g, const std::vector<double>& th) {
    double h = 0.0;
    for (const Edge& e : g.edges()) h -= coupling_sign(e.coupling) * std::cos(th[e.a] - th[e.b]);
    return h;
}

}  // namespace

IsingGround ising_ground(const SpinGraph& graph) {
    const SpinGraph g = checked_original(graph);
    const std::size_t n = g.n_sites();
    IsingGround out;
    if (n == 0) {
        out.configs.push_back({});
        return out;
    }
    const auto nb = neighbours(g);
    std::vector<int> spins(n, 1);
    int energy = ising_energy(g, spins);
    int best = energy;
    out.configs.push_back(spins);

    // Gray code over sites 1..n-1; step k flips site 1 + ctz(k).
    const std::uint64_t count = std::uint64_t{1} << (n - 1);
    for (std::uint64_t k = 1; k < count; ++k) {
        const std::size_t site = 1 + static_cast<std::size_t>(std::countr_zero(k));
        int field = 0;
        for (const auto& [other, sign] : nb[site]) field += sign * spins[other];
        // E contains -s_site * field; flipping changes it by 2 s_site field.
        energy += 2 * spins[site] * field;
        spins[site] = -spins[site];
        if (energy < best) {
            best = energy;
            out.configs.clear();
        }
        if (energy == best) out.configs.push_back(spins);
    }
    out.energy = best;
    // Report minimisers in binary-index order (site i <-> bit i-1, 1 = down).
    auto index = [](const std::vector<int>& s) {
        std::uint64_t idx = 0;
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (s[i] < 0) idx |= std::uint64_t{1} << (i - 1);
        }
        return idx;
    };
    std::sort(out.configs.begin(), out.configs.end(),
              [&](const auto& x, const auto& y) { return index(x) < index(y); });
    return out;
}

std::uint64_t DensityOfStates::total() const {
    std::uint64_t t = 0;
    for (std::uint64_t m : multiplicity) t += m;
    return t;
}

DensityOfStates ising_density_of_states(const SpinGraph& graph) {
    const SpinGraph g = checked_original(graph);
    const std::size_t n = g.n_sites();
    std::map<int, std::uint64_t> hist;
    const std::uint64_t count = n == 0 ? 1 : std::uint64_t{1} << (n - 1);
    std::vector<int> spins(n, 1);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        for (std::size_t i = 1; i < n; ++i) spins[i] = (idx >> (i - 1)) & 1U ? -1 : 1;
        ++hist[ising_energy(g, spins)];
    }
    DensityOfStates dos;
    for (const auto& [e, m] : hist) {
        dos.energies.push_back(static_cast<double>(e));
        dos.multiplicity.push_back(m);
    }
    return dos;
}

std::vector<double> xy_gradient(const SpinGraph& graph, const std::vector<double>& phases) {
    std::vector<double> grad(graph.n_sites(), 0.0);
    for (const Edge& e : graph.edges()) {
        const double t = coupling_sign(e.coupling) * std::sin(phases[e.a] - phases[e.b]);
        grad[e.a] += t;
        grad[e.b] -= t;
    }
    return grad;
}

XyGround xy_ground_estimate(const SpinGraph& graph, std::size_t restarts, std::uint64_t seed) {
    const SpinGraph g = graph.has_extra_sites() ? graph.original_subgraph() : graph;
    const std::size_t n = g.n_sites();
    if (restarts == 0) restarts = std::max<std::size_t>(1, 100 * n);

    constexpr double kStep = 0.1;
    constexpr double kGradTol = 1e-10;
    constexpr int kMaxIter = 200000;

    auto norm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };

    Rng rng(seed);
    XyGround best;
    best.energy = std::numeric_limits<double>::infinity();
    std::vector<double> th(n), trial(n);
    for (std::size_t r = 0; r < restarts; ++r) {
        for (double& t : th) t = 2.0 * std::numbers::pi * rng.uniform();
        double h = xy_energy(g, th);
        std::vector<double> grad = xy_gradient(g, th);
        double gn = norm(grad);
        for (int it = 0; it < kMaxIter && gn > kGradTol; ++it) {
            double step = kStep;
            double h_new = h;
            for (int halvings = 0; halvings < 60; ++halvings) {
                for (std::size_t i = 0; i < n; ++i) trial[i] = th[i] - step * grad[i];
                h_new = xy_energy(g, trial);
                if (h_new <= h - 0.5 * step * gn * gn) break;
                step *= 0.5;
            }
            // no strict decrease left: the energy is at round-off resolution
            if (!(h_new < h)) break;
            th.swap(trial);
            h = h_new;
            grad = xy_gradient(g, th);
            gn = norm(grad);
        }
        if (h < best.energy) {
            best.energy = h;
            best.config.phases = th;
            best.gradient_norm = gn;
        }
    }
    // Express phases relative to site 0, wrapped to [0, 2 pi).
    if (n > 0) {
        const double ref = best.config.phases[0];
        for (double& t : best.config.phases) {
            t = std::fmod(t - ref, 2.0 * std::numbers::pi);
            if (t < 0.0) t += 2.0 * std::numbers::pi;
        }
    }
    return best;
}

double analogue_energy(const SpinGraph& graph, const std::vector<std::complex<double>>& psi) {
    const SpinGraph& g = graph;
    double h = 0.0;
    for (const Edge& e : g.edges()) {
        if (!g.is_original_edge(e)) continue;
        h -= coupling_sign(e.coupling) * std::real(std::conj(psi[e.a]) * psi[e.b]);
    }
    return h;
}

HeterogeneityResult heterogeneity_counterexample(const SpinGraph& graph) {
    const SpinGraph g = checked_original(graph);
    const std::size_t n = g.n_sites();
    const IsingGround ground = ising_ground(g);

    HeterogeneityResult out;
    out.ising_energy = ground.energy;
    const std::vector<int>& s0 = ground.configs.front();

    // Start from the Ising ground state with a small deterministic
    // perturbation, then iterate psi <- normalise(psi + eta A psi), which
    // ascends psi^H A psi on the sphere |psi|^2 = n.
    using cplx = std::complex<double>;
    Rng rng(0x5eed);
    std::vector<cplx> psi(n);
    for (std::size_t i = 0; i < n; ++i) psi[i] = double(s0[i]) * (1.0 + 1e-3 * rng.normal());
    const auto nb = neighbours(g);
    const double eta = 0.5 / std::max<double>(1.0, static_cast<double>(g.max_degree()));
    const double target = std::sqrt(static_cast<double>(n));

    auto normalise = [&](std::vector<cplx>& v) {
        double s = 0.0;
        for (const cplx& z : v) s += std::norm(z);
        const double f = s > 0.0 ? target / std::sqrt(s) : 0.0;
        for (cplx& z : v) z *= f;
    };
    normalise(psi);

    std::vector<cplx> next(n);
    double h = analogue_energy(g, psi);
    int stalled = 0;
    for (int it = 0; it < 2000000 && stalled < 50; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx a{0.0, 0.0};
            for (const auto& [k, sign] : nb[i]) a += double(sign) * psi[k];
            next[i] = psi[i] + eta * a;
        }
        normalise(next);
        const double h_new = analogue_energy(g, next);
        psi.swap(next);
        stalled = (h - h_new) <= 1e-16 * std::max(1.0, std::abs(h)) ? stalled + 1 : 0;
        h = h_new;
    }

    if (h < ground.energy - 1e-9) {
        out.analogue_energy = h;
        out.amplitudes = std::move(psi);
        out.counterexample = true;
    } else {
        out.analogue_energy = ground.energy;
        out.amplitudes.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.amplitudes[i] = double(s0[i]);
        out.counterexample = false;
    }
    return out;
}

}  // namespace cavspin
