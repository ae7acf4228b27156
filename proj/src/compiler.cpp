#include "cavspin/compiler.hpp"

#include <algorithm>
#include <cmath>

#include "cavspin/analysis.hpp"
#include "cavspin/errors.hpp"

namespace cavspin {

namespace {
constexpr std::array<int, 4> kSignPattern{1, 1, 1, -1};
}

const char* to_string(Branch b) { return b == Branch::S ? "S" : "A"; }

const char* to_string(PumpStrategy s) {
    return s == PumpStrategy::Uniform ? "uniform" : "compensated";
}

PumpStrategy parse_pump_strategy(const std::string& s) {
    if (s == "uniform") return PumpStrategy::Uniform;
    if (s == "compensated") return PumpStrategy::Compensated;
    throw InvalidParameter("unknown pump strategy '" + s + "'");
}

std::size_t CavityNetwork::n_original_edges() const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(), [](const EdgeRecord& e) { return e.original; }));
}

CavityNetwork CavityNetwork::with_pumps(std::vector<double> new_pump) const {
    if (new_pump.size() != n_spin_modes) throw InvalidParameter("pump vector size mismatch");
    CavityNetwork out = *this;
    out.pump = std::move(new_pump);
    return out;
}

std::vector<double> CavityNetwork::pump_offsets() const {
    std::vector<double> off(pump.size());
    for (std::size_t m = 0; m < pump.size(); ++m) off[m] = pump[m] - params.p;
    return off;
}

CavityNetwork compile(const SpinGraph& graph, const SimParams& params, PumpStrategy strategy) {
    params.validate();

    CavityNetwork net;
    net.n_spin_modes = graph.n_sites();
    net.params = params;
    net.strategy = strategy;
    net.degree = graph.degrees();
    net.extra = graph.extra_flags();

    std::size_t next = graph.n_sites();
    for (const Edge& e : graph.edges()) {
        EdgeRecord r;
        r.spin_a = e.a;
        r.spin_b = e.b;
        r.s_mode = next++;
        r.a_mode = next++;
        r.readout = e.coupling == Coupling::FM ? Branch::S : Branch::A;
        r.original = graph.is_original_edge(e);
        r.sign = kSignPattern;
        net.edges.push_back(r);
    }

    net.pump.assign(graph.n_sites(), params.p);
    if (strategy == PumpStrategy::Compensated) {
        // The Ising amplitude only depends on the base pump, so it is shared.
        const double chi = params.ising() ? solve_chi_cubic(params) : 0.0;
        for (std::size_t m = 0; m < graph.n_sites(); ++m) {
            net.pump[m] = params.ising()
                              ? compensated_pump_ising(params.p, graph.degree(m), params.j,
                                                       params.gamma, params.gamma_nl_prime, chi)
                              : compensated_pump_xy(params.p, graph.degree(m), params.j,
                                                    params.gamma);
        }
    }
    return net;
}

std::vector<SignViolation> edge_sign_audit(const CavityNetwork& network) {
    std::vector<SignViolation> bad;
    for (std::size_t i = 0; i < network.edges.size(); ++i) {
        if (network.edges[i].sign != kSignPattern) bad.push_back({i, network.edges[i].sign});
    }
    return bad;
}

}  // namespace cavspin
