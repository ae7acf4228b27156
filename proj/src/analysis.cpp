#include "cavspin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "cavspin/errors.hpp"

namespace cavspin {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::size_t> network_components(const CavityNetwork& network) {
    std::vector<Edge> edges;
    edges.reserve(network.edges.size());
    for (const EdgeRecord& e : network.edges) edges.push_back({e.spin_a, e.spin_b, Coupling::FM});
    std::vector<bool> extra = network.extra;
    if (extra.size() != network.n_spin_modes) extra.assign(network.n_spin_modes, false);
    return SpinGraph(network.n_spin_modes, std::move(edges), std::move(extra)).components();
}

double pairwise_binarization_error(const std::vector<std::size_t>& component,
                                   const SpinConfig& config) {
    double worst = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i) {
        for (std::size_t k = i + 1; k < config.size(); ++k) {
            if (component[i] != component[k]) continue;
            const double d = std::abs(wrap_angle(config.phases[i] - config.phases[k]));
            worst = std::max(worst, std::min(d, kPi - d));
        }
    }
    return worst;
}

}  // namespace

double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

double predicted_i0(const SimParams& params, double pump, std::size_t degree) {
    const double n = static_cast<double>(degree);
    return (pump - params.gamma) / (2.0 * params.gamma_nl) -
           4.0 * n * params.j * params.j / (params.gamma * params.gamma_nl);
}

double predicted_chi_intensity(const SimParams& params, double i0, double phase_diff,
                               Branch branch) {
    const double c = 8.0 * params.j * params.j / (params.gamma * params.gamma);
    const double s = branch == Branch::S ? 1.0 : -1.0;
    return c * i0 * (1.0 + s * std::cos(phase_diff));
}

double StationaryPrediction::chi_s_intensity(const SimParams& params, double phase_diff) const {
    return predicted_chi_intensity(params, i0, phase_diff, Branch::S);
}

double chi_cubic_residual(const SimParams& params, double x) {
    const double drive = 2.0 * params.j * std::sqrt((params.p - params.gamma) / (2.0 * params.gamma_nl));
    return params.gamma_nl_prime * x * x * x + 0.5 * params.gamma * x - drive;
}

double solve_chi_cubic(const SimParams& params) {
    if (!(params.p > params.gamma)) {
        throw BelowThreshold("cubic needs p > gamma (p=" + std::to_string(params.p) +
                             ", gamma=" + std::to_string(params.gamma) + ")");
    }
    const double drive = 2.0 * params.j * std::sqrt((params.p - params.gamma) / (2.0 * params.gamma_nl));
    if (drive == 0.0) return 0.0;

    // f is strictly increasing on x >= 0 with f(0) < 0 <= f(2 drive / gamma).
    auto f = [&](double x) { return chi_cubic_residual(params, x); };
    auto df = [&](double x) { return 3.0 * params.gamma_nl_prime * x * x + 0.5 * params.gamma; };
    double lo = 0.0;
    double hi = 2.0 * drive / params.gamma;
    double x = hi;
    for (int it = 0; it < 200; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        (fx < 0.0 ? lo : hi) = x;
        double next = x - fx / df(x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

double i0_mod(const SimParams& params, std::size_t degree, double chi_abs) {
    const double n = static_cast<double>(degree);
    const double effective_decay = params.gamma + 2.0 * chi_abs * chi_abs * params.gamma_nl_prime;
    if (!(effective_decay > 0.0)) throw InvalidParameter("effective decay must be positive");
    return (params.p - params.gamma) / (2.0 * params.gamma_nl) -
           4.0 * n * params.j * params.j / (effective_decay * params.gamma_nl);
}

StationaryPrediction predict_stationary(const SimParams& params, double pump, std::size_t degree) {
    StationaryPrediction out;
    out.i0 = predicted_i0(params, pump, degree);
    out.below_threshold = below_threshold(out.i0);
    out.chi_abs_ising = params.p > params.gamma ? solve_chi_cubic(params) : 0.0;
    SimParams at_pump = params;
    at_pump.p = pump;
    out.i0_mod = i0_mod(at_pump, degree, out.chi_abs_ising);
    return out;
}

std::vector<double> predicted_site_intensities(const CavityNetwork& network) {
    const SimParams& params = network.params;
    std::vector<double> out(network.n_spin_modes);
    double chi = 0.0;
    if (params.ising() && params.p > params.gamma) chi = solve_chi_cubic(params);
    for (std::size_t m = 0; m < network.n_spin_modes; ++m) {
        SimParams at_pump = params;
        at_pump.p = network.pump[m];
        out[m] = params.ising() ? i0_mod(at_pump, network.degree[m], chi)
                                : predicted_i0(params, network.pump[m], network.degree[m]);
    }
    return out;
}

double reference_intensity(const CavityNetwork& network) {
    const std::vector<double> pred = predicted_site_intensities(network);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t m = 0; m < pred.size(); ++m) {
        if (network.extra[m]) continue;
        sum += pred[m];
        ++count;
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

SpinReadout extract_spins(const CavityNetwork& network, const CavityState& state) {
    if (state.size() != network.n_modes()) throw InvalidInstance("state/network size mismatch");
    const double floor = 1e-6 * std::max(reference_intensity(network), 0.0);
    SpinReadout out;
    out.config.phases.resize(network.n_spin_modes);
    out.intensity.resize(network.n_spin_modes);
    for (std::size_t m = 0; m < network.n_spin_modes; ++m) {
        const double i = std::norm(state[m]);
        if (!(i > floor) || i == 0.0) {
            throw EmptyCondensate("spin site " + std::to_string(m) + " has intensity " +
                                  std::to_string(i));
        }
        out.config.phases[m] = std::arg(state[m]);
        out.intensity[m] = i;
    }
    return out;
}

double homogeneity_deviation(const CavityNetwork& network, const CavityState& state) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t m = 0; m < network.n_spin_modes; ++m) {
        if (network.extra[m]) continue;
        sum += std::norm(state[m]);
        ++count;
    }
    if (count == 0 || !(sum > 0.0)) {
        throw EmptyCondensate("homogeneity undefined for an empty state");
    }
    const double mean = sum / static_cast<double>(count);
    double worst = 0.0;
    for (std::size_t m = 0; m < network.n_spin_modes; ++m) {
        if (network.extra[m]) continue;
        worst = std::max(worst, std::abs(std::norm(state[m]) - mean) / mean);
    }
    return worst;
}

Calibration calibration_for(const SimParams& params) {
    return params.ising() ? Calibration::Ising : Calibration::XY;
}

ReadoutEnergy readout_energy(const CavityNetwork& network, const CavityState& state,
                             Calibration calibration) {
    if (state.size() != network.n_modes()) throw InvalidInstance("state/network size mismatch");
    const SimParams& params = network.params;
    ReadoutEnergy out;
    if (calibration == Calibration::XY) {
        const double i0 = reference_intensity(network);
        if (below_threshold(i0)) throw BelowThreshold("reference intensity is not positive");
        if (!(params.j > 0.0)) throw InvalidParameter("readout needs j > 0");
        out.kappa = params.gamma * params.gamma / (8.0 * params.j * params.j * i0);
    } else {
        const double chi = solve_chi_cubic(params);
        if (!(chi > 0.0)) throw InvalidParameter("readout needs a non-zero connecting amplitude");
        out.kappa = 2.0 / (chi * chi);
    }
    std::size_t n_edges = 0;
    for (const EdgeRecord& e : network.edges) {
        if (!e.original) continue;
        ++n_edges;
        out.sum_chi2 += std::norm(state[e.readout == Branch::S ? e.s_mode : e.a_mode]);
    }
    out.e_spin = static_cast<double>(n_edges) - out.kappa * out.sum_chi2;
    return out;
}

CavityState candidate_fixed_point(const CavityNetwork& network, const SpinConfig& config,
                                  const SimParams& params) {
    if (config.size() != network.n_spin_modes) throw InvalidInstance("config size mismatch");
    if (params.ising() &&
        pairwise_binarization_error(network_components(network), config) > 1e-9) {
        throw InvalidInstance("Ising fixed point needs a binary configuration");
    }
    const double chi = params.ising() ? solve_chi_cubic(params) : 0.0;
    const double effective_decay = params.gamma + 2.0 * params.gamma_nl_prime * chi * chi;

    CavityState s;
    s.amplitudes.assign(network.n_modes(), cplx{0.0, 0.0});
    for (std::size_t m = 0; m < network.n_spin_modes; ++m) {
        const double i = (network.pump[m] - params.gamma) / (2.0 * params.gamma_nl) -
                         4.0 * static_cast<double>(network.degree[m]) * params.j * params.j /
                             (effective_decay * params.gamma_nl);
        if (below_threshold(i)) {
            throw BelowThreshold("spin site " + std::to_string(m) + " below threshold");
        }
        s.amplitudes[m] = std::polar(std::sqrt(i), config.phases[m]);
    }
    const cplx two_ij_over_gamma{0.0, 2.0 * params.j / params.gamma};
    for (const EdgeRecord& e : network.edges) {
        const cplx pa = s[e.spin_a];
        const cplx pb = s[e.spin_b];
        const cplx drive_s = double(e.sign[0]) * pa + double(e.sign[1]) * pb;
        const cplx drive_a = double(e.sign[2]) * pa + double(e.sign[3]) * pb;
        if (!params.ising()) {
            s.amplitudes[e.s_mode] = two_ij_over_gamma * drive_s;
            s.amplitudes[e.a_mode] = two_ij_over_gamma * drive_a;
            continue;
        }
        const bool s_filled = std::abs(drive_s) >= std::abs(drive_a);
        const cplx drive = s_filled ? drive_s : drive_a;
        const cplx filled = cplx{0.0, chi} * (drive / std::abs(drive));
        s.amplitudes[s_filled ? e.s_mode : e.a_mode] = filled;
    }
    return s;
}

double ising_fixed_point_residual(const CavityNetwork& network, const SpinConfig& config,
                                  const SimParams& params) {
    const CavityState s = candidate_fixed_point(network, config, params);
    std::vector<cplx> dy(s.size());
    rhs(network, params, s.amplitudes, dy);
    double worst = 0.0;
    for (const cplx& z : dy) worst = std::max(worst, std::abs(z));
    return worst;
}

bool is_binary(const SpinGraph& graph, const SpinConfig& config, double tol) {
    return binarization_error(graph, config) <= tol;
}

double binarization_error(const SpinGraph& graph, const SpinConfig& config) {
    if (config.size() != graph.n_sites()) throw InvalidInstance("config size mismatch");
    return pairwise_binarization_error(graph.components(), config);
}

std::vector<int> binarize(const SpinGraph& graph, const SpinConfig& config) {
    if (config.size() != graph.n_sites()) throw InvalidInstance("config size mismatch");
    const std::vector<std::size_t> comp = graph.components();
    std::vector<std::size_t> root(graph.n_sites(), graph.n_sites());
    std::vector<int> spins(graph.n_sites());
    for (std::size_t i = 0; i < graph.n_sites(); ++i) {
        if (root[comp[i]] == graph.n_sites()) root[comp[i]] = i;
        const double d = config.phases[i] - config.phases[root[comp[i]]];
        spins[i] = std::cos(d) >= 0.0 ? 1 : -1;
    }
    return spins;
}

}  // namespace cavspin
