#include "doctest.h"

#include <cmath>
#include <numbers>

#include "cavspin/analysis.hpp"
#include "cavspin/errors.hpp"

using namespace cavspin;

namespace {

constexpr double kPi = std::numbers::pi;

SimParams base(double p_val = 12.0, double gnl_prime = 0.0) {
    SimParams p;
    p.p = p_val;
    p.gamma = 4.0;
    p.j = 0.5;
    p.gamma_nl_prime = gnl_prime;
    return p;
}

double bisect(double a3, double a1, double a0) {
    double lo = 0.0, hi = 1.0;
    while (a3 * hi * hi * hi + a1 * hi - a0 < 0.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (a3 * mid * mid * mid + a1 * mid - a0 < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Stationary two-site state for phases (0, dphi) at intensity i0.
CavityState two_site_state(const SimParams& p, double i0, double dphi) {
    const cplx a = std::sqrt(i0), b = std::polar(std::sqrt(i0), dphi);
    const cplx k(0.0, 2.0 * p.j / p.gamma);
    CavityState s;
    s.amplitudes = {a, b, k * (a + b), k * (a - b)};
    return s;
}

}  // namespace

TEST_CASE("closed-form intensities") {
    const SimParams p = base();
    CHECK(predicted_i0(p, 14.0, 4) == doctest::Approx(4.0));
    CHECK(predicted_i0(p, 14.0, 1) == doctest::Approx(4.75));
    CHECK(predicted_i0(p, 12.0, 0) == doctest::Approx(4.0));
    CHECK(predicted_i0(p, 4.0, 0) == 0.0);
    CHECK(below_threshold(predicted_i0(p, 4.0, 1)));
    CHECK(below_threshold(0.0));
    CHECK_FALSE(below_threshold(1e-9));

    CHECK(predicted_chi_intensity(p, 4.0, 0.0, Branch::S) == doctest::Approx(1.0));
    CHECK(predicted_chi_intensity(p, 4.0, 0.0, Branch::A) == doctest::Approx(0.0));
    CHECK(predicted_chi_intensity(p, 4.0, kPi, Branch::A) == doctest::Approx(1.0));
    CHECK(predicted_chi_intensity(p, 4.0, kPi / 2, Branch::S) == doctest::Approx(0.5));
}

TEST_CASE("connecting-mode cubic") {
    SUBCASE("linear case is closed form") {
        CHECK(solve_chi_cubic(base(14.0)) == doctest::Approx(0.5 * std::sqrt(5.0)).epsilon(1e-14));
    }
    SUBCASE("agrees with bisection") {
        for (double gp : {0.1, 1.0, 3.0}) {
            for (double pv : {5.0, 12.0, 18.0}) {
                const SimParams p = base(pv, gp);
                const double c = 2 * p.j * std::sqrt((pv - p.gamma) / 2.0);
                const double x = solve_chi_cubic(p);
                CHECK(x == doctest::Approx(bisect(gp, p.gamma / 2, c)).epsilon(1e-12));
                CHECK(std::abs(chi_cubic_residual(p, x)) < 1e-12);
            }
        }
        CHECK(solve_chi_cubic(base(14.0, 1.0)) == doctest::Approx(bisect(1.0, 2.0, std::sqrt(5.0))).epsilon(1e-13));
    }
    SUBCASE("decreases with the connecting nonlinearity") {
        double prev = solve_chi_cubic(base(12.0, 0.0));
        for (double gp : {0.01, 0.1, 0.5, 1.0, 2.0, 10.0}) {
            const double x = solve_chi_cubic(base(12.0, gp));
            CHECK(x < prev);
            prev = x;
        }
    }
    SUBCASE("no coupling means no connecting field") {
        SimParams p = base(12.0, 1.0);
        p.j = 0.0;
        CHECK(solve_chi_cubic(p) == 0.0);
    }
    SUBCASE("below threshold") { CHECK_THROWS_AS(solve_chi_cubic(base(4.0, 1.0)), BelowThreshold); }
}

TEST_CASE("i0_mod") {
    const SimParams p = base(12.0, 1.0);
    CHECK(i0_mod(p, 4, 0.0) == doctest::Approx(predicted_i0(p, 12.0, 4)));
    CHECK(i0_mod(p, 0, 0.7) == doctest::Approx(4.0));
    CHECK(i0_mod(p, 2, 1.0) == doctest::Approx(4.0 - 8 * 0.25 / 6.0));
    const StationaryPrediction sp = predict_stationary(p, 12.0, 2);
    CHECK(sp.chi_abs_ising == doctest::Approx(solve_chi_cubic(p)));
    CHECK_FALSE(sp.below_threshold);
    CHECK(predict_stationary(p, 3.0, 2).below_threshold);
}

TEST_CASE("spin extraction") {
    const SimParams p = base(14.0);
    const CavityNetwork net = compile(SpinGraph(2, {{0, 1, Coupling::AFM}}), p, PumpStrategy::Uniform);
    CavityState s = two_site_state(p, 4.75, kPi);
    const SpinReadout r = extract_spins(net, s);
    CHECK(r.config.phases[0] == doctest::Approx(0.0));
    CHECK(std::abs(r.config.phases[1]) == doctest::Approx(kPi));
    CHECK(r.intensity[1] == doctest::Approx(4.75));
    CHECK(homogeneity_deviation(net, s) < 1e-14);

    s.amplitudes[1] *= std::sqrt(1.1);
    CHECK(homogeneity_deviation(net, s) == doctest::Approx(0.1 / 2.1).epsilon(1e-12));

    s.amplitudes[0] = 0.0;
    CHECK_THROWS_AS(extract_spins(net, s), EmptyCondensate);
}

TEST_CASE("readout energy calibration on two sites") {
    const SimParams p = base(14.0);
    const double i0 = 4.75;
    for (Coupling c : {Coupling::FM, Coupling::AFM}) {
        const CavityNetwork net = compile(SpinGraph(2, {{0, 1, c}}), p, PumpStrategy::Uniform);
        for (double dphi : {0.0, 0.4, kPi / 2, 2.0, kPi}) {
            const ReadoutEnergy e = readout_energy(net, two_site_state(p, i0, dphi), Calibration::XY);
            const double exact = -coupling_sign(c) * std::cos(dphi);
            CHECK(e.e_spin == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
            CHECK(e.kappa == doctest::Approx(p.gamma * p.gamma / (8 * p.j * p.j * i0)));
        }
    }
}

TEST_CASE("Ising fixed points") {
    const SimParams p = base(12.0, 1.0);
    const SpinGraph tri(3, {{0, 1, Coupling::FM}, {1, 2, Coupling::FM}, {0, 2, Coupling::AFM}});
    const CavityNetwork net = compile(tri, p, PumpStrategy::Compensated);
    for (int mask = 0; mask < 8; ++mask) {
        SpinConfig c;
        for (int i = 0; i < 3; ++i) c.phases.push_back((mask >> i) & 1 ? kPi : 0.0);
        CHECK(ising_fixed_point_residual(net, c, p) < 1e-12);
        const CavityState s = candidate_fixed_point(net, c, p);
        const double chi = solve_chi_cubic(p);
        for (std::size_t m = 0; m < 3; ++m) CHECK(std::norm(s[m]) == doctest::Approx(4.0));
        // readout: exactly the Ising energy
        const ReadoutEnergy e = readout_energy(net, s, Calibration::Ising);
        CHECK(e.kappa == doctest::Approx(2.0 / (chi * chi)));
        CHECK(e.e_spin == doctest::Approx(spin_energy(tri, c)).scale(1.0));
    }
    CHECK_THROWS_AS(ising_fixed_point_residual(net, SpinConfig{{0.0, 1.0, 0.0}}, p), InvalidInstance);

    SUBCASE("uniform pump with unequal degrees has no binary fixed point of this form") {
        const SpinGraph path(3, {{0, 1, Coupling::FM}, {1, 2, Coupling::AFM}});
        const CavityNetwork u = compile(path, p, PumpStrategy::Uniform);
        const CavityNetwork c = compile(path, p, PumpStrategy::Compensated);
        const SpinConfig cfg{{0.0, 0.0, kPi}};
        CHECK(ising_fixed_point_residual(c, cfg, p) < 1e-12);
        // Unequal intensities break the common connecting amplitude.
        CHECK(ising_fixed_point_residual(u, cfg, p) > 1e-3);
    }
}

TEST_CASE("binarization") {
    const SpinGraph g(4, {{0, 1, Coupling::FM}, {2, 3, Coupling::FM}});
    const SpinConfig c{{0.3, 0.3 + kPi, 1.0, 1.0 + 1e-4}};
    CHECK(binarization_error(g, c) == doctest::Approx(1e-4).epsilon(1e-6));
    CHECK(is_binary(g, c, 1e-3));
    CHECK_FALSE(is_binary(g, c, 1e-5));
    CHECK(binarize(g, c) == std::vector<int>{1, -1, 1, 1});
    CHECK(binarization_error(g, SpinConfig{{0.0, kPi / 2, 0.0, 0.0}}) == doctest::Approx(kPi / 2));
    CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(0.5) == 0.5);
}
