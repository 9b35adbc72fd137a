#include <gtest/gtest.h>

#include <cmath>

#include "fdb/energy.hpp"
#include "fdb/random_field.hpp"

using namespace fdb;

namespace {

State1D noncavitating_random_state(GridPtr g, std::uint64_t seed, double floor = 0.5) {
    RandomFieldSpec se;
    se.seed = seed;
    se.band = 20;
    se.decay = 1.8;
    se.amplitude = 0.4;
    RandomFieldSpec su = se;
    su.seed = seed + 7777;
    auto eta = random_field(g, se);
    // shift so min(1+eta) is at least `floor`
    double m = field_min(eta);
    if (1.0 + m < floor)
        for (auto& x : eta.v) x += floor - 1.0 - m;
    return State1D(std::move(eta), random_field(g, su));
}

}  // namespace

TEST(CoercivityConstant, GridMinimizationOracle) {
    // inf over |xi| >= 1 of 1 - (1+xi^2)^{-1/2}, by direct scan
    double inf = 1.0;
    for (double xi = 1.0; xi <= 2000.0; xi += 1e-3)
        inf = std::min(inf, 1.0 - 1.0 / std::sqrt(1.0 + xi * xi));
    EXPECT_NEAR(inf, coercivity_c0_universal, 1e-9);
    EXPECT_NEAR(coercivity_c0_universal, 1.0 - std::pow(2.0, -0.5), 1e-15);
}

TEST(ModifiedEnergy1D, ZeroState) {
    auto g = make_grid(64);
    auto r = modified_energy_1d(rest_state(g), 2.6);
    EXPECT_EQ(r.E_s, 0.0);
    EXPECT_EQ(r.lower, 0.0);
    EXPECT_EQ(r.upper, 0.0);
    EXPECT_DOUBLE_EQ(r.min_depth, 1.0);
}

TEST(ModifiedEnergy1D, ConstantElevationClosedForm) {
    // eta = c, u = 0: only the zero mode contributes, E = c^2 L / 2
    const double L = 2.0 * pi, c = 0.3;
    auto g = make_grid(64, L);
    RealField eta(g);
    for (auto& x : eta.v) x = c;
    auto r = modified_energy_1d(State1D(std::move(eta), RealField(g)), 2.6);
    EXPECT_NEAR(r.E_s, 0.5 * c * c * L, 1e-13);
    EXPECT_EQ(r.cubic, 0.0);
}

TEST(ModifiedEnergy1D, RequiresSAboveTwo) {
    auto g = make_grid(64);
    EXPECT_THROW(modified_energy_1d(rest_state(g), 2.0), std::invalid_argument);
}

TEST(ModifiedEnergy1D, SandwichHoldsOnRandomNonCavitatingStates) {
    auto g = make_grid(128);
    const double s = 2.6;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto st = noncavitating_random_state(g, seed);
        auto r = modified_energy_1d(st, s);
        ASSERT_GE(r.min_depth, 0.5 - 1e-12);
        EXPECT_LE(r.lower, r.E_s * (1.0 + 1e-12) + 1e-300);
        EXPECT_LE(r.E_s, r.upper * (1.0 + 1e-12) + 1e-300);
    }
}

TEST(ModifiedEnergy2D, ZeroState) {
    auto g = make_grid_2d(16);
    auto r = modified_energy_2d(rest_state_2d(g), 3.1);
    EXPECT_EQ(r.E_s, 0.0);
}

TEST(ModifiedEnergy2D, RequiresSAboveThree) {
    auto g = make_grid_2d(16);
    EXPECT_THROW(modified_energy_2d(rest_state_2d(g), 3.0), std::invalid_argument);
}

TEST(ModifiedEnergy2D, EmbeddedStateReducesToOneD) {
    // a state constant in x2 has E_2d = L2 * E_1d under the L^dim measure
    auto g1 = make_grid(64);
    auto g2 = make_grid(64, 16, 2.0 * pi, 2.0 * pi);
    auto st = noncavitating_random_state(g1, 33);
    const double s = 3.1;
    auto r1 = modified_energy_1d(st, s);
    auto r2 = modified_energy_2d(embed_1d(st, g2), s);
    EXPECT_NEAR(r2.E_s, g2->length[1] * r1.E_s, 1e-11 * std::max(1.0, r1.E_s));
}

TEST(ModifiedEnergy2D, SandwichHoldsOnRandomCurlFreeStates) {
    auto g = make_grid_2d(32);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        RandomFieldSpec spec;
        spec.seed = seed;
        spec.band = 9;
        spec.amplitude = 0.4;
        auto eta = random_field(g, spec);
        double m = field_min(eta);
        if (1.0 + m < 0.5)
            for (auto& x : eta.v) x += 0.5 - 1.0 - m;
        spec.seed = seed + 999;
        auto phi = random_field(g, spec);
        State2D st(std::move(eta), derivative(phi, 0), derivative(phi, 1));
        auto r = modified_energy_2d(st, 3.1);
        EXPECT_LE(r.lower, r.E_s * (1.0 + 1e-12) + 1e-300);
        EXPECT_LE(r.E_s, r.upper * (1.0 + 1e-12) + 1e-300);
    }
}

TEST(DifferenceEnergy, IdenticalStatesGiveZero) {
    auto g = make_grid(64);
    auto st = noncavitating_random_state(g, 4);
    auto r = difference_energy(st, st);
    EXPECT_EQ(r.Etilde, 0.0);
}

TEST(DifferenceEnergy, VanishingEtaOneDropsCubicTerm) {
    // s2 = rest, s1 with eta = 0: 2E = ||u||^2 + ||D^{1/2} dx u||^2
    const double L = 2.0 * pi;
    auto g = make_grid(128, L);
    RandomFieldSpec spec;
    spec.seed = 5;
    spec.band = 12;
    auto u = random_field(g, spec);
    State1D s1(RealField(g), u), s2 = rest_state(g);
    auto r = difference_energy(s1, s2);
    auto d12dx = apply_multiplier(riesz_potential(g, 0.5), derivative(u));
    double expect = 0.5 * (std::pow(l2_norm(u), 2) + std::pow(l2_norm(d12dx), 2));
    EXPECT_NEAR(r.Etilde, expect, 1e-12 * std::max(1.0, expect));
}

TEST(DifferenceEnergy, SingleModeClosedForm) {
    // du = cos(kx), deta = 0, eta1 = 0: 2E = (L/2)(1 + |k|^3)
    const double L = 2.0 * pi;
    auto g = make_grid(128, L);
    const double k = 3.0;
    auto u = sample(g, [k](double x) { return std::cos(k * x); });
    State1D s1(RealField(g), u), s2 = rest_state(g);
    auto r = difference_energy(s1, s2);
    EXPECT_NEAR(2.0 * r.Etilde, 0.5 * L * (1.0 + k * k * k), 1e-11);
}

TEST(DifferenceEnergy, ExactQuadraticScaling) {
    auto g = make_grid(64);
    auto base = noncavitating_random_state(g, 8);
    RandomFieldSpec spec;
    spec.seed = 51;
    spec.band = 15;
    spec.amplitude = 1.0;
    auto we = random_field(g, spec);
    spec.seed = 52;
    auto wu = random_field(g, spec);
    auto perturbed = [&](double lam) {
        State1D s = base;
        for (std::size_t i = 0; i < s.eta.size(); ++i) {
            s.eta.v[i] += lam * we.v[i];
            s.u.v[i] += lam * wu.v[i];
        }
        return s;
    };
    double e1 = difference_energy(base, perturbed(1e-3)).Etilde;
    double e2 = difference_energy(base, perturbed(1e-4)).Etilde;
    EXPECT_NEAR(e1 / e2, 100.0, 0.1);  // quadratic form in the difference
}

TEST(DifferenceEnergy, SandwichHolds) {
    auto g = make_grid(64);
    for (std::uint64_t seed = 200; seed < 230; ++seed) {
        auto s1 = noncavitating_random_state(g, seed);
        auto s2 = noncavitating_random_state(g, seed + 10000);
        auto r = difference_energy(s1, s2);
        EXPECT_LE(r.lower, r.Etilde * (1.0 + 1e-12) + 1e-300);
        EXPECT_LE(r.Etilde, r.upper * (1.0 + 1e-12) + 1e-300);
    }
}

TEST(DifferenceEnergy, GridMismatchRaises) {
    auto a = rest_state(make_grid(64));
    auto b = rest_state(make_grid(128));
    EXPECT_THROW(difference_energy(a, b), std::invalid_argument);
}

TEST(ExistenceTime, ZeroDataGivesLogTwo) {
    auto e = existence_time(0.0, 0.0, 0.5, 1.0, 10.0);
    EXPECT_NEAR(e.T1, std::log(2.0), 1e-15);
    EXPECT_TRUE(std::isinf(e.T2));
    EXPECT_NEAR(e.T0, std::log(2.0), 1e-15);
}

TEST(ExistenceTime, DirectFormulaEvaluation) {
    auto e = existence_time(1.0, 1.0, 0.5, 1.0, 10.0);
    EXPECT_NEAR(e.T2, 0.5 / (10.0 * 2.0 * 1.0), 1e-15);  // 0.025
}

TEST(ExistenceTime, MonotoneInDataNorm) {
    auto small = existence_time(1.0, 1.0, 0.5, 1.0, 10.0);
    auto big = existence_time(2.0, 2.0, 0.5, 1.0, 10.0);
    EXPECT_LT(big.T1, small.T1);
    EXPECT_LT(big.T2, small.T2);
    EXPECT_LT(big.T0, small.T0);
}

TEST(ExistenceTime, DomainErrors) {
    EXPECT_THROW(existence_time(1.0, 1.0, 0.0, 1.0, 10.0), std::domain_error);
    EXPECT_THROW(existence_time(1.0, 1.0, 1.0, 1.0, 10.0), std::domain_error);
    EXPECT_THROW(existence_time(1.0, 1.0, 1.5, 1.0, 10.0), std::domain_error);
    EXPECT_THROW(existence_time(1.0, 1.0, 0.5, -1.0, 10.0), std::domain_error);
}

TEST(NoncavitationMonitor, FlatRestStateHolds) {
    std::vector<std::pair<double, double>> series;
    for (int i = 0; i <= 10; ++i) series.emplace_back(0.1 * i, 1.0);
    auto v = noncavitation_monitor(series, 1.0, 1.0);
    EXPECT_TRUE(v.pass);
}

TEST(NoncavitationMonitor, ReportsFirstViolation) {
    std::vector<std::pair<double, double>> series = {
        {0.0, 0.8}, {0.2, 0.5}, {0.4, 0.39}, {0.6, 0.2}};
    auto v = noncavitation_monitor(series, 0.8, 1.0);
    EXPECT_FALSE(v.pass);
    EXPECT_DOUBLE_EQ(v.violation_time, 0.4);  // 0.39 < 0.8/2
}

TEST(NoncavitationMonitor, IgnoresSamplesPastLimit) {
    std::vector<std::pair<double, double>> series = {{0.0, 0.8}, {0.5, 0.7}, {2.0, 0.0}};
    auto v = noncavitation_monitor(series, 0.8, 1.0);
    EXPECT_TRUE(v.pass);
}

TEST(StencilDerivative, ExactOnQuadratics) {
    std::vector<double> t, y;
    for (int i = 0; i <= 8; ++i) {
        t.push_back(0.25 * i);
        y.push_back(3.0 * t.back() * t.back() - 2.0 * t.back() + 1.0);
    }
    auto d = stencil_derivative(t, y);
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(d[i], 6.0 * t[i] - 2.0, 1e-12);
}

TEST(EnergyInequalityMonitor, RestStateRatioIsZero) {
    std::vector<double> t = {0.0, 0.1, 0.2, 0.3};
    std::vector<double> E = {0.0, 0.0, 0.0, 0.0};
    auto r = energy_inequality_monitor(t, E);
    EXPECT_TRUE(r.finite);
    EXPECT_EQ(r.sup_ratio, 0.0);
}

TEST(EnergyInequalityMonitor, TooFewSamplesRaises) {
    std::vector<double> t = {0.0, 0.1}, E = {1.0, 1.1};
    EXPECT_THROW(energy_inequality_monitor(t, E), InsufficientDataError);
}

TEST(EnergyInequalityMonitor, RecoversExponentialRate) {
    // E = E0 e^{ct} with E0 << 1: ratio ~ c to FD accuracy
    const double c = 0.7, E0 = 1e-6;
    std::vector<double> t, E;
    for (int i = 0; i <= 50; ++i) {
        t.push_back(0.01 * i);
        E.push_back(E0 * std::exp(c * t.back()));
    }
    auto r = energy_inequality_monitor(t, E);
    EXPECT_NEAR(r.sup_ratio, c, 1e-3);
}

TEST(Gronwall, IdenticalDataStaysZero) {
    auto g = make_grid(64);
    auto st = noncavitating_random_state(g, 77, 0.6);
    IntegratorConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 0.2;
    auto rep = gronwall_experiment(st, st, cfg, 2.6, 1.0);
    for (double e : rep.Etilde) EXPECT_EQ(e, 0.0);
    EXPECT_EQ(rep.C_hat, 0.0);
    EXPECT_TRUE(rep.envelope_ok);
}

TEST(Gronwall, PerturbationScalesQuadratically) {
    auto g = make_grid(128);
    auto base = noncavitating_random_state(g, 91, 0.6);
    RandomFieldSpec w;
    w.seed = 301;
    w.band = 10;
    auto wu = random_field(g, w);
    auto perturbed = [&](double delta) {
        State1D s = base;
        for (std::size_t i = 0; i < s.u.size(); ++i) s.u.v[i] += delta * wu.v[i];
        return s;
    };
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.1;
    auto r3 = gronwall_experiment(base, perturbed(1e-3), cfg, 2.6, 1.0);
    auto r4 = gronwall_experiment(base, perturbed(1e-4), cfg, 2.6, 1.0);
    EXPECT_NEAR(r3.E0 / r4.E0, 100.0, 1.0);  // within 1%
    EXPECT_TRUE(r3.envelope_ok);
    EXPECT_TRUE(std::isfinite(r3.C_hat));
}
