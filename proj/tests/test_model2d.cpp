#include <gtest/gtest.h>

#include <cmath>

#include "fdb/model2d.hpp"
#include "fdb/random_field.hpp"

using namespace fdb;

namespace {

RealField random_field_2d(GridPtr g, std::uint64_t seed, double amp = 0.3, long band = 0) {
    if (band == 0) band = static_cast<long>(g->n[0] / 3) - 2;
    RandomFieldSpec spec;
    spec.seed = seed;
    spec.band = band;
    spec.decay = 2.0;
    spec.amplitude = amp;
    return random_field(g, spec);
}

// curl-free velocity: u = grad(phi) for a random band-limited potential
std::pair<RealField, RealField> random_gradient(GridPtr g, std::uint64_t seed, long band = 0) {
    auto phi = random_field_2d(g, seed, 0.3, band);
    return {derivative(phi, 0), derivative(phi, 1)};
}

State2D random_curlfree_state(GridPtr g, std::uint64_t seed) {
    auto [u1, u2] = random_gradient(g, seed * 3 + 1);
    return State2D(random_field_2d(g, seed * 3 + 2), std::move(u1), std::move(u2));
}

double l2_diff(const RealField& a, const RealField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(a.v[i] - b.v[i], 2);
    return std::sqrt(acc * a.grid->cell_volume());
}

}  // namespace

TEST(Projection, GradientFieldUnchanged) {
    auto g = make_grid_2d(32);
    auto phi = sample2d(g, [](double x, double y) { return std::sin(3.0 * x) * std::sin(2.0 * y); });
    auto u1 = derivative(phi, 0), u2 = derivative(phi, 1);
    auto [p1, p2] = project_curl_free(u1, u2);
    EXPECT_LE(l2_diff(p1, u1), 1e-12 * std::max(1.0, l2_norm(u1)));
    EXPECT_LE(l2_diff(p2, u2), 1e-12 * std::max(1.0, l2_norm(u2)));
}

TEST(Projection, PureCurlFieldAnnihilated) {
    // u = (-d2 psi, d1 psi) is mean-zero and divergence-free
    auto g = make_grid_2d(32);
    auto psi = sample2d(g, [](double x, double y) { return std::cos(2.0 * x) * std::sin(5.0 * y); });
    RealField u1 = derivative(psi, 1);
    for (auto& x : u1.v) x = -x;
    RealField u2 = derivative(psi, 0);
    auto [p1, p2] = project_curl_free(u1, u2);
    EXPECT_LE(max_abs(p1), 1e-12);
    EXPECT_LE(max_abs(p2), 1e-12);
}

TEST(Projection, Idempotent) {
    auto g = make_grid_2d(32);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto u1 = random_field_2d(g, seed * 11);
        auto u2 = random_field_2d(g, seed * 11 + 5);
        auto [p1, p2] = project_curl_free(u1, u2);
        auto [q1, q2] = project_curl_free(p1, p2);
        double scale = std::max(1.0, std::max(l2_norm(p1), l2_norm(p2)));
        EXPECT_LE(l2_diff(p1, q1), 1e-12 * scale);
        EXPECT_LE(l2_diff(p2, q2), 1e-12 * scale);
    }
}

TEST(Projection, OutputIsDiscretelyCurlFree) {
    auto g = make_grid_2d(32);
    auto u1 = random_field_2d(g, 3, 0.5, 14);
    auto u2 = random_field_2d(g, 4, 0.5, 14);
    auto [p1, p2] = project_curl_free(u1, u2);
    EXPECT_LE(curl_l2norm(p1, p2), 1e-12);
}

TEST(Rhs2D, RestStateIsEquilibrium) {
    auto g = make_grid_2d(16);
    Boussinesq2D model(g, 1.0);
    auto [de, d1, d2] = model.rhs(rest_state_2d(g));
    EXPECT_EQ(max_abs(de), 0.0);
    EXPECT_EQ(max_abs(d1), 0.0);
    EXPECT_EQ(max_abs(d2), 0.0);
}

TEST(Rhs2D, EmbeddedOneDimensionalDataReduces) {
    auto g1 = make_grid(64);
    auto g2 = make_grid(64, 16, 2.0 * pi, 2.0 * pi);
    RandomFieldSpec se;
    se.seed = 21;
    se.band = 18;
    se.decay = 2.0;
    se.amplitude = 0.3;
    RandomFieldSpec su = se;
    su.seed = 22;
    State1D s1(random_field(g1, se), random_field(g1, su));
    Boussinesq1D m1(g1, 1.0);
    Boussinesq2D m2(g2, 1.0);

    auto [de1, du1] = m1.rhs(s1);
    auto [de2, da, db] = m2.rhs(embed_1d(s1, g2));
    double scale = std::max({l2_norm(de1), l2_norm(du1), 1e-12});
    for (std::size_t i = 0; i < g2->n[0]; ++i)
        for (std::size_t j = 0; j < g2->n[1]; ++j) {
            EXPECT_NEAR(de2.v[g2->idx(i, j)], de1.v[i], 1e-10 * scale);
            EXPECT_NEAR(da.v[g2->idx(i, j)], du1.v[i], 1e-10 * scale);
            EXPECT_NEAR(db.v[g2->idx(i, j)], 0.0, 1e-12 * scale);
        }
}

TEST(Rhs2D, SplitAndDirectPathsAgree) {
    auto g = make_grid_2d(32);
    Boussinesq2D model(g, 1.0);
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        auto s = random_curlfree_state(g, 100 + trial);
        auto [de_s, d1_s, d2_s] = model.rhs(s, Boussinesq2D::Path::Split);
        auto [de_d, d1_d, d2_d] = model.rhs(s, Boussinesq2D::Path::Direct);
        double scale = std::max({l2_norm(de_d), l2_norm(d1_d), l2_norm(d2_d)});
        EXPECT_LE(l2_diff(de_s, de_d), 1e-10 * scale);
        EXPECT_LE(l2_diff(d1_s, d1_d), 1e-10 * scale);
        EXPECT_LE(l2_diff(d2_s, d2_d), 1e-10 * scale);
    }
}

TEST(Rhs2D, TransportFormMatchesGradientFormOnCurlFreeFields) {
    // for curl-free u, 1/2 grad|u|^2 = ((u.grad)u1, (u.grad)u2) pointwise
    auto g = make_grid_2d(32);
    for (std::uint64_t seed : {5ull, 6ull, 7ull}) {
        auto [u1, u2] = random_gradient(g, seed, 9);
        RealField sp(g);
        for (std::size_t i = 0; i < sp.size(); ++i)
            sp.v[i] = u1.v[i] * u1.v[i] + u2.v[i] * u2.v[i];
        sp = dealias(sp);
        auto grad1 = derivative(sp, 0), grad2 = derivative(sp, 1);
        for (auto& x : grad1.v) x *= 0.5;
        for (auto& x : grad2.v) x *= 0.5;
        auto [t1, t2] = transport_form(u1, u2);
        double scale = std::max({l2_norm(t1), l2_norm(t2), 1e-12});
        EXPECT_LE(l2_diff(grad1, t1), 1e-10 * scale);
        EXPECT_LE(l2_diff(grad2, t2), 1e-10 * scale);
    }
}

TEST(Step2D, ZeroDataStaysZero) {
    auto g = make_grid_2d(16);
    Boussinesq2D model(g, 1.0);
    IntegratorConfig cfg;
    cfg.dt = 0.05;
    auto s = rest_state_2d(g);
    for (int i = 0; i < 5; ++i) s = model.step(s, cfg);
    EXPECT_EQ(max_abs(s.eta), 0.0);
    EXPECT_EQ(max_abs(s.u1), 0.0);
    EXPECT_EQ(max_abs(s.u2), 0.0);
}

TEST(Step2D, LinearPlaneWaveReturnsAfterOnePeriod) {
    auto g = make_grid_2d(64);
    const double beta = 1.0;
    const long m = 4;
    const double k = 4.0;
    const double T = 2.0 * pi / (k * eval_W(k, beta));
    Boussinesq2D linear(g, beta, Dealias::TwoThirds, /*nonlinear=*/false);
    auto s0 = planewave_state_2d(g, 0.01, m, beta);
    IntegratorConfig cfg;
    cfg.dt = T / 16.0;
    auto s = s0;
    for (int i = 0; i < 16; ++i) s = linear.step(s, cfg);
    double num = std::sqrt(std::pow(l2_diff(s.eta, s0.eta), 2) + std::pow(l2_diff(s.u1, s0.u1), 2) +
                           std::pow(l2_diff(s.u2, s0.u2), 2));
    double den = std::sqrt(std::pow(l2_norm(s0.eta), 2) + std::pow(l2_norm(s0.u1), 2));
    EXPECT_LE(num / den, 1e-8);
}

TEST(Step2D, CurlStaysSmallOverManySteps) {
    auto g = make_grid_2d(32);
    Boussinesq2D model(g, 1.0);
    auto s = random_curlfree_state(g, 9);
    for (auto& x : s.eta.v) x *= 0.3;  // keep it comfortably non-cavitating
    IntegratorConfig cfg;
    cfg.dt = 0.005;
    for (int i = 0; i < 200; ++i) s = model.step(s, cfg);
    double uscale = std::max(sobolev_norm(s.u1, 1.0) + sobolev_norm(s.u2, 1.0), 1e-12);
    EXPECT_LE(curl_l2norm(s.u1, s.u2), 1e-8 * uscale);
}

TEST(Step2D, MassConserved) {
    auto g = make_grid_2d(32);
    Boussinesq2D model(g, 1.0);
    auto s = gaussian_state_2d(g, 0.2, g->length[0] / 8.0);
    double m0 = model.mass(s);
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    for (int i = 0; i < 50; ++i) s = model.step(s, cfg);
    EXPECT_NEAR(model.mass(s), m0, 1e-10 * std::max(1.0, std::abs(m0)));
}

TEST(Step2D, NonFiniteStateRaisesBlowup) {
    auto g = make_grid_2d(16);
    Boussinesq2D model(g, 1.0);
    auto s = rest_state_2d(g);
    s.u2.v[3] = std::numeric_limits<double>::infinity();
    s.t = 1.5;
    IntegratorConfig cfg;
    try {
        model.step(s, cfg);
        FAIL() << "expected BlowupError";
    } catch (const BlowupError& e) {
        EXPECT_DOUBLE_EQ(e.t, 1.5);
    }
}
