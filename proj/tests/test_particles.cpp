#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "adjoint_fp/errors.hpp"
#include "adjoint_fp/particles.hpp"
#include "oracles.hpp"

using namespace adjoint_fp;

namespace {

GridFunction bumpy_density(const GridPtr& g) {
    return GridFunction::sample(g, [](const Point& p) {
        return 1.0 + 0.8 * std::sin(2.0 * std::numbers::pi * p[0]) + (p[0] > 0.5 ? 0.5 : 0.0);
    });
}

}  // namespace

TEST(Particles, NoDynamicsKeepsTheResampledDensity) {
    auto g = share(Grid::periodic_1d(32));
    auto rho0 = bumpy_density(g);
    for (std::size_t i = 0; i < 8; ++i) rho0[i] = 0.0;
    SdeConfig cfg;
    cfg.particles = 20000;
    cfg.dt = 0.05;
    cfg.t_final = 0.5;
    const auto cloud = simulate_particles(cfg, rho0);
    for (const auto& d : cloud.displacement) EXPECT_EQ(d, (Point{0.0, 0.0}));
    const auto hist = histogram(cloud, g, cfg.particles);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(hist.density[i], 0.0);
    EXPECT_NEAR(total_mass(hist.density), 1.0, 1e-12);
    EXPECT_EQ(hist.surviving_fraction, 1.0);
    // Multinomial sampling noise over 24 occupied cells.
    EXPECT_LT(compare(rho0, hist), 3.0 * std::sqrt(24.0 / 20000.0));
}

TEST(Particles, BrownianVariance) {
    auto g = share(Grid::periodic_2d(32, 32));
    GridFunction rho0(g);
    rho0[g->index(16, 16)] = 1.0;
    SdeConfig cfg;
    cfg.epsilon = 0.05;
    cfg.particles = 100000;
    cfg.dt = 0.01;
    cfg.t_final = 0.5;
    cfg.seed = 42;
    const auto cloud = simulate_particles(cfg, rho0);
    const double n = static_cast<double>(cfg.particles);
    for (std::size_t a = 0; a < 2; ++a) {
        double mean = 0.0, sq = 0.0;
        for (const auto& d : cloud.displacement) mean += d[a];
        mean /= n;
        for (const auto& d : cloud.displacement) sq += (d[a] - mean) * (d[a] - mean);
        const double var = sq / (n - 1.0);
        const double target = 2.0 * cfg.epsilon * cfg.t_final;
        EXPECT_NEAR(var, target, 3.0 * target * std::sqrt(2.0 / (n - 1.0))) << "axis " << a;
    }
}

TEST(Particles, ConstantDriftTranslates) {
    const int n = 64;
    auto g = share(Grid::periodic_1d(n));
    const auto rho0 = bumpy_density(g);
    SdeConfig cfg;
    cfg.particles = 100000;
    cfg.dt = 1e-3;
    cfg.t_final = 0.25;
    cfg.drift = {GridFunction(g, 1.0)};
    const auto moved = simulate(cfg, rho0);
    GridFunction shifted(g);
    for (int i = 0; i < n; ++i) shifted[static_cast<std::size_t>((i + n / 4) % n)] = rho0[static_cast<std::size_t>(i)];
    const double budget = 2.0 / std::sqrt(static_cast<double>(cfg.particles)) +
                          3.0 * std::sqrt(static_cast<double>(n) / static_cast<double>(cfg.particles));
    EXPECT_LE(compare(shifted, moved), budget);
    // Exactly 16 cells: the histogram itself moves, apart from particles that
    // sit within rounding of a cell edge.
    cfg.drift = {GridFunction(g, 0.0)};
    const auto still = simulate(cfg, rho0);
    GridFunction still_shifted(g);
    for (int i = 0; i < n; ++i) {
        still_shifted[static_cast<std::size_t>((i + n / 4) % n)] = still.density[static_cast<std::size_t>(i)];
    }
    EXPECT_LE(oracle::l1(still_shifted, moved.density), 1e-3);
}

TEST(Particles, SeedDeterminism) {
    auto g = share(Grid::periodic_2d(16, 16));
    std::mt19937_64 rng(3);
    SdeConfig cfg;
    cfg.drift = {oracle::random_function(g, rng), oracle::random_function(g, rng)};
    cfg.epsilon = 0.02;
    cfg.particles = 5000;
    cfg.dt = 0.01;
    cfg.t_final = 0.1;
    cfg.seed = 7;
    const auto rho0 = oracle::random_function(g, rng, 0.0, 1.0);
    const auto a = simulate(cfg, rho0), b = simulate(cfg, rho0);
    EXPECT_EQ(a.density, b.density);
    EXPECT_EQ(a.seed, 7u);
    EXPECT_EQ(a.particles, 5000u);
    cfg.seed = 8;
    EXPECT_FALSE(simulate(cfg, rho0).density == a.density);
}

TEST(Particles, WrapConservesMass) {
    auto g = share(Grid::periodic_2d(16, 16));
    SdeConfig cfg;
    cfg.drift = {GridFunction(g, 3.0), GridFunction(g, -2.0)};
    cfg.epsilon = 0.2;
    cfg.particles = 3000;
    cfg.dt = 0.01;
    cfg.t_final = 0.5;
    const auto out = simulate(cfg, GridFunction(g, 1.0));
    EXPECT_EQ(out.surviving_fraction, 1.0);
    EXPECT_NEAR(total_mass(out.density), 1.0, 1e-12);
}

TEST(Particles, AbsorbedMassIsNonincreasingInTime) {
    auto g = share(Grid::bounded_2d(20, 20, {}));
    SdeConfig cfg;
    cfg.boundary = SdeBoundary::Absorb;
    cfg.drift = {GridFunction(g, 0.5), GridFunction(g, 0.0)};
    cfg.epsilon = 0.05;
    cfg.particles = 4000;
    cfg.dt = 0.01;
    double prev = 1.0;
    for (double T : {0.1, 0.2, 0.3, 0.4}) {
        cfg.t_final = T;
        const auto out = simulate(cfg, GridFunction(g, 1.0));
        EXPECT_LE(out.surviving_fraction, prev);
        EXPECT_NEAR(total_mass(out.density), out.surviving_fraction, 1e-12);
        prev = out.surviving_fraction;
    }
    EXPECT_LT(prev, 1.0);
}

TEST(Particles, CompareIdentityDisjointAndMismatch) {
    auto g = share(Grid::periodic_1d(10));
    GridFunction a(g), b(g);
    a[2] = 10.0;
    b[7] = 10.0;
    EXPECT_EQ(compare(a, EmpiricalDensity{a, 1.0, 0, 1}), 0.0);
    EXPECT_NEAR(compare(a, EmpiricalDensity{b, 1.0, 0, 1}), 2.0, 1e-12);
    // The FP side is rescaled to the surviving fraction.
    GridFunction half = b;
    half *= 0.5;
    EXPECT_NEAR(compare(b, EmpiricalDensity{half, 0.5, 0, 1}), 0.0, 1e-12);
    EXPECT_THROW(compare(a, EmpiricalDensity{GridFunction(share(Grid::periodic_1d(11))), 1.0, 0, 1}), GridMismatch);
}

TEST(Particles, ValidationRejectsBadConfigurations) {
    auto g = share(Grid::periodic_1d(10));
    const GridFunction rho(g, 1.0);
    SdeConfig cfg;
    cfg.particles = 0;
    EXPECT_THROW(simulate(cfg, rho), ValidationError);
    cfg = {};
    cfg.dt = 2.0;
    EXPECT_THROW(simulate(cfg, rho), ValidationError);
    cfg = {};
    cfg.drift = {GridFunction(g), GridFunction(g)};
    EXPECT_THROW(simulate(cfg, rho), ValidationError);
    cfg = {};
    EXPECT_THROW(simulate(cfg, GridFunction(g)), ValidationError);
    cfg = {};
    EXPECT_THROW(simulate(cfg, GridFunction(share(Grid::bounded_1d(10, 0.0, 1.0)), 1.0)), ValidationError);
}
