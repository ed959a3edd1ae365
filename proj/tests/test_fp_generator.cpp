#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "adjoint_fp/fp_generator.hpp"
#include "oracles.hpp"

using namespace adjoint_fp;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<SchemeSpec> scheme_family(const GridPtr& g, std::mt19937_64& rng) {
    return {
        {PowerNorm{oracle::random_function(g, rng), 2.0}, UpwindFD{}, 0.02},
        {PowerNorm{oracle::random_function(g, rng), 1.5}, UpwindFD{}, 0.0},
        {LinearDrift{{oracle::random_function(g, rng), oracle::random_function(g, rng)}}, UpwindFD{}, 0.01},
        {ScaledQuadratic{oracle::random_function(g, rng, 0.0, 2.0), 0.5}, UpwindFD{}, 0.0},
        {PowerNorm{oracle::random_function(g, rng), 2.0}, SemiLagrangian{}, 0.02},
        {ScaledQuadratic{oracle::random_function(g, rng, 0.0, 2.0), 0.5}, SemiLagrangian{}, 0.01},
    };
}

}  // namespace

TEST(FpGenerator, ConstantValueGivesTheViscousStencil) {
    auto g = share(Grid::periodic_2d(10, 10));
    const double eps = 0.3, dx2 = 0.01;
    SchemeSpec s{PowerNorm{GridFunction(g), 2.0}, UpwindFD{}, eps};
    const auto gen = FpGenerator::linearize(s, GridFunction(g, 1.0));
    const auto& J = gen.jacobian();
    const std::size_t i = g->index(4, 6);
    EXPECT_NEAR(J.coefficient(i, i), 4.0 * eps / dx2, 1e-9);
    for (auto j : {g->index(3, 6), g->index(5, 6), g->index(4, 5), g->index(4, 7)}) {
        EXPECT_NEAR(J.coefficient(i, j), -eps / dx2, 1e-9);
    }
    EXPECT_EQ(J.row_columns(i).size(), 5u);
}

TEST(FpGenerator, JacobianAnnihilatesConstants) {
    auto g = share(Grid::periodic_2d(9, 11));
    std::mt19937_64 rng(11);
    for (const auto& s : scheme_family(g, rng)) {
        const auto gen = FpGenerator::linearize(s, oracle::random_function(g, rng));
        const auto J1 = gen.apply_linearized(GridFunction(g, 1.0));
        for (double v : J1.values()) EXPECT_NEAR(v, 0.0, 1e-10);
    }
}

TEST(FpGenerator, JacobianMatchesFiniteDifferences) {
    // Directional derivatives at nodes whose upwind branch is stable under the
    // perturbation; nodes within 1e-3 of a switch are skipped.
    auto g = share(Grid::periodic_2d(12, 12));
    std::mt19937_64 rng(13);
    const double h = 1e-6;
    SchemeSpec s{PowerNorm{oracle::random_function(g, rng), 2.0}, UpwindFD{}, 0.05};
    const auto U = oracle::random_function(g, rng), W = oracle::random_function(g, rng);
    const auto gen = FpGenerator::linearize(s, U);
    const auto JW = gen.apply_linearized(W);
    const auto Np = apply_N(s, U + h * W), Nm = apply_N(s, U - h * W);
    int checked = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        bool near_switch = false;
        for (int a = 0; a < 2; ++a) {
            near_switch |= std::abs(U[*g->neighbor(i, a, 1)] - U[i]) < 1e-3;
            near_switch |= std::abs(U[i] - U[*g->neighbor(i, a, -1)]) < 1e-3;
        }
        if (near_switch) continue;
        ++checked;
        EXPECT_NEAR(JW[i], (Np[i] - Nm[i]) / (2.0 * h), 1e-5 * (1.0 + std::abs(JW[i])));
    }
    EXPECT_GT(checked, 100);
}

TEST(FpGenerator, SemiLagrangianJacobianMatchesFiniteDifferencesAlmostEverywhere) {
    auto g = share(Grid::periodic_2d(12, 12));
    std::mt19937_64 rng(17);
    const double h = 1e-7;
    SchemeSpec s{PowerNorm{GridFunction(g), 2.0}, SemiLagrangian{}, 0.02};
    const auto U = oracle::random_function(g, rng), W = oracle::random_function(g, rng);
    const auto gen = FpGenerator::linearize(s, U);
    const auto JW = gen.apply_linearized(W);
    const auto Np = apply_N(s, U + h * W), Nm = apply_N(s, U - h * W);
    int agree = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        if (std::abs(JW[i] - (Np[i] - Nm[i]) / (2.0 * h)) <= 1e-4 * (1.0 + std::abs(JW[i]))) ++agree;
    }
    EXPECT_GE(agree, static_cast<int>(0.95 * static_cast<double>(g->size())));
}

TEST(FpGenerator, ConservesMassAndIsMetzler) {
    auto g = share(Grid::periodic_2d(10, 8));
    std::mt19937_64 rng(19);
    for (const auto& s : scheme_family(g, rng)) {
        const auto gen = FpGenerator::linearize(s, oracle::random_function(g, rng));
        const auto M = oracle::random_function(g, rng, 0.0, 1.0);
        EXPECT_NEAR(total_mass(gen.fp_rhs(M)), 0.0, 1e-11);
        const auto& JT = gen.jacobian_transpose();
        for (std::size_t r = 0; r < JT.rows(); ++r) {
            auto cols = JT.row_columns(r);
            auto vals = JT.row_values(r);
            for (std::size_t k = 0; k < cols.size(); ++k) {
                if (cols[k] != r) { EXPECT_GE(-vals[k], -1e-12); }
            }
        }
    }
}

TEST(FpGenerator, CflStepForPureDiffusion) {
    auto g = share(Grid::periodic_2d(16, 16));
    const double eps = 0.1, dx = 1.0 / 16.0;
    SchemeSpec s{PowerNorm{GridFunction(g), 2.0}, UpwindFD{}, eps};
    const auto gen = FpGenerator::linearize(s, GridFunction(g));
    EXPECT_NEAR(gen.cfl_max_step(), dx * dx / (4.0 * eps), 1e-15);
    SchemeSpec still{LinearDrift{{GridFunction(g), GridFunction(g)}}, UpwindFD{}, 0.0};
    EXPECT_TRUE(std::isinf(FpGenerator::linearize(still, GridFunction(g)).cfl_max_step()));
}

TEST(FpGenerator, EulerMatrixIsNonnegativeAtTheCflStep) {
    auto g = share(Grid::periodic_2d(10, 10));
    std::mt19937_64 rng(23);
    for (const auto& s : scheme_family(g, rng)) {
        const auto gen = FpGenerator::linearize(s, oracle::random_function(g, rng));
        const double dt = gen.cfl_max_step();
        // Column e_j of I + dt (-J^T), i.e. one Euler step of a unit mass.
        for (std::size_t j = 0; j < g->size(); j += 7) {
            GridFunction e(g);
            e[j] = 1.0;
            auto step = gen.fp_rhs(e);
            step *= dt;
            step += e;
            EXPECT_GE(step.min(), -1e-13);
        }
    }
}

TEST(FpGenerator, DiscreteAdjointIdentity) {
    auto g = share(Grid::periodic_2d(14, 10));
    std::mt19937_64 rng(29);
    for (const auto& s : scheme_family(g, rng)) {
        const auto gen = FpGenerator::linearize(s, oracle::random_function(g, rng));
        const auto rep = check_adjoint(gen, 20);
        EXPECT_TRUE(rep.passed) << rep.max_relative_defect;
        EXPECT_EQ(rep.trials, 20);
    }
}

TEST(FpGenerator, AdjointCheckRejectsTheUntransposedOperator) {
    auto g = share(Grid::periodic_2d(14, 10));
    std::mt19937_64 rng(31);
    SchemeSpec s{LinearDrift{{oracle::random_function(g, rng), oracle::random_function(g, rng)}}, UpwindFD{}, 0.0};
    const auto gen = FpGenerator::linearize(s, oracle::random_function(g, rng));
    const auto rep = adjoint_defect(gen, [&](const GridFunction& M) { return -1.0 * gen.apply_linearized(M); }, 20);
    EXPECT_FALSE(rep.passed);
    EXPECT_GT(rep.max_relative_defect, 1e-3);
}

TEST(FpGenerator, FixedNodesHaveEmptyRows) {
    auto g = share(Grid::bounded_2d(8, 8, {}));
    SchemeSpec s{PowerNorm{GridFunction(g), 2.0}, UpwindFD{}, 0.1};
    const auto gen = FpGenerator::linearize(s, GridFunction(g), g->boundary_mask());
    for (std::size_t i = 0; i < g->size(); ++i) {
        EXPECT_EQ(gen.jacobian().row_columns(i).empty(), g->is_boundary(i));
    }
}

TEST(FpGenerator, UpwindFpIsConsistentWithTheContinuousEquation) {
    // H = -b.p gives rho_t = -div(b rho) + eps Lap rho. With b of one sign per
    // axis every node is upwinded the same way and the error is first order;
    // where a component of b changes sign the transposed stencil is only
    // consistent in the weak sense.
    const double eps = 0.05;
    std::vector<double> errs;
    for (int n : {32, 64, 128}) {
        auto g = share(Grid::periodic_2d(n, n));
        auto bx = GridFunction::sample(g, [](const Point& p) { return 1.0 + 0.5 * std::sin(two_pi * p[0]); });
        auto by = GridFunction::sample(g, [](const Point& p) { return -0.5 - 0.25 * std::cos(two_pi * p[1]); });
        auto M = GridFunction::sample(g, [](const Point& p) { return 1.0 + 0.5 * std::cos(two_pi * p[0]) * std::sin(two_pi * p[1]); });
        SchemeSpec s{LinearDrift{{bx, by}}, UpwindFD{}, eps};
        const auto K = FpGenerator::linearize(s, GridFunction(g)).fp_rhs(M);
        double e = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            const auto p = g->position(i);
            const double x = two_pi * p[0], y = two_pi * p[1];
            const double m = 1.0 + 0.5 * std::cos(x) * std::sin(y);
            const double mx = -0.5 * two_pi * std::sin(x) * std::sin(y), my = 0.5 * two_pi * std::cos(x) * std::cos(y);
            const double b0 = 1.0 + 0.5 * std::sin(x), b1 = -0.5 - 0.25 * std::cos(y);
            const double div = 0.5 * two_pi * std::cos(x) * m + b0 * mx + 0.25 * two_pi * std::sin(y) * m + b1 * my;
            const double lap = -2.0 * two_pi * two_pi * 0.5 * std::cos(x) * std::sin(y);
            e = std::max(e, std::abs(K[i] - (-div + eps * lap)));
        }
        errs.push_back(e);
    }
    EXPECT_GE(std::log2(errs[0] / errs[1]), 0.9);
    EXPECT_GE(std::log2(errs[1] / errs[2]), 0.9);
}

TEST(FpGenerator, SignChangingDriftIsWeaklyConsistent) {
    // <K, phi> = <M, b.grad phi + eps Lap phi> up to O(dx) for smooth phi.
    const double eps = 0.05;
    std::vector<double> errs;
    for (int n : {32, 64, 128}) {
        auto g = share(Grid::periodic_1d(n));
        auto b = GridFunction::sample(g, [](const Point& p) { return std::sin(two_pi * p[0]); });
        auto M = GridFunction::sample(g, [](const Point& p) { return 1.0 + 0.5 * std::cos(two_pi * p[0]); });
        auto phi = GridFunction::sample(g, [](const Point& p) { return std::sin(two_pi * p[0]) + 0.3 * std::cos(4.0 * std::numbers::pi * p[0]); });
        auto Lphi = GridFunction::sample(g, [&](const Point& p) {
            const double x = p[0];
            const double dphi = two_pi * std::cos(two_pi * x) - 0.3 * 2.0 * two_pi * std::sin(2.0 * two_pi * x);
            const double ddphi = -two_pi * two_pi * std::sin(two_pi * x) - 0.3 * 4.0 * two_pi * two_pi * std::cos(2.0 * two_pi * x);
            return std::sin(two_pi * x) * dphi + eps * ddphi;
        });
        SchemeSpec s{LinearDrift{{b}}, UpwindFD{}, eps};
        const auto K = FpGenerator::linearize(s, GridFunction(g)).fp_rhs(M);
        errs.push_back(std::abs(inner_product(K, phi) - inner_product(M, Lphi)));
    }
    EXPECT_GE(std::log2(errs[0] / errs[1]), 0.8);
    EXPECT_GE(std::log2(errs[1] / errs[2]), 0.8);
}
