#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "adjoint_fp/errors.hpp"
#include "adjoint_fp/grid_function.hpp"
#include "adjoint_fp/grid_io.hpp"
#include "oracles.hpp"

using namespace adjoint_fp;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

TEST(Grid, PeriodicLayoutIsRowMajorWithNodesOnTheLowerEdge) {
    const Grid g = Grid::periodic_2d(4, 3, Box{{0.0, 0.0}, {2.0, 3.0}});
    EXPECT_EQ(g.size(), 12u);
    EXPECT_DOUBLE_EQ(g.dx(0), 0.5);
    EXPECT_DOUBLE_EQ(g.dx(1), 1.0);
    EXPECT_DOUBLE_EQ(g.cell_volume(), 0.5);
    EXPECT_EQ(g.index(1, 2), 9u);
    EXPECT_EQ(g.coords(9), (std::array<int, 2>{1, 2}));
    EXPECT_EQ(g.position(9), (Point{0.5, 2.0}));
    EXPECT_EQ(*g.neighbor(g.index(3, 0), 0, +1), g.index(0, 0));
    EXPECT_EQ(*g.neighbor(g.index(0, 0), 1, -1), g.index(0, 2));
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.tag(i), NodeTag::Interior);
}

TEST(Grid, BoundedGridsTagEveryBoundaryNodeOnce) {
    const Grid g = Grid::bounded_2d(30, 10, Box{{0.0, 0.0}, {3.0, 1.0}}, {{Side::Top, 2.25, 3.0}});
    EXPECT_EQ(g.position(0), (Point{0.05, 0.05}));
    EXPECT_FALSE(g.neighbor(0, 0, -1).has_value());
    int exits = 0, walls = 0, interior = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto [a, b] = g.coords(i);
        const bool edge = a == 0 || a == 29 || b == 0 || b == 9;
        EXPECT_EQ(g.is_boundary(i), edge);
        switch (g.tag(i)) {
            case NodeTag::Exit:
                ++exits;
                EXPECT_EQ(b, 9);
                EXPECT_GE(g.position(i)[0], 2.25 - 1e-9);
                break;
            case NodeTag::Wall: ++walls; break;
            case NodeTag::Interior: ++interior; break;
        }
    }
    // Top-row centres 2.25 ... 2.95 lie on the exit segment.
    EXPECT_EQ(exits, 8);
    EXPECT_EQ(exits + walls, 2 * 30 + 2 * 10 - 4);
    EXPECT_EQ(interior, 28 * 8);
}

TEST(Grid, RejectsInvalidShapes) {
    EXPECT_THROW(Grid(3, {4, 4}, Box{}, Topology::Periodic), std::invalid_argument);
    EXPECT_THROW(Grid::periodic_1d(0), std::invalid_argument);
    EXPECT_THROW(Grid::periodic_1d(4, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(Grid::bounded_2d(2, 5, Box{}), std::invalid_argument);
    EXPECT_THROW(Grid(2, {4, 4}, Box{}, Topology::Periodic, {{Side::Top, 0, 1}}), std::invalid_argument);
}

TEST(GridFunction, ArithmeticRequiresASharedGrid) {
    auto a = share(Grid::periodic_1d(8));
    auto b = share(Grid::periodic_1d(9));
    GridFunction f(a, 1.0), g(b, 1.0);
    EXPECT_THROW(f += g, GridMismatch);
    EXPECT_THROW(inner_product(f, g), GridMismatch);
    // Equal grids created separately are compatible.
    GridFunction h(share(Grid::periodic_1d(8)), 2.0);
    EXPECT_DOUBLE_EQ(inner_product(f, h), 2.0);
}

TEST(Calculus, ForwardDifferenceOfConstantVanishes) {
    auto g = share(Grid::periodic_1d(16));
    const auto d = diff_forward(GridFunction(g, 3.5), 0);
    for (double v : d.values()) EXPECT_EQ(v, 0.0);
}

TEST(Calculus, ForwardDifferenceWrapsAtTheLastNode) {
    const int n = 10;
    auto g = share(Grid::periodic_1d(n));
    const auto u = GridFunction::sample(g, [](const Point& p) { return p[0]; });
    const auto d = diff_forward(u, 0);
    for (int i = 0; i < n - 1; ++i) EXPECT_NEAR(d[static_cast<std::size_t>(i)], 1.0, 1e-12);
    EXPECT_NEAR(d[n - 1], -(n - 1), 1e-12);
}

TEST(Calculus, DeltaStencilsMatchHandEvaluation) {
    // Unit spacing: 5x5 grid on [0,5]^2.
    auto g = share(Grid::periodic_2d(5, 5, Box{{0.0, 0.0}, {5.0, 5.0}}));
    GridFunction u(g);
    u[g->index(0, 0)] = 1.0;
    const auto d = diff_forward(u, 0);
    for (std::size_t i = 0; i < g->size(); ++i) {
        double expect = 0.0;
        if (i == g->index(4, 0)) expect = 1.0;
        if (i == g->index(0, 0)) expect = -1.0;
        EXPECT_DOUBLE_EQ(d[i], expect) << i;
    }
    const auto L = neg_laplacian(u);
    for (std::size_t i = 0; i < g->size(); ++i) {
        double expect = 0.0;
        if (i == g->index(0, 0)) expect = 4.0;
        if (i == g->index(1, 0) || i == g->index(4, 0) || i == g->index(0, 1) || i == g->index(0, 4)) expect = -1.0;
        EXPECT_DOUBLE_EQ(L[i], expect) << i;
    }
}

TEST(Calculus, BoundedDifferencesUseZeroGradientGhosts) {
    auto g = share(Grid::bounded_1d(5, 0.0, 1.0));
    const auto u = GridFunction::sample(g, [](const Point& p) { return p[0] * p[0]; });
    EXPECT_EQ(diff_forward(u, 0)[4], 0.0);
    EXPECT_EQ(diff_backward(u, 0)[0], 0.0);
    EXPECT_THROW(diff_forward(u, 1), std::out_of_range);
    EXPECT_THROW(diff_backward(u, -1), std::out_of_range);
}

TEST(Calculus, NegativeLaplacianIsSecondOrderAccurate) {
    std::vector<double> errs;
    for (int n : {16, 32, 64, 128}) {
        auto g = share(Grid::periodic_2d(n, n));
        const auto u = GridFunction::sample(g, [](const Point& p) { return std::sin(two_pi * p[0]); });
        const auto L = neg_laplacian(u);
        double e = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) e = std::max(e, std::abs(L[i] - two_pi * two_pi * u[i]));
        errs.push_back(e);
    }
    for (std::size_t k = 1; k < errs.size(); ++k) EXPECT_GT(std::log2(errs[k - 1] / errs[k]), 1.9);
}

TEST(Calculus, DualityIdentitiesOnTheTorus) {
    std::mt19937_64 rng(3);
    for (auto grid : {share(Grid::periodic_1d(37)), share(Grid::periodic_2d(13, 9, Box{{0, 0}, {2, 1}}))}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto u = oracle::random_function(grid, rng), v = oracle::random_function(grid, rng);
            const auto Lu = neg_laplacian(u), Lv = neg_laplacian(v);
            const double scale = std::abs(inner_product(Lu, v)) + 1.0;
            EXPECT_NEAR(inner_product(Lu, GridFunction(grid, 1.0)), 0.0, 1e-12 * (total_mass(Lu) + scale));
            EXPECT_NEAR(inner_product(Lu, v), inner_product(u, Lv), 1e-12 * scale);
            for (int a = 0; a < grid->dim(); ++a) {
                const double lhs = inner_product(diff_forward(u, a), v);
                const double rhs = -inner_product(u, diff_backward(v, a));
                EXPECT_NEAR(lhs, rhs, 1e-12 * (std::abs(lhs) + 1.0));
            }
        }
    }
}

TEST(Calculus, InnerProductQuadrature) {
    auto g = share(Grid::periodic_2d(20, 20));
    EXPECT_NEAR(inner_product(GridFunction(g, 1.0), GridFunction(g, 1.0)), 1.0, 1e-14);
    GridFunction delta(g);
    delta[g->index(3, 7)] = 1.0 / g->cell_volume();
    const auto w = GridFunction::sample(g, [](const Point& p) { return std::exp(p[0]) + p[1]; });
    EXPECT_NEAR(inner_product(delta, w), w[g->index(3, 7)], 1e-13);
    const auto s = GridFunction::sample(g, [](const Point& p) { return std::sin(two_pi * p[0]); });
    EXPECT_NEAR(total_mass(s), 0.0, 1e-12);
}

TEST(Interpolation, ReproducesNodesMidpointsAndLinears) {
    auto g = share(Grid::periodic_1d(10));
    const auto u = GridFunction::sample(g, [](const Point& p) { return std::cos(two_pi * p[0]); });
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_EQ(interpolate(u, g->position(i)), u[i]);
    EXPECT_DOUBLE_EQ(interpolate(u, {0.05, 0.0}), 0.5 * (u[0] + u[1]));
    // Wrapping.
    EXPECT_NEAR(interpolate(u, {1.05, 0.0}), 0.5 * (u[0] + u[1]), 1e-15);
    EXPECT_NEAR(interpolate(u, {-0.05, 0.0}), 0.5 * (u[9] + u[0]), 1e-15);

    auto b = share(Grid::bounded_2d(8, 6, Box{{0, 0}, {2, 1}}));
    const auto lin = GridFunction::sample(b, [](const Point& p) { return 3.0 * p[0] - 2.0 * p[1] + 1.0; });
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(0.125, 1.875), uy(1.0 / 12, 11.0 / 12);
    for (int k = 0; k < 100; ++k) {
        const Point x{ux(rng), uy(rng)};
        EXPECT_NEAR(interpolate(lin, x), 3.0 * x[0] - 2.0 * x[1] + 1.0, 1e-12);
    }
    // Outside the node hull the query is clamped.
    EXPECT_NEAR(interpolate(lin, {-1.0, 0.5}), interpolate(lin, {0.125, 0.5}), 1e-12);
}

TEST(Interpolation, WeightsAreAPartitionOfUnity) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(-2.0, 3.0);
    const Grid per = Grid::periodic_2d(11, 7);
    const Grid bnd = Grid::bounded_2d(11, 7, Box{});
    for (const Grid* g : {&per, &bnd}) {
        for (int k = 0; k < 1000; ++k) {
            const auto s = interpolation_stencil(*g, {d(rng), d(rng)});
            double sum = 0.0;
            for (int j = 0; j < s.count; ++j) {
                EXPECT_GE(s.weight[static_cast<std::size_t>(j)], 0.0);
                sum += s.weight[static_cast<std::size_t>(j)];
            }
            EXPECT_NEAR(sum, 1.0, 1e-14);
        }
    }
}

TEST(GridIo, CsvRoundTripsExactly) {
    for (auto grid : {share(Grid::periodic_1d(7, -1.0, 2.5)), share(Grid::bounded_2d(5, 4, Box{{0, 0}, {3, 1}}))}) {
        std::mt19937_64 rng(9);
        const auto u = oracle::random_function(grid, rng, -1e3, 1e3);
        std::stringstream ss;
        write_csv(ss, u, "# field=test");
        const auto back = read_csv(ss);
        EXPECT_EQ(back.grid().shape(), grid->shape());
        EXPECT_EQ(back.grid().domain(), grid->domain());
        EXPECT_EQ(back.grid().topology(), grid->topology());
        EXPECT_EQ(back.data(), u.data());
    }
}

TEST(GridIo, HeaderFormat) {
    EXPECT_EQ(grid_header(Grid::periodic_1d(80)), "# grid dim=1 n=80 domain=0,1 topology=periodic");
    EXPECT_EQ(grid_header(Grid::bounded_2d(300, 100, Box{{0, 0}, {3, 1}})),
              "# grid dim=2 n=300,100 domain=0,3;0,1 topology=bounded");
}

TEST(GridIo, ReadRejectsIncompleteFiles) {
    std::stringstream ss("# grid dim=1 n=3 domain=0,1 topology=periodic\n0,1\n1,2\n");
    EXPECT_THROW(read_csv(ss), std::runtime_error);
    std::stringstream bad("not a header\n");
    EXPECT_THROW(read_csv(bad), std::runtime_error);
}

TEST(GridIo, MatrixRowsFollowTheYIndex) {
    auto g = share(Grid::periodic_2d(3, 2));
    GridFunction u(g);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = static_cast<double>(i);
    std::ostringstream os;
    write_matrix(os, u);
    EXPECT_EQ(os.str(), "0 1 2\n3 4 5\n");
}
