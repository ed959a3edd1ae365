#include "adjoint_fp/fp_generator.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "adjoint_fp/errors.hpp"
#include "adjoint_fp/parallel.hpp"

namespace adjoint_fp {

FpGenerator::FpGenerator(SchemeSpec scheme, GridFunction frozen, StencilOperator jacobian)
    : scheme_(std::move(scheme)),
      frozen_(std::move(frozen)),
      jacobian_(std::move(jacobian)),
      jacobian_t_(jacobian_.transpose()) {
    double worst = 0.0;
    for (std::size_t r = 0; r < jacobian_.rows(); ++r) worst = std::max(worst, std::abs(jacobian_.diagonal(r)));
    cfl_step_ = worst == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / worst;
}

FpGenerator FpGenerator::linearize(const SchemeSpec& scheme, const GridFunction& U) {
    return linearize(scheme, U, {});
}

FpGenerator FpGenerator::linearize(const SchemeSpec& scheme, const GridFunction& U,
                                   const std::vector<bool>& fixed_nodes) {
    scheme.validate(U.grid());
    const Grid& g = U.grid();
    std::vector<std::vector<RowEntry>> rows(g.size());
    auto in = U.values();
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            if (i < fixed_nodes.size() && fixed_nodes[i]) continue;
            rows[i].reserve(16);
            evaluate_node(scheme, g, in, i, &rows[i]);
        }
    });
    return FpGenerator(scheme, U, StencilOperator(U.grid_ptr(), rows));
}

GridFunction FpGenerator::fp_rhs(const GridFunction& M) const {
    GridFunction k;
    jacobian_t_.apply_into(M, k, -1.0);
    return k;
}

AdjointReport adjoint_defect(const FpGenerator& gen, const std::function<GridFunction(const GridFunction&)>& fp,
                             int trials, std::uint64_t seed, double tol) {
    const GridPtr& grid = gen.frozen_value().grid_ptr();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    AdjointReport rep;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        GridFunction M(grid), W(grid);
        for (std::size_t i = 0; i < M.size(); ++i) {
            M[i] = dist(rng);
            W[i] = dist(rng);
        }
        const GridFunction K = fp(M);
        const GridFunction JW = gen.apply_linearized(W);
        double lhs = 0.0, rhs = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < M.size(); ++i) {
            lhs += K[i] * W[i];
            rhs += M[i] * JW[i];
            scale += std::abs(K[i] * W[i]) + std::abs(M[i] * JW[i]);
        }
        const double vol = grid->cell_volume();
        const double defect = std::abs(lhs + rhs) * vol;
        const double rel = scale > 0.0 ? defect / (scale * vol) : defect;
        rep.max_relative_defect = std::max(rep.max_relative_defect, rel);
    }
    rep.passed = rep.max_relative_defect <= tol;
    return rep;
}

AdjointReport check_adjoint(const FpGenerator& gen, int trials, std::uint64_t seed, double tol) {
    return adjoint_defect(gen, [&gen](const GridFunction& M) { return gen.fp_rhs(M); }, trials, seed, tol);
}

}  // namespace adjoint_fp
