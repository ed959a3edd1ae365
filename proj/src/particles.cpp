#include "adjoint_fp/particles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "adjoint_fp/errors.hpp"
#include "adjoint_fp/parallel.hpp"

namespace adjoint_fp {

void SdeConfig::validate(const Grid& grid) const {
    if (particles < 1) throw ValidationError("particles.count", "must be >= 1");
    if (!(epsilon >= 0.0)) throw ValidationError("scheme.epsilon", "must be >= 0");
    if (!(t_final > 0.0)) throw ValidationError("integrator.t_final", "must be > 0");
    if (!(dt > 0.0) || dt > t_final) throw ValidationError("particles.dt", "must lie in (0, t_final]");
    if (!drift.empty()) {
        if (static_cast<int>(drift.size()) != grid.dim()) throw ValidationError("particles.drift", "needs one component per axis");
        for (const auto& b : drift) {
            if (b.empty() || !same_grid(b.grid(), grid)) throw ValidationError("particles.drift", "must live on the density grid");
        }
    }
    if (boundary == SdeBoundary::PeriodicWrap && !grid.periodic()) {
        throw ValidationError("particles.boundary", "wrap needs a periodic grid");
    }
}

namespace {

double wrap(double x, double lo, double hi) {
    const double L = hi - lo;
    double r = std::fmod(x - lo, L);
    if (r < 0.0) r += L;
    return lo + r;
}

// Lower edge of the cell owned by node coordinate k on an axis.
double cell_lower(const Grid& g, int axis, int k) {
    const double lo = g.domain().lower[static_cast<std::size_t>(axis)];
    const double h = g.dx(axis);
    return g.periodic() ? lo + (k - 0.5) * h : lo + k * h;
}

}  // namespace

ParticleCloud simulate_particles(const SdeConfig& cfg, const GridFunction& rho0) {
    const Grid& g = rho0.grid();
    cfg.validate(g);
    if (rho0.min() < 0.0 || !(total_mass(rho0) > 0.0)) {
        throw ValidationError("initial.rho0", "must be nonnegative with positive mass");
    }
    const int dim = g.dim();
    const Box& box = g.domain();

    std::vector<double> cdf(g.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        acc += rho0[i];
        cdf[i] = acc;
    }
    for (auto& c : cdf) c /= acc;

    const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_final / cfg.dt - 1e-12));
    const double h = cfg.t_final / static_cast<double>(steps);
    const double noise = std::sqrt(2.0 * cfg.epsilon * h);

    ParticleCloud cloud;
    cloud.position.resize(cfg.particles);
    cloud.displacement.resize(cfg.particles);
    std::vector<char> alive(cfg.particles, 1);

    parallel_for(cfg.particles, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                              static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(p >> 32)};
            std::mt19937_64 rng(seq);
            std::uniform_real_distribution<double> uni(0.0, 1.0);
            std::normal_distribution<double> normal(0.0, 1.0);

            const double u = uni(rng);
            auto cell = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            cell = std::min(cell, g.size() - 1);
            while (rho0[cell] == 0.0 && cell + 1 < g.size()) ++cell;
            const auto ij = g.coords(cell);
            Point x{0.0, 0.0};
            for (int a = 0; a < dim; ++a) {
                x[static_cast<std::size_t>(a)] = cell_lower(g, a, ij[static_cast<std::size_t>(a)]) + g.dx(a) * uni(rng);
            }
            if (g.periodic()) {
                for (int a = 0; a < dim; ++a) {
                    const auto k = static_cast<std::size_t>(a);
                    x[k] = wrap(x[k], box.lower[k], box.upper[k]);
                }
            }
            Point d{0.0, 0.0};
            bool live = true;
            for (std::size_t s = 0; s < steps && live; ++s) {
                Point v{0.0, 0.0};
                if (!cfg.drift.empty()) {
                    const auto st = interpolation_stencil(g, x);
                    for (int a = 0; a < dim; ++a) v[static_cast<std::size_t>(a)] = apply_stencil(st, cfg.drift[static_cast<std::size_t>(a)].values());
                }
                for (int a = 0; a < dim; ++a) {
                    const auto k = static_cast<std::size_t>(a);
                    double step = v[k] * h;
                    if (noise > 0.0) step += noise * normal(rng);
                    d[k] += step;
                    x[k] += step;
                    if (cfg.boundary == SdeBoundary::PeriodicWrap) {
                        x[k] = wrap(x[k], box.lower[k], box.upper[k]);
                    } else if (x[k] < box.lower[k] || x[k] > box.upper[k]) {
                        live = false;
                    }
                }
            }
            cloud.position[p] = x;
            cloud.displacement[p] = d;
            alive[p] = live ? 1 : 0;
        }
    }, 1024);
    cloud.alive.assign(alive.begin(), alive.end());
    return cloud;
}

EmpiricalDensity histogram(const ParticleCloud& cloud, const GridPtr& grid, std::size_t initial_count) {
    const Grid& g = *grid;
    EmpiricalDensity out;
    out.density = GridFunction(grid);
    out.particles = initial_count;
    std::size_t survivors = 0;
    for (std::size_t p = 0; p < cloud.position.size(); ++p) {
        if (!cloud.alive[p]) continue;
        ++survivors;
        std::array<int, 2> ij{0, 0};
        for (int a = 0; a < g.dim(); ++a) {
            const auto k = static_cast<std::size_t>(a);
            const double s = (cloud.position[p][k] - g.domain().lower[k]) / g.dx(a);
            int c = g.periodic() ? static_cast<int>(std::floor(s + 0.5)) : static_cast<int>(std::floor(s));
            if (g.periodic()) {
                c %= g.n(a);
                if (c < 0) c += g.n(a);
            } else {
                c = std::clamp(c, 0, g.n(a) - 1);
            }
            ij[k] = c;
        }
        out.density[g.index(ij[0], ij[1])] += 1.0;
    }
    const double scale = 1.0 / (static_cast<double>(initial_count) * g.cell_volume());
    out.density *= scale;
    out.surviving_fraction = static_cast<double>(survivors) / static_cast<double>(initial_count);
    return out;
}

EmpiricalDensity simulate(const SdeConfig& cfg, const GridFunction& rho0) {
    auto cloud = simulate_particles(cfg, rho0);
    auto out = histogram(cloud, rho0.grid_ptr(), cfg.particles);
    out.seed = cfg.seed;
    return out;
}

double compare(const GridFunction& fp_result, const EmpiricalDensity& mc_result) {
    require_same_grid(fp_result, mc_result.density, "compare");
    const double mass = total_mass(fp_result);
    const double scale = mass > 0.0 ? mc_result.surviving_fraction / mass : 1.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i < fp_result.size(); ++i) l1 += std::abs(scale * fp_result[i] - mc_result.density[i]);
    return l1 * fp_result.grid().cell_volume();
}

}  // namespace adjoint_fp
