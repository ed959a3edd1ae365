#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adjoint_fp/ffmfg.hpp"
#include "adjoint_fp/hughes.hpp"
#include "adjoint_fp/particles.hpp"
#include "adjoint_fp/scheme.hpp"
#include "adjoint_fp/time_march.hpp"

namespace adjoint_fp {

enum class Command { Fp, Mfg, Hughes, Validate, Eikonal };
enum class HamiltonianKind { Power, Drift, Quadratic };

struct GridSection {
    int dim = 1;
    std::array<int, 2> n{64, 1};
    Box domain{};
    Topology topology = Topology::Periodic;
    std::vector<ExitSegment> exits;
    friend bool operator==(const GridSection&, const GridSection&) = default;
};

struct SchemeSection {
    bool semi_lagrangian = false;
    HamiltonianKind hamiltonian = HamiltonianKind::Power;
    double alpha = 2.0;
    std::string potential = "0";
    std::string drift_x = "0";
    std::string drift_y = "0";
    std::string coefficient = "1";
    double shift = 0.0;
    double epsilon = 0.0;
    /// 0 keeps the default control set.
    int sl_directions = 0;
    std::vector<double> sl_radii{0.5, 1.0};
    friend bool operator==(const SchemeSection&, const SchemeSection&) = default;
};

struct InitialSection {
    std::string u0 = "0";
    std::string rho0 = "1";
    /// Rescale rho0 to this total mass (after boundary masking).
    std::optional<double> rho0_mass;
    friend bool operator==(const InitialSection&, const InitialSection&) = default;
};

struct MfgSection {
    bool congestion = false;
    double alpha = 1.0;
    double p_bar = 1.0;
    double density_floor = 1e-8;
    friend bool operator==(const MfgSection&, const MfgSection&) = default;
};

struct HughesSection {
    double rho_cap = 0.99;
    double eikonal_tol = 1e-8;
    int eikonal_max_iter = 0;
    double wall_value = 1e6;
    int eikonal_every_k = 1;
    friend bool operator==(const HughesSection&, const HughesSection&) = default;
};

struct ParticleSection {
    std::size_t count = 100000;
    double dt = 1e-3;
    SdeBoundary boundary = SdeBoundary::PeriodicWrap;
    friend bool operator==(const ParticleSection&, const ParticleSection&) = default;
};

/**
 * Parsed run file. Sections are `[run] [grid] [scheme] [initial]
 * [integrator] [mfg] [hughes] [particles]`, each holding `key = value`
 * lines; `#` starts a comment and string values may be double-quoted.
 */
struct RunConfig {
    Command command = Command::Fp;
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    GridSection grid;
    SchemeSection scheme;
    InitialSection initial;
    IntegratorSpec integrator;
    MfgSection mfg;
    HughesSection hughes;
    ParticleSection particles;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ParseError for syntax errors and ValidationError for values that
/// are well-formed but unusable. Expressions are checked by sampling them.
/// `command`, when given, supplies the command if [run] has none and must
/// match it otherwise.
RunConfig parse_config(std::string_view text, std::optional<Command> command = std::nullopt);
RunConfig load_config(const std::string& path, std::optional<Command> command = std::nullopt);

/// Canonical text: parse_config(print_config(c)) == c.
std::string print_config(const RunConfig& cfg);

/// Semantic checks tying sections to the command.
void validate_config(const RunConfig& cfg);

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);

// Builders from a validated configuration.
GridPtr build_grid(const RunConfig& cfg);
SchemeSpec build_scheme(const RunConfig& cfg, const GridPtr& grid);
/// rho0 sampled, zeroed on boundary nodes and rescaled to rho0_mass if set.
GridFunction build_density(const RunConfig& cfg, const GridPtr& grid);
GridFunction build_value(const RunConfig& cfg, const GridPtr& grid);
FfmfgConfig build_ffmfg(const RunConfig& cfg);
/// HughesConfig stores rho0 by value; the grid comes from [grid].
HughesConfig build_hughes(const RunConfig& cfg);
/// Drift for the particle run: the LinearDrift field, or -D_pH(x, Du0).
SdeConfig build_sde(const RunConfig& cfg, const SchemeSpec& scheme, const GridFunction& u0);

}  // namespace adjoint_fp
