#include "adjoint_fp/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "adjoint_fp/errors.hpp"
#include "adjoint_fp/expression.hpp"
#include "adjoint_fp/grid_io.hpp"

namespace adjoint_fp {

std::string_view command_name(Command c) {
    switch (c) {
        case Command::Fp: return "fp";
        case Command::Mfg: return "mfg";
        case Command::Hughes: return "hughes";
        case Command::Validate: return "validate";
        case Command::Eikonal: return "eikonal";
    }
    return "fp";
}

std::optional<Command> parse_command(std::string_view name) {
    for (Command c : {Command::Fp, Command::Mfg, Command::Hughes, Command::Validate, Command::Eikonal}) {
        if (command_name(c) == name) return c;
    }
    return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

const char* side_name(Side s) {
    switch (s) {
        case Side::Left: return "left";
        case Side::Right: return "right";
        case Side::Bottom: return "bottom";
        case Side::Top: return "top";
    }
    return "top";
}

struct Value {
    std::string text;
    int line = 0;
};

class Reader {
public:
    Reader(std::map<std::string, Value> entries, std::string section)
        : entries_(std::move(entries)), section_(std::move(section)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    const Value& raw(const std::string& key) {
        used_.insert(key);
        return entries_.at(key);
    }

    void str(const std::string& key, std::string& out) {
        if (has(key)) out = raw(key).text;
    }
    void real(const std::string& key, double& out) {
        if (has(key)) out = to_real(raw(key));
    }
    template <typename Int>
    void integer(const std::string& key, Int& out) {
        if (!has(key)) return;
        const auto& v = raw(key);
        Int r{};
        auto res = std::from_chars(v.text.data(), v.text.data() + v.text.size(), r);
        if (res.ec != std::errc{} || res.ptr != v.text.data() + v.text.size()) {
            throw ParseError(v.line, key + ": expected an integer, got '" + v.text + "'");
        }
        out = r;
    }
    void flag(const std::string& key, bool& out) {
        if (!has(key)) return;
        const auto& v = raw(key);
        if (v.text == "true") out = true;
        else if (v.text == "false") out = false;
        else throw ParseError(v.line, key + ": expected true or false");
    }
    template <typename E>
    void choice(const std::string& key, E& out, std::initializer_list<std::pair<const char*, E>> options) {
        if (!has(key)) return;
        const auto& v = raw(key);
        for (const auto& [name, e] : options) {
            if (v.text == name) {
                out = e;
                return;
            }
        }
        throw ParseError(v.line, key + ": unknown value '" + v.text + "'");
    }

    std::vector<double> reals(const Value& v, char sep, const std::string& key) const {
        std::vector<double> out;
        for (auto p : split(v.text, sep)) out.push_back(to_real({std::string(p), v.line}, key));
        return out;
    }

    void finish() const {
        for (const auto& [k, v] : entries_) {
            if (!used_.count(k)) throw ParseError(v.line, "unknown key '" + k + "' in [" + section_ + "]");
        }
    }

    static double to_real(const Value& v, const std::string& key = "value") {
        double r = 0.0;
        auto res = std::from_chars(v.text.data(), v.text.data() + v.text.size(), r);
        if (v.text.empty() || res.ec != std::errc{} || res.ptr != v.text.data() + v.text.size()) {
            throw ParseError(v.line, key + ": expected a number, got '" + v.text + "'");
        }
        return r;
    }

private:
    std::map<std::string, Value> entries_;
    std::string section_;
    std::set<std::string> used_;
};

void read_grid(Reader& r, GridSection& g) {
    if (r.has("n")) {
        const auto& v = r.raw("n");
        auto parts = split(v.text, ',');
        if (parts.empty() || parts.size() > 2) throw ParseError(v.line, "n: expected one or two integers");
        g.dim = static_cast<int>(parts.size());
        g.n = {1, 1};
        for (std::size_t k = 0; k < parts.size(); ++k) {
            int x = 0;
            auto res = std::from_chars(parts[k].data(), parts[k].data() + parts[k].size(), x);
            if (res.ec != std::errc{} || res.ptr != parts[k].data() + parts[k].size()) {
                throw ParseError(v.line, "n: expected integers");
            }
            g.n[k] = x;
        }
    }
    if (r.has("domain")) {
        const auto& v = r.raw("domain");
        auto axes = split(v.text, ';');
        if (static_cast<int>(axes.size()) != g.dim) throw ParseError(v.line, "domain: expected one lo, hi pair per axis");
        for (std::size_t k = 0; k < axes.size(); ++k) {
            auto lh = r.reals({std::string(axes[k]), v.line}, ',', "domain");
            if (lh.size() != 2) throw ParseError(v.line, "domain: expected lo, hi");
            g.domain.lower[k] = lh[0];
            g.domain.upper[k] = lh[1];
        }
    }
    if (g.dim == 1) g.domain.lower[1] = 0.0, g.domain.upper[1] = 1.0;
    r.choice("topology", g.topology, {{"periodic", Topology::Periodic}, {"bounded", Topology::Bounded}});
    if (r.has("exits")) {
        const auto& v = r.raw("exits");
        g.exits.clear();
        for (auto item : split(v.text, ';')) {
            if (item.empty()) continue;
            std::istringstream is{std::string(item)};
            std::string side;
            is >> side;
            ExitSegment seg;
            if (side == "left") seg.side = Side::Left;
            else if (side == "right") seg.side = Side::Right;
            else if (side == "bottom") seg.side = Side::Bottom;
            else if (side == "top") seg.side = Side::Top;
            else throw ParseError(v.line, "exits: unknown side '" + side + "'");
            std::string from, to;
            if (is >> from) {
                if (!(is >> to)) throw ParseError(v.line, "exits: expected '<side> <from> <to>'");
                seg.from = Reader::to_real({from, v.line}, "exits");
                seg.to = Reader::to_real({to, v.line}, "exits");
            }
            g.exits.push_back(seg);
        }
    }
}

void read_scheme(Reader& r, SchemeSection& s) {
    if (r.has("discretization")) {
        bool sl = false;
        r.choice("discretization", sl, {{"upwind", false}, {"semilagrangian", true}});
        s.semi_lagrangian = sl;
    }
    r.choice("hamiltonian", s.hamiltonian,
             {{"power", HamiltonianKind::Power}, {"drift", HamiltonianKind::Drift}, {"quadratic", HamiltonianKind::Quadratic}});
    r.real("alpha", s.alpha);
    r.str("potential", s.potential);
    r.str("drift_x", s.drift_x);
    r.str("drift_y", s.drift_y);
    r.str("coefficient", s.coefficient);
    r.real("shift", s.shift);
    r.real("epsilon", s.epsilon);
    r.integer("sl_directions", s.sl_directions);
    if (r.has("sl_radii")) {
        const auto& v = r.raw("sl_radii");
        s.sl_radii = v.text.empty() ? std::vector<double>{} : r.reals(v, ',', "sl_radii");
    }
}

void read_initial(Reader& r, InitialSection& s) {
    r.str("u0", s.u0);
    r.str("rho0", s.rho0);
    if (r.has("rho0_mass")) {
        double m = 0.0;
        r.real("rho0_mass", m);
        s.rho0_mass = m;
    }
}

void read_integrator(Reader& r, IntegratorSpec& s) {
    r.choice("method", s.method, {{"euler", Method::Euler}, {"rk4", Method::RK4}});
    double safety = s.automatic() ? std::get<AutoStep>(s.dt).safety : AutoStep{}.safety;
    r.real("safety", safety);
    if (r.has("dt")) {
        const auto& v = r.raw("dt");
        if (v.text == "auto") s.dt = AutoStep{safety};
        else s.dt = Reader::to_real(v, "dt");
    } else if (s.automatic()) {
        s.dt = AutoStep{safety};
    }
    if (!s.automatic() && r.has("safety")) {
        throw ParseError(r.raw("safety").line, "safety: only meaningful with dt = auto");
    }
    r.real("t_final", s.t_final);
    r.integer("snapshots", s.snapshot_count);
}

void read_mfg(Reader& r, MfgSection& s) {
    r.choice("coupling", s.congestion, {{"log", false}, {"congestion", true}});
    r.real("alpha", s.alpha);
    r.real("p_bar", s.p_bar);
    r.real("density_floor", s.density_floor);
}

void read_hughes(Reader& r, HughesSection& s) {
    r.real("rho_cap", s.rho_cap);
    r.real("eikonal_tol", s.eikonal_tol);
    r.integer("eikonal_max_iter", s.eikonal_max_iter);
    r.real("wall_value", s.wall_value);
    r.integer("eikonal_every_k", s.eikonal_every_k);
}

void read_particles(Reader& r, ParticleSection& s) {
    r.integer("count", s.count);
    r.real("dt", s.dt);
    r.choice("boundary", s.boundary, {{"wrap", SdeBoundary::PeriodicWrap}, {"absorb", SdeBoundary::Absorb}});
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

RunConfig parse_config(std::string_view text, std::optional<Command> command) {
    std::map<std::string, std::map<std::string, Value>> sections;
    std::map<std::string, int> section_line;
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        // Strip comments outside quotes.
        bool in_quote = false;
        std::size_t cut = line.size();
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quote = !in_quote;
            else if (line[i] == '#' && !in_quote) {
                cut = i;
                break;
            }
        }
        if (in_quote) throw ParseError(line_no, "unterminated string");
        line = trim(line.substr(0, cut));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "malformed section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            static const std::set<std::string> known{"run", "grid", "scheme", "initial", "integrator", "mfg", "hughes", "particles"};
            if (!known.count(current)) throw ParseError(line_no, "unknown section [" + current + "]");
            if (section_line.count(current)) throw ParseError(line_no, "duplicate section [" + current + "]");
            section_line[current] = line_no;
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        if (current.empty()) throw ParseError(line_no, "key outside of any section");
        const std::string key(trim(line.substr(0, eq)));
        std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "missing key");
        if (!value.empty() && value.front() == '"') {
            if (value.size() < 2 || value.back() != '"') throw ParseError(line_no, "malformed quoted value");
            value = value.substr(1, value.size() - 2);
        }
        auto& sec = sections[current];
        if (sec.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
        sec[key] = Value{std::string(value), line_no};
    }

    RunConfig cfg;
    auto reader = [&](const std::string& name) { return Reader(sections.count(name) ? sections[name] : std::map<std::string, Value>{}, name); };

    {
        Reader r = reader("run");
        if (r.has("command")) {
            const auto& v = r.raw("command");
            auto c = parse_command(v.text);
            if (!c) throw ParseError(v.line, "command: unknown command '" + v.text + "'");
            cfg.command = *c;
            if (command && *command != *c) {
                throw ValidationError("run.command", "file is for '" + v.text + "' but '" +
                                                         std::string(command_name(*command)) + "' was requested");
            }
        } else if (command) {
            cfg.command = *command;
        }
        r.str("output_dir", cfg.output_dir);
        r.integer("seed", cfg.seed);
        r.finish();
    }
    {
        Reader r = reader("grid");
        read_grid(r, cfg.grid);
        r.finish();
    }
    {
        Reader r = reader("scheme");
        read_scheme(r, cfg.scheme);
        r.finish();
    }
    {
        Reader r = reader("initial");
        read_initial(r, cfg.initial);
        r.finish();
    }
    {
        Reader r = reader("integrator");
        read_integrator(r, cfg.integrator);
        r.finish();
    }
    {
        Reader r = reader("mfg");
        read_mfg(r, cfg.mfg);
        r.finish();
    }
    {
        Reader r = reader("hughes");
        read_hughes(r, cfg.hughes);
        r.finish();
    }
    {
        Reader r = reader("particles");
        read_particles(r, cfg.particles);
        r.finish();
    }
    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path, std::optional<Command> command) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), command);
}

std::string print_config(const RunConfig& c) {
    std::ostringstream os;
    auto d = [](double v) { return format_double(v); };
    os << "[run]\n";
    os << "command = " << command_name(c.command) << "\n";
    os << "output_dir = " << quoted(c.output_dir) << "\n";
    os << "seed = " << c.seed << "\n\n";

    os << "[grid]\n";
    os << "n = " << c.grid.n[0];
    if (c.grid.dim == 2) os << ", " << c.grid.n[1];
    os << "\ndomain = " << d(c.grid.domain.lower[0]) << ", " << d(c.grid.domain.upper[0]);
    if (c.grid.dim == 2) os << "; " << d(c.grid.domain.lower[1]) << ", " << d(c.grid.domain.upper[1]);
    os << "\ntopology = " << (c.grid.topology == Topology::Periodic ? "periodic" : "bounded") << "\n";
    if (!c.grid.exits.empty()) {
        os << "exits = ";
        for (std::size_t k = 0; k < c.grid.exits.size(); ++k) {
            const auto& e = c.grid.exits[k];
            if (k) os << "; ";
            os << side_name(e.side) << " " << d(e.from) << " " << d(e.to);
        }
        os << "\n";
    }
    os << "\n";

    const auto& s = c.scheme;
    os << "[scheme]\n";
    os << "discretization = " << (s.semi_lagrangian ? "semilagrangian" : "upwind") << "\n";
    os << "hamiltonian = "
       << (s.hamiltonian == HamiltonianKind::Power ? "power" : s.hamiltonian == HamiltonianKind::Drift ? "drift" : "quadratic")
       << "\n";
    os << "alpha = " << d(s.alpha) << "\n";
    os << "potential = " << quoted(s.potential) << "\n";
    os << "drift_x = " << quoted(s.drift_x) << "\n";
    os << "drift_y = " << quoted(s.drift_y) << "\n";
    os << "coefficient = " << quoted(s.coefficient) << "\n";
    os << "shift = " << d(s.shift) << "\n";
    os << "epsilon = " << d(s.epsilon) << "\n";
    os << "sl_directions = " << s.sl_directions << "\n";
    os << "sl_radii = ";
    for (std::size_t k = 0; k < s.sl_radii.size(); ++k) os << (k ? ", " : "") << d(s.sl_radii[k]);
    os << "\n\n";

    os << "[initial]\n";
    os << "u0 = " << quoted(c.initial.u0) << "\n";
    os << "rho0 = " << quoted(c.initial.rho0) << "\n";
    if (c.initial.rho0_mass) os << "rho0_mass = " << d(*c.initial.rho0_mass) << "\n";
    os << "\n";

    const auto& it = c.integrator;
    os << "[integrator]\n";
    os << "method = " << (it.method == Method::Euler ? "euler" : "rk4") << "\n";
    if (it.automatic()) {
        os << "dt = auto\n";
        os << "safety = " << d(std::get<AutoStep>(it.dt).safety) << "\n";
    } else {
        os << "dt = " << d(std::get<double>(it.dt)) << "\n";
    }
    os << "t_final = " << d(it.t_final) << "\n";
    os << "snapshots = " << it.snapshot_count << "\n\n";

    os << "[mfg]\n";
    os << "coupling = " << (c.mfg.congestion ? "congestion" : "log") << "\n";
    os << "alpha = " << d(c.mfg.alpha) << "\n";
    os << "p_bar = " << d(c.mfg.p_bar) << "\n";
    os << "density_floor = " << d(c.mfg.density_floor) << "\n\n";

    os << "[hughes]\n";
    os << "rho_cap = " << d(c.hughes.rho_cap) << "\n";
    os << "eikonal_tol = " << d(c.hughes.eikonal_tol) << "\n";
    os << "eikonal_max_iter = " << c.hughes.eikonal_max_iter << "\n";
    os << "wall_value = " << d(c.hughes.wall_value) << "\n";
    os << "eikonal_every_k = " << c.hughes.eikonal_every_k << "\n\n";

    os << "[particles]\n";
    os << "count = " << c.particles.count << "\n";
    os << "dt = " << d(c.particles.dt) << "\n";
    os << "boundary = " << (c.particles.boundary == SdeBoundary::PeriodicWrap ? "wrap" : "absorb") << "\n";
    return os.str();
}

GridPtr build_grid(const RunConfig& cfg) {
    const auto& g = cfg.grid;
    try {
        return make_grid(g.dim, g.n, g.domain, g.topology, g.exits);
    } catch (const std::invalid_argument& e) {
        throw ValidationError("grid", e.what());
    }
}

SchemeSpec build_scheme(const RunConfig& cfg, const GridPtr& grid) {
    const auto& s = cfg.scheme;
    SchemeSpec spec;
    spec.epsilon = s.epsilon;
    switch (s.hamiltonian) {
        case HamiltonianKind::Power:
            spec.hamiltonian = PowerNorm{sample_expression(s.potential, grid, "scheme.potential"), s.alpha};
            break;
        case HamiltonianKind::Drift: {
            LinearDrift ld;
            ld.velocity.push_back(sample_expression(s.drift_x, grid, "scheme.drift_x"));
            if (grid->dim() == 2) ld.velocity.push_back(sample_expression(s.drift_y, grid, "scheme.drift_y"));
            spec.hamiltonian = std::move(ld);
            break;
        }
        case HamiltonianKind::Quadratic:
            spec.hamiltonian = ScaledQuadratic{sample_expression(s.coefficient, grid, "scheme.coefficient"), s.shift};
            break;
    }
    if (s.semi_lagrangian) {
        SemiLagrangian sl;
        if (s.sl_directions > 0) {
            if (grid->dim() == 2) {
                sl.controls = SemiLagrangian::ring_controls(s.sl_directions, s.sl_radii);
            } else {
                sl.controls.push_back({0.0, 0.0});
                for (double r : s.sl_radii) {
                    sl.controls.push_back({r, 0.0});
                    sl.controls.push_back({-r, 0.0});
                }
            }
        }
        spec.discretization = std::move(sl);
    }
    spec.validate(*grid);
    return spec;
}

GridFunction build_density(const RunConfig& cfg, const GridPtr& grid) {
    GridFunction rho = sample_expression(cfg.initial.rho0, grid, "initial.rho0");
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (grid->is_boundary(i)) rho[i] = 0.0;
    }
    if (cfg.initial.rho0_mass) {
        const double m = total_mass(rho);
        if (!(m > 0.0)) throw ValidationError("initial.rho0_mass", "cannot rescale a density without mass");
        rho *= *cfg.initial.rho0_mass / m;
    }
    return rho;
}

GridFunction build_value(const RunConfig& cfg, const GridPtr& grid) {
    return sample_expression(cfg.initial.u0, grid, "initial.u0");
}

FfmfgConfig build_ffmfg(const RunConfig& cfg) {
    const GridPtr grid = build_grid(cfg);
    FfmfgConfig f;
    if (cfg.mfg.congestion) f.coupling = Congestion{cfg.mfg.alpha, cfg.mfg.p_bar};
    else f.coupling = LogDensity{};
    f.epsilon = cfg.scheme.epsilon;
    f.discretization = build_scheme(cfg, grid).discretization;
    f.u0 = build_value(cfg, grid);
    f.rho0 = build_density(cfg, grid);
    f.integrator = cfg.integrator;
    f.density_floor = cfg.mfg.density_floor;
    return f;
}

HughesConfig build_hughes(const RunConfig& cfg) {
    const GridPtr grid = build_grid(cfg);
    HughesConfig h;
    h.rho0 = build_density(cfg, grid);
    h.rho_cap = cfg.hughes.rho_cap;
    h.epsilon = cfg.scheme.epsilon;
    h.eikonal.tol = cfg.hughes.eikonal_tol;
    h.eikonal.max_iter = cfg.hughes.eikonal_max_iter;
    h.eikonal.wall_value = cfg.hughes.wall_value;
    h.eikonal_every_k = cfg.hughes.eikonal_every_k;
    h.integrator = cfg.integrator;
    return h;
}

SdeConfig build_sde(const RunConfig& cfg, const SchemeSpec& scheme, const GridFunction& u0) {
    SdeConfig s;
    if (const auto* ld = std::get_if<LinearDrift>(&scheme.hamiltonian)) s.drift = ld->velocity;
    else s.drift = optimal_velocity(scheme.hamiltonian, u0);
    s.epsilon = scheme.epsilon;
    s.particles = cfg.particles.count;
    s.dt = cfg.particles.dt;
    s.t_final = cfg.integrator.t_final;
    s.boundary = cfg.particles.boundary;
    s.seed = cfg.seed;
    return s;
}

void validate_config(const RunConfig& cfg) {
    cfg.integrator.validate();
    const GridPtr grid = build_grid(cfg);
    const Grid& g = *grid;
    auto require_exits = [&] {
        if (g.periodic()) throw ValidationError("grid.topology", "this command needs a bounded grid");
        bool any = false;
        for (std::size_t i = 0; i < g.size(); ++i) any |= g.tag(i) == NodeTag::Exit;
        if (!any) throw ValidationError("grid.exits", "no boundary node lies on an exit");
    };
    if (cfg.initial.rho0_mass && !(*cfg.initial.rho0_mass > 0.0)) {
        throw ValidationError("initial.rho0_mass", "must be > 0");
    }
    switch (cfg.command) {
        case Command::Fp:
        case Command::Validate: {
            build_scheme(cfg, grid);
            build_value(cfg, grid);
            const auto rho = build_density(cfg, grid);
            if (rho.min() < 0.0 || !(total_mass(rho) > 0.0)) {
                throw ValidationError("initial.rho0", "must be nonnegative with positive mass");
            }
            if (cfg.command == Command::Validate) {
                const SdeConfig probe{{}, cfg.scheme.epsilon, cfg.particles.count, cfg.particles.dt,
                                      cfg.integrator.t_final, cfg.particles.boundary, cfg.seed};
                probe.validate(g);
            }
            break;
        }
        case Command::Mfg: build_ffmfg(cfg).validate(); break;
        case Command::Hughes:
            require_exits();
            build_hughes(cfg).validate();
            break;
        case Command::Eikonal: {
            require_exits();
            if (!(cfg.hughes.rho_cap > 0.0 && cfg.hughes.rho_cap < 1.0)) {
                throw ValidationError("hughes.rho_cap", "must lie in (0, 1)");
            }
            const auto rho = build_density(cfg, grid);
            if (rho.min() < 0.0) throw ValidationError("initial.rho0", "must be >= 0");
            break;
        }
    }
}

}  // namespace adjoint_fp
