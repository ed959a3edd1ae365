#include "adjoint_fp/grid_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace adjoint_fp {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string grid_header(const Grid& grid) {
    std::ostringstream os;
    os << "# grid dim=" << grid.dim() << " n=" << grid.n(0);
    if (grid.dim() == 2) os << "," << grid.n(1);
    const Box& d = grid.domain();
    os << " domain=" << format_double(d.lower[0]) << "," << format_double(d.upper[0]);
    if (grid.dim() == 2) os << ";" << format_double(d.lower[1]) << "," << format_double(d.upper[1]);
    os << " topology=" << (grid.periodic() ? "periodic" : "bounded");
    return os.str();
}

namespace {

double to_double(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("bad number '" + std::string(s) + "'");
    }
    return v;
}

int to_int(std::string_view s) {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("bad integer '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

}  // namespace

Grid parse_grid_header(std::string_view line) {
    constexpr std::string_view prefix = "# grid ";
    if (line.substr(0, prefix.size()) != prefix) throw std::runtime_error("missing '# grid' header");
    int dim = 0;
    std::array<int, 2> n{1, 1};
    Box box;
    Topology topo = Topology::Periodic;
    for (auto field : split(line.substr(prefix.size()), ' ')) {
        if (field.empty()) continue;
        auto eq = field.find('=');
        if (eq == std::string_view::npos) throw std::runtime_error("malformed grid header field");
        auto key = field.substr(0, eq), val = field.substr(eq + 1);
        if (key == "dim") {
            dim = to_int(val);
        } else if (key == "n") {
            auto parts = split(val, ',');
            for (std::size_t k = 0; k < parts.size() && k < 2; ++k) n[k] = to_int(parts[k]);
        } else if (key == "domain") {
            auto axes = split(val, ';');
            for (std::size_t k = 0; k < axes.size() && k < 2; ++k) {
                auto lh = split(axes[k], ',');
                if (lh.size() != 2) throw std::runtime_error("malformed domain in grid header");
                box.lower[k] = to_double(lh[0]);
                box.upper[k] = to_double(lh[1]);
            }
        } else if (key == "topology") {
            if (val == "periodic") topo = Topology::Periodic;
            else if (val == "bounded") topo = Topology::Bounded;
            else throw std::runtime_error("unknown topology '" + std::string(val) + "'");
        }
    }
    return Grid(dim, n, box, topo);
}

void write_csv(std::ostream& out, const GridFunction& u, std::string_view extra_header) {
    const Grid& g = u.grid();
    out << grid_header(g) << "\n";
    if (!extra_header.empty()) out << extra_header << "\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto c = g.coords(i);
        out << c[0] << ",";
        if (g.dim() == 2) out << c[1] << ",";
        out << format_double(u[i]) << "\n";
    }
}

GridFunction read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty grid function file");
    auto grid = share(parse_grid_header(line));
    GridFunction u(grid);
    std::vector<bool> seen(grid->size(), false);
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto parts = split(line, ',');
        if (static_cast<int>(parts.size()) != grid->dim() + 1) throw std::runtime_error("malformed csv row: " + line);
        int i = to_int(parts[0]);
        int j = grid->dim() == 2 ? to_int(parts[1]) : 0;
        if (i < 0 || i >= grid->n(0) || j < 0 || j >= grid->n(1)) throw std::runtime_error("node out of range: " + line);
        auto idx = grid->index(i, j);
        u[idx] = to_double(parts.back());
        seen[idx] = true;
    }
    for (bool s : seen) {
        if (!s) throw std::runtime_error("grid function file is missing nodes");
    }
    return u;
}

void write_matrix(std::ostream& out, const GridFunction& u) {
    const Grid& g = u.grid();
    for (int j = 0; j < g.n(1); ++j) {
        for (int i = 0; i < g.n(0); ++i) {
            if (i) out << ' ';
            out << format_double(u[g.index(i, j)]);
        }
        out << "\n";
    }
}

}  // namespace adjoint_fp
