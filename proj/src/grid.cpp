#include "adjoint_fp/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace adjoint_fp {

namespace {

bool on_segment(const ExitSegment& seg, double tangential, int dim) {
    if (dim == 1) return true;
    return tangential >= seg.from - 1e-12 && tangential <= seg.to + 1e-12;
}

}  // namespace

Grid::Grid(int dim, std::array<int, 2> n, Box domain, Topology topology, std::vector<ExitSegment> exits)
    : dim_(dim), n_(n), domain_(domain), topology_(topology), exits_(std::move(exits)) {
    if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
    if (dim_ == 1) {
        n_[1] = 1;
        domain_.lower[1] = 0.0;
        domain_.upper[1] = 1.0;
    }
    for (int a = 0; a < dim_; ++a) {
        const auto k = static_cast<std::size_t>(a);
        if (n_[k] < 1) throw std::invalid_argument("grid needs at least one node per axis");
        dx_[k] = (domain_.upper[k] - domain_.lower[k]) / n_[k];
        if (!(dx_[k] > 0.0)) throw std::invalid_argument("grid spacing must be positive on axis " + std::to_string(a));
    }
    if (topology_ == Topology::Bounded) {
        for (int a = 0; a < dim_; ++a) {
            if (n_[static_cast<std::size_t>(a)] < 3) throw std::invalid_argument("bounded grid needs at least 3 nodes per axis");
        }
    }
    if (topology_ == Topology::Periodic && !exits_.empty()) {
        throw std::invalid_argument("periodic grids have no boundary and cannot carry exits");
    }
    cell_volume_ = dx_[0] * (dim_ == 2 ? dx_[1] : 1.0);
    size_ = static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(n_[1]);

    if (topology_ == Topology::Bounded) {
        tags_.assign(size_, NodeTag::Interior);
        for (std::size_t idx = 0; idx < size_; ++idx) {
            auto [i, j] = coords(idx);
            const Point x = position(idx);
            bool left = i == 0, right = i == n_[0] - 1;
            bool bottom = dim_ == 2 && j == 0, top = dim_ == 2 && j == n_[1] - 1;
            if (!(left || right || bottom || top)) continue;
            bool exit = false;
            for (const auto& seg : exits_) {
                switch (seg.side) {
                    case Side::Left: exit |= left && on_segment(seg, x[1], dim_); break;
                    case Side::Right: exit |= right && on_segment(seg, x[1], dim_); break;
                    case Side::Bottom: exit |= bottom && on_segment(seg, x[0], dim_); break;
                    case Side::Top: exit |= top && on_segment(seg, x[0], dim_); break;
                }
            }
            tags_[idx] = exit ? NodeTag::Exit : NodeTag::Wall;
        }
    }
}

Grid Grid::periodic_1d(int n, double lower, double upper) {
    return Grid(1, {n, 1}, Box{{lower, 0.0}, {upper, 1.0}}, Topology::Periodic);
}

Grid Grid::periodic_2d(int n0, int n1, Box domain) {
    return Grid(2, {n0, n1}, domain, Topology::Periodic);
}

Grid Grid::bounded_1d(int n, double lower, double upper, std::vector<ExitSegment> exits) {
    return Grid(1, {n, 1}, Box{{lower, 0.0}, {upper, 1.0}}, Topology::Bounded, std::move(exits));
}

Grid Grid::bounded_2d(int n0, int n1, Box domain, std::vector<ExitSegment> exits) {
    return Grid(2, {n0, n1}, domain, Topology::Bounded, std::move(exits));
}

double Grid::min_dx() const { return dim_ == 2 ? std::min(dx_[0], dx_[1]) : dx_[0]; }

Point Grid::position(std::size_t idx) const {
    auto [i, j] = coords(idx);
    const double offset = periodic() ? 0.0 : 0.5;
    Point x{domain_.lower[0] + (i + offset) * dx_[0], 0.0};
    if (dim_ == 2) x[1] = domain_.lower[1] + (j + offset) * dx_[1];
    return x;
}

std::optional<std::size_t> Grid::neighbor(std::size_t idx, int axis, int step) const {
    auto c = coords(idx);
    const auto k = static_cast<std::size_t>(axis);
    int m = c[k] + step;
    if (m < 0 || m >= n_[k]) {
        if (!periodic()) return std::nullopt;
        m = ((m % n_[k]) + n_[k]) % n_[k];
    }
    c[k] = m;
    return index(c[0], c[1]);
}

std::vector<bool> Grid::boundary_mask() const {
    std::vector<bool> mask(size_, false);
    for (std::size_t i = 0; i < size_; ++i) mask[i] = is_boundary(i);
    return mask;
}

bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.domain_ == b.domain_ && a.topology_ == b.topology_ &&
           a.tags_ == b.tags_;
}

}  // namespace adjoint_fp
