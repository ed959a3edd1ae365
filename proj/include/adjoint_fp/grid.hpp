#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace adjoint_fp {

using Point = std::array<double, 2>;

enum class Topology { Periodic, Bounded };

/// Classification of a node. Periodic grids only have Interior nodes.
enum class NodeTag : std::uint8_t { Interior, Exit, Wall };

/// Sides of a rectangle: Left/Right bound axis 0, Bottom/Top bound axis 1.
enum class Side { Left, Right, Bottom, Top };

/// A piece of one side of a bounded domain through which mass may leave.
/// `from`/`to` are the range of the tangential coordinate (ignored in 1-D).
struct ExitSegment {
    Side side = Side::Top;
    double from = 0.0;
    double to = 0.0;
    friend bool operator==(const ExitSegment&, const ExitSegment&) = default;
};

struct Box {
    Point lower{0.0, 0.0};
    Point upper{1.0, 1.0};
    friend bool operator==(const Box&, const Box&) = default;
};

/**
 * Uniform 1-D or 2-D lattice.
 *
 * Nodes are stored row-major with axis 0 (x) fastest: index = i + n0 * j.
 * Spacing is (upper - lower) / n on each axis. Periodic grids place node i at
 * lower + i*dx; bounded grids place it at the cell centre lower + (i + 1/2)*dx,
 * so the outermost ring of nodes is the boundary and each boundary node is
 * tagged Exit or Wall exactly once.
 */
class Grid {
public:
    Grid(int dim, std::array<int, 2> n, Box domain, Topology topology,
         std::vector<ExitSegment> exits = {});

    static Grid periodic_1d(int n, double lower = 0.0, double upper = 1.0);
    static Grid periodic_2d(int n0, int n1, Box domain = {});
    static Grid bounded_1d(int n, double lower, double upper, std::vector<ExitSegment> exits = {});
    static Grid bounded_2d(int n0, int n1, Box domain, std::vector<ExitSegment> exits = {});

    int dim() const { return dim_; }
    int n(int axis) const { return n_[static_cast<std::size_t>(axis)]; }
    std::array<int, 2> shape() const { return n_; }
    std::size_t size() const { return size_; }
    double dx(int axis) const { return dx_[static_cast<std::size_t>(axis)]; }
    double min_dx() const;
    /// Quadrature weight of one node (dx^dim).
    double cell_volume() const { return cell_volume_; }
    const Box& domain() const { return domain_; }
    Topology topology() const { return topology_; }
    bool periodic() const { return topology_ == Topology::Periodic; }
    const std::vector<ExitSegment>& exits() const { return exits_; }

    std::size_t index(int i, int j = 0) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(j);
    }
    std::array<int, 2> coords(std::size_t idx) const {
        return {static_cast<int>(idx % static_cast<std::size_t>(n_[0])),
                static_cast<int>(idx / static_cast<std::size_t>(n_[0]))};
    }
    Point position(std::size_t idx) const;

    /// Neighbour at offset `step` (+1 or -1) along `axis`; wraps on periodic
    /// grids, empty past the edge of a bounded grid.
    std::optional<std::size_t> neighbor(std::size_t idx, int axis, int step) const;

    NodeTag tag(std::size_t idx) const { return tags_.empty() ? NodeTag::Interior : tags_[idx]; }
    bool is_boundary(std::size_t idx) const { return tag(idx) != NodeTag::Interior; }
    /// Nodes excluded from the interior dynamics (all boundary nodes).
    std::vector<bool> boundary_mask() const;

    friend bool operator==(const Grid& a, const Grid& b);

private:
    int dim_;
    std::array<int, 2> n_;
    Box domain_;
    Topology topology_;
    std::vector<ExitSegment> exits_;
    std::array<double, 2> dx_{1.0, 1.0};
    double cell_volume_ = 1.0;
    std::size_t size_ = 0;
    std::vector<NodeTag> tags_;
};

using GridPtr = std::shared_ptr<const Grid>;

template <typename... Args>
GridPtr make_grid(Args&&... args) {
    return std::make_shared<const Grid>(std::forward<Args>(args)...);
}
inline GridPtr share(Grid grid) { return std::make_shared<const Grid>(std::move(grid)); }

}  // namespace adjoint_fp
