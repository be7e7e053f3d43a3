#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "degpar/types.hpp"

namespace degpar {

struct GridSpec {
    int dim = 2;
    double radius = 1.0;  ///< box [-R, R]^dim
    double h = 0.0;
    double dt = 0.0;
    double t_begin = -1.0;
    double t_end = 0.0;
    /// Radius of the ball mask |x| <= domain_radius. Defaults to `radius`.
    std::optional<double> domain_radius;
    /// Upper bound on (spatial nodes) x (time slices).
    std::size_t max_values = 200'000'000;
};

/// Classification of a spatial node relative to the ball mask.
enum class NodeClass : std::uint8_t {
    Exterior = 0,  ///< outside the mask
    Boundary = 1,  ///< inside the mask with a masked-out (or missing) stencil neighbour
    Interior = 2,  ///< full 3^dim stencil inside the mask
};

/// Uniform tensor grid on [-R, R]^dim x [t_begin, t_end] with a ball mask.
/// Node coordinates are computed as x_i = -R + i*h (no accumulation) and
/// time slices as t_k = t_begin + k*dt. Immutable and cheap to copy.
class SpaceTimeGrid {
public:
    static SpaceTimeGrid make(const GridSpec& spec);

    int dim() const { return spec_.dim; }
    double radius() const { return spec_.radius; }
    double domain_radius() const { return *spec_.domain_radius; }
    double h() const { return spec_.h; }
    double dt() const { return spec_.dt; }
    double t_begin() const { return spec_.t_begin; }
    double t_end() const { return spec_.t_end; }
    const GridSpec& spec() const { return spec_; }

    std::size_t nodes_per_axis() const { return n_axis_; }
    std::size_t spatial_size() const { return n_space_; }
    std::size_t time_slices() const { return n_time_; }
    /// Stride between neighbours along `axis`.
    std::size_t stride(int axis) const { return axis == 0 ? 1 : n_axis_; }

    double coord(std::size_t i) const { return -spec_.radius + static_cast<double>(i) * spec_.h; }
    double time(std::size_t k) const { return spec_.t_begin + static_cast<double>(k) * spec_.dt; }
    std::size_t axis_index(std::size_t s, int axis) const { return axis == 0 ? s % n_axis_ : s / n_axis_; }
    std::size_t flat(std::size_t i, std::size_t j = 0) const { return i + n_axis_ * j; }
    Vec2 point(std::size_t s) const;

    NodeClass node_class(std::size_t s) const { return static_cast<NodeClass>((*classes_)[s]); }
    bool in_domain(std::size_t s) const { return node_class(s) != NodeClass::Exterior; }
    bool is_interior(std::size_t s) const { return node_class(s) == NodeClass::Interior; }
    bool is_boundary(std::size_t s) const { return node_class(s) == NodeClass::Boundary; }

    /// Neighbour index along an axis, or nullopt if it leaves the grid.
    std::optional<std::size_t> neighbor(std::size_t s, int axis, int offset) const;
    /// Node whose coordinates match `x` within 1e-9*h.
    std::optional<std::size_t> node_at(const Vec2& x) const;
    /// Slice whose time matches `t` within 1e-9*dt.
    std::optional<std::size_t> slice_at(double t) const;
    /// Nodes of the ball mask, in index order.
    const std::vector<std::size_t>& interior_nodes() const { return *interior_; }
    const std::vector<std::size_t>& boundary_nodes() const { return *boundary_; }

    bool same_layout(const SpaceTimeGrid& other) const;
    std::string describe() const;

private:
    explicit SpaceTimeGrid(const GridSpec& spec);

    GridSpec spec_;
    std::size_t n_axis_ = 0;
    std::size_t n_space_ = 0;
    std::size_t n_time_ = 0;
    std::shared_ptr<const std::vector<std::uint8_t>> classes_;
    std::shared_ptr<const std::vector<std::size_t>> interior_;
    std::shared_ptr<const std::vector<std::size_t>> boundary_;
};

/// Public name for grid construction; equivalent to SpaceTimeGrid::make.
SpaceTimeGrid make_grid(int dim, double radius, double h, double dt, double t_begin, double t_end);

}  // namespace degpar
