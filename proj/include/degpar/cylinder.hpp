#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "degpar/grid.hpp"
#include "degpar/types.hpp"

namespace degpar {

/// B_ρ(x₀) × (t₀ − ρ^θ, t₀].
struct IntrinsicCylinder {
    Vec2 center{0.0, 0.0};
    double t0 = 0.0;
    double radius = 0.0;
    double theta = 2.0;

    double depth() const;
    void validate() const;
};

struct NodeRef {
    std::size_t space = 0;
    std::size_t time = 0;
    bool operator==(const NodeRef&) const = default;
    // slice-major, matching field storage
    std::strong_ordering operator<=>(const NodeRef& o) const {
        if (auto c = time <=> o.time; c != 0) return c;
        return space <=> o.space;
    }
};

/// All grid nodes with |x - x₀| <= ρ and t in (t₀ - ρ^θ, t₀], sorted by (time, space).
/// An empty vector means the cylinder misses the grid.
std::vector<NodeRef> cylinder_nodes(const SpaceTimeGrid& grid, const IntrinsicCylinder& cyl);

/// Lateral shell (ρ - h < |x - x₀| <= ρ) at every slice of the cylinder, plus every
/// spatial node of the cylinder at its bottom slice. Sorted, without duplicates.
std::vector<NodeRef> parabolic_boundary_nodes(const SpaceTimeGrid& grid, const IntrinsicCylinder& cyl);

}  // namespace degpar
