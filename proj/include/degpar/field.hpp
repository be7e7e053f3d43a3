#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "degpar/grid.hpp"
#include "degpar/types.hpp"

namespace degpar {

/// Values on one spatial slice of a grid.
class ScalarField {
public:
    ScalarField(SpaceTimeGrid grid, std::vector<double> values);
    static ScalarField sample(const SpaceTimeGrid& grid, const SpaceTimeFunction& fn, double t);

    const SpaceTimeGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t s) const { return values_[s]; }

private:
    SpaceTimeGrid grid_;
    std::vector<double> values_;
};

/// Values on every (space, time) node of a grid; slice-major storage.
class SpaceTimeField {
public:
    /// Rejects NaN/Inf and size mismatches.
    SpaceTimeField(SpaceTimeGrid grid, std::vector<double> values);
    static SpaceTimeField sample(const SpaceTimeGrid& grid, const SpaceTimeFunction& fn);
    static SpaceTimeField constant(const SpaceTimeGrid& grid, double value);

    const SpaceTimeGrid& grid() const { return grid_; }
    double at(std::size_t s, std::size_t k) const { return values_[k * grid_.spatial_size() + s]; }
    std::span<const double> slice(std::size_t k) const;
    std::span<const double> values() const { return values_; }
    ScalarField slice_field(std::size_t k) const;

private:
    SpaceTimeGrid grid_;
    std::vector<double> values_;
};

/// Space-time values with a presence flag per node. Used for residuals
/// (absent at edge nodes) and for sparse boundary data read from CSV.
class MaskedField {
public:
    explicit MaskedField(SpaceTimeGrid grid);

    const SpaceTimeGrid& grid() const { return grid_; }
    bool present(std::size_t s, std::size_t k) const { return present_[index(s, k)] != 0; }
    double at(std::size_t s, std::size_t k) const { return values_[index(s, k)]; }
    void set(std::size_t s, std::size_t k, double v);
    std::size_t count_present() const;

    /// Largest / smallest present value (0 when nothing is present).
    double max_present() const;
    double min_present() const;

private:
    std::size_t index(std::size_t s, std::size_t k) const { return k * grid_.spatial_size() + s; }
    SpaceTimeGrid grid_;
    std::vector<double> values_;
    std::vector<std::uint8_t> present_;
};

/// Read-only access to u(node, slice) that is either stored or evaluated on demand.
class FieldSampler {
public:
    FieldSampler(const SpaceTimeField& field);  // NOLINT(google-explicit-constructor)
    FieldSampler(SpaceTimeGrid grid, SpaceTimeFunction fn);

    const SpaceTimeGrid& grid() const { return grid_; }
    double operator()(std::size_t s, std::size_t k) const {
        return stored_ ? stored_->at(s, k) : fn_(grid_.point(s), grid_.time(k));
    }

private:
    SpaceTimeGrid grid_;
    const SpaceTimeField* stored_ = nullptr;
    SpaceTimeFunction fn_;
};

}  // namespace degpar
