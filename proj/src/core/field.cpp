#include "degpar/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "degpar/error.hpp"

namespace degpar {

namespace {

void check_finite(std::span<const double> values, std::size_t ns) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            std::ostringstream os;
            os << "non-finite field value at space index " << i % ns << ", slice " << i / ns;
            fail(ErrorKind::Numerical, os.str());
        }
    }
}

}  // namespace

ScalarField::ScalarField(SpaceTimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    require(values_.size() == grid_.spatial_size(), "scalar field size does not match grid");
    check_finite(values_, grid_.spatial_size());
}

ScalarField ScalarField::sample(const SpaceTimeGrid& grid, const SpaceTimeFunction& fn, double t) {
    std::vector<double> v(grid.spatial_size());
    for (std::size_t s = 0; s < v.size(); ++s) v[s] = fn(grid.point(s), t);
    return ScalarField(grid, std::move(v));
}

SpaceTimeField::SpaceTimeField(SpaceTimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    require(values_.size() == grid_.spatial_size() * grid_.time_slices(), "space-time field size does not match grid");
    check_finite(values_, grid_.spatial_size());
}

SpaceTimeField SpaceTimeField::sample(const SpaceTimeGrid& grid, const SpaceTimeFunction& fn) {
    const std::size_t ns = grid.spatial_size();
    std::vector<double> v(ns * grid.time_slices());
    for (std::size_t k = 0; k < grid.time_slices(); ++k) {
        const double t = grid.time(k);
        for (std::size_t s = 0; s < ns; ++s) v[k * ns + s] = fn(grid.point(s), t);
    }
    return SpaceTimeField(grid, std::move(v));
}

SpaceTimeField SpaceTimeField::constant(const SpaceTimeGrid& grid, double value) {
    return SpaceTimeField(grid, std::vector<double>(grid.spatial_size() * grid.time_slices(), value));
}

std::span<const double> SpaceTimeField::slice(std::size_t k) const {
    const std::size_t ns = grid_.spatial_size();
    return std::span<const double>(values_).subspan(k * ns, ns);
}

ScalarField SpaceTimeField::slice_field(std::size_t k) const {
    auto s = slice(k);
    return ScalarField(grid_, std::vector<double>(s.begin(), s.end()));
}

MaskedField::MaskedField(SpaceTimeGrid grid)
    : grid_(std::move(grid)),
      values_(grid_.spatial_size() * grid_.time_slices(), 0.0),
      present_(grid_.spatial_size() * grid_.time_slices(), 0) {}

void MaskedField::set(std::size_t s, std::size_t k, double v) {
    if (!std::isfinite(v)) fail(ErrorKind::Numerical, "non-finite value written to masked field");
    values_[index(s, k)] = v;
    present_[index(s, k)] = 1;
}

std::size_t MaskedField::count_present() const {
    return static_cast<std::size_t>(std::count(present_.begin(), present_.end(), std::uint8_t{1}));
}

double MaskedField::max_present() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (present_[i]) m = std::max(m, values_[i]);
    return std::isfinite(m) ? m : 0.0;
}

double MaskedField::min_present() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (present_[i]) m = std::min(m, values_[i]);
    return std::isfinite(m) ? m : 0.0;
}

FieldSampler::FieldSampler(const SpaceTimeField& field) : grid_(field.grid()), stored_(&field) {}

FieldSampler::FieldSampler(SpaceTimeGrid grid, SpaceTimeFunction fn) : grid_(std::move(grid)), fn_(std::move(fn)) {}

}  // namespace degpar
