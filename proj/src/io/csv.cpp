#include "degpar/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "degpar/error.hpp"

namespace degpar {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
}

namespace {

void write_header(std::ostream& os, int dim) { os << (dim == 2 ? "x,y,t,u\n" : "x,t,u\n"); }

void write_row(std::ostream& os, const SpaceTimeGrid& g, std::size_t s, std::size_t k, double v) {
    const Vec2 x = g.point(s);
    os << format_number(x[0]) << ',';
    if (g.dim() == 2) os << format_number(x[1]) << ',';
    os << format_number(g.time(k)) << ',' << format_number(v) << '\n';
}

struct Rows {
    int dim = 0;
    std::vector<std::array<double, 4>> data;  // x, y, t, u
};

Rows parse_rows(std::istream& is, const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    auto err = [&](const std::string& what) {
        fail(ErrorKind::Config, source + ":" + std::to_string(lineno) + ": " + what);
    };
    Rows rows;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (rows.dim == 0) {
            if (line == "x,y,t,u") rows.dim = 2;
            else if (line == "x,t,u") rows.dim = 1;
            else err("expected header 'x,y,t,u' or 'x,t,u', got '" + line + "'");
            continue;
        }
        std::array<double, 4> r{0.0, 0.0, 0.0, 0.0};
        const int ncol = rows.dim + 2;
        std::stringstream ss(line);
        std::string cell;
        int c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= ncol) err("too many columns");
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v))
                err("not a finite number: '" + cell + "'");
            const int slot = rows.dim == 2 ? c : (c == 0 ? 0 : c + 1);
            r[static_cast<std::size_t>(slot)] = v;
            ++c;
        }
        if (c != ncol) err("expected " + std::to_string(ncol) + " columns");
        rows.data.push_back(r);
    }
    if (rows.dim == 0) fail(ErrorKind::Config, source + ": empty CSV");
    return rows;
}

}  // namespace

void write_field_csv(std::ostream& os, const SpaceTimeField& field, bool domain_only) {
    const SpaceTimeGrid& g = field.grid();
    write_header(os, g.dim());
    for (std::size_t k = 0; k < g.time_slices(); ++k)
        for (std::size_t s = 0; s < g.spatial_size(); ++s)
            if (!domain_only || g.in_domain(s)) write_row(os, g, s, k, field.at(s, k));
}

void write_field_csv(std::ostream& os, const MaskedField& field) {
    const SpaceTimeGrid& g = field.grid();
    write_header(os, g.dim());
    for (std::size_t k = 0; k < g.time_slices(); ++k)
        for (std::size_t s = 0; s < g.spatial_size(); ++s)
            if (field.present(s, k)) write_row(os, g, s, k, field.at(s, k));
}

namespace {

MaskedField fill(const Rows& rows, const SpaceTimeGrid& grid, const std::string& source) {
    if (rows.dim != grid.dim())
        fail(ErrorKind::Config, source + ": CSV dimension does not match the grid dimension");
    MaskedField out(grid);
    for (std::size_t i = 0; i < rows.data.size(); ++i) {
        const auto& r = rows.data[i];
        const auto s = grid.node_at(Vec2{r[0], r[1]});
        const auto k = grid.slice_at(r[2]);
        if (!s || !k) {
            std::ostringstream os;
            os << source << ": row " << i + 1 << " at x=(" << r[0] << "," << r[1] << "), t=" << r[2]
               << " is not a grid node";
            fail(ErrorKind::Config, os.str());
        }
        out.set(*s, *k, r[3]);
    }
    return out;
}

}  // namespace

MaskedField read_field_csv(std::istream& is, const SpaceTimeGrid& grid, const std::string& source) {
    return fill(parse_rows(is, source), grid, source);
}

SpaceTimeField read_field_csv_infer(std::istream& is, const std::string& source) {
    const Rows rows = parse_rows(is, source);
    std::set<double> xs;
    std::set<double> ts;
    double rmax = 0.0;
    double dmax = 0.0;
    for (const auto& r : rows.data) {
        xs.insert(r[0]);
        if (rows.dim == 2) xs.insert(r[1]);
        ts.insert(r[2]);
        rmax = std::max({rmax, std::abs(r[0]), std::abs(r[1])});
        dmax = std::max(dmax, std::hypot(r[0], r[1]));
    }
    auto min_gap = [](const std::set<double>& v) {
        double gap = 0.0;
        for (auto it = std::next(v.begin()); it != v.end(); ++it) {
            const double d = *it - *std::prev(it);
            if (gap == 0.0 || d < gap) gap = d;
        }
        return gap;
    };
    const double h = min_gap(xs);
    if (xs.size() < 3 || !(h > 0.0)) fail(ErrorKind::Config, source + ": cannot infer a spatial step");
    const double t0 = *ts.begin();
    const double t1 = *ts.rbegin();
    const double dt = ts.size() > 1 ? min_gap(ts) : 1.0;
    GridSpec spec;
    spec.dim = rows.dim;
    spec.radius = h * std::round(rmax / h);
    spec.domain_radius = dmax + 1e-9 * h;
    spec.h = h;
    spec.dt = dt;
    spec.t_begin = t0;
    spec.t_end = ts.size() > 1 ? t1 : t0;
    const SpaceTimeGrid grid = SpaceTimeGrid::make(spec);
    const MaskedField m = fill(rows, grid, source);
    std::vector<double> vals(grid.spatial_size() * grid.time_slices(), 0.0);
    for (std::size_t k = 0; k < grid.time_slices(); ++k) {
        for (std::size_t s = 0; s < grid.spatial_size(); ++s) {
            if (m.present(s, k)) vals[k * grid.spatial_size() + s] = m.at(s, k);
            else if (grid.in_domain(s)) {
                std::ostringstream os;
                const Vec2 x = grid.point(s);
                os << source << ": missing value at x=(" << x[0] << "," << x[1] << "), t=" << grid.time(k);
                fail(ErrorKind::Config, os.str());
            }
        }
    }
    return SpaceTimeField(grid, std::move(vals));
}

}  // namespace degpar
