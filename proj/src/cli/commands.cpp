#include "degpar/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "degpar/analysis.hpp"
#include "degpar/barriers.hpp"
#include "degpar/compare.hpp"
#include "degpar/csv.hpp"
#include "degpar/dpp.hpp"
#include "degpar/error.hpp"
#include "degpar/exact.hpp"
#include "degpar/fdsolver.hpp"

namespace degpar::cli {

namespace {

Schema build_schema() {
    using VT = ValueType;
    Schema s;
    s.add("grid.dim", VT::Integer, "2", "spatial dimension (1 or 2)")
        .add("grid.radius", VT::Real, "1", "half-width R of the box [-R,R]^dim")
        .add("grid.domain_radius", VT::Real, std::nullopt, "radius of the ball domain (default R)")
        .add("grid.h", VT::Real, "1/32", "spatial step")
        .add("grid.dt", VT::Real, "1/256", "output slice interval")
        .add("grid.t_begin", VT::Real, "-1/16")
        .add("grid.t_end", VT::Real, "0")
        .add("exps.p", VT::Real, "3")
        .add("exps.p_tilde", VT::Real, std::nullopt, "defaults to p - 2")
        .add("exps.q_tilde", VT::Real, "2")
        .add("coeff.kind", VT::Text, "constant", "constant | sinusoidal")
        .add("coeff.a", VT::Real, "1", "constant value, or the base of the sinusoid")
        .add("coeff.amplitude", VT::Real, "0.25")
        .add("coeff.frequency", VT::Real, "1")
        .add("problem.reference", VT::Text, "sharp", "sharp | heat | affine | none")
        .add("problem.k1", VT::Real, "3.141592653589793", "heat wave vector")
        .add("problem.k2", VT::Real, "0")
        .add("problem.b1", VT::Real, "1", "affine slope")
        .add("problem.b2", VT::Real, "0")
        .add("problem.c", VT::Real, "0", "affine offset")
        .add("data.g", VT::Text, "reference", "reference | quadratic | csv")
        .add("data.g_scale", VT::Real, "1", "quadratic data g = scale |x|^2")
        .add("data.g_file", VT::Text, std::nullopt, "field CSV with the boundary data")
        .add("data.f", VT::Text, "reference", "reference | constant")
        .add("data.f_value", VT::Real, "0")
        .add("solver.cfl_safety", VT::Real, "0.9")
        .add("solver.auto_clamp", VT::Boolean, "true")
        .add("solver.grad_cap", VT::Real, std::nullopt, "default 2 Lip(g) + 1")
        .add("solver.max_steps", VT::Integer, "50000000")
        .add("solver.divergence_cap", VT::Real, "1e8")
        .add("solver.epsilon", VT::Real, std::nullopt, "default max(1e-6, h^2)")
        .add("solver.curvature_weight", VT::Real, "0.5")
        .add("dpp.eps", VT::Real, "0.1")
        .add("dpp.p", VT::Real, "2")
        .add("dpp.n", VT::Integer, "1")
        .add("dpp.diffusion", VT::Real, "2", "c in the time remap t = tau / (c (n + p))")
        .add("dpp.t_end", VT::Real, "0.05", "horizon in the DPP clock")
        .add("analyze.source", VT::Text, "reference", "reference | csv | solve")
        .add("analyze.file", VT::Text, std::nullopt)
        .add("analyze.center_x", VT::Real, "0")
        .add("analyze.center_y", VT::Real, "0")
        .add("analyze.t0", VT::Real, "0")
        .add("analyze.theta", VT::Real, std::nullopt, "default (2+p_tilde)/(1+p_tilde)")
        .add("analyze.radii", VT::Text, "1/2,1/4,1/8,1/16,1/32")
        .add("verify.h_list", VT::Text, "1/32,1/64,1/128")
        .add("verify.t_span", VT::Real, "1/64")
        .add("verify.min_ratio", VT::Real, "1.5")
        .add("verify.max_error", VT::Real, "5e-2")
        .add("verify.exclusion", VT::Real, "4", "errors are measured at |x| >= exclusion * h")
        .add("verify.residual_radius", VT::Real, "1/4", "residuals are measured at |x| >= this radius")
        .add("barrier.kind", VT::Text, "nondeg", "nondeg | time_holder")
        .add("barrier.c0", VT::Real, "1")
        .add("barrier.c_scale", VT::Real, "1")
        .add("barrier.f_bound", VT::Real, "-1")
        .add("barrier.eta", VT::Real, "1")
        .add("barrier.lip", VT::Real, "1")
        .add("barrier.sup_u", VT::Real, "1")
        .add("barrier.sup_f", VT::Real, "0")
        .add("compare.scenario", VT::Text, "audit", "audit | perron")
        .add("compare.pairs", VT::Integer, "0", "0: the configured data; N: N seeded random pairs")
        .add("compare.seed", VT::Integer, "20240601")
        .add("compare.margin", VT::Real, "1e-3")
        .add("compare.g_shift", VT::Real, "0")
        .add("compare.f_shift", VT::Real, "0")
        .add("compare.perron_gap", VT::Real, "0.05")
        .add("compare.super_dip", VT::Real, "0")
        .add("sweep.deltas", VT::Text, "0.1,0.05,0.025")
        .add("sweep.target", VT::Text, "both", "coefficient | source | both");
    return s;
}

class Report {
public:
    void add(const std::string& key, double v) { lines_.emplace_back(key, format_number(v)); }
    void add(const std::string& key, const std::string& v) { lines_.emplace_back(key, v); }
    void add(const std::string& key, const char* v) { lines_.emplace_back(key, v); }
    void add(const std::string& key, std::size_t v) { lines_.emplace_back(key, std::to_string(v)); }
    void add(const std::string& key, bool v) { lines_.emplace_back(key, v ? "true" : "false"); }
    void write(std::ostream& os) const {
        for (const auto& [k, v] : lines_) os << k << " = " << v << '\n';
    }

private:
    std::vector<std::pair<std::string, std::string>> lines_;
};

std::string where(const SpaceTimeGrid& g, const NodeRef& n) {
    const Vec2 x = g.point(n.space);
    std::ostringstream os;
    os << "x=(" << format_number(x[0]);
    if (g.dim() == 2) os << "," << format_number(x[1]);
    os << ") t=" << format_number(g.time(n.time));
    return os.str();
}

struct Context {
    const Options& opts;
    Config cfg;
    std::ostream& out;
    std::ostream& err;

    std::filesystem::path file(const std::string& name) const {
        std::filesystem::create_directories(opts.out_dir);
        return std::filesystem::path(opts.out_dir) / name;
    }
    void finish(const Report& rep, const std::string& name) const {
        rep.write(out);
        std::ofstream f(file(name));
        rep.write(f);
    }
};

Exponents exponents(const Config& c) {
    const double p = c.real("exps.p");
    const double pt = c.real_opt("exps.p_tilde").value_or(p - 2.0);
    return Exponents::make(p, pt, c.real("exps.q_tilde"));
}

CoefficientField coefficient(const Config& c) {
    const std::string kind = c.text("coeff.kind");
    if (kind == "constant") return CoefficientField::constant(c.real("coeff.a"));
    if (kind == "sinusoidal")
        return CoefficientField::sinusoidal(c.real("coeff.a"), c.real("coeff.amplitude"), c.real("coeff.frequency"));
    fail(ErrorKind::Config, "coeff.kind must be 'constant' or 'sinusoidal', got '" + kind + "'");
}

SpaceTimeGrid grid_from(const Config& c) {
    GridSpec spec;
    spec.dim = static_cast<int>(c.integer("grid.dim"));
    spec.radius = c.real("grid.radius");
    spec.domain_radius = c.real_opt("grid.domain_radius");
    spec.h = c.real("grid.h");
    spec.dt = c.real("grid.dt");
    spec.t_begin = c.real("grid.t_begin");
    spec.t_end = c.real("grid.t_end");
    return SpaceTimeGrid::make(spec);
}

SolveConfig solve_config(const Config& c, const SpaceTimeGrid& grid, unsigned threads) {
    SolveConfig sc;
    sc.cfl_safety = c.real("solver.cfl_safety");
    sc.auto_clamp = c.boolean("solver.auto_clamp");
    sc.grad_cap = c.real_opt("solver.grad_cap");
    const long steps = c.integer("solver.max_steps");
    if (steps <= 0) fail(ErrorKind::Config, "solver.max_steps must be positive");
    sc.max_steps = static_cast<std::size_t>(steps);
    sc.divergence_cap = c.real("solver.divergence_cap");
    sc.threads = threads;
    if (c.explicitly_set("solver.epsilon") || c.explicitly_set("solver.curvature_weight")) {
        RegularizationPolicy reg = RegularizationPolicy::for_step(grid.h());
        if (auto e = c.real_opt("solver.epsilon")) reg.epsilon = *e;
        reg.curvature_weight = c.real("solver.curvature_weight");
        sc.reg = reg;
    }
    sc.validate();
    return sc;
}

struct Problem {
    Exponents exps;
    CoefficientField coeff;
    SpaceTimeGrid grid;
    std::optional<ReferenceSolution> ref;
    SpaceTimeFunction g_fn;
    bool g_time_independent = false;
    std::optional<MaskedField> g_table;
    SpaceTimeFunction f;
    bool f_time_independent = false;

    DataSource g() const { return g_table ? DataSource(*g_table) : DataSource(g_fn, g_time_independent); }
    DataSource source() const { return DataSource(f, f_time_independent); }
};

std::optional<ReferenceSolution> reference(const Config& c, int dim, const Exponents& exps,
                                           const CoefficientField& coeff) {
    const std::string name = c.text("problem.reference");
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    if (name == "sharp") {
        if (!same(exps.p_tilde(), exps.p() - 2.0))
            fail(ErrorKind::Config, "the sharp example needs exps.p_tilde = exps.p - 2");
        return sharp_example(dim, exps.p(), exps.q_tilde());
    }
    if (name == "heat") {
        if (!same(exps.p(), 2.0) || exps.p_tilde() != 0.0 || exps.q_tilde() != 0.0)
            fail(ErrorKind::Config, "the heat reference needs exps.p = 2, exps.p_tilde = 0, exps.q_tilde = 0");
        return heat_reference(Vec2{c.real("problem.k1"), c.real("problem.k2")}, dim);
    }
    if (name == "affine")
        return affine_solution(Vec2{c.real("problem.b1"), c.real("problem.b2")}, c.real("problem.c"), dim, exps, coeff);
    if (name == "none") return std::nullopt;
    fail(ErrorKind::Config, "problem.reference must be sharp, heat, affine or none, got '" + name + "'");
}

MaskedField read_table(const Config& c, const SpaceTimeGrid& grid) {
    if (!c.has("data.g_file")) fail(ErrorKind::Config, "data.g = csv needs data.g_file");
    const std::string path = c.text("data.g_file");
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open data.g_file '" + path + "'");
    return read_field_csv(in, grid, path);
}

Problem problem(const Config& c) {
    const Exponents exps = exponents(c);
    const SpaceTimeGrid grid = grid_from(c);
    CoefficientField coeff = coefficient(c);
    auto ref = reference(c, grid.dim(), exps, coeff);
    if (ref && c.text("problem.reference") != "affine") coeff = ref->coeff;
    Problem pr{exps, coeff, grid, ref, {}, false, std::nullopt, {}, false};

    const std::string gk = c.text("data.g");
    if (gk == "reference") {
        if (!ref) fail(ErrorKind::Config, "data.g = reference needs problem.reference");
        pr.g_fn = ref->u;
    } else if (gk == "quadratic") {
        const double a = c.real("data.g_scale");
        pr.g_fn = [a](const Vec2& x, double) { return a * dot(x, x); };
        pr.g_time_independent = true;
    } else if (gk == "csv") {
        pr.g_table = read_table(c, grid);
    } else {
        fail(ErrorKind::Config, "data.g must be reference, quadratic or csv, got '" + gk + "'");
    }

    const std::string fk = c.text("data.f");
    if (fk == "reference") {
        if (!ref) fail(ErrorKind::Config, "data.f = reference needs problem.reference");
        pr.f = ref->f;
        pr.f_time_independent = ref->f_time_independent;
    } else if (fk == "constant") {
        const double v = c.real("data.f_value");
        pr.f = [v](const Vec2&, double) { return v; };
        pr.f_time_independent = true;
    } else {
        fail(ErrorKind::Config, "data.f must be reference or constant, got '" + fk + "'");
    }
    return pr;
}

struct Errors {
    double all = 0.0;
    double far = 0.0;
};

Errors errors_against(const SpaceTimeField& u, const SpaceTimeFunction& exact, double exclusion_radius) {
    const SpaceTimeGrid& g = u.grid();
    Errors e;
    for (std::size_t k = 0; k < g.time_slices(); ++k) {
        for (std::size_t s = 0; s < g.spatial_size(); ++s) {
            if (!g.in_domain(s)) continue;
            const Vec2 x = g.point(s);
            const double d = std::abs(u.at(s, k) - exact(x, g.time(k)));
            e.all = std::max(e.all, d);
            if (norm(x) >= exclusion_radius - 1e-12) e.far = std::max(e.far, d);
        }
    }
    return e;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_solve(Context& ctx) {
    const Problem pr = problem(ctx.cfg);
    const SolveConfig sc = solve_config(ctx.cfg, pr.grid, ctx.opts.threads);
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult r = solve_cauchy_dirichlet(pr.g(), pr.source(), pr.coeff, pr.exps, pr.grid, sc);
    ctx.err << "runtime_seconds = " << seconds_since(t0) << '\n';

    Report rep;
    rep.add("grid", pr.grid.describe());
    rep.add("steps", r.steps);
    rep.add("dt_min", r.min_dt);
    rep.add("dt_max", r.max_dt);
    rep.add("cfl_bound_initial", cfl_dt(pr.grid.dim(), pr.grid.h(), pr.exps, pr.coeff.a_plus(), sc, r.initial_grad_cap));
    rep.add("grad_cap_initial", r.initial_grad_cap);
    rep.add("grad_cap_final", r.grad_cap);
    rep.add("cap_raised", r.cap_raised);
    rep.add("max_grad", r.max_gradient);
    rep.add("data_lipschitz", r.data_lipschitz);
    if (pr.ref && ctx.cfg.text("data.g") == "reference" && ctx.cfg.text("data.f") == "reference") {
        const Errors e = errors_against(r.u, pr.ref->u, 4.0 * pr.grid.h());
        rep.add("reference", pr.ref->name);
        rep.add("error_sup", e.all);
        rep.add("error_sup_far", e.far);
    }
    std::ofstream csv(ctx.file("field.csv"));
    write_field_csv(csv, r.u);
    rep.add("field", "field.csv");
    ctx.finish(rep, "summary.txt");
    return Ok;
}

int cmd_verify_example(Context& ctx) {
    const Config& c = ctx.cfg;
    const Exponents exps = exponents(c);
    const int dim = static_cast<int>(c.integer("grid.dim"));
    const ReferenceSolution ref = sharp_example(dim, exps.p(), exps.q_tilde());
    std::vector<double> hs = [&] {
        std::vector<double> v;
        const std::string text = c.text("verify.h_list");
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto r = parse_real(item);
            if (!r || !(*r > 0.0)) fail(ErrorKind::Config, "verify.h_list has a malformed entry '" + item + "'");
            v.push_back(*r);
        }
        return v;
    }();
    if (hs.size() < 2) fail(ErrorKind::Config, "verify.h_list needs at least two step sizes");
    std::sort(hs.begin(), hs.end(), std::greater<>());
    const double span = c.real("verify.t_span");
    const double exclusion = c.real("verify.exclusion");
    const double rres = c.real("verify.residual_radius");

    std::vector<std::vector<double>> rows;
    bool ratios_ok = true;
    double prev = 0.0;
    double last_far = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const double h = hs[i];
        GridSpec spec{dim, c.real("grid.radius"), h, span / 4.0, -span, 0.0, c.real_opt("grid.domain_radius")};
        const SpaceTimeGrid grid = SpaceTimeGrid::make(spec);
        const SolveConfig sc = solve_config(c, grid, ctx.opts.threads);
        const auto t0 = std::chrono::steady_clock::now();
        const SolveResult r = solve_cauchy_dirichlet(DataSource(ref.u), DataSource(ref.f, ref.f_time_independent),
                                                     ref.coeff, ref.exps, grid, sc);
        ctx.err << "h = " << h << ": runtime_seconds = " << seconds_since(t0) << '\n';
        const Errors e = errors_against(r.u, ref.u, exclusion * h);

        const SpaceTimeField exact = SpaceTimeField::sample(grid, ref.u);
        const MaskedField res =
            residual(exact, SpaceTimeField::sample(grid, ref.f), ref.coeff, ref.exps, sc.regularization(h));
        double rmax = 0.0;
        for (std::size_t k = 0; k < grid.time_slices(); ++k)
            for (std::size_t s = 0; s < grid.spatial_size(); ++s)
                if (res.present(s, k) && norm(grid.point(s)) >= rres - 1e-12) rmax = std::max(rmax, std::abs(res.at(s, k)));

        const double ratio = i == 0 ? 0.0 : prev / e.far;
        if (i > 0 && ratio < c.real("verify.min_ratio")) ratios_ok = false;
        rows.push_back({h, e.far, e.all, ratio, rmax, static_cast<double>(r.steps)});
        prev = e.far;
        last_far = e.far;
    }
    std::ofstream csv(ctx.file("convergence.csv"));
    write_csv(csv, {"h", "error_far", "error_all", "ratio_far", "residual_far", "steps"}, rows);

    Report rep;
    rep.add("reference", ref.name);
    rep.add("t_span", span);
    for (const auto& row : rows) {
        std::ostringstream os;
        os << "error_far=" << format_number(row[1]) << " error_all=" << format_number(row[2])
           << " ratio=" << format_number(row[3]) << " residual=" << format_number(row[4]);
        rep.add("h=" + format_number(row[0]), os.str());
    }
    const bool abs_ok = last_far <= c.real("verify.max_error");
    rep.add("ratio_check", ratios_ok ? "PASS" : "FAIL");
    rep.add("absolute_check", abs_ok ? "PASS" : "FAIL");
    rep.add("table", "convergence.csv");
    ctx.finish(rep, "summary.txt");
    return ratios_ok && abs_ok ? Ok : AuditFailure;
}

int cmd_dpp(Context& ctx) {
    const Config& c = ctx.cfg;
    DppConfig dc;
    dc.eps_game = c.real("dpp.eps");
    dc.p = c.real("dpp.p");
    dc.n = static_cast<int>(c.integer("dpp.n"));
    dc.validate();
    const double h = c.real("grid.h");
    const double omega = c.real_opt("grid.domain_radius").value_or(c.real("grid.radius"));
    if (!(h > 0.0)) fail(ErrorKind::Config, "grid.h must be positive");
    const double box = h * (std::ceil((omega + std::max(dc.eps_game, h)) / h - 1e-9) + 1.0);
    const double dt = dc.time_step();
    const double horizon = std::max(1.0, std::round(c.real("dpp.t_end") / dt)) * dt;
    GridSpec spec{dc.n, box, h, dt, 0.0, horizon, omega};
    const SpaceTimeGrid grid = SpaceTimeGrid::make(spec);
    const TimeRemap remap = dpp_time_remap(dc.n, dc.p, c.real("dpp.diffusion"));

    std::optional<ReferenceSolution> ref;
    const std::string refname = c.text("problem.reference");
    if (refname == "heat") ref = heat_reference(Vec2{c.real("problem.k1"), c.real("problem.k2")}, dc.n);
    else if (refname != "none")
        fail(ErrorKind::Config, "dpp supports problem.reference = heat or none, got '" + refname + "'");

    std::optional<DataSource> g;
    const std::string gk = c.text("data.g");
    if (gk == "reference") {
        if (!ref) fail(ErrorKind::Config, "data.g = reference needs problem.reference");
        g.emplace([u = ref->u, remap](const Vec2& x, double tau) { return u(x, remap(tau)); });
    } else if (gk == "quadratic") {
        const double a = c.real("data.g_scale");
        g.emplace([a](const Vec2& x, double) { return a * dot(x, x); }, true);
    } else if (gk == "csv") {
        g.emplace(read_table(c, grid));
    } else {
        fail(ErrorKind::Config, "data.g must be reference, quadratic or csv, got '" + gk + "'");
    }

    const auto t0 = std::chrono::steady_clock::now();
    const DppResult r = dpp_solve(*g, grid, dc);
    ctx.err << "runtime_seconds = " << seconds_since(t0) << '\n';
    for (const auto& w : r.warnings) ctx.err << "warning: " << w << '\n';

    Report rep;
    rep.add("grid", grid.describe());
    const DppWeights w = dc.weights();
    rep.add("alpha", w.alpha);
    rep.add("beta", w.beta);
    rep.add("ball_size", r.ball_size);
    rep.add("time_scale", remap.scale);
    for (const auto& warn : r.warnings) rep.add("warning", warn);
    if (ref && gk == "reference") {
        double e = 0.0;
        for (std::size_t k = 0; k < grid.time_slices(); ++k)
            for (std::size_t s = 0; s < grid.spatial_size(); ++s)
                if (grid.in_domain(s))
                    e = std::max(e, std::abs(r.u.at(s, k) - ref->u(grid.point(s), remap(grid.time(k)))));
        rep.add("reference", ref->name);
        rep.add("error_sup", e);
    }
    std::ofstream csv(ctx.file("field.csv"));
    write_field_csv(csv, r.u);
    rep.add("field", "field.csv");
    ctx.finish(rep, "summary.txt");
    return Ok;
}

int cmd_analyze(Context& ctx) {
    const Config& c = ctx.cfg;
    const Exponents exps = exponents(c);
    const double theta = c.real_opt("analyze.theta").value_or(exps.theta_star());
    const std::vector<double> radii = c.real_list("analyze.radii");
    if (radii.size() < 3) fail(ErrorKind::Config, "analyze.radii needs at least three radii for a fit");
    const Vec2 center{c.real("analyze.center_x"), c.real("analyze.center_y")};
    const double t0 = c.real("analyze.t0");

    std::optional<SpaceTimeField> stored;
    std::optional<FieldSampler> sampler;
    std::string source = c.text("analyze.source");
    if (source == "reference") {
        const SpaceTimeGrid grid = grid_from(c);
        const CoefficientField coeff = coefficient(c);
        auto ref = reference(c, grid.dim(), exps, coeff);
        if (!ref) fail(ErrorKind::Config, "analyze.source = reference needs problem.reference");
        sampler.emplace(grid, ref->u);
        source = ref->name;
    } else if (source == "csv") {
        if (!c.has("analyze.file")) fail(ErrorKind::Config, "analyze.source = csv needs analyze.file");
        const std::string path = c.text("analyze.file");
        std::ifstream in(path);
        if (!in) fail(ErrorKind::Config, "cannot open analyze.file '" + path + "'");
        stored.emplace(read_field_csv_infer(in, path));
        sampler.emplace(*stored);
    } else if (source == "solve") {
        const Problem pr = problem(c);
        const SolveConfig sc = solve_config(c, pr.grid, ctx.opts.threads);
        const auto start = std::chrono::steady_clock::now();
        stored.emplace(solve_cauchy_dirichlet(pr.g(), pr.source(), pr.coeff, pr.exps, pr.grid, sc).u);
        ctx.err << "runtime_seconds = " << seconds_since(start) << '\n';
        sampler.emplace(*stored);
    } else {
        fail(ErrorKind::Config, "analyze.source must be reference, csv or solve, got '" + source + "'");
    }
    const FieldSampler& u = *sampler;
    const double floor = 4.0 * u.grid().h();

    std::vector<double> osc;
    std::vector<double> det;
    for (double r : radii) {
        const IntrinsicCylinder cyl{center, t0, r, theta};
        cyl.validate();
        osc.push_back(oscillation(u, cyl));
        det.push_back(plane_detrended_osc(u, cyl).osc);
    }
    const NondegeneracyProfile prof = nondegeneracy_profile(u, center, t0, theta, radii);
    const ExponentFit fit = fit_growth_exponent(radii, osc, floor);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < radii.size(); ++i) rows.push_back({radii[i], osc[i], det[i], prof.boundary_sup[i]});
    std::ofstream csv(ctx.file("radii.csv"));
    write_csv(csv, {"r", "osc", "detrended_osc", "boundary_sup"}, rows);

    Report rep;
    rep.add("source", source);
    rep.add("theta", theta);
    rep.add("theta_origin", c.explicitly_set("analyze.theta") ? "config" : "theta* = (2+p_tilde)/(1+p_tilde)");
    rep.add("slope", fit.slope);
    rep.add("intercept", fit.intercept);
    rep.add("r_squared", fit.r_squared);
    rep.add("floor", fit.floor);
    rep.add("radii_used", fit.radii.size());
    rep.add("dropped_below_floor", fit.dropped_below_floor);
    try {
        rep.add("detrended_slope", fit_growth_exponent(radii, det, floor).slope);
    } catch (const Error& e) {
        rep.add("detrended_slope", std::string("n/a (") + e.what() + ")");
    }
    if (prof.fit) rep.add("boundary_slope", prof.fit->slope);
    else rep.add("boundary_slope", "n/a");
    rep.add("extremum", prof.extremum == ExtremumKind::Minimum   ? "minimum"
                        : prof.extremum == ExtremumKind::Maximum ? "maximum"
                                                                 : "none");
    if (!prof.note.empty()) rep.add("note", prof.note);
    rep.add("table", "radii.csv");
    ctx.finish(rep, "fit.txt");
    return Ok;
}

int cmd_barrier(Context& ctx) {
    const Config& c = ctx.cfg;
    const Exponents exps = exponents(c);
    const CoefficientField coeff = coefficient(c);
    const SpaceTimeGrid grid = grid_from(c);
    const SolveConfig sc = solve_config(c, grid, ctx.opts.threads);
    const RegularizationPolicy reg = sc.regularization(grid.h());
    const std::string kind = c.text("barrier.kind");

    Report rep;
    rep.add("grid", grid.describe());
    ResidualSignReport r;
    if (kind == "nondeg") {
        const double c_adm = admissible_c(grid.dim(), exps, coeff.a_plus(), c.real("barrier.c0"));
        const double cval = c_adm * c.real("barrier.c_scale");
        const NonDegBarrier phi = NonDegBarrier::canonical(exps, cval, Vec2{0.0, 0.0}, grid.t_end());
        rep.add("admissible_c", c_adm);
        rep.add("c", cval);
        rep.add("alpha", phi.alpha);
        rep.add("theta", phi.theta);
        r = verify_supersolution(SpaceTimeField::sample(grid, phi.as_function()), c.real("barrier.f_bound"), coeff, exps,
                                 reg);
    } else if (kind == "time_holder") {
        const double eta = c.real("barrier.eta");
        const double sup_f = c.real("barrier.sup_f");
        const auto k = time_barrier_constants(c.real("barrier.lip"), c.real("barrier.sup_u"), eta, exps,
                                              coeff.a_plus(), grid.dim(), sup_f);
        const TimeHolderBarrier vb{eta, k.M1, k.M2, grid.t_begin(), 0.0};
        rep.add("M1", k.M1);
        rep.add("M2", k.M2);
        rep.add("C", k.C);
        r = verify_supersolution(SpaceTimeField::sample(grid, vb.as_function()), sup_f, coeff, exps, reg, std::nullopt);
    } else {
        fail(ErrorKind::Config, "barrier.kind must be nondeg or time_holder, got '" + kind + "'");
    }
    rep.add("min_margin", r.min_margin);
    rep.add("max_margin", r.max_margin);
    rep.add("tol", r.tol);
    rep.add("checked_nodes", r.checked);
    rep.add("witness", where(grid, r.witness));
    rep.add("result", r.pass ? "PASS" : "FAIL");
    ctx.finish(rep, "barrier.txt");
    return r.pass ? Ok : AuditFailure;
}

MaskedField shifted(const MaskedField& m, double delta) {
    MaskedField out(m.grid());
    for (std::size_t k = 0; k < m.grid().time_slices(); ++k)
        for (std::size_t s = 0; s < m.grid().spatial_size(); ++s)
            if (m.present(s, k)) out.set(s, k, m.at(s, k) + delta);
    return out;
}

int cmd_compare(Context& ctx) {
    const Config& c = ctx.cfg;
    const Problem pr = problem(c);
    const SolveConfig sc = solve_config(c, pr.grid, ctx.opts.threads);
    const std::string scenario = c.text("compare.scenario");
    Report rep;
    rep.add("grid", pr.grid.describe());

    if (scenario == "audit") {
        const long pairs = c.integer("compare.pairs");
        if (pairs < 0) fail(ErrorKind::Config, "compare.pairs must be >= 0");
        bool all = true;
        std::vector<std::vector<double>> rows;
        auto record = [&](long i, const ComparisonReport& r) {
            all = all && r.pass;
            rows.push_back({static_cast<double>(i), r.violation, r.tol, static_cast<double>(r.steps), r.pass ? 1.0 : 0.0});
            std::ostringstream os;
            os << "violation=" << format_number(r.violation) << " tol=" << format_number(r.tol)
               << " steps=" << r.steps << " witness " << where(pr.grid, r.witness) << (r.pass ? " PASS" : " FAIL");
            rep.add("pair_" + std::to_string(i), os.str());
        };
        if (pairs == 0) {
            const double gs = c.real("compare.g_shift");
            const double fs = c.real("compare.f_shift");
            const DataSource g2 = pr.g_table ? DataSource(shifted(*pr.g_table, gs))
                                             : DataSource([g = pr.g_fn, gs](const Vec2& x, double t) { return g(x, t) + gs; },
                                                          pr.g_time_independent);
            const DataSource f2([f = pr.f, fs](const Vec2& x, double t) { return f(x, t) + fs; }, pr.f_time_independent);
            record(0, comparison_audit(pr.g(), pr.source(), g2, f2, pr.coeff, pr.exps, pr.grid, sc));
        } else {
            const auto seed = static_cast<std::uint64_t>(c.integer("compare.seed"));
            for (long i = 0; i < pairs; ++i) {
                const OrderedDataPair d = random_ordered_pair(seed + static_cast<std::uint64_t>(i), c.real("compare.margin"));
                record(i, comparison_audit(DataSource(d.g1), DataSource(d.f1, true), DataSource(d.g2),
                                           DataSource(d.f2, true), pr.coeff, pr.exps, pr.grid, sc));
            }
        }
        std::ofstream csv(ctx.file("audit.csv"));
        write_csv(csv, {"pair", "violation", "tol", "steps", "pass"}, rows);
        rep.add("result", all ? "PASS" : "FAIL");
        ctx.finish(rep, "compare.txt");
        return all ? Ok : AuditFailure;
    }
    if (scenario == "perron") {
        if (!pr.ref) fail(ErrorKind::Config, "compare.scenario = perron needs problem.reference");
        const double gap = c.real("compare.perron_gap");
        const double dip = c.real("compare.super_dip");
        const double rho = pr.grid.domain_radius();
        const SpaceTimeFunction u = pr.ref->u;
        const auto sub = SpaceTimeField::sample(pr.grid, [u, gap](const Vec2& x, double t) { return u(x, t) - gap; });
        // the dip ramps up from zero so the initial slice stays ordered
        const double t0 = pr.grid.t_begin();
        const double span = pr.grid.t_end() - t0;
        const auto super = SpaceTimeField::sample(pr.grid, [u, gap, dip, rho, t0, span](const Vec2& x, double t) {
            return u(x, t) + gap - dip * ((t - t0) / span) * std::max(0.0, 1.0 - dot(x, x) / (rho * rho));
        });
        PerronOptions po;
        if (pr.ref->name.rfind("sharp", 0) == 0) po.singular_point = Vec2{0.0, 0.0};
        const BracketReport b = perron_bracket(sub, super, pr.g(), pr.f, pr.coeff, pr.exps, pr.grid, sc, po);
        rep.add("lower_margin", b.lower_margin);
        rep.add("upper_margin", b.upper_margin);
        rep.add("bracket_tol", b.bracket_tol);
        rep.add("sub_check", b.sub_check.pass ? "PASS" : "FAIL");
        rep.add("super_check", b.super_check.pass ? "PASS" : "FAIL");
        if (b.witness) rep.add("witness", where(pr.grid, *b.witness));
        if (!b.failure.empty()) rep.add("failure", b.failure);
        rep.add("result", b.pass ? "PASS" : "FAIL");
        ctx.finish(rep, "compare.txt");
        return b.pass ? Ok : AuditFailure;
    }
    fail(ErrorKind::Config, "compare.scenario must be audit or perron, got '" + scenario + "'");
}

int cmd_sweep(Context& ctx) {
    const Config& c = ctx.cfg;
    const Problem pr = problem(c);
    const SolveConfig sc = solve_config(c, pr.grid, ctx.opts.threads);
    const std::string t = c.text("sweep.target");
    const PerturbTarget target = t == "coefficient" ? PerturbTarget::Coefficient
                                 : t == "source"    ? PerturbTarget::Source
                                 : t == "both"      ? PerturbTarget::Both
                                                    : throw Error(ErrorKind::Config, "sweep.target must be coefficient, source or both");
    const StabilityReport r = stability_sweep(pr.g(), pr.f, pr.coeff, pr.exps, pr.grid, sc, c.real_list("sweep.deltas"), target);
    std::vector<std::vector<double>> rows;
    Report rep;
    rep.add("target", t);
    rep.add("horizon", r.horizon);
    for (const auto& pt : r.points) {
        rows.push_back({pt.delta, pt.error, pt.bound});
        rep.add("delta=" + format_number(pt.delta), format_number(pt.error));
    }
    rep.add("monotone", r.monotone);
    if (target == PerturbTarget::Source) rep.add("within_T_delta", r.within_bound);
    rep.add("result", r.pass ? "PASS" : "FAIL");
    std::ofstream csv(ctx.file("sweep.csv"));
    write_csv(csv, {"delta", "error", "bound"}, rows);
    ctx.finish(rep, "sweep.txt");
    return r.pass ? Ok : AuditFailure;
}

const std::map<std::string, std::function<int(Context&)>>& table() {
    static const std::map<std::string, std::function<int(Context&)>> t = {
        {"solve", cmd_solve},   {"dpp", cmd_dpp},         {"analyze", cmd_analyze}, {"verify-example", cmd_verify_example},
        {"barrier", cmd_barrier}, {"compare", cmd_compare}, {"sweep", cmd_sweep},
    };
    return t;
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"solve", "dpp", "analyze", "verify-example", "barrier", "compare", "sweep"};
    return names;
}

const Schema& schema() {
    static const Schema s = build_schema();
    return s;
}

int run(const std::string& subcommand, const Options& opts, std::ostream& out, std::ostream& err) {
    try {
        const auto it = table().find(subcommand);
        if (it == table().end()) fail(ErrorKind::Config, "unknown subcommand '" + subcommand + "'");
        if (opts.threads == 0) fail(ErrorKind::Config, "--threads must be at least 1");
        Config cfg = opts.config_path.empty() ? Config(schema()) : Config::parse_file(opts.config_path, schema());
        for (const auto& o : opts.overrides) cfg.apply_override(o);
        Context ctx{opts, std::move(cfg), out, err};
        return it->second(ctx);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::Numerical: return NumericalFailure;
            case ErrorKind::Audit: return AuditFailure;
            case ErrorKind::Config:
            case ErrorKind::Precondition: return ConfigError;
        }
        return ConfigError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return ConfigError;
    }
}

}  // namespace degpar::cli
