#include "selfsim/verify.hpp"

#include "selfsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace selfsim::verify {

using families::OmegaForm;
using families::SimilarityFrame;

namespace {

enum class Axis { X, Y, T };

Point shifted(const Point& p, Axis axis, double d) {
    Point q = p;
    switch (axis) {
        case Axis::X: q.x += d; break;
        case Axis::Y: *q.y += d; break;
        case Axis::T: *q.t += d; break;
    }
    return q;
}

double coordinate(const Point& p, Axis axis) {
    switch (axis) {
        case Axis::X: return p.x;
        case Axis::Y: return *p.y;
        case Axis::T: return *p.t;
    }
    return 0.0;
}

// Central difference of formal order 2 along one axis.
double central(const Field& f, const Point& p, Axis axis, int order, double h) {
    auto g = [&](double k) { return f(shifted(p, axis, k * h)); };
    switch (order) {
        case 1: return (g(1) - g(-1)) / (2.0 * h);
        case 2: return (g(1) - 2.0 * g(0) + g(-1)) / (h * h);
        case 3: return (g(2) - 2.0 * g(1) + 2.0 * g(-1) - g(-2)) / (2.0 * h * h * h);
        case 4: return (g(2) - 4.0 * g(1) + 6.0 * g(0) - 4.0 * g(-1) + g(-2)) / (h * h * h * h);
        default: throw std::invalid_argument("derivative order must be 1..4");
    }
}

void check_reach(const Point& p, Axis axis, int order, double h) {
    const double reach = static_cast<double>((order + 1) / 2) * h;
    if (!(coordinate(p, axis) - reach > 0.0)) {
        throw DomainError("finite-difference stencil leaves the domain");
    }
}

OperatorValue combine(std::initializer_list<double> signed_terms) {
    OperatorValue v;
    for (double t : signed_terms) {
        v.residual += t;
        v.scale = std::max(v.scale, std::abs(t));
    }
    return v;
}

double safe_log2_ratio(double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log2(coarse / fine);
}

std::vector<std::string> physical_names(FamilyId family) {
    std::vector<std::string> names{"x"};
    if (families::has_y(family)) names.push_back("y");
    if (families::has_t(family)) names.push_back("t");
    return names;
}

std::vector<double> point_coords(const Point& p) {
    std::vector<double> c{p.x};
    if (p.y) c.push_back(*p.y);
    if (p.t) c.push_back(*p.t);
    return c;
}

template <class Work>
void parallel_for(std::size_t n, unsigned threads, Work work) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += threads) work(i);
        });
    }
    for (auto& th : pool) th.join();
}

void summarize(ResidualReport& report) {
    report.max_abs_residual = 0.0;
    report.max_abs_residual_half = 0.0;
    report.max_abs_residual_quarter = 0.0;
    report.max_rel_residual = 0.0;
    report.failed_points = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& r : report.points) {
        if (!r.error.empty()) {
            ++report.failed_points;
            continue;
        }
        report.max_abs_residual = std::max(report.max_abs_residual, std::abs(r.residual));
        report.max_abs_residual_half = std::max(report.max_abs_residual_half, std::abs(r.residual_half));
        report.max_abs_residual_quarter =
            std::max(report.max_abs_residual_quarter, std::abs(r.residual_quarter));
        report.max_rel_residual = std::max(report.max_rel_residual, r.rel_residual);
        if (r.above_floor) min_ratio = std::min(min_ratio, r.ratio);
    }
    report.min_ratio = std::isinf(min_ratio) ? std::numeric_limits<double>::quiet_NaN() : min_ratio;
    report.observed_order = safe_log2_ratio(report.max_abs_residual, report.max_abs_residual_half);
    report.observed_order_fine =
        safe_log2_ratio(report.max_abs_residual_half, report.max_abs_residual_quarter);
}

} // namespace

void FDScheme::validate() const {
    if (order_required < 1 || order_required > 4) {
        throw std::invalid_argument("operator order must be 1..4");
    }
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
}

FDScheme default_scheme(FamilyId family) {
    const int order = families::operator_order(family);
    return {order, order == 4 ? 2e-2 : 1e-2};
}

hyper::EvalOptions field_options() {
    hyper::EvalOptions o;
    o.rel_tol = 1e-15;
    o.max_terms = 20'000;
    o.consecutive_small = 3;
    return o;
}

void AxisSpec::validate() const {
    if (count < 1) throw std::invalid_argument("grid count must be >= 1");
    if (count > 1 && !(min < max)) throw std::invalid_argument("grid needs min < max");
    if (log && !(min > 0.0)) throw std::invalid_argument("log grid needs min > 0");
}

std::vector<double> AxisSpec::values() const {
    validate();
    std::vector<double> v;
    if (count == 1) return {min};
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        v.push_back(log ? min * std::pow(max / min, f) : min + (max - min) * f);
    }
    v.back() = max;
    return v;
}

std::string GridSpec::describe() const {
    std::ostringstream os;
    auto axis = [&os](const char* name, const AxisSpec& a) {
        os << name << "=[" << a.min << "," << a.max << "]x" << a.count << (a.log ? " log" : " lin");
    };
    axis("x", x);
    if (y) {
        os << "; ";
        axis("y", *y);
    }
    if (t) {
        os << "; ";
        axis("t", *t);
    }
    return os.str();
}

GridSpec default_grid(FamilyId family) {
    GridSpec g;
    if (families::has_y(family)) g.y = AxisSpec{};
    if (families::has_t(family)) g.t = AxisSpec{};
    return g;
}

std::vector<Point> make_grid(FamilyId family, const FamilyParams& params, const GridSpec& grid,
                             const FDScheme& scheme) {
    if (families::has_y(family) != grid.y.has_value() ||
        families::has_t(family) != grid.t.has_value()) {
        throw std::invalid_argument("grid axes do not match the family's variables");
    }
    const std::vector<double> xs = grid.x.values();
    const std::vector<double> ys = grid.y ? grid.y->values() : std::vector<double>{0.0};
    const std::vector<double> ts = grid.t ? grid.t->values() : std::vector<double>{0.0};
    const double margin = 5.0 * scheme.h;

    std::vector<Point> out;
    for (double x : xs) {
        for (double y : ys) {
            for (double t : ts) {
                Point p{x, std::nullopt, std::nullopt};
                if (grid.y) p.y = y;
                if (grid.t) p.t = t;
                if (x < margin || (p.y && *p.y < margin) || (p.t && *p.t < margin)) continue;
                if (family == FamilyId::T4) {
                    // |sigma| grows as x shrinks and y grows; check the stencil's worst corner.
                    const double reach = 2.0 * scheme.h;
                    const Point corner{x - reach, *p.y + reach, std::nullopt};
                    const SimilarityFrame f = families::similarity_map(family, params, corner);
                    if (std::abs(f.xi) > kT4SigmaLimit) continue;
                }
                out.push_back(p);
            }
        }
    }
    return out;
}

OperatorValue operator_terms(FamilyId family, const FamilyParams& params, const Field& field,
                             const Point& p, const FDScheme& scheme) {
    scheme.validate();
    families::check_point(family, p);
    const double h = scheme.h;
    auto d = [&](Axis axis, int order) {
        check_reach(p, axis, order, h);
        return central(field, p, axis, order, h);
    };
    const double x = p.x;
    switch (family) {
        case FamilyId::P0: {
            const double nu = params.nu;
            return combine({d(Axis::T, 1), -nu * d(Axis::X, 2), -nu * d(Axis::X, 1) / x});
        }
        case FamilyId::P2:
            return combine({d(Axis::T, 1), -d(Axis::X, 2), -2.0 * params.alpha / x * d(Axis::X, 1)});
        case FamilyId::P3: {
            const double y = *p.y;
            return combine({d(Axis::T, 1), -d(Axis::X, 2), -d(Axis::Y, 2),
                            -2.0 * params.alpha / x * d(Axis::X, 1),
                            -2.0 * params.beta / y * d(Axis::Y, 1)});
        }
        case FamilyId::T4: {
            const double y = *p.y;
            return combine({std::pow(y, params.m) * d(Axis::X, 3), -d(Axis::Y, 3)});
        }
        case FamilyId::T5: {
            const double y = *p.y;
            const double t = *p.t;
            const double xn = std::pow(x, params.n);
            const double ym = std::pow(y, params.m);
            const double tk = std::pow(t, params.k);
            return combine({xn * ym * d(Axis::T, 1), -tk * ym * d(Axis::X, 3), -tk * xn * d(Axis::Y, 3)});
        }
        case FamilyId::F6: {
            const double t = *p.t;
            return combine({std::pow(x, params.n) * d(Axis::T, 1),
                            -std::pow(t, params.k) * d(Axis::X, 4)});
        }
    }
    throw std::logic_error("unhandled family");
}

double apply_operator(FamilyId family, const FamilyParams& params, const Field& field,
                      const Point& p, const FDScheme& scheme) {
    return operator_terms(family, params, field, p, scheme).residual;
}

OperatorValue analytic_operator(const SolutionBranch& branch, const FamilyParams& params,
                                const Point& p, const hyper::EvalOptions& opts) {
    const OmegaForm form = families::omega_form(branch, params);
    const SimilarityFrame f = families::similarity_map(branch.family, params, p);
    const double c = branch.constant;
    const double t = *p.t;
    const double P = f.prefactor;
    const double P_t = -0.5 * P / t;
    auto w = [&](unsigned i, unsigned j) {
        return families::omega_partial(form, f.xi, f.eta, i, j, opts);
    };
    const double x = p.x;
    if (branch.family == FamilyId::P2) {
        const double s_x = -x / (2.0 * t);
        const double s_xx = -1.0 / (2.0 * t);
        const double s_t = x * x / (4.0 * t * t);
        const double w0 = w(0, 0);
        const double w1 = w(1, 0);
        const double w2 = w(2, 0);
        const double u_t = c * (P_t * w0 + P * w1 * s_t);
        const double u_x = c * P * w1 * s_x;
        const double u_xx = c * P * (w2 * s_x * s_x + w1 * s_xx);
        return combine({u_t, -u_xx, -2.0 * params.alpha / x * u_x});
    }
    if (branch.family == FamilyId::P3) {
        const double y = *p.y;
        const double xi_x = -x / (4.0 * t);
        const double xi_xx = -1.0 / (4.0 * t);
        const double xi_t = x * x / (8.0 * t * t);
        const double eta_y = -y / (4.0 * t);
        const double eta_yy = -1.0 / (4.0 * t);
        const double eta_t = y * y / (8.0 * t * t);
        const double u_t = c * (P_t * w(0, 0) + P * (w(1, 0) * xi_t + w(0, 1) * eta_t));
        const double u_x = c * P * w(1, 0) * xi_x;
        const double u_y = c * P * w(0, 1) * eta_y;
        const double u_xx = c * P * (w(2, 0) * xi_x * xi_x + w(1, 0) * xi_xx);
        const double u_yy = c * P * (w(0, 2) * eta_y * eta_y + w(0, 1) * eta_yy);
        return combine({u_t, -u_xx, -u_yy, -2.0 * params.alpha / x * u_x,
                        -2.0 * params.beta / y * u_y});
    }
    throw DomainError("analytic operator is provided for P2 and P3 only");
}

ResidualReport pde_residual_sweep(FamilyId family, const FamilyParams& params, const Field& field,
                                  const std::vector<Point>& grid, const FDScheme& scheme,
                                  unsigned threads) {
    scheme.validate();
    ResidualReport report;
    report.family = family;
    report.params = params;
    report.coordinate_names = physical_names(family);
    report.h = scheme.h;
    report.points.resize(grid.size());

    parallel_for(grid.size(), threads, [&](std::size_t i) {
        PointRecord& r = report.points[i];
        r.coords = point_coords(grid[i]);
        try {
            FDScheme s = scheme;
            const OperatorValue coarse = operator_terms(family, params, field, grid[i], s);
            s.h = scheme.h / 2.0;
            const OperatorValue half = operator_terms(family, params, field, grid[i], s);
            s.h = scheme.h / 4.0;
            const OperatorValue quarter = operator_terms(family, params, field, grid[i], s);
            r.residual = coarse.residual;
            r.rel_residual = coarse.scale > 0.0 ? std::abs(coarse.residual) / coarse.scale : 0.0;
            r.residual_half = half.residual;
            r.residual_quarter = quarter.residual;
            r.above_floor = std::abs(coarse.residual) > kNoiseFloor;
            r.ratio = std::abs(half.residual) > 0.0 ? std::abs(coarse.residual) / std::abs(half.residual)
                                                    : std::numeric_limits<double>::infinity();
        } catch (const std::exception& e) {
            r.error = e.what();
        }
    });

    summarize(report);
    report.verdict = is_consistent(report) ? "CONSISTENT" : "INCONSISTENT";
    return report;
}

ResidualReport pde_residual_sweep(const SolutionBranch& branch, const FamilyParams& params,
                                  const std::vector<Point>& grid, const FDScheme& scheme,
                                  unsigned threads) {
    families::check_branch(branch);
    // Surface parameter degeneracies once instead of at every point.
    families::omega_form(branch, params);
    const hyper::EvalOptions opts = field_options();
    Field field = [&](const Point& p) { return families::eval_branch(branch, params, p, opts); };
    ResidualReport report = pde_residual_sweep(branch.family, params, field, grid, scheme, threads);
    report.branch = branch.index;
    return report;
}

bool is_consistent(const ResidualReport& report) {
    if (report.failed_points > 0 || report.points.empty()) return false;
    for (const auto& r : report.points) {
        if (r.above_floor && !(r.ratio >= kMinRefinementRatio)) return false;
    }
    return true;
}

std::vector<SimilarityPoint> default_similarity_points(FamilyId family) {
    switch (family) {
        case FamilyId::P0: return {{0.1, {}}, {1.0, {}}, {5.0, {}}};
        case FamilyId::T4: return {{-0.1, {}}, {-0.4, {}}, {-0.8, {}}};
        case FamilyId::P3:
        case FamilyId::T5: return {{-0.3, -0.7}, {-1.0, -0.2}, {-2.0, -1.5}};
        default: return {{-0.1, {}}, {-1.0, {}}, {-5.0, {}}};
    }
}

OperatorValue reduced_equation(FamilyId family, const FamilyParams& params, const OmegaForm& form,
                               const SimilarityPoint& s, const hyper::EvalOptions& opts,
                               int equation) {
    const families::Exponents e = families::derived_exponents(family, params);
    auto w = [&](unsigned i, unsigned j) {
        return families::omega_partial(form, s.xi, s.eta, i, j, opts);
    };
    const double v = s.xi;
    switch (family) {
        case FamilyId::P0:
            return combine({4.0 * v * w(2, 0), 4.0 * w(1, 0), v * w(1, 0), w(0, 0)});
        case FamilyId::P2: {
            const double c = (1.0 + 2.0 * e.alpha) / 2.0;
            return combine({v * w(2, 0), c * w(1, 0), -v * w(1, 0), -0.5 * w(0, 0)});
        }
        case FamilyId::P3: {
            const double xi = s.xi;
            const double eta = s.eta.value();
            if (equation == 0) {
                const double c = (1.0 + 2.0 * e.alpha) / 2.0;
                return combine({xi * w(2, 0), c * w(1, 0), -xi * w(1, 0), -eta * w(0, 1), -0.5 * w(0, 0)});
            }
            const double c = (1.0 + 2.0 * e.beta) / 2.0;
            return combine({eta * w(0, 2), c * w(0, 1), -eta * w(0, 1), -xi * w(1, 0), -0.5 * w(0, 0)});
        }
        case FamilyId::T4: {
            const double c1 = (2.0 + e.beta) / 3.0;
            const double c2 = (1.0 + 2.0 * e.beta) / 3.0;
            const double a1 = 1.0;
            const double a2 = 4.0 / 3.0;
            const double a3 = 5.0 / 3.0;
            const double w3 = w(3, 0);
            const double w2 = w(2, 0);
            const double w1 = w(1, 0);
            return combine({v * v * w3, -v * v * v * w3, (c1 + c2 + 1.0) * v * w2,
                            -(3.0 + a1 + a2 + a3) * v * v * w2, c1 * c2 * w1,
                            -(1.0 + a1 + a2 + a3 + a1 * a2 + a1 * a3 + a2 * a3) * v * w1,
                            -a1 * a2 * a3 * w(0, 0)});
        }
        case FamilyId::T5: {
            const double xi = s.xi;
            const double eta = s.eta.value();
            if (equation == 0) {
                const double c1 = (2.0 + e.alpha) / 3.0;
                const double c2 = (1.0 + 2.0 * e.alpha) / 3.0;
                return combine({xi * xi * w(3, 0), (c1 + c2 + 1.0) * xi * w(2, 0), c1 * c2 * w(1, 0),
                                -xi * w(1, 0), -eta * w(0, 1), -w(0, 0)});
            }
            const double d1 = (2.0 + e.beta) / 3.0;
            const double d2 = (1.0 + 2.0 * e.beta) / 3.0;
            return combine({eta * eta * w(0, 3), (d1 + d2 + 1.0) * eta * w(0, 2), d1 * d2 * w(0, 1),
                            -eta * w(0, 1), -xi * w(1, 0), -w(0, 0)});
        }
        case FamilyId::F6: {
            const double c1 = (3.0 + e.alpha) / 4.0;
            const double c2 = (2.0 + 2.0 * e.alpha) / 4.0;
            const double c3 = (1.0 + 3.0 * e.alpha) / 4.0;
            return combine({v * v * v * w(4, 0), (3.0 + c1 + c2 + c3) * v * v * w(3, 0),
                            (1.0 + c1 + c2 + c3 + c1 * c2 + c1 * c3 + c2 * c3) * v * w(2, 0),
                            c1 * c2 * c3 * w(1, 0), -v * w(1, 0), -w(0, 0)});
        }
    }
    throw std::logic_error("unhandled family");
}

ResidualReport ode_residual(const SolutionBranch& branch, const FamilyParams& params,
                            const std::vector<SimilarityPoint>& points,
                            const hyper::EvalOptions& opts) {
    const OmegaForm form = families::omega_form(branch, params);
    const int equations = families::similarity_dimension(branch.family);
    ResidualReport report;
    report.family = branch.family;
    report.branch = branch.index;
    report.params = params;
    report.grid = "similarity points";
    report.coordinate_names = equations == 2 ? std::vector<std::string>{"xi", "eta"}
                                             : std::vector<std::string>{"xi"};
    for (const auto& s : points) {
        PointRecord r;
        r.coords = {s.xi};
        if (equations == 2) r.coords.push_back(s.eta.value_or(0.0));
        try {
            if (equations == 2 && !s.eta) throw DomainError("reduced system needs eta");
            for (int eq = 0; eq < equations; ++eq) {
                const OperatorValue v = reduced_equation(branch.family, params, form, s, opts, eq);
                if (std::abs(v.residual) >= std::abs(r.residual)) r.residual = v.residual;
                const double rel = v.scale > 0.0 ? std::abs(v.residual) / v.scale : 0.0;
                r.rel_residual = std::max(r.rel_residual, rel);
            }
            r.above_floor = std::abs(r.residual) > kNoiseFloor;
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        report.points.push_back(std::move(r));
    }
    summarize(report);
    report.observed_order = std::numeric_limits<double>::quiet_NaN();
    report.observed_order_fine = std::numeric_limits<double>::quiet_NaN();
    report.min_ratio = std::numeric_limits<double>::quiet_NaN();
    const bool pass = report.failed_points == 0 && !report.points.empty() &&
                      report.max_rel_residual <= kOdeTolerance;
    report.verdict = pass ? "PASS" : "FAIL";
    return report;
}

AdjudicationReport adjudicate_prefactors(FamilyId family, const FamilyParams& params,
                                         const GridSpec& grid, const FDScheme& scheme) {
    const std::vector<int> disputed = families::disputed_branches(family);
    if (disputed.empty()) {
        throw DomainError("no published closed forms to adjudicate for family " +
                          std::string(families::to_string(family)));
    }
    const std::vector<Point> points = make_grid(family, params, grid, scheme);
    const hyper::EvalOptions opts = field_options();

    AdjudicationReport out;
    out.family = family;
    for (int index : disputed) {
        const SolutionBranch branch{family, index, 1.0};
        AdjudicationEntry entry;
        entry.branch = index;
        entry.equation = families::printed_equation(family, index);
        entry.derived = pde_residual_sweep(branch, params, points, scheme);
        entry.derived.label = "P*omega";
        entry.derived.grid = grid.describe();
        Field printed = [&](const Point& p) { return families::eval_printed(branch, params, p, opts); };
        entry.printed = pde_residual_sweep(family, params, printed, points, scheme);
        entry.printed.branch = index;
        entry.printed.label = "printed " + entry.equation;
        entry.printed.grid = grid.describe();
        entry.derived_consistent = is_consistent(entry.derived);
        entry.printed_consistent = is_consistent(entry.printed);
        out.entries.push_back(std::move(entry));
    }
    return out;
}

} // namespace selfsim::verify
