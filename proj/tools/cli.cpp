#include "cli.hpp"

#include "selfsim/errors.hpp"
#include "selfsim/hyperfun.hpp"
#include "selfsim/verify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

namespace selfsim::cli {

using nlohmann::json;
using families::FamilyId;
using families::Point;
using families::SolutionBranch;

namespace {

const char* const kCommands[] = {"eval", "branch-eval", "sample", "verify", "adjudicate", "list"};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

template <class T>
std::optional<T> optional_from(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

template <class T>
T value_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    return it->get<T>();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

template <class Row>
void csv_row(std::ostream& os, const Row& cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) os << ',';
        os << c;
        first = false;
    }
    os << '\n';
}

verify::AxisSpec parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4) {
        throw std::invalid_argument("grid axis must be min:max:count[:log|lin], got '" + text + "'");
    }
    verify::AxisSpec a;
    try {
        a.min = std::stod(parts[0]);
        a.max = std::stod(parts[1]);
        a.count = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw std::invalid_argument("grid axis has a non-numeric field: '" + text + "'");
    }
    if (parts.size() == 4) {
        const std::string mode = lower(parts[3]);
        if (mode != "log" && mode != "lin") {
            throw std::invalid_argument("grid spacing must be log or lin, got '" + parts[3] + "'");
        }
        a.log = mode == "log";
    }
    a.validate();
    return a;
}

hyper::EvalOptions eval_options(const RunConfig& c) {
    hyper::EvalOptions o;
    o.rel_tol = c.rel_tol;
    o.max_terms = c.max_terms;
    o.consecutive_small = c.consecutive_small;
    return o;
}

bool needs_family(const std::string& command) {
    return command == "branch-eval" || command == "sample" || command == "verify" ||
           command == "adjudicate";
}

bool needs_branch(const std::string& command) {
    return command == "branch-eval" || command == "sample" || command == "verify";
}

double require(const std::optional<double>& v, const char* name) {
    if (!v) throw std::invalid_argument(std::string("missing required value --") + name);
    return *v;
}

Point point_from(FamilyId family, const RunConfig& c) {
    Point p{require(c.x, "x"), std::nullopt, std::nullopt};
    if (families::has_y(family)) p.y = require(c.y, "y");
    if (families::has_t(family)) p.t = require(c.t, "t");
    return p;
}

std::vector<std::string> coordinate_names(FamilyId family) {
    std::vector<std::string> names{"x"};
    if (families::has_y(family)) names.push_back("y");
    if (families::has_t(family)) names.push_back("t");
    return names;
}

verify::GridSpec grid_from(FamilyId family, const RunConfig& c) {
    verify::GridSpec g = verify::default_grid(family);
    if (c.grid_x) g.x = parse_axis(*c.grid_x);
    if (c.grid_y && g.y) g.y = parse_axis(*c.grid_y);
    if (c.grid_t && g.t) g.t = parse_axis(*c.grid_t);
    return g;
}

json params_json(const families::FamilyParams& p) {
    return json{{"alpha", p.alpha}, {"beta", p.beta}, {"m", p.m}, {"n", p.n},
                {"k", p.k},         {"nu", p.nu},     {"E", p.E_amp}};
}

json report_summary(const verify::ResidualReport& r) {
    json j;
    j["family"] = std::string(families::to_string(r.family));
    j["branch"] = r.branch;
    j["params"] = params_json(r.params);
    j["max_abs_residual"] = r.max_abs_residual;
    j["max_rel_residual"] = r.max_rel_residual;
    j["observed_order"] = r.observed_order;
    j["verdict"] = r.verdict;
    j["grid"] = r.grid;
    j["h"] = r.h;
    j["observed_order_fine"] = r.observed_order_fine;
    j["min_ratio"] = r.min_ratio;
    j["failed_points"] = r.failed_points;
    return j;
}

// Series specification for `eval`, from the function name and shorthand values.
hyper::PFQSpec pfq_from(const RunConfig& c, const std::string& fn) {
    if (fn == "pfq") return hyper::PFQSpec(c.num, c.den);
    if (fn.size() != 3 || fn[1] != 'f' || !std::isdigit(static_cast<unsigned char>(fn[0])) ||
        !std::isdigit(static_cast<unsigned char>(fn[2]))) {
        throw std::invalid_argument("unknown function '" + fn + "'");
    }
    const std::size_t p = static_cast<std::size_t>(fn[0] - '0');
    const std::size_t q = static_cast<std::size_t>(fn[2] - '0');
    std::vector<double> num = c.num;
    std::vector<double> den = c.den;
    if (num.empty() && den.empty()) {
        if (fn == "1f1") {
            num = {require(c.a, "a")};
            den = {require(c.c, "c")};
        } else if (fn == "2f1") {
            num = {require(c.a, "a"), require(c.b, "b")};
            den = {require(c.c, "c")};
        } else if (fn == "0f2") {
            den = {require(c.c1, "c1"), require(c.c2, "c2")};
        }
    }
    if (num.size() != p || den.size() != q) {
        throw std::invalid_argument(fn + " needs " + std::to_string(p) + " numerator and " +
                                    std::to_string(q) + " denominator parameters (--num/--den)");
    }
    return hyper::PFQSpec(num, den);
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::invalid_argument("cannot open output file " + path);
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

int cmd_eval(const RunConfig& c, std::ostream& os) {
    const hyper::EvalOptions opts = eval_options(c);
    const std::string fn = lower(c.fn);
    hyper::EvalResult r;
    if (fn == "psi2") {
        const hyper::Psi2Spec spec(require(c.a, "a"), require(c.c1, "c1"), require(c.c2, "c2"));
        r = hyper::psi2_partial(spec, require(c.x, "x"), require(c.y, "y"), c.dx, c.dy, opts);
    } else if (fn == "kdf") {
        const hyper::KdFSpec spec(c.num_joint, c.num_x, c.num_y, c.den_joint, c.den_x, c.den_y);
        r = hyper::kdf_partial(spec, require(c.x, "x"), require(c.y, "y"), c.dx, c.dy, opts);
    } else {
        r = hyper::pfq_derivative(pfq_from(c, fn), require(c.x, "x"), c.deriv, opts);
    }
    if (c.format == "json") {
        json j{{"fn", fn},
               {"value", r.value},
               {"terms_used", r.terms_used},
               {"truncation_estimate", r.truncation_estimate},
               {"converged", r.converged}};
        os << j.dump(2) << '\n';
    } else {
        os << "value,terms_used,truncation_estimate,converged\n";
        os << fmt(r.value) << ',' << r.terms_used << ',' << fmt(r.truncation_estimate) << ','
           << (r.converged ? "true" : "false") << '\n';
    }
    return kOk;
}

int cmd_branch_eval(const RunConfig& c, std::ostream& os) {
    const FamilyId family = families::parse_family(c.family);
    const SolutionBranch branch{family, c.branch, c.constant};
    const Point p = point_from(family, c);
    const double u = families::eval_branch(branch, c.params, p, eval_options(c));
    const auto names = coordinate_names(family);
    std::vector<double> coords{p.x};
    if (p.y) coords.push_back(*p.y);
    if (p.t) coords.push_back(*p.t);
    if (c.format == "json") {
        json j{{"family", c.family}, {"branch", c.branch}, {"constant", c.constant},
               {"params", params_json(c.params)}, {"u", u}};
        for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = coords[i];
        os << j.dump(2) << '\n';
        return kOk;
    }
    std::vector<std::string> header = names;
    header.push_back("u");
    csv_row(os, header);
    std::vector<std::string> row;
    for (double v : coords) row.push_back(fmt(v));
    row.push_back(fmt(u));
    csv_row(os, row);
    return kOk;
}

int cmd_sample(const RunConfig& c, std::ostream& os) {
    const FamilyId family = families::parse_family(c.family);
    const SolutionBranch branch{family, c.branch, c.constant};
    const verify::GridSpec grid = grid_from(family, c);
    const hyper::EvalOptions opts = eval_options(c);
    const auto xs = grid.x.values();
    const auto ys = grid.y ? grid.y->values() : std::vector<double>{0.0};
    const auto ts = grid.t ? grid.t->values() : std::vector<double>{0.0};

    std::vector<std::vector<double>> rows;
    for (double x : xs) {
        for (double y : ys) {
            for (double t : ts) {
                Point p{x, std::nullopt, std::nullopt};
                if (grid.y) p.y = y;
                if (grid.t) p.t = t;
                if (family == FamilyId::T4 &&
                    std::abs(families::similarity_map(family, c.params, p).xi) >= 1.0) {
                    continue;
                }
                std::vector<double> row{x};
                if (p.y) row.push_back(*p.y);
                if (p.t) row.push_back(*p.t);
                row.push_back(families::eval_branch(branch, c.params, p, opts));
                rows.push_back(std::move(row));
            }
        }
    }

    std::vector<std::string> header = coordinate_names(family);
    header.push_back("u");
    if (c.format == "json") {
        json j{{"family", c.family}, {"branch", c.branch}, {"columns", header}, {"rows", rows}};
        os << j.dump(2) << '\n';
        return kOk;
    }
    csv_row(os, header);
    for (const auto& r : rows) {
        std::vector<std::string> cells;
        for (double v : r) cells.push_back(fmt(v));
        csv_row(os, cells);
    }
    return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
    const FamilyId family = families::parse_family(c.family);
    const SolutionBranch branch{family, c.branch, c.constant};
    verify::ResidualReport report;
    if (c.ode) {
        report = verify::ode_residual(branch, c.params, verify::default_similarity_points(family),
                                      eval_options(c));
    } else {
        verify::FDScheme scheme = verify::default_scheme(family);
        if (c.h) scheme.h = *c.h;
        scheme.validate();
        const verify::GridSpec grid = grid_from(family, c);
        const auto points = verify::make_grid(family, c.params, grid, scheme);
        report = verify::pde_residual_sweep(branch, c.params, points, scheme, c.threads);
        report.grid = grid.describe();
    }

    json summary = report_summary(report);
    if (!c.summary.empty()) {
        std::ofstream f(c.summary, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open summary file " + c.summary);
        f << summary.dump(2) << '\n';
    }
    if (c.format == "json") {
        json pts = json::array();
        for (const auto& r : report.points) {
            json p;
            for (std::size_t i = 0; i < r.coords.size(); ++i) p[report.coordinate_names[i]] = r.coords[i];
            p["residual"] = r.residual;
            p["rel_residual"] = r.rel_residual;
            if (!c.ode) {
                p["residual_half"] = r.residual_half;
                p["residual_quarter"] = r.residual_quarter;
            }
            if (!r.error.empty()) p["error"] = r.error;
            pts.push_back(std::move(p));
        }
        summary["points"] = std::move(pts);
        os << summary.dump(2) << '\n';
        return kOk;
    }
    std::vector<std::string> header = report.coordinate_names;
    header.push_back("residual");
    header.push_back("rel_residual");
    csv_row(os, header);
    for (const auto& r : report.points) {
        std::vector<std::string> cells;
        for (double v : r.coords) cells.push_back(fmt(v));
        const bool ok = r.error.empty();
        cells.push_back(ok ? fmt(r.residual) : "nan");
        cells.push_back(ok ? fmt(r.rel_residual) : "nan");
        csv_row(os, cells);
    }
    return kOk;
}

int cmd_adjudicate(const RunConfig& c, std::ostream& os) {
    const FamilyId family = families::parse_family(c.family);
    verify::FDScheme scheme = verify::default_scheme(family);
    if (c.h) scheme.h = *c.h;
    scheme.validate();
    const verify::GridSpec grid = grid_from(family, c);
    const verify::AdjudicationReport report =
        verify::adjudicate_prefactors(family, c.params, grid, scheme);

    if (c.format == "json") {
        json entries = json::array();
        for (const auto& e : report.entries) {
            entries.push_back({{"branch", e.branch},
                               {"equation", e.equation},
                               {"derived", report_summary(e.derived)},
                               {"printed", report_summary(e.printed)},
                               {"derived_consistent", e.derived_consistent},
                               {"printed_consistent", e.printed_consistent}});
        }
        json j{{"family", c.family}, {"h", scheme.h}, {"grid", grid.describe()}, {"entries", entries}};
        os << j.dump(2) << '\n';
        return kOk;
    }
    os << "branch,equation,form,max_abs_residual,max_rel_residual,observed_order,min_ratio,verdict\n";
    for (const auto& e : report.entries) {
        for (const auto* r : {&e.derived, &e.printed}) {
            csv_row(os, std::vector<std::string>{
                            std::to_string(e.branch), csv_field(e.equation),
                            r == &e.derived ? "P*omega" : "printed", fmt(r->max_abs_residual),
                            fmt(r->max_rel_residual), fmt(r->observed_order), fmt(r->min_ratio),
                            r->verdict});
        }
    }
    return kOk;
}

int cmd_list(const RunConfig& c, std::ostream& os) {
    std::vector<FamilyId> fams;
    if (c.family.empty()) {
        fams.assign(std::begin(families::kAllFamilies), std::end(families::kAllFamilies));
    } else {
        fams.push_back(families::parse_family(c.family));
    }
    json rows = json::array();
    if (c.format == "csv") os << "family,branch,equation,function,formula,note\n";
    for (FamilyId f : fams) {
        for (const auto& info : families::list_branches(f)) {
            const std::string name(families::to_string(f));
            if (c.format == "json") {
                rows.push_back({{"family", name},
                                {"branch", info.branch.index},
                                {"equation", info.equation},
                                {"function", info.function},
                                {"formula", info.formula},
                                {"note", info.note}});
            } else {
                csv_row(os, std::vector<std::string>{name, std::to_string(info.branch.index),
                                                     csv_field(info.equation), csv_field(info.function),
                                                     csv_field(info.formula), csv_field(info.note)});
            }
        }
    }
    if (c.format == "json") os << rows.dump(2) << '\n';
    return kOk;
}

} // namespace

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_axis(double min, double max, int count, bool log) {
    return fmt(min) + ":" + fmt(max) + ":" + std::to_string(count) + (log ? ":log" : ":lin");
}

void RunConfig::validate() const {
    if (std::find(std::begin(kCommands), std::end(kCommands), command) == std::end(kCommands)) {
        throw std::invalid_argument(command.empty() ? "no command given"
                                                    : "unknown command '" + command + "'");
    }
    if (format != "csv" && format != "json") {
        throw std::invalid_argument("format must be csv or json");
    }
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (h && !(*h > 0.0)) throw std::invalid_argument("h must be positive");
    hyper::EvalOptions o;
    o.rel_tol = rel_tol;
    o.max_terms = max_terms;
    o.consecutive_small = consecutive_small;
    o.validate();
    if (command == "eval" && fn.empty()) throw std::invalid_argument("eval needs --fn");
    if (needs_family(command) && family.empty()) {
        throw std::invalid_argument(command + " needs --family");
    }
    if (!family.empty()) {
        const FamilyId f = families::parse_family(family);
        if (needs_branch(command) && (branch < 1 || branch > families::branch_count(f))) {
            throw std::invalid_argument("family " + family + " has branches 1.." +
                                        std::to_string(families::branch_count(f)));
        }
    }
    for (const auto* g : {&grid_x, &grid_y, &grid_t}) {
        if (*g) parse_axis(**g);
    }
}

json to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["family"] = c.family;
    j["branch"] = c.branch;
    j["constant"] = c.constant;
    j["params"] = params_json(c.params);
    j["fn"] = c.fn;
    j["a"] = optional_json(c.a);
    j["b"] = optional_json(c.b);
    j["c"] = optional_json(c.c);
    j["c1"] = optional_json(c.c1);
    j["c2"] = optional_json(c.c2);
    j["num"] = c.num;
    j["den"] = c.den;
    j["num_joint"] = c.num_joint;
    j["num_x"] = c.num_x;
    j["num_y"] = c.num_y;
    j["den_joint"] = c.den_joint;
    j["den_x"] = c.den_x;
    j["den_y"] = c.den_y;
    j["deriv"] = c.deriv;
    j["dx"] = c.dx;
    j["dy"] = c.dy;
    j["x"] = optional_json(c.x);
    j["y"] = optional_json(c.y);
    j["t"] = optional_json(c.t);
    j["grid_x"] = optional_json(c.grid_x);
    j["grid_y"] = optional_json(c.grid_y);
    j["grid_t"] = optional_json(c.grid_t);
    j["h"] = optional_json(c.h);
    j["ode"] = c.ode;
    j["threads"] = c.threads;
    j["rel_tol"] = c.rel_tol;
    j["max_terms"] = c.max_terms;
    j["consecutive_small"] = c.consecutive_small;
    j["out"] = c.out;
    j["summary"] = c.summary;
    j["format"] = c.format;
    return j;
}

RunConfig from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    RunConfig c;
    try {
        c.command = value_or(j, "command", c.command);
        c.family = lower(value_or(j, "family", c.family));
        c.branch = value_or(j, "branch", c.branch);
        c.constant = value_or(j, "constant", c.constant);
        if (auto it = j.find("params"); it != j.end() && it->is_object()) {
            const json& p = *it;
            c.params.alpha = value_or(p, "alpha", c.params.alpha);
            c.params.beta = value_or(p, "beta", c.params.beta);
            c.params.m = value_or(p, "m", c.params.m);
            c.params.n = value_or(p, "n", c.params.n);
            c.params.k = value_or(p, "k", c.params.k);
            c.params.nu = value_or(p, "nu", c.params.nu);
            c.params.E_amp = value_or(p, "E", c.params.E_amp);
        }
        c.fn = value_or(j, "fn", c.fn);
        c.a = optional_from<double>(j, "a");
        c.b = optional_from<double>(j, "b");
        c.c = optional_from<double>(j, "c");
        c.c1 = optional_from<double>(j, "c1");
        c.c2 = optional_from<double>(j, "c2");
        c.num = value_or(j, "num", c.num);
        c.den = value_or(j, "den", c.den);
        c.num_joint = value_or(j, "num_joint", c.num_joint);
        c.num_x = value_or(j, "num_x", c.num_x);
        c.num_y = value_or(j, "num_y", c.num_y);
        c.den_joint = value_or(j, "den_joint", c.den_joint);
        c.den_x = value_or(j, "den_x", c.den_x);
        c.den_y = value_or(j, "den_y", c.den_y);
        c.deriv = value_or(j, "deriv", c.deriv);
        c.dx = value_or(j, "dx", c.dx);
        c.dy = value_or(j, "dy", c.dy);
        c.x = optional_from<double>(j, "x");
        c.y = optional_from<double>(j, "y");
        c.t = optional_from<double>(j, "t");
        c.grid_x = optional_from<std::string>(j, "grid_x");
        c.grid_y = optional_from<std::string>(j, "grid_y");
        c.grid_t = optional_from<std::string>(j, "grid_t");
        c.h = optional_from<double>(j, "h");
        c.ode = value_or(j, "ode", c.ode);
        c.threads = value_or(j, "threads", c.threads);
        c.rel_tol = value_or(j, "rel_tol", c.rel_tol);
        c.max_terms = value_or(j, "max_terms", c.max_terms);
        c.consecutive_small = value_or(j, "consecutive_small", c.consecutive_small);
        c.out = value_or(j, "out", c.out);
        c.summary = value_or(j, "summary", c.summary);
        c.format = lower(value_or(j, "format", c.format));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad config value: ") + e.what());
    }
    return c;
}

ParseResult parse_args(int argc, const char* const* argv) {
    CLI::App app{"Self-similar solutions of degenerate PDEs: series evaluation, sampling and "
                 "residual verification",
                 "selfsim"};
    app.set_help_flag("--help", "Print this help message and exit");
    json cli = json::object();
    std::string config_path;
    bool dump = false;

    auto scalar = [&](const std::string& flag, const std::string& pointer, const std::string& desc) {
        return app.add_option_function<double>(
            flag, [&cli, pointer](const double& v) { cli[json::json_pointer(pointer)] = v; }, desc);
    };
    auto integer = [&](const std::string& flag, const std::string& pointer, const std::string& desc) {
        return app.add_option_function<long long>(
            flag, [&cli, pointer](const long long& v) { cli[json::json_pointer(pointer)] = v; }, desc);
    };
    auto text = [&](const std::string& flag, const std::string& pointer, const std::string& desc) {
        return app.add_option_function<std::string>(
            flag, [&cli, pointer](const std::string& v) { cli[json::json_pointer(pointer)] = v; }, desc);
    };
    auto list = [&](const std::string& flag, const std::string& pointer, const std::string& desc) {
        return app
            .add_option_function<std::vector<double>>(
                flag, [&cli, pointer](const std::vector<double>& v) { cli[json::json_pointer(pointer)] = v; },
                desc)
            ->delimiter(',');
    };

    text("command", "/command", "eval | branch-eval | sample | verify | adjudicate | list");
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_flag("--dump-config", dump, "Print the merged config as JSON and exit");

    text("--family", "/family", "p0, p2, p3, t4, t5 or f6");
    integer("--branch", "/branch", "Branch index (1-based)");
    scalar("--constant", "/constant", "Branch multiplicative constant");
    scalar("--alpha", "/params/alpha", "P2/P3 alpha");
    scalar("--beta", "/params/beta", "P3 beta");
    scalar("--m", "/params/m", "Degeneracy exponent of y (T4, T5)");
    scalar("--n", "/params/n", "Degeneracy exponent of x (T5, F6)");
    scalar("--k", "/params/k", "Time exponent (T5, F6)");
    scalar("--nu", "/params/nu", "P0 viscosity");
    scalar("--E", "/params/E", "P0 amplitude");

    text("--fn", "/fn", "eval: 1f1, 2f1, 0f2, pfq, <p>f<q>, psi2 or kdf");
    scalar("--a", "/a", "Numerator parameter a");
    scalar("--b", "/b", "Numerator parameter b");
    scalar("--c", "/c", "Denominator parameter c");
    scalar("--c1", "/c1", "Denominator parameter c1");
    scalar("--c2", "/c2", "Denominator parameter c2");
    list("--num", "/num", "Numerator parameters, comma separated");
    list("--den", "/den", "Denominator parameters, comma separated");
    list("--num-joint", "/num_joint", "KdF joint numerator parameters");
    list("--num-x", "/num_x", "KdF x numerator parameters");
    list("--num-y", "/num_y", "KdF y numerator parameters");
    list("--den-joint", "/den_joint", "KdF joint denominator parameters");
    list("--den-x", "/den_x", "KdF x denominator parameters");
    list("--den-y", "/den_y", "KdF y denominator parameters");
    integer("--deriv", "/deriv", "pFq derivative order");
    integer("--dx", "/dx", "Derivative order in x (psi2, kdf)");
    integer("--dy", "/dy", "Derivative order in y (psi2, kdf)");

    scalar("--x", "/x", "x coordinate (radius for p0) or series argument");
    scalar("--y", "/y", "y coordinate or second series argument");
    scalar("--t", "/t", "Time");
    text("--grid-x", "/grid_x", "x axis as min:max:count[:log|lin]");
    text("--grid-y", "/grid_y", "y axis as min:max:count[:log|lin]");
    text("--grid-t", "/grid_t", "t axis as min:max:count[:log|lin]");
    scalar("--h", "/h", "Finite-difference step");
    app.add_flag_function(
        "--ode", [&cli](std::int64_t) { cli["ode"] = true; },
        "verify: reduced-equation residuals instead of PDE residuals");
    integer("--threads", "/threads", "Worker threads for sweeps");
    scalar("--rel-tol", "/rel_tol", "Series relative tolerance");
    integer("--max-terms", "/max_terms", "Series term budget");
    integer("--consecutive-small", "/consecutive_small", "Negligible terms required to stop");
    text("--out", "/out", "Output path (default: standard output)");
    text("--summary", "/summary", "verify: also write the JSON summary here");
    text("--format", "/format", "csv or json");

    ParseResult result;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        result.help = true;
        result.help_text = app.help();
        return result;
    } catch (const CLI::ParseError& e) {
        throw std::invalid_argument(e.what());
    }

    json merged = to_json(RunConfig{});
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot read config file " + config_path);
        json file;
        try {
            in >> file;
        } catch (const json::exception& e) {
            throw std::invalid_argument("config file " + config_path + ": " + e.what());
        }
        if (!file.is_object()) throw std::invalid_argument("config file must hold a JSON object");
        merged.merge_patch(file);
    }
    merged.merge_patch(cli);
    result.config = from_json(merged);
    result.dump_config = dump;
    return result;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        Output sink(config.out, out);
        std::ostream& os = sink.get();
        if (config.command == "eval") return cmd_eval(config, os);
        if (config.command == "branch-eval") return cmd_branch_eval(config, os);
        if (config.command == "sample") return cmd_sample(config, os);
        if (config.command == "verify") return cmd_verify(config, os);
        if (config.command == "adjudicate") return cmd_adjudicate(config, os);
        return cmd_list(config, os);
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomainError;
    } catch (const ConvergenceError& e) {
        err << "convergence error: " << e.what() << '\n';
        return kConvergenceError;
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    ParseResult parsed;
    try {
        parsed = parse_args(argc, argv);
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    if (parsed.help) {
        out << parsed.help_text;
        return kOk;
    }
    if (parsed.dump_config) {
        out << to_json(parsed.config).dump(2) << '\n';
        return kOk;
    }
    return run(parsed.config, out, err);
}

} // namespace selfsim::cli
