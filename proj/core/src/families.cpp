#include "selfsim/families.hpp"

#include "selfsim/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace selfsim::families {

using hyper::EvalOptions;
using hyper::EvalResult;
using hyper::KdFSpec;
using hyper::PFQSpec;
using hyper::Psi2Spec;

namespace {

std::string format_list(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(6);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    return v.empty() ? "-" : os.str();
}

double require_converged(const EvalResult& r, const char* what) {
    if (!r.converged) {
        throw ConvergenceError(std::string(what) + " did not converge within the term budget");
    }
    return r.value;
}

// Falling factorial gamma (gamma-1) ... (gamma-k+1).
double falling(double gamma, unsigned k) {
    double r = 1.0;
    for (unsigned i = 0; i < k; ++i) r *= gamma - static_cast<double>(i);
    return r;
}

// d^k/dv^k |v|^gamma for v != 0.
double abs_power_derivative(double v, double gamma, unsigned k) {
    if (gamma == 0.0) return k == 0 ? 1.0 : 0.0;
    return falling(gamma, k) * std::pow(std::abs(v), gamma) / std::pow(v, static_cast<int>(k));
}

double binomial(unsigned n, unsigned k) {
    double r = 1.0;
    for (unsigned i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// One of the three Frobenius exponents of a third-order factor with lower
// parameters (c1, c2): choice 0 is the regular solution, 1 and 2 pick 1 - c1
// and 1 - c2.
struct ThirdOrderFactor {
    double power;
    std::vector<double> lower;
};

ThirdOrderFactor third_order_factor(double c1, double c2, int choice) {
    switch (choice) {
        case 0: return {0.0, {c1, c2}};
        case 1: return {1.0 - c1, {2.0 - c1, 1.0 + c2 - c1}};
        default: return {1.0 - c2, {1.0 + c1 - c2, 2.0 - c2}};
    }
}

// T5 branch index -> (x choice, y choice) in the published ordering.
constexpr std::array<std::array<int, 2>, 9> kT5Choices = {{
    {0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}, {2, 0}, {2, 1}, {2, 2},
}};

struct T5Parts {
    ThirdOrderFactor x;
    ThirdOrderFactor y;
    double joint;
};

T5Parts t5_parts(int index, const Exponents& e) {
    const double a = 1.0;
    const double c1 = (2.0 + e.alpha) / 3.0;
    const double c2 = (1.0 + 2.0 * e.alpha) / 3.0;
    const double d1 = (2.0 + e.beta) / 3.0;
    const double d2 = (1.0 + 2.0 * e.beta) / 3.0;
    const auto [cx, cy] = kT5Choices[static_cast<std::size_t>(index - 1)];
    T5Parts parts{third_order_factor(c1, c2, cx), third_order_factor(d1, d2, cy), a};
    parts.joint += parts.x.power + parts.y.power;
    return parts;
}

// Joint parameter of T5 branches 5, 6, 8, 9 as published; it is the negative
// of the Frobenius-shifted value a + (1 - c) + (1 - d).
double t5_printed_joint(int index, const Exponents& e) {
    switch (index) {
        case 5: return (e.alpha + e.beta - 5.0) / 3.0;
        case 6: return (e.alpha + 2.0 * e.beta - 6.0) / 3.0;
        case 8: return (2.0 * e.alpha + e.beta - 6.0) / 3.0;
        case 9: return (2.0 * e.alpha + 2.0 * e.beta - 7.0) / 3.0;
        default: return t5_parts(index, e).joint;
    }
}

std::array<double, 3> f6_lower(const Exponents& e) {
    return {(3.0 + e.alpha) / 4.0, (2.0 + 2.0 * e.alpha) / 4.0, (1.0 + 3.0 * e.alpha) / 4.0};
}

} // namespace

std::string_view to_string(FamilyId family) {
    switch (family) {
        case FamilyId::P0: return "p0";
        case FamilyId::P2: return "p2";
        case FamilyId::P3: return "p3";
        case FamilyId::T4: return "t4";
        case FamilyId::T5: return "t5";
        case FamilyId::F6: return "f6";
    }
    return "?";
}

FamilyId parse_family(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (FamilyId f : kAllFamilies) {
        if (to_string(f) == lower) return f;
    }
    throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

int branch_count(FamilyId family) {
    switch (family) {
        case FamilyId::P0: return 1;
        case FamilyId::P2: return 2;
        case FamilyId::P3: return 4;
        case FamilyId::T4: return 3;
        case FamilyId::T5: return 9;
        case FamilyId::F6: return 4;
    }
    return 0;
}

bool has_y(FamilyId family) {
    return family == FamilyId::P3 || family == FamilyId::T4 || family == FamilyId::T5;
}

bool has_t(FamilyId family) { return family != FamilyId::T4; }

int similarity_dimension(FamilyId family) {
    return family == FamilyId::P3 || family == FamilyId::T5 ? 2 : 1;
}

int operator_order(FamilyId family) {
    switch (family) {
        case FamilyId::T4:
        case FamilyId::T5: return 3;
        case FamilyId::F6: return 4;
        default: return 2;
    }
}

std::string OmegaForm::function_name() const {
    if (const auto* s = std::get_if<PFQSpec>(&series)) return s->name();
    if (std::holds_alternative<Psi2Spec>(series)) return "Psi2";
    return "KdF " + std::get<KdFSpec>(series).signature();
}

std::string OmegaForm::describe() const {
    std::ostringstream os;
    os.precision(6);
    if (xi_power != 0.0) os << "|xi|^" << xi_power << " ";
    if (eta_power != 0.0) os << "|eta|^" << eta_power << " ";
    if (const auto* s = std::get_if<PFQSpec>(&series)) {
        os << s->name() << "(" << format_list(s->numerator()) << "; "
           << format_list(s->denominator()) << "; ";
        if (arg_scale != 1.0) os << arg_scale << "*";
        os << "xi)";
    } else if (const auto* s = std::get_if<Psi2Spec>(&series)) {
        os << "Psi2(" << s->a() << "; " << s->c1() << ", " << s->c2() << "; xi, eta)";
    } else {
        const auto& k = std::get<KdFSpec>(series);
        os << k.signature() << "[" << format_list(k.upper_joint()) << "; "
           << format_list(k.upper_x()) << "; " << format_list(k.upper_y()) << " | "
           << format_list(k.lower_joint()) << "; " << format_list(k.lower_x()) << "; "
           << format_list(k.lower_y()) << "; xi, eta]";
    }
    return os.str();
}

void check_point(FamilyId family, const Point& p) {
    if (has_y(family) != p.y.has_value()) {
        throw DomainError(std::string("family ") + std::string(to_string(family)) +
                          (has_y(family) ? " needs a y coordinate" : " takes no y coordinate"));
    }
    if (has_t(family) != p.t.has_value()) {
        throw DomainError(std::string("family ") + std::string(to_string(family)) +
                          (has_t(family) ? " needs a t coordinate" : " takes no t coordinate"));
    }
    if (!(p.x > 0.0) || (p.y && !(*p.y > 0.0)) || (p.t && !(*p.t > 0.0))) {
        throw DomainError("point lies outside the open domain (x > 0, y > 0, t > 0)");
    }
    if (!std::isfinite(p.x) || (p.y && !std::isfinite(*p.y)) || (p.t && !std::isfinite(*p.t))) {
        throw DomainError("point has a non-finite coordinate");
    }
}

SimilarityFrame similarity_map(FamilyId family, const FamilyParams& params, const Point& p) {
    check_point(family, p);
    const double x = p.x;
    switch (family) {
        case FamilyId::P0: {
            const double t = *p.t;
            if (!(params.nu > 0.0)) throw DomainError("viscosity nu must be positive");
            return {params.E_amp / (params.nu * t), x * x / (params.nu * t), std::nullopt};
        }
        case FamilyId::P2: {
            const double t = *p.t;
            return {1.0 / std::sqrt(t), -x * x / (4.0 * t), std::nullopt};
        }
        case FamilyId::P3: {
            const double t = *p.t;
            const double y = *p.y;
            return {1.0 / std::sqrt(t), -x * x / (8.0 * t), -y * y / (8.0 * t)};
        }
        case FamilyId::T4: {
            const double y = *p.y;
            const double m = params.m;
            const double base = -3.0 * std::pow(y, (m + 3.0) / 3.0) / (x * (m + 3.0));
            return {std::pow(x, -3.0), base * base * base, std::nullopt};
        }
        case FamilyId::T5: {
            const double t = *p.t;
            const double y = *p.y;
            const double n = params.n;
            const double m = params.m;
            const double k = params.k;
            const double tk1 = std::pow(t, k + 1.0);
            const double prefactor = 1.0 / (2.0 / (k + 1.0) * tk1);
            const double xi = -(k + 1.0) * std::pow(x, n + 3.0) / (2.0 * std::pow(n + 3.0, 3.0) * tk1);
            const double eta = -(k + 1.0) * std::pow(y, m + 3.0) / (2.0 * std::pow(m + 3.0, 3.0) * tk1);
            return {prefactor, xi, eta};
        }
        case FamilyId::F6: {
            const double t = *p.t;
            const double n = params.n;
            const double k = params.k;
            const double tk1 = std::pow(t, k + 1.0);
            return {1.0 / (tk1 / (k + 1.0)),
                    -(k + 1.0) * std::pow(x, n + 4.0) / (std::pow(n + 4.0, 4.0) * tk1),
                    std::nullopt};
        }
    }
    throw std::logic_error("unhandled family");
}

Exponents derived_exponents(FamilyId family, const FamilyParams& params) {
    switch (family) {
        case FamilyId::P0: return {};
        case FamilyId::P2: return {params.alpha, 0.0};
        case FamilyId::P3: return {params.alpha, params.beta};
        case FamilyId::T4:
            if (!(params.m > 0.0)) throw DomainError("T4 needs m > 0");
            return {0.0, params.m / (params.m + 3.0)};
        case FamilyId::T5:
            if (!(params.m > 0.0) || !(params.n > 0.0)) throw DomainError("T5 needs m, n > 0");
            if (!(params.k > 0.0)) throw DomainError("T5 needs k > 0");
            return {params.n / (params.n + 3.0), params.m / (params.m + 3.0)};
        case FamilyId::F6:
            if (!(params.n > 0.0)) throw DomainError("F6 needs n > 0");
            if (!(params.k > 0.0)) throw DomainError("F6 needs k > 0");
            return {params.n / (params.n + 4.0), 0.0};
    }
    throw std::logic_error("unhandled family");
}

void check_branch(const SolutionBranch& branch) {
    if (branch.index < 1 || branch.index > branch_count(branch.family)) {
        std::ostringstream os;
        os << "family " << to_string(branch.family) << " has branches 1.."
           << branch_count(branch.family) << ", got " << branch.index;
        throw DomainError(os.str());
    }
}

OmegaForm omega_form(const SolutionBranch& branch, const FamilyParams& params) {
    check_branch(branch);
    const Exponents e = derived_exponents(branch.family, params);
    const double al = e.alpha;
    const double be = e.beta;
    const int i = branch.index;
    switch (branch.family) {
        case FamilyId::P0:
            return {0.0, 0.0, -0.25, PFQSpec({}, {})};
        case FamilyId::P2:
            if (i == 1) return {0.0, 0.0, 1.0, PFQSpec({0.5}, {(1.0 + 2.0 * al) / 2.0})};
            return {(1.0 - 2.0 * al) / 2.0, 0.0, 1.0,
                    PFQSpec({1.0 - al}, {(3.0 - 2.0 * al) / 2.0})};
        case FamilyId::P3: {
            const double cx = (1.0 + 2.0 * al) / 2.0;
            const double cy = (1.0 + 2.0 * be) / 2.0;
            const bool shift_x = i == 2 || i == 4;
            const bool shift_y = i == 3 || i == 4;
            const double px = shift_x ? 1.0 - cx : 0.0;
            const double py = shift_y ? 1.0 - cy : 0.0;
            return {px, py, 1.0,
                    Psi2Spec(0.5 + px + py, shift_x ? 2.0 - cx : cx, shift_y ? 2.0 - cy : cy)};
        }
        case FamilyId::T4:
            if (i == 1) {
                return {0.0, 0.0, 1.0,
                        PFQSpec({1.0, 4.0 / 3.0, 5.0 / 3.0}, {(2.0 + be) / 3.0, (1.0 + 2.0 * be) / 3.0})};
            }
            if (i == 2) {
                return {(1.0 - be) / 3.0, 0.0, 1.0,
                        PFQSpec({(5.0 - be) / 3.0, (6.0 - be) / 3.0}, {(2.0 + be) / 3.0})};
            }
            return {(2.0 - 2.0 * be) / 3.0, 0.0, 1.0,
                    PFQSpec({(6.0 - 2.0 * be) / 3.0, (7.0 - 2.0 * be) / 3.0}, {(4.0 - be) / 3.0})};
        case FamilyId::T5: {
            const T5Parts parts = t5_parts(i, e);
            return {parts.x.power, parts.y.power, 1.0,
                    KdFSpec({parts.joint}, {}, {}, {}, parts.x.lower, parts.y.lower)};
        }
        case FamilyId::F6: {
            const auto c = f6_lower(e);
            const double a = 1.0;
            if (i == 1) return {0.0, 0.0, 1.0, PFQSpec({a}, {c[0], c[1], c[2]})};
            const auto j = static_cast<std::size_t>(i - 2);
            std::vector<double> lower;
            for (std::size_t l = 0; l < 3; ++l) {
                lower.push_back(l == j ? 2.0 - c[j] : 1.0 + c[l] - c[j]);
            }
            return {1.0 - c[j], 0.0, 1.0, PFQSpec({1.0 - c[j] + a}, lower)};
        }
    }
    throw std::logic_error("unhandled family");
}

OmegaForm f6_reduced_form(const SolutionBranch& branch, const FamilyParams& params) {
    if (branch.family != FamilyId::F6 || branch.index < 2 || branch.index > 4) {
        throw DomainError("reduced 0F2 forms exist for F6 branches 2-4 only");
    }
    OmegaForm full = omega_form(branch, params);
    const auto& spec = std::get<PFQSpec>(full.series);
    const double a = spec.numerator()[0];
    std::vector<double> lower;
    bool dropped = false;
    for (double c : spec.denominator()) {
        if (!dropped && std::abs(c - a) <= 1e-14 * std::max(1.0, std::abs(a))) {
            dropped = true;
            continue;
        }
        lower.push_back(c);
    }
    if (!dropped) throw std::logic_error("F6 branch has no cancelling parameter pair");
    full.series = PFQSpec({}, lower);
    return full;
}

double eval_omega(const OmegaForm& form, double xi, std::optional<double> eta,
                  const EvalOptions& opts) {
    return omega_partial(form, xi, eta, 0, 0, opts);
}

double omega_partial(const OmegaForm& form, double xi, std::optional<double> eta, unsigned i,
                     unsigned j, const EvalOptions& opts) {
    if (form.two_variable() && !eta) throw DomainError("two-variable omega needs eta");
    if (!form.two_variable() && j > 0) throw DomainError("single-variable omega has no eta");
    const double yv = eta.value_or(0.0);

    auto series_partial = [&](unsigned a, unsigned b) {
        if (const auto* s = std::get_if<PFQSpec>(&form.series)) {
            const EvalResult r = hyper::pfq_derivative(*s, form.arg_scale * xi, a, opts);
            return require_converged(r, "pFq") * std::pow(form.arg_scale, static_cast<int>(a));
        }
        if (const auto* s = std::get_if<Psi2Spec>(&form.series)) {
            return require_converged(hyper::psi2_partial(*s, xi, yv, a, b, opts), "Psi2");
        }
        return require_converged(hyper::kdf_partial(std::get<KdFSpec>(form.series), xi, yv, a, b, opts),
                                 "KdF");
    };

    double total = 0.0;
    for (unsigned a = 0; a <= i; ++a) {
        const double dx_pow = abs_power_derivative(xi, form.xi_power, i - a);
        if (dx_pow == 0.0) continue;
        for (unsigned b = 0; b <= j; ++b) {
            const double dy_pow = form.two_variable()
                                      ? abs_power_derivative(yv, form.eta_power, j - b)
                                      : 1.0;
            if (dy_pow == 0.0) continue;
            total += binomial(i, a) * binomial(j, b) * dx_pow * dy_pow * series_partial(a, b);
        }
    }
    return total;
}

double eval_branch(const SolutionBranch& branch, const FamilyParams& params, const Point& p,
                   const EvalOptions& opts) {
    const OmegaForm form = omega_form(branch, params);
    const SimilarityFrame frame = similarity_map(branch.family, params, p);
    return branch.constant * frame.prefactor * eval_omega(form, frame.xi, frame.eta, opts);
}

std::vector<BranchInfo> list_branches(FamilyId family) {
    static const char* kP3[] = {
        "Psi2(1/2; (1+2alpha)/2, (1+2beta)/2; xi, eta)",
        "|xi|^((1-2alpha)/2) Psi2(1-alpha; (3-2alpha)/2, (1+2beta)/2; xi, eta)",
        "|eta|^((1-2beta)/2) Psi2(1-beta; (1+2alpha)/2, (3-2beta)/2; xi, eta)",
        "|xi|^((1-2alpha)/2) |eta|^((1-2beta)/2) Psi2((3-2alpha-2beta)/2; (3-2alpha)/2, (3-2beta)/2; xi, eta)",
    };
    static const char* kT4[] = {
        "3F2(1, 4/3, 5/3; (2+beta)/3, (1+2beta)/3; sigma)",
        "|sigma|^((1-beta)/3) 2F1((5-beta)/3, (6-beta)/3; (2+beta)/3; sigma)",
        "|sigma|^((2-2beta)/3) 2F1((6-2beta)/3, (7-2beta)/3; (4-beta)/3; sigma)",
    };
    static const char* kT5[] = {
        "KdF[1; -; - | -; (2+alpha)/3, (1+2alpha)/3; (2+beta)/3, (1+2beta)/3]",
        "|eta|^((1-beta)/3) KdF[(4-beta)/3; -; - | -; (2+alpha)/3, (1+2alpha)/3; (4-beta)/3, (2+beta)/3]",
        "|eta|^(2(1-beta)/3) KdF[(5-2beta)/3; -; - | -; (2+alpha)/3, (1+2alpha)/3; (5-2beta)/3, (4-beta)/3]",
        "|xi|^((1-alpha)/3) KdF[(4-alpha)/3; -; - | -; (4-alpha)/3, (2+alpha)/3; (2+beta)/3, (1+2beta)/3]",
        "|xi|^((1-alpha)/3) |eta|^((1-beta)/3) KdF[(5-alpha-beta)/3; -; - | -; (4-alpha)/3, (2+alpha)/3; (4-beta)/3, (2+beta)/3]",
        "|xi|^((1-alpha)/3) |eta|^(2(1-beta)/3) KdF[(6-alpha-2beta)/3; -; - | -; (4-alpha)/3, (2+alpha)/3; (5-2beta)/3, (4-beta)/3]",
        "|xi|^(2(1-alpha)/3) KdF[(5-2alpha)/3; -; - | -; (4-alpha)/3, (5-2alpha)/3; (2+beta)/3, (1+2beta)/3]",
        "|xi|^(2(1-alpha)/3) |eta|^((1-beta)/3) KdF[(6-2alpha-beta)/3; -; - | -; (4-alpha)/3, (5-2alpha)/3; (4-beta)/3, (2+beta)/3]",
        "|xi|^(2(1-alpha)/3) |eta|^(2(1-beta)/3) KdF[(7-2alpha-2beta)/3; -; - | -; (4-alpha)/3, (5-2alpha)/3; (4-beta)/3, (5-2beta)/3]",
    };
    static const char* kF6[] = {
        "1F3(1; (3+alpha)/4, (2+2alpha)/4, (1+3alpha)/4; sigma)",
        "|sigma|^((1-alpha)/4) 1F3((5-alpha)/4; (5-alpha)/4, (3+alpha)/4, (2+2alpha)/4; sigma)",
        "|sigma|^((2-2alpha)/4) 1F3((6-2alpha)/4; (5-alpha)/4, (6-2alpha)/4, (3+alpha)/4; sigma)",
        "|sigma|^((3-3alpha)/4) 1F3((7-3alpha)/4; (6-2alpha)/4, (5-alpha)/4, (7-3alpha)/4; sigma)",
    };

    std::vector<BranchInfo> out;
    const int count = branch_count(family);
    for (int i = 1; i <= count; ++i) {
        BranchInfo info;
        info.branch = {family, i, 1.0};
        switch (family) {
            case FamilyId::P0:
                info.equation = "Eq. 1.3";
                info.function = "exp";
                info.formula = "0F0(-xi/4) = exp(-xi/4), xi = r^2/(nu t)";
                break;
            case FamilyId::P2:
                info.equation = i == 1 ? "Eq. 2.8" : "Eq. 2.9";
                info.function = "1F1";
                info.formula = i == 1 ? "1F1(1/2; (1+2alpha)/2; sigma)"
                                      : "|sigma|^((1-2alpha)/2) 1F1(1-alpha; (3-2alpha)/2; sigma)";
                break;
            case FamilyId::P3:
                info.equation = "Eq. 3." + std::to_string(9 + i);
                info.function = "Psi2";
                info.formula = kP3[i - 1];
                if (i == 4) info.note = "time exponent from P*omega: -(3-2alpha-2beta)/2";
                break;
            case FamilyId::T4:
                info.equation = "Eq. 4." + std::to_string(11 + i);
                info.function = i == 1 ? "3F2" : "2F1";
                info.formula = kT4[i - 1];
                break;
            case FamilyId::T5:
                info.equation = "Eq. 5." + std::to_string(15 + i);
                info.function = "KdF F^{1;0;0}_{0;2;2}";
                info.formula = kT5[i - 1];
                if (i == 5 || i == 6 || i == 8 || i == 9) {
                    info.note = "joint parameter a+2-c-d (published value has the opposite sign)";
                }
                break;
            case FamilyId::F6:
                info.equation = "Eq. 6." + std::to_string(10 + i);
                info.function = "1F3";
                info.formula = kF6[i - 1];
                if (i == 2) info.note = "time exponent from P*omega: -(5-alpha)/4";
                if (i == 4) info.note = "time exponent from P*omega: -(7-3alpha)/4";
                break;
        }
        out.push_back(std::move(info));
    }
    return out;
}

std::vector<int> disputed_branches(FamilyId family) {
    switch (family) {
        case FamilyId::P3: return {4};
        case FamilyId::F6: return {2, 3, 4};
        case FamilyId::T5: return {5, 6, 8, 9};
        default: return {};
    }
}

std::string printed_equation(FamilyId family, int index) {
    const auto disputed = disputed_branches(family);
    if (std::find(disputed.begin(), disputed.end(), index) == disputed.end()) {
        throw DomainError("no published closed form is under dispute for this branch");
    }
    for (const auto& info : list_branches(family)) {
        if (info.branch.index == index) return info.equation;
    }
    throw std::logic_error("branch catalog out of sync");
}

double eval_printed(const SolutionBranch& branch, const FamilyParams& params, const Point& p,
                    const EvalOptions& opts) {
    printed_equation(branch.family, branch.index);
    const SimilarityFrame frame = similarity_map(branch.family, params, p);
    const Exponents e = derived_exponents(branch.family, params);
    const double al = e.alpha;
    const double be = e.beta;
    switch (branch.family) {
        case FamilyId::P3: {
            const double x = p.x;
            const double y = *p.y;
            const double t = *p.t;
            const Psi2Spec spec((3.0 - 2.0 * al - 2.0 * be) / 2.0, (3.0 - 2.0 * al) / 2.0,
                                (3.0 - 2.0 * be) / 2.0);
            const double s = require_converged(hyper::eval_psi2(spec, frame.xi, *frame.eta, opts), "Psi2");
            return branch.constant * std::pow(x, 1.0 - 2.0 * al) * std::pow(y, 1.0 - 2.0 * be) /
                   std::pow(t, 2.0 - al - be) * s;
        }
        case FamilyId::F6: {
            const double x = p.x;
            const double base = std::pow(*p.t, params.k + 1.0) / (params.k + 1.0);
            double exponent = 0.0;
            std::vector<double> lower;
            double xpow = 0.0;
            switch (branch.index) {
                case 2:
                    exponent = -(9.0 - al) / 4.0;
                    lower = {(3.0 + al) / 4.0, (2.0 + 2.0 * al) / 4.0};
                    xpow = 1.0;
                    break;
                case 3:
                    exponent = -(6.0 - 2.0 * al) / 4.0;
                    lower = {(5.0 - al) / 4.0, (3.0 + al) / 4.0};
                    xpow = 2.0;
                    break;
                default:
                    exponent = -(11.0 - 3.0 * al) / 4.0;
                    lower = {(6.0 - 2.0 * al) / 4.0, (5.0 - al) / 4.0};
                    xpow = 3.0;
                    break;
            }
            const double s = require_converged(hyper::eval_pfq(PFQSpec({}, lower), frame.xi, opts), "0F2");
            return branch.constant * std::pow(base, exponent) * std::pow(x, xpow) * s;
        }
        case FamilyId::T5: {
            const T5Parts parts = t5_parts(branch.index, e);
            const KdFSpec spec({t5_printed_joint(branch.index, e)}, {}, {}, {}, parts.x.lower,
                               parts.y.lower);
            const double s = require_converged(hyper::eval_kdf(spec, frame.xi, *frame.eta, opts), "KdF");
            return branch.constant * frame.prefactor * std::pow(std::abs(frame.xi), parts.x.power) *
                   std::pow(std::abs(*frame.eta), parts.y.power) * s;
        }
        default: break;
    }
    throw std::logic_error("unhandled disputed branch");
}

} // namespace selfsim::families
