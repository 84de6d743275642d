#include "selfsim/hyperfun.hpp"

#include "selfsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace selfsim::hyper {

namespace {

// Counts consecutive negligible contributions and decides when to stop.
class StopRule {
public:
    explicit StopRule(const EvalOptions& opts) : opts_(opts) {}

    // Returns true once `consecutive_small` negligible contributions were seen.
    bool observe(double contribution_magnitude, double partial_sum) {
        last_ = contribution_magnitude;
        const double bound = partial_sum == 0.0 ? kAbsoluteFloor
                                                : opts_.rel_tol * std::abs(partial_sum);
        if (kTruncationSafety * contribution_magnitude <= bound) {
            ++run_;
        } else {
            run_ = 0;
        }
        return run_ >= opts_.consecutive_small;
    }

    double estimate() const { return kTruncationSafety * last_; }

private:
    const EvalOptions& opts_;
    std::size_t run_ = 0;
    double last_ = 0.0;
};

void check_denominators(const std::vector<double>& params, const char* what) {
    for (double c : params) {
        if (is_nonpositive_integer(c)) {
            std::ostringstream os;
            os << what << " parameter " << c << " is zero or a negative integer";
            throw DomainError(os.str());
        }
    }
}

double rising_ratio(const std::vector<double>& upper, const std::vector<double>& lower,
                    double index) {
    double r = 1.0;
    for (double a : upper) r *= a + index;
    for (double c : lower) r /= c + index;
    return r;
}

double product(const std::vector<double>& v) {
    double r = 1.0;
    for (double a : v) r *= a;
    return r;
}

std::vector<double> plus(std::vector<double> v, double by) {
    for (double& a : v) a += by;
    return v;
}

#ifdef __SIZEOF_FLOAT128__
using WideReal = __float128;
#else
using WideReal = long double;
#endif

// Largest |term| / |sum| tolerated before the series is re-summed in WideReal.
constexpr double kCancellationGuard = 1e4;

template <class Real>
EvalResult sum_pfq_series_as(const PFQSpec& spec, double x, const EvalOptions& opts,
                             double* max_ratio) {
    StopRule stop(opts);
    Real term = 1;
    Real sum = 1;
    double largest = 1.0;
    std::size_t used = 1;
    bool converged = false;
    while (used < opts.max_terms) {
        const Real m = static_cast<Real>(used - 1);
        Real ratio = static_cast<Real>(x) / (m + 1);
        for (double a : spec.numerator()) ratio *= static_cast<Real>(a) + m;
        for (double c : spec.denominator()) ratio /= static_cast<Real>(c) + m;
        term *= ratio;
        sum += term;
        ++used;
        const double t = std::abs(static_cast<double>(term));
        const double s = static_cast<double>(sum);
        largest = std::max(largest, t);
        if (!std::isfinite(s)) break;
        if (stop.observe(t, s)) {
            converged = true;
            break;
        }
    }
    const double value = static_cast<double>(sum);
    if (max_ratio) *max_ratio = value == 0.0 ? HUGE_VAL : largest / std::abs(value);
    return {value, used, stop.estimate(), converged};
}

// Extended precision first; alternating series whose terms dwarf the sum
// are summed again in quadruple precision.
EvalResult sum_pfq_series(const PFQSpec& spec, double x, const EvalOptions& opts) {
    double ratio = 0.0;
    EvalResult r = sum_pfq_series_as<long double>(spec, x, opts, &ratio);
    if (x < 0.0 && ratio > kCancellationGuard && std::isfinite(r.value)) {
        r = sum_pfq_series_as<WideReal>(spec, x, opts, nullptr);
    }
    return r;
}

// Sums a double series over diagonal shells r + s = N.
//
// joint(n) = A(n+1)/A(n) for the joint coefficient, x_step(r) and y_step(s)
// advance the x or y factor by one index including the x/(r+1) or y/(s+1).
// The stop criterion is applied to the sum of absolute values of a shell.
template <class Joint, class XStep, class YStep>
EvalResult sum_shells(Joint joint, XStep x_step, YStep y_step, const EvalOptions& opts) {
    StopRule stop(opts);
    std::vector<double> prev{1.0};
    std::vector<double> cur;
    double sum = 1.0;
    std::size_t shells = 1;
    while (shells < opts.max_terms) {
        const std::size_t n = shells;
        const double jr = joint(static_cast<double>(n - 1));
        cur.assign(n + 1, 0.0);
        double shell_sum = 0.0;
        double shell_abs = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double s = static_cast<double>(n - 1 - r);
            cur[r] = prev[r] * jr * y_step(s);
        }
        cur[n] = prev[n - 1] * jr * x_step(static_cast<double>(n - 1));
        for (double t : cur) {
            shell_sum += t;
            shell_abs += std::abs(t);
        }
        sum += shell_sum;
        ++shells;
        std::swap(prev, cur);
        if (!std::isfinite(sum)) break;
        if (stop.observe(shell_abs, sum)) {
            return {sum, shells, stop.estimate(), true};
        }
    }
    return {sum, shells, stop.estimate(), false};
}

EvalResult scaled(EvalResult r, double factor) {
    r.value *= factor;
    r.truncation_estimate *= std::abs(factor);
    return r;
}

} // namespace

void EvalOptions::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
    if (max_terms == 0) throw std::invalid_argument("max_terms must be positive");
    if (max_terms > kHardTermCap) {
        throw std::invalid_argument("max_terms exceeds the hard cap of 1000000");
    }
    if (consecutive_small == 0) throw std::invalid_argument("consecutive_small must be >= 1");
}

bool is_nonpositive_integer(double c) {
    return c <= 0.0 && std::abs(c - std::round(c)) <= 1e-12;
}

double pochhammer(double a, unsigned m) {
    double r = 1.0;
    for (unsigned i = 0; i < m; ++i) r *= a + static_cast<double>(i);
    return r;
}

PFQSpec::PFQSpec(std::vector<double> numerator, std::vector<double> denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
    check_denominators(denominator_, "denominator");
    if (p() > q() + 1) {
        throw DomainError("pFq requires p <= q + 1 (series diverges otherwise)");
    }
}

PFQSpec PFQSpec::shifted(double by) const {
    return PFQSpec(plus(numerator_, by), plus(denominator_, by));
}

double PFQSpec::shift_factor() const {
    return product(numerator_) / product(denominator_);
}

std::string PFQSpec::name() const {
    return std::to_string(p()) + "F" + std::to_string(q());
}

Psi2Spec::Psi2Spec(double a, double c1, double c2) : a_(a), c1_(c1), c2_(c2) {
    check_denominators({c1, c2}, "Psi2 lower");
}

KdFSpec::KdFSpec(std::vector<double> upper_joint, std::vector<double> upper_x,
                 std::vector<double> upper_y, std::vector<double> lower_joint,
                 std::vector<double> lower_x, std::vector<double> lower_y)
    : upper_joint_(std::move(upper_joint)), upper_x_(std::move(upper_x)),
      upper_y_(std::move(upper_y)), lower_joint_(std::move(lower_joint)),
      lower_x_(std::move(lower_x)), lower_y_(std::move(lower_y)) {
    check_denominators(lower_joint_, "KdF joint lower");
    check_denominators(lower_x_, "KdF x lower");
    check_denominators(lower_y_, "KdF y lower");
}

bool KdFSpec::entire() const {
    const auto joint = static_cast<long>(upper_joint_.size()) - static_cast<long>(lower_joint_.size());
    const auto slack_x = static_cast<long>(lower_x_.size()) - static_cast<long>(upper_x_.size());
    const auto slack_y = static_cast<long>(lower_y_.size()) - static_cast<long>(upper_y_.size());
    return joint <= std::min(slack_x, slack_y);
}

KdFSpec KdFSpec::shifted_x() const {
    return KdFSpec(plus(upper_joint_, 1.0), plus(upper_x_, 1.0), upper_y_,
                   plus(lower_joint_, 1.0), plus(lower_x_, 1.0), lower_y_);
}

KdFSpec KdFSpec::shifted_y() const {
    return KdFSpec(plus(upper_joint_, 1.0), upper_x_, plus(upper_y_, 1.0),
                   plus(lower_joint_, 1.0), lower_x_, plus(lower_y_, 1.0));
}

double KdFSpec::shift_factor_x() const {
    return product(upper_joint_) * product(upper_x_) / (product(lower_joint_) * product(lower_x_));
}

double KdFSpec::shift_factor_y() const {
    return product(upper_joint_) * product(upper_y_) / (product(lower_joint_) * product(lower_y_));
}

std::string KdFSpec::signature() const {
    std::ostringstream os;
    os << "F^{" << upper_joint_.size() << ";" << upper_x_.size() << ";" << upper_y_.size()
       << "}_{" << lower_joint_.size() << ";" << lower_x_.size() << ";" << lower_y_.size() << "}";
    return os.str();
}

EvalResult eval_pfq(const PFQSpec& spec, double x, const EvalOptions& opts) {
    opts.validate();
    if (!std::isfinite(x)) throw DomainError("pFq argument is not finite");
    if (spec.p() == spec.q() + 1 && std::abs(x) >= 1.0) {
        std::ostringstream os;
        os << spec.name() << " evaluated at |x| = " << std::abs(x)
           << " >= 1; analytic continuation is not provided";
        throw DomainError(os.str());
    }
    if (spec.p() == 1 && spec.q() == 1 && x < -20.0) {
        const double a = spec.numerator()[0];
        const double c = spec.denominator()[0];
        return scaled(sum_pfq_series(PFQSpec({c - a}, {c}), -x, opts), std::exp(x));
    }
    return sum_pfq_series(spec, x, opts);
}

EvalResult pfq_derivative(const PFQSpec& spec, double x, unsigned order, const EvalOptions& opts) {
    double factor = 1.0;
    PFQSpec current = spec;
    for (unsigned i = 0; i < order; ++i) {
        factor *= current.shift_factor();
        current = current.shifted();
    }
    return scaled(eval_pfq(current, x, opts), factor);
}

EvalResult eval_psi2(const Psi2Spec& spec, double x, double y, const EvalOptions& opts) {
    opts.validate();
    if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("Psi2 argument is not finite");
    const double a = spec.a();
    const double c1 = spec.c1();
    const double c2 = spec.c2();
    return sum_shells([a](double n) { return a + n; },
                      [c1, x](double r) { return x / ((c1 + r) * (r + 1.0)); },
                      [c2, y](double s) { return y / ((c2 + s) * (s + 1.0)); }, opts);
}

EvalResult psi2_partial(const Psi2Spec& spec, double x, double y, unsigned dx_order,
                        unsigned dy_order, const EvalOptions& opts) {
    double a = spec.a();
    double c1 = spec.c1();
    double c2 = spec.c2();
    double factor = 1.0;
    for (unsigned i = 0; i < dx_order; ++i) {
        factor *= a / c1;
        a += 1.0;
        c1 += 1.0;
    }
    for (unsigned i = 0; i < dy_order; ++i) {
        factor *= a / c2;
        a += 1.0;
        c2 += 1.0;
    }
    return scaled(eval_psi2(Psi2Spec(a, c1, c2), x, y, opts), factor);
}

EvalResult eval_kdf(const KdFSpec& spec, double x, double y, const EvalOptions& opts) {
    opts.validate();
    if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("KdF argument is not finite");
    if (!spec.entire() && (x != 0.0 || y != 0.0)) {
        throw DomainError("KdF signature " + spec.signature() +
                          " is not entire; only the origin is accepted");
    }
    return sum_shells(
        [&spec](double n) { return rising_ratio(spec.upper_joint(), spec.lower_joint(), n); },
        [&spec, x](double r) {
            return rising_ratio(spec.upper_x(), spec.lower_x(), r) * x / (r + 1.0);
        },
        [&spec, y](double s) {
            return rising_ratio(spec.upper_y(), spec.lower_y(), s) * y / (s + 1.0);
        },
        opts);
}

EvalResult kdf_partial(const KdFSpec& spec, double x, double y, unsigned dx_order,
                       unsigned dy_order, const EvalOptions& opts) {
    double factor = 1.0;
    KdFSpec current = spec;
    for (unsigned i = 0; i < dx_order; ++i) {
        factor *= current.shift_factor_x();
        current = current.shifted_x();
    }
    for (unsigned i = 0; i < dy_order; ++i) {
        factor *= current.shift_factor_y();
        current = current.shifted_y();
    }
    return scaled(eval_kdf(current, x, y, opts), factor);
}

} // namespace selfsim::hyper
