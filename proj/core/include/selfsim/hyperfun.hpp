#pragma once

// Generalized hypergeometric functions by direct series summation.
//
// One-variable pFq, the Humbert confluent function Psi2 and the Kampe de
// Feriet double series are summed term by term with a relative stop
// criterion. Derivatives use the parameter-shift rule, so every derivative
// is again a series of the same family evaluated at shifted parameters.

#include <cstddef>
#include <string>
#include <vector>

namespace selfsim::hyper {

inline constexpr std::size_t kHardTermCap = 1'000'000;

// Multiplier applied to the last summed term to form the truncation estimate.
inline constexpr double kTruncationSafety = 10.0;

// Absolute floor used by the stop criterion when the partial sum is zero.
inline constexpr double kAbsoluteFloor = 1e-300;

struct EvalOptions {
    double rel_tol = 1e-12;
    std::size_t max_terms = 10'000;
    std::size_t consecutive_small = 3;

    // Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct EvalResult {
    double value = 0.0;
    // Series terms summed (one-variable) or diagonal shells summed (double series).
    std::size_t terms_used = 0;
    double truncation_estimate = 0.0;
    bool converged = false;
};

// True when c is zero or a negative integer (within 1e-12).
bool is_nonpositive_integer(double c);

// Rising factorial (a)_m = a (a+1) ... (a+m-1), (a)_0 = 1.
double pochhammer(double a, unsigned m);

/// Parameter bundle for pFq(a_1..a_p; c_1..c_q; x).
///
/// Construction rejects a denominator parameter that is zero or a negative
/// integer, and signatures with p > q + 1.
class PFQSpec {
public:
    PFQSpec(std::vector<double> numerator, std::vector<double> denominator);

    const std::vector<double>& numerator() const { return numerator_; }
    const std::vector<double>& denominator() const { return denominator_; }
    std::size_t p() const { return numerator_.size(); }
    std::size_t q() const { return denominator_.size(); }

    // Infinite radius of convergence (p <= q).
    bool entire() const { return p() <= q(); }

    // All parameters incremented by `by`; used for d/dx.
    PFQSpec shifted(double by = 1.0) const;

    // prod(a_i) / prod(c_j), the factor picked up by one derivative.
    double shift_factor() const;

    // Conventional name such as "1F1" or "3F2".
    std::string name() const;

private:
    std::vector<double> numerator_;
    std::vector<double> denominator_;
};

/// Humbert Psi2(a; c1, c2; x, y) = sum (a)_{m+n} / ((c1)_m (c2)_n m! n!) x^m y^n.
class Psi2Spec {
public:
    Psi2Spec(double a, double c1, double c2);

    double a() const { return a_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }

private:
    double a_;
    double c1_;
    double c2_;
};

/// Kampe de Feriet double series F^{p;q;k}_{l;m;n}.
///
/// Joint parameters carry the index r+s, the x group carries r and the y
/// group carries s.
class KdFSpec {
public:
    KdFSpec(std::vector<double> upper_joint, std::vector<double> upper_x,
            std::vector<double> upper_y, std::vector<double> lower_joint,
            std::vector<double> lower_x, std::vector<double> lower_y);

    const std::vector<double>& upper_joint() const { return upper_joint_; }
    const std::vector<double>& upper_x() const { return upper_x_; }
    const std::vector<double>& upper_y() const { return upper_y_; }
    const std::vector<double>& lower_joint() const { return lower_joint_; }
    const std::vector<double>& lower_x() const { return lower_x_; }
    const std::vector<double>& lower_y() const { return lower_y_; }

    // Entire in both variables: p - l <= min(m - q, n - k).
    bool entire() const;

    KdFSpec shifted_x() const;
    KdFSpec shifted_y() const;
    double shift_factor_x() const;
    double shift_factor_y() const;

    // Signature string "F^{p;q;k}_{l;m;n}".
    std::string signature() const;

private:
    std::vector<double> upper_joint_;
    std::vector<double> upper_x_;
    std::vector<double> upper_y_;
    std::vector<double> lower_joint_;
    std::vector<double> lower_x_;
    std::vector<double> lower_y_;
};

// pFq(x). Throws DomainError when p = q + 1 and |x| >= 1. A term budget
// exhaustion is reported through converged = false with the partial sum.
// 1F1 with x < -20 is evaluated through Kummer's transformation.
EvalResult eval_pfq(const PFQSpec& spec, double x, const EvalOptions& opts = {});

// d^order/dx^order pFq(x).
EvalResult pfq_derivative(const PFQSpec& spec, double x, unsigned order,
                          const EvalOptions& opts = {});

EvalResult eval_psi2(const Psi2Spec& spec, double x, double y, const EvalOptions& opts = {});

EvalResult psi2_partial(const Psi2Spec& spec, double x, double y, unsigned dx_order,
                        unsigned dy_order, const EvalOptions& opts = {});

// Throws DomainError for a non-entire signature away from the origin.
EvalResult eval_kdf(const KdFSpec& spec, double x, double y, const EvalOptions& opts = {});

EvalResult kdf_partial(const KdFSpec& spec, double x, double y, unsigned dx_order,
                       unsigned dy_order, const EvalOptions& opts = {});

} // namespace selfsim::hyper
