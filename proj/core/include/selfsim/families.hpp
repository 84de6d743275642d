#pragma once

// Degenerate PDE families and their self-similar solution branches.
//
// Every branch is u = constant * P * omega, where P and the similarity
// variables come from similarity_map() and omega is a power of the
// similarity variables times a hypergeometric series (OmegaForm).

#include "selfsim/hyperfun.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace selfsim::families {

enum class FamilyId { P0, P2, P3, T4, T5, F6 };

inline constexpr FamilyId kAllFamilies[] = {FamilyId::P0, FamilyId::P2, FamilyId::P3,
                                            FamilyId::T4, FamilyId::T5, FamilyId::F6};

std::string_view to_string(FamilyId family);

// Accepts "p0", "P2", ... Throws std::invalid_argument on an unknown name.
FamilyId parse_family(std::string_view name);

int branch_count(FamilyId family);
bool has_y(FamilyId family);
bool has_t(FamilyId family);
// Number of similarity variables (1 or 2).
int similarity_dimension(FamilyId family);
// Highest derivative order appearing in the operator.
int operator_order(FamilyId family);

struct FamilyParams {
    double alpha = 0.3; // P2/P3 coefficient; derived for T5/F6
    double beta = 0.4;  // P3 coefficient; derived for T4/T5
    double m = 1.0;     // T4/T5 degeneracy exponent of y
    double n = 1.0;     // T5/F6 degeneracy exponent of x
    double k = 1.0;     // T5/F6 time exponent
    double nu = 1.0;    // P0 viscosity
    double E_amp = 1.0; // P0 amplitude E*A
};

struct Point {
    double x = 0.0; // radius r for P0
    std::optional<double> y;
    std::optional<double> t;
};

struct SimilarityFrame {
    double prefactor = 1.0;
    double xi = 0.0; // sigma for single-variable families
    std::optional<double> eta;
};

struct Exponents {
    double alpha = 0.0;
    double beta = 0.0;
};

struct SolutionBranch {
    FamilyId family = FamilyId::P2;
    int index = 1;
    double constant = 1.0;
};

// omega(xi, eta) = |xi|^xi_power |eta|^eta_power S(arg_scale * xi, eta).
//
// Fractional powers of the (negative) similarity variables are taken of the
// absolute value; the phase is a constant absorbed by the branch constant.
struct OmegaForm {
    double xi_power = 0.0;
    double eta_power = 0.0;
    double arg_scale = 1.0;
    std::variant<hyper::PFQSpec, hyper::Psi2Spec, hyper::KdFSpec> series;

    bool two_variable() const { return series.index() != 0; }
    std::string function_name() const;
    std::string describe() const;
};

struct BranchInfo {
    SolutionBranch branch;
    std::string equation;     // e.g. "Eq. 5.16"
    std::string function;     // e.g. "KdF F^{1;0;0}_{0;2;2}"
    std::string formula;      // omega in terms of the family parameters
    std::string note;         // empty unless the construction deviates from print
};

// Throws DomainError if the point is not strictly inside the family's domain
// or carries the wrong set of coordinates.
void check_point(FamilyId family, const Point& p);

SimilarityFrame similarity_map(FamilyId family, const FamilyParams& params, const Point& p);

// Derived exponents; P2/P3 pass alpha and beta through.
// Throws DomainError when m or n <= 0 where the family needs them.
Exponents derived_exponents(FamilyId family, const FamilyParams& params);

void check_branch(const SolutionBranch& branch);

// Throws DomainError when a series parameter degenerates.
OmegaForm omega_form(const SolutionBranch& branch, const FamilyParams& params);

// Throws ConvergenceError when the series does not converge.
double eval_omega(const OmegaForm& form, double xi, std::optional<double> eta,
                  const hyper::EvalOptions& opts = {});

// d^i/dxi^i d^j/deta^j omega via Leibniz' rule and parameter-shift derivatives.
double omega_partial(const OmegaForm& form, double xi, std::optional<double> eta, unsigned i,
                     unsigned j, const hyper::EvalOptions& opts = {});

// constant * P * omega at a physical point.
double eval_branch(const SolutionBranch& branch, const FamilyParams& params, const Point& p,
                   const hyper::EvalOptions& opts = {});

std::vector<BranchInfo> list_branches(FamilyId family);

// F6 branches 2-4 with the cancelling numerator/denominator pair removed (0F2).
OmegaForm f6_reduced_form(const SolutionBranch& branch, const FamilyParams& params);

// Branches whose published closed form is checked against the P * omega
// construction (P3: 4; F6: 2, 3, 4; T5: 5, 6, 8, 9).
std::vector<int> disputed_branches(FamilyId family);

// Equation tag of the printed closed form of a disputed branch.
std::string printed_equation(FamilyId family, int index);

// Closed form exactly as printed, for disputed branches only.
double eval_printed(const SolutionBranch& branch, const FamilyParams& params, const Point& p,
                    const hyper::EvalOptions& opts = {});

} // namespace selfsim::families
