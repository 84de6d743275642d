#pragma once

// Numerical verification that solution branches annihilate their operators.
//
// PDE residuals use second-order central differences and are reported at
// steps h, h/2 and h/4 so the refinement ratio can be checked pointwise.
// Reduced-equation residuals plug analytic series derivatives of omega into
// the ODE or ODE system in the similarity variables.

#include "selfsim/families.hpp"
#include "selfsim/hyperfun.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace selfsim::verify {

using families::FamilyId;
using families::FamilyParams;
using families::Point;
using families::SolutionBranch;

using Field = std::function<double(const Point&)>;

// Residuals at or below this absolute level are treated as round-off.
inline constexpr double kNoiseFloor = 1e-12;
// Minimum E(h)/E(h/2) for a second-order scheme to count as converging.
inline constexpr double kMinRefinementRatio = 3.0;
// Reduced-equation residual tolerance relative to the largest term.
inline constexpr double kOdeTolerance = 1e-9;
// Largest |sigma| admitted into T4 grids (Gauss/Clausen series radius is 1).
inline constexpr double kT4SigmaLimit = 0.9;

struct FDScheme {
    int order_required = 2; // highest derivative in the operator, 1..4
    double h = 1e-3;

    // Central stencil width 2 * ceil(order / 2) + 1.
    int stencil_width() const { return 2 * ((order_required + 1) / 2) + 1; }
    void validate() const;
};

// Step per operator order: 1e-2 up to third order, 2e-2 for fourth order.
// Truncation error then dominates round-off at h, h/2 and h/4.
FDScheme default_scheme(FamilyId family);

// Series options used for fields under finite differencing.
hyper::EvalOptions field_options();

struct AxisSpec {
    double min = 0.5;
    double max = 2.0;
    int count = 5;
    bool log = true;

    void validate() const;
    std::vector<double> values() const;
};

struct GridSpec {
    AxisSpec x;
    std::optional<AxisSpec> y;
    std::optional<AxisSpec> t;

    std::string describe() const;
};

// Log-spaced 5 points per axis on [0.5, 2].
GridSpec default_grid(FamilyId family);

// Tensor grid for the family. Points closer than 5h to a degeneracy line and
// T4 points whose stencil reaches |sigma| > kT4SigmaLimit are dropped.
std::vector<Point> make_grid(FamilyId family, const FamilyParams& params, const GridSpec& grid,
                             const FDScheme& scheme);

struct OperatorValue {
    double residual = 0.0;
    double scale = 0.0; // largest |individual operator term|
};

// Operator with every derivative replaced by its central difference.
// Throws DomainError when the stencil leaves the domain.
OperatorValue operator_terms(FamilyId family, const FamilyParams& params, const Field& field,
                             const Point& p, const FDScheme& scheme);

double apply_operator(FamilyId family, const FamilyParams& params, const Field& field,
                      const Point& p, const FDScheme& scheme);

// Operator applied to a branch with exact chain-rule derivatives (P2, P3).
OperatorValue analytic_operator(const SolutionBranch& branch, const FamilyParams& params,
                                const Point& p, const hyper::EvalOptions& opts = field_options());

struct PointRecord {
    std::vector<double> coords;
    double residual = 0.0;          // at h (PDE) or worst equation (ODE)
    double rel_residual = 0.0;
    double residual_half = 0.0;     // at h/2
    double residual_quarter = 0.0;  // at h/4
    double ratio = 0.0;             // |E(h)| / |E(h/2)|
    bool above_floor = false;
    std::string error;              // non-empty when evaluation failed
};

struct ResidualReport {
    FamilyId family = FamilyId::P2;
    int branch = 0;                 // 0 for fields that are not catalogued branches
    std::string label;
    FamilyParams params;
    std::string grid;
    std::vector<std::string> coordinate_names;
    double h = 0.0;
    std::vector<PointRecord> points;
    double max_abs_residual = 0.0;
    double max_abs_residual_half = 0.0;
    double max_abs_residual_quarter = 0.0;
    double max_rel_residual = 0.0;
    double observed_order = 0.0;      // log2 of E(h)/E(h/2) on the maxima
    double observed_order_fine = 0.0; // log2 of E(h/2)/E(h/4) on the maxima
    double min_ratio = 0.0;           // over points above the noise floor
    int failed_points = 0;
    std::string verdict;              // CONSISTENT / INCONSISTENT, PASS / FAIL for ODE
};

ResidualReport pde_residual_sweep(FamilyId family, const FamilyParams& params, const Field& field,
                                  const std::vector<Point>& grid, const FDScheme& scheme,
                                  unsigned threads = 1);

ResidualReport pde_residual_sweep(const SolutionBranch& branch, const FamilyParams& params,
                                  const std::vector<Point>& grid, const FDScheme& scheme,
                                  unsigned threads = 1);

struct SimilarityPoint {
    double xi = 0.0;
    std::optional<double> eta;
};

// Three interior points per family, inside every evaluator's domain.
std::vector<SimilarityPoint> default_similarity_points(FamilyId family);

// Residual of the reduced ODE (or both equations of the reduced system).
OperatorValue reduced_equation(FamilyId family, const FamilyParams& params,
                               const families::OmegaForm& form, const SimilarityPoint& s,
                               const hyper::EvalOptions& opts, int equation = 0);

ResidualReport ode_residual(const SolutionBranch& branch, const FamilyParams& params,
                            const std::vector<SimilarityPoint>& points,
                            const hyper::EvalOptions& opts = {});

struct AdjudicationEntry {
    int branch = 0;
    std::string equation;
    ResidualReport derived;
    ResidualReport printed;
    bool derived_consistent = false;
    bool printed_consistent = false;
};

struct AdjudicationReport {
    FamilyId family = FamilyId::P3;
    std::vector<AdjudicationEntry> entries;
};

// Sweeps both the P * omega form and the published closed form of each
// disputed branch and flags which one converges under refinement.
AdjudicationReport adjudicate_prefactors(FamilyId family, const FamilyParams& params,
                                         const GridSpec& grid, const FDScheme& scheme);

// Refinement criterion shared by sweeps and adjudication.
bool is_consistent(const ResidualReport& report);

} // namespace selfsim::verify
