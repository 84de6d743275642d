// Acceptance checks, one line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only
//
// Exit status is non-zero when any selected criterion fails.

#include "oracles.hpp"
#include "selfsim/errors.hpp"
#include "selfsim/families.hpp"
#include "selfsim/hyperfun.hpp"
#include "selfsim/quadrature.hpp"
#include "selfsim/verify.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace selfsim;
using namespace selfsim::hyper;
using families::FamilyId;
using families::FamilyParams;
using families::SolutionBranch;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Kummer, Psi2 symmetry, KdF reductions and the F6 1F3 -> 0F2 cancellation.
Outcome identities() {
    double kummer = 0.0;
    for (double a : {0.3, 0.5, 1.2}) {
        for (double c : {0.7, 1.5, 2.5}) {
            for (int i = -80; i <= 80; ++i) {
                const double x = i * 0.25;
                const double lhs = eval_pfq(PFQSpec({a}, {c}), x).value;
                const double rhs = std::exp(x) * eval_pfq(PFQSpec({c - a}, {c}), -x).value;
                kummer = std::max(kummer, oracle::rel_err(rhs, lhs));
            }
        }
    }

    double symmetry = 0.0;
    for (double a : {0.5, 1.3, 2.0}) {
        for (auto [c1, c2] : {std::pair{0.75, 1.25}, std::pair{1.6, 0.4}, std::pair{2.5, 2.5}}) {
            for (auto [x, y] : {std::pair{-0.4, -0.9}, std::pair{1.2, -2.0}, std::pair{-3.0, 0.5}}) {
                const double l = eval_psi2(Psi2Spec(a, c1, c2), x, y).value;
                const double r = eval_psi2(Psi2Spec(a, c2, c1), y, x).value;
                symmetry = std::max(symmetry, oracle::rel_err(l, r));
            }
        }
    }

    double reduction = 0.0;
    const KdFSpec k({1.0}, {}, {}, {}, {0.9, 0.7}, {1.1, 1.3});
    const KdFSpec psi({0.5}, {}, {}, {}, {0.75}, {1.25});
    for (double x : {-2.0, -0.5, 0.3, 1.5}) {
        reduction = std::max(reduction, oracle::rel_err(eval_kdf(k, x, 0.0).value,
                                                        eval_pfq(PFQSpec({1.0}, {0.9, 0.7}), x).value));
        for (double y : {-1.0, 0.4}) {
            reduction = std::max(reduction, oracle::rel_err(eval_kdf(psi, x, y).value,
                                                            eval_psi2(Psi2Spec(0.5, 0.75, 1.25), x, y).value));
        }
    }

    double cancel = 0.0;
    const FamilyParams params;
    for (int b = 2; b <= 4; ++b) {
        const SolutionBranch br{FamilyId::F6, b, 1.0};
        const auto full = families::omega_form(br, params);
        const auto reduced = families::f6_reduced_form(br, params);
        for (double s : {-0.1, -1.0, -5.0, -20.0}) {
            cancel = std::max(cancel, oracle::rel_err(families::eval_omega(reduced, s, std::nullopt),
                                                      families::eval_omega(full, s, std::nullopt)));
        }
    }

    Outcome o;
    o.pass = kummer <= 1e-10 && symmetry <= 1e-12 && reduction <= 1e-12 && cancel <= 1e-12;
    o.detail = "kummer " + sci(kummer) + " (tol 1e-10), psi2 symmetry " + sci(symmetry) +
               ", kdf reductions " + sci(reduction) + ", 1F3->0F2 " + sci(cancel) + " (tol 1e-12)";
    return o;
}

// 3F2 series against the double integral, Psi2 and KdF against brute force.
Outcome oracles() {
    double clausen = 0.0;
    for (double c1 : {1.4, 1.8, 2.2}) {
        for (double c2 : {1.4, 1.8, 2.2}) {
            for (double x : {-0.9, -0.5, -0.1, 0.5}) {
                const double series = eval_pfq(PFQSpec({1.0, 4.0 / 3, 5.0 / 3}, {c1, c2}), x).value;
                const double integral = quad::clausen_3f2_integral(1.0, 4.0 / 3, 5.0 / 3, c1, c2, x);
                clausen = std::max(clausen, std::abs(series - integral));
            }
        }
    }

    std::mt19937 rng(20240);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double psi2 = 0.0;
    double kdf = 0.0;
    const KdFSpec k({0.8}, {1.3}, {}, {0.6}, {0.9, 0.7}, {1.1});
    for (int i = 0; i < 10; ++i) {
        const double x = u(rng);
        const double y = u(rng);
        psi2 = std::max(psi2, oracle::rel_err(eval_psi2(Psi2Spec(0.5, 0.75, 1.25), x, y).value,
                                              oracle::naive_psi2(0.5, 0.75, 1.25, x, y)));
        kdf = std::max(kdf, oracle::rel_err(eval_kdf(k, x, y).value,
                                            oracle::naive_kdf({0.8}, {1.3}, {}, {0.6}, {0.9, 0.7}, {1.1}, x, y)));
    }

    Outcome o;
    o.pass = clausen <= 1e-8 && psi2 <= 1e-12 && kdf <= 1e-12;
    o.detail = "3F2 vs integral " + sci(clausen) + " (tol 1e-8), psi2 vs brute force " + sci(psi2) +
               ", kdf vs brute force " + sci(kdf) + " (tol 1e-12)";
    return o;
}

// Known closed forms under the discrete operator at h = 1e-3.
Outcome closed_forms() {
    Outcome o;
    FamilyParams heat;
    heat.alpha = 0.0;
    const struct {
        const char* name;
        FamilyId family;
        FamilyParams params;
    } cases[] = {{"P0", FamilyId::P0, FamilyParams{}}, {"heat kernel", FamilyId::P2, heat}};
    std::ostringstream d;
    for (const auto& c : cases) {
        const verify::FDScheme scheme{2, 1e-3};
        const auto grid = verify::make_grid(c.family, c.params, verify::default_grid(c.family), scheme);
        const auto r = verify::pde_residual_sweep({c.family, 1, 1.0}, c.params, grid, scheme, workers());
        const bool small = r.max_abs_residual <= 1e-5;
        const bool order = r.observed_order >= 1.5 && r.observed_order <= 2.5 &&
                           r.observed_order_fine >= 1.5 && r.observed_order_fine <= 2.5;
        o.pass = o.pass && small && order && r.failed_points == 0;
        d << c.name << " max|E| " << sci(r.max_abs_residual) << (small ? "" : " > 1e-5") << " order "
          << sci(r.observed_order) << "/" << sci(r.observed_order_fine) << "; ";
    }
    o.detail = d.str();
    return o;
}

// Every catalogued branch through the PDE sweep and the reduced equation.
Outcome all_branches() {
    Outcome o;
    int branches = 0;
    int pde_ok = 0;
    int ode_ok = 0;
    std::string failures;
    const FamilyParams params;
    for (FamilyId f : families::kAllFamilies) {
        if (f == FamilyId::P0) continue; // the vortex is a closed form, covered separately
        const auto scheme = verify::default_scheme(f);
        const auto grid = verify::make_grid(f, params, verify::default_grid(f), scheme);
        for (int b = 1; b <= families::branch_count(f); ++b) {
            ++branches;
            const SolutionBranch br{f, b, 1.0};
            const auto pde = verify::pde_residual_sweep(br, params, grid, scheme, workers());
            const auto ode = verify::ode_residual(br, params, verify::default_similarity_points(f));
            const bool p = verify::is_consistent(pde);
            const bool q = ode.max_rel_residual <= verify::kOdeTolerance;
            pde_ok += p;
            ode_ok += q;
            if (!p || !q) {
                failures += std::string(" ") + std::string(families::to_string(f)) + "-" + std::to_string(b);
            }
        }
    }
    o.pass = branches == 22 && pde_ok == branches && ode_ok == branches;
    o.detail = std::to_string(branches) + " branches, pde refinement ok " + std::to_string(pde_ok) +
               ", ode <= 1e-9*scale ok " + std::to_string(ode_ok) + (failures.empty() ? "" : "; failing:" + failures);
    return o;
}

// Observed order of central differences against analytic derivatives.
Outcome derivatives() {
    // Wide enough that truncation, not round-off, dominates the third-derivative stencil.
    const double h = 5e-2;
    auto observed = [&](const std::function<double(double)>& f, double x, int k, double exact) {
        const double e1 = std::abs(oracle::central_diff(f, x, k, h) - exact);
        const double e2 = std::abs(oracle::central_diff(f, x, k, h / 2) - exact);
        return std::log2(e1 / e2);
    };
    double lo = 1e300;
    double hi = -1e300;
    auto record = [&](double order) {
        lo = std::min(lo, order);
        hi = std::max(hi, order);
    };

    const PFQSpec f11({0.5}, {1.3});
    const PFQSpec f32({1.0, 4.0 / 3, 5.0 / 3}, {1.4, 1.8});
    const PFQSpec f13({0.7}, {0.5, 1.25, 1.75});
    const Psi2Spec psi(0.5, 0.75, 1.25);
    const KdFSpec kdf({0.8}, {1.3}, {}, {0.6}, {0.9, 0.7}, {1.1});
    const double xs[] = {-3.1, -1.7, -0.45, 0.35, 2.3};
    const double ws[] = {-0.7, -0.35, -0.15, 0.2, 0.55}; // inside the 3F2 disc
    const std::pair<double, double> pts[] = {{-0.8, -0.4}, {-0.3, 0.6}, {0.45, -0.65}, {0.7, 0.25}, {-0.55, 0.85}};

    for (int i = 0; i < 5; ++i) {
        const int k = 1 + i % 3;
        record(observed([&](double x) { return eval_pfq(f11, x).value; }, xs[i], k,
                        pfq_derivative(f11, xs[i], static_cast<unsigned>(k)).value));
        record(observed([&](double x) { return eval_pfq(f32, x).value; }, ws[i], k,
                        pfq_derivative(f32, ws[i], static_cast<unsigned>(k)).value));
        record(observed([&](double x) { return eval_pfq(f13, x).value; }, xs[i], k,
                        pfq_derivative(f13, xs[i], static_cast<unsigned>(k)).value));
        const auto [x, y] = pts[i];
        if (i % 2 == 0) {
            record(observed([&](double s) { return eval_psi2(psi, s, y).value; }, x, k,
                            psi2_partial(psi, x, y, static_cast<unsigned>(k), 0).value));
            record(observed([&](double s) { return eval_kdf(kdf, s, y).value; }, x, k,
                            kdf_partial(kdf, x, y, static_cast<unsigned>(k), 0).value));
        } else {
            record(observed([&](double s) { return eval_psi2(psi, x, s).value; }, y, k,
                            psi2_partial(psi, x, y, 0, static_cast<unsigned>(k)).value));
            record(observed([&](double s) { return eval_kdf(kdf, x, s).value; }, y, k,
                            kdf_partial(kdf, x, y, 0, static_cast<unsigned>(k)).value));
        }
    }
    Outcome o;
    o.pass = lo >= 1.5 && hi <= 2.5;
    o.detail = "25 checks, observed order in [" + sci(lo) + ", " + sci(hi) + "] (band [1.5, 2.5])";
    return o;
}

// Disputed prefactors: exactly one form per branch should pass refinement.
Outcome adjudication() {
    Outcome o;
    std::ostringstream d;
    const FamilyParams params;
    for (FamilyId f : {FamilyId::P3, FamilyId::F6}) {
        const auto rep = verify::adjudicate_prefactors(f, params, verify::default_grid(f), verify::default_scheme(f));
        for (const auto& e : rep.entries) {
            const bool exactly_one = e.derived_consistent != e.printed_consistent;
            o.pass = o.pass && exactly_one;
            d << e.equation << " P*omega " << (e.derived_consistent ? "CONSISTENT" : "INCONSISTENT") << ", printed "
              << (e.printed_consistent ? "CONSISTENT" : "INCONSISTENT") << "; ";
        }
    }
    o.detail = d.str();
    return o;
}

// Error paths of the series evaluator.
Outcome error_paths() {
    bool domain = true;
    for (double x : {1.0, 1.5, -1.0, -3.0}) {
        try {
            (void)eval_pfq(PFQSpec({1.0, 1.0}, {2.0}), x);
            domain = false;
        } catch (const DomainError&) {
        }
    }
    bool construction = false;
    try {
        (void)PFQSpec({1.0}, {-2.0});
    } catch (const DomainError&) {
        construction = true;
    } catch (const std::invalid_argument&) {
        construction = true;
    }
    EvalOptions tiny;
    tiny.max_terms = 10;
    const EvalResult r = eval_pfq(PFQSpec({0.5}, {1.5}), 10.0, tiny);
    const bool budget = !r.converged && std::isfinite(r.value) && r.terms_used == 10;

    Outcome o;
    o.pass = domain && construction && budget;
    o.detail = std::string("2F1 |x|>=1 rejected: ") + (domain ? "yes" : "no") +
               ", denominator -2 rejected: " + (construction ? "yes" : "no") +
               ", max_terms=10 gives converged=false with value " + sci(r.value);
    return o;
}

} // namespace

int main(int argc, char** argv) {
    const std::function<Outcome()> criteria[] = {identities,  oracles,      closed_forms, all_branches,
                                                 derivatives, adjudication, error_paths};
    const char* titles[] = {"identity suite",           "oracle equivalence",  "closed-form sanity",
                            "full branch verification", "derivative cross-check", "adjudication",
                            "error paths"};
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    if (only < 0 || only > 7) {
        std::fprintf(stderr, "criterion must be 1..7\n");
        return 2;
    }
    int failed = 0;
    for (int n = 1; n <= 7; ++n) {
        if (only != 0 && n != only) continue;
        Outcome o;
        try {
            o = criteria[n - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", n, titles[n - 1], o.detail.c_str());
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
