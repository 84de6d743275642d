#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "selfsim/errors.hpp"
#include "selfsim/families.hpp"

#include <cmath>

using namespace selfsim;
using namespace selfsim::families;

namespace {

Point sample_point(FamilyId f) {
    Point p{0.9, std::nullopt, std::nullopt};
    if (has_y(f)) p.y = 0.7;
    if (has_t(f)) p.t = 1.3;
    return p;
}

} // namespace

TEST_CASE("family names") {
    CHECK(parse_family("t5") == FamilyId::T5);
    CHECK(parse_family("P0") == FamilyId::P0);
    CHECK_THROWS_AS(parse_family("q9"), std::invalid_argument);
    for (FamilyId f : kAllFamilies) CHECK(parse_family(to_string(f)) == f);
}

TEST_CASE("similarity_map examples") {
    const FamilyParams params;
    auto f = similarity_map(FamilyId::P2, params, {2.0, std::nullopt, 1.0});
    CHECK(f.prefactor == 1.0);
    CHECK(f.xi == -1.0);

    f = similarity_map(FamilyId::P3, params, {2.0, 2.0, 1.0});
    CHECK(f.prefactor == 1.0);
    CHECK(f.xi == -0.5);
    CHECK(*f.eta == -0.5);

    FamilyParams f6;
    f6.n = 0.0;
    f6.k = 0.0;
    f = similarity_map(FamilyId::F6, f6, {2.0, std::nullopt, 1.0});
    CHECK(f.prefactor == 1.0);
    CHECK(f.xi == doctest::Approx(-1.0 / 16.0).epsilon(1e-15));

    // T4: P = x^-3 and sigma = (-3 y^((m+3)/3) / (x (m+3)))^3.
    f = similarity_map(FamilyId::T4, params, {2.0, 1.0, std::nullopt});
    CHECK(f.prefactor == 0.125);
    CHECK(f.xi == doctest::Approx(std::pow(-3.0 / 8.0, 3)).epsilon(1e-15));

    // P0: P = E/(nu t), xi = r^2/(nu t).
    FamilyParams p0;
    p0.nu = 2.0;
    p0.E_amp = 3.0;
    f = similarity_map(FamilyId::P0, p0, {1.0, std::nullopt, 0.5});
    CHECK(f.prefactor == 3.0);
    CHECK(f.xi == 1.0);
}

TEST_CASE("similarity variables are non-positive") {
    const FamilyParams params;
    for (FamilyId fam : kAllFamilies) {
        if (fam == FamilyId::P0) continue;
        const SimilarityFrame f = similarity_map(fam, params, sample_point(fam));
        CHECK(f.xi <= 0.0);
        if (f.eta) CHECK(*f.eta <= 0.0);
        CHECK(std::isfinite(f.prefactor));
    }
}

TEST_CASE("point validation") {
    const FamilyParams params;
    CHECK_THROWS_AS(similarity_map(FamilyId::P2, params, {1.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(similarity_map(FamilyId::P2, params, {1.0, std::nullopt, std::nullopt}), DomainError);
    CHECK_THROWS_AS(similarity_map(FamilyId::P2, params, {0.0, std::nullopt, 1.0}), DomainError);
    CHECK_THROWS_AS(similarity_map(FamilyId::T4, params, {-1.0, 1.0, std::nullopt}), DomainError);
    CHECK_THROWS_AS(similarity_map(FamilyId::T5, params, {1.0, 1.0, -1.0}), DomainError);
    FamilyParams bad_nu;
    bad_nu.nu = 0.0;
    CHECK_THROWS_AS(similarity_map(FamilyId::P0, bad_nu, {1.0, std::nullopt, 1.0}), DomainError);
}

TEST_CASE("derived exponents") {
    FamilyParams p;
    p.m = 1e-12;
    CHECK(derived_exponents(FamilyId::T4, p).beta == doctest::Approx(0.0));
    p = {};
    p.n = 1.0;
    CHECK(derived_exponents(FamilyId::T5, p).alpha == 0.25);
    p.n = 4.0;
    CHECK(derived_exponents(FamilyId::F6, p).alpha == 0.5);
    p = {};
    p.alpha = 0.7;
    p.beta = 0.2;
    CHECK(derived_exponents(FamilyId::P3, p).alpha == 0.7);
    CHECK(derived_exponents(FamilyId::P3, p).beta == 0.2);

    p = {};
    p.m = 0.0;
    CHECK_THROWS_AS(derived_exponents(FamilyId::T4, p), DomainError);
    CHECK_THROWS_AS(derived_exponents(FamilyId::T5, p), DomainError);
    p = {};
    p.n = -1.0;
    CHECK_THROWS_AS(derived_exponents(FamilyId::F6, p), DomainError);
}

TEST_CASE("branch catalogue") {
    CHECK(list_branches(FamilyId::P3).size() == 4);
    CHECK(list_branches(FamilyId::T5).size() == 9);
    CHECK(list_branches(FamilyId::P0).size() == 1);
    int total = 0;
    for (FamilyId f : kAllFamilies) {
        const auto list = list_branches(f);
        CHECK(static_cast<int>(list.size()) == branch_count(f));
        for (std::size_t i = 0; i < list.size(); ++i) {
            CHECK(list[i].branch.family == f);
            CHECK(list[i].branch.index == static_cast<int>(i) + 1);
            CHECK_FALSE(list[i].function.empty());
            CHECK_FALSE(list[i].formula.empty());
        }
        if (f != FamilyId::P0) total += branch_count(f);
    }
    CHECK(total == 22);
    const auto t5 = list_branches(FamilyId::T5);
    CHECK(t5.front().equation == "Eq. 5.16");
    CHECK(t5.back().equation == "Eq. 5.24");
    CHECK(list_branches(FamilyId::P0).front().equation == "Eq. 1.3");

    CHECK_THROWS_AS(check_branch({FamilyId::P2, 3, 1.0}), DomainError);
    CHECK_THROWS_AS(check_branch({FamilyId::T5, 0, 1.0}), DomainError);
}

TEST_CASE("eval_branch examples") {
    FamilyParams p;
    p.alpha = 0.0;
    const double u = eval_branch({FamilyId::P2, 1, 1.0}, p, {1.0, std::nullopt, 1.0});
    CHECK(u == doctest::Approx(0.7788007831).epsilon(1e-10));
    CHECK(oracle::rel_err(u, std::exp(-0.25)) <= 1e-14);

    for (double alpha : {0.0, 0.3, 1.7}) {
        p.alpha = alpha;
        CHECK(eval_branch({FamilyId::P2, 1, 1.0}, p, {1e-9, std::nullopt, 1.0}) == doctest::Approx(1.0));
    }

    const FamilyParams defaults;
    for (double c : {1.0, -2.5}) {
        CHECK(eval_branch({FamilyId::T4, 1, c}, defaults, {2.0, 1e-9, std::nullopt}) ==
              doctest::Approx(0.125 * c));
    }
}

TEST_CASE("closed-form oracles") {
    FamilyParams p;
    for (auto [x, t] : {std::pair{0.3, 0.7}, std::pair{1.0, 1.0}, std::pair{2.5, 0.6}}) {
        p.alpha = 0.0;
        CHECK(oracle::rel_err(eval_branch({FamilyId::P2, 1, 1.0}, p, {x, std::nullopt, t}),
                              oracle::heat_kernel(x, t)) <= 1e-13);

        // alpha = 1/2: 1F1(1/2; 1; s) = e^(s/2) I0(s/2).
        p.alpha = 0.5;
        const double s = -x * x / (4.0 * t);
        const double want = std::exp(s / 2.0) * std::cyl_bessel_i(0.0, -s / 2.0) / std::sqrt(t);
        CHECK(oracle::rel_err(eval_branch({FamilyId::P2, 1, 1.0}, p, {x, std::nullopt, t}), want) <= 1e-13);

        FamilyParams p0;
        p0.nu = 0.8;
        p0.E_amp = 2.0;
        CHECK(oracle::rel_err(eval_branch({FamilyId::P0, 1, 1.0}, p0, {x, std::nullopt, t}),
                              oracle::vortex(x, t, 0.8, 2.0)) <= 1e-13);
    }
}

TEST_CASE("branch formulas against naive series") {
    const hyper::EvalOptions tight{1e-15, 10000, 3};

    SUBCASE("P2 branch 2") {
        FamilyParams p;
        p.alpha = 0.3;
        const double x = 1.1, t = 0.8;
        const double s = -x * x / (4 * t);
        const double want = std::pow(std::abs(s), 0.2) * oracle::naive_pfq({0.7}, {1.2}, s) / std::sqrt(t);
        CHECK(oracle::rel_err(eval_branch({FamilyId::P2, 2, 1.0}, p, {x, std::nullopt, t}, tight), want) <= 1e-13);
    }
    SUBCASE("P3 branch 4") {
        FamilyParams p;
        const double x = 1.2, y = 0.7, t = 0.9;
        const double xi = -x * x / (8 * t), eta = -y * y / (8 * t);
        const double want = std::pow(-xi, 0.2) * std::pow(-eta, 0.1) *
                            oracle::naive_psi2(0.8, 1.2, 1.1, xi, eta) / std::sqrt(t);
        CHECK(oracle::rel_err(eval_branch({FamilyId::P3, 4, 1.0}, p, {x, y, t}, tight), want) <= 1e-13);
    }
    SUBCASE("T4 branch 3") {
        FamilyParams p; // m = 1, beta = 1/4
        const double x = 1.5, y = 1.1;
        const double b = -3.0 * std::pow(y, 4.0 / 3.0) / (x * 4.0);
        const double s = b * b * b;
        const double want = std::pow(x, -3.0) * std::pow(-s, 0.5) *
                            oracle::naive_pfq({5.5 / 3, 6.5 / 3}, {3.75 / 3}, s, 3000);
        CHECK(oracle::rel_err(eval_branch({FamilyId::T4, 3, 1.0}, p, {x, y, std::nullopt}, tight), want) <= 1e-12);
    }
    SUBCASE("T5 branch 6") {
        FamilyParams p; // n = m = k = 1: alpha = beta = 1/4
        const double x = 1.3, y = 0.8, t = 0.9;
        const double xi = -2.0 * std::pow(x, 4.0) / (2.0 * 64.0 * t * t);
        const double eta = -2.0 * std::pow(y, 4.0) / (2.0 * 64.0 * t * t);
        const double want = std::pow(-xi, 0.25) * std::pow(-eta, 0.5) *
                            oracle::naive_kdf({1.75}, {}, {}, {}, {1.25, 0.75}, {1.25, 1.5}, xi, eta) /
                            (t * t);
        CHECK(oracle::rel_err(eval_branch({FamilyId::T5, 6, 1.0}, p, {x, y, t}, tight), want) <= 1e-13);
    }
    SUBCASE("F6 branch 3") {
        FamilyParams p; // n = k = 1: alpha = 1/5
        const double x = 1.4, t = 1.2;
        const double s = -2.0 * std::pow(x, 5.0) / (625.0 * t * t);
        const double want = 2.0 / (t * t) * std::pow(-s, 0.4) *
                            oracle::naive_pfq({1.4}, {1.2, 1.4, 0.8}, s);
        CHECK(oracle::rel_err(eval_branch({FamilyId::F6, 3, 1.0}, p, {x, std::nullopt, t}, tight), want) <= 1e-13);
    }
}

TEST_CASE("homogeneity in the constant") {
    const FamilyParams params;
    for (FamilyId f : kAllFamilies) {
        for (int b = 1; b <= branch_count(f); ++b) {
            const Point p = sample_point(f);
            const double one = eval_branch({f, b, 1.0}, params, p);
            CHECK(eval_branch({f, b, 2.0}, params, p) == 2.0 * one);
            CHECK(eval_branch({f, b, -3.5}, params, p) == doctest::Approx(-3.5 * one).epsilon(1e-15));
        }
    }
}

TEST_CASE("branch equals P times omega") {
    const FamilyParams params;
    for (FamilyId f : kAllFamilies) {
        for (int b = 1; b <= branch_count(f); ++b) {
            const Point p = sample_point(f);
            const SimilarityFrame frame = similarity_map(f, params, p);
            const double omega = eval_omega(omega_form({f, b, 1.0}, params), frame.xi, frame.eta);
            CHECK(oracle::rel_err(eval_branch({f, b, 1.0}, params, p), frame.prefactor * omega) <= 1e-13);
        }
    }
}

TEST_CASE("T5 x-y swap symmetry") {
    FamilyParams a;
    a.n = 1.0;
    a.m = 2.0;
    a.k = 1.5;
    FamilyParams b = a;
    std::swap(b.n, b.m);
    const Point p{0.8, 1.3, 0.9};
    const Point q{1.3, 0.8, 0.9};
    const int image[] = {0, 1, 4, 7, 2, 5, 8, 3, 6, 9};
    for (int i = 1; i <= 9; ++i) {
        const double u = eval_branch({FamilyId::T5, i, 1.0}, a, p);
        const double v = eval_branch({FamilyId::T5, image[i], 1.0}, b, q);
        CHECK(oracle::rel_err(v, u) <= 1e-12);
    }
}

TEST_CASE("F6 1F3 forms reduce to 0F2") {
    const FamilyParams params;
    for (int b = 2; b <= 4; ++b) {
        const SolutionBranch br{FamilyId::F6, b, 1.0};
        const OmegaForm full = omega_form(br, params);
        const OmegaForm reduced = f6_reduced_form(br, params);
        CHECK(full.function_name() == "1F3");
        CHECK(reduced.function_name() == "0F2");
        for (double s : {-0.1, -1.0, -5.0, -20.0}) {
            CHECK(oracle::rel_err(eval_omega(reduced, s, std::nullopt), eval_omega(full, s, std::nullopt)) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(f6_reduced_form({FamilyId::F6, 1, 1.0}, params), DomainError);
}

TEST_CASE("omega derivatives against central differences") {
    const FamilyParams params;
    const OmegaForm t4 = omega_form({FamilyId::T4, 2, 1.0}, params);
    const double s0 = -0.4;
    const double exact = omega_partial(t4, s0, std::nullopt, 2, 0);
    auto f = [&](double s) { return eval_omega(t4, s, std::nullopt); };
    const double e1 = std::abs(oracle::central_diff(f, s0, 2, 1e-2) - exact);
    const double e2 = std::abs(oracle::central_diff(f, s0, 2, 5e-3) - exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));

    const OmegaForm t5 = omega_form({FamilyId::T5, 8, 1.0}, params);
    const double exact_y = omega_partial(t5, -0.3, -0.7, 0, 1);
    auto g = [&](double eta) { return eval_omega(t5, -0.3, eta); };
    CHECK(oracle::central_diff(g, -0.7, 1, 1e-5) == doctest::Approx(exact_y).epsilon(1e-8));
}

TEST_CASE("degenerate parameters are rejected") {
    FamilyParams p;
    p.alpha = 1.5; // (3 - 2 alpha)/2 = 0
    CHECK_THROWS_AS(omega_form({FamilyId::P2, 2, 1.0}, p), DomainError);
    p.alpha = -0.5; // (1 + 2 alpha)/2 = 0
    CHECK_THROWS_AS(omega_form({FamilyId::P2, 1, 1.0}, p), DomainError);
    p.alpha = 0.5;
    CHECK_NOTHROW(omega_form({FamilyId::P2, 2, 1.0}, p));
}

TEST_CASE("published closed forms") {
    const FamilyParams params;
    CHECK(disputed_branches(FamilyId::P3) == std::vector<int>{4});
    CHECK(disputed_branches(FamilyId::F6) == std::vector<int>{2, 3, 4});
    CHECK(disputed_branches(FamilyId::T5) == std::vector<int>{5, 6, 8, 9});
    CHECK(disputed_branches(FamilyId::P2).empty());
    CHECK(printed_equation(FamilyId::P3, 4) == "Eq. 3.13");
    CHECK(printed_equation(FamilyId::F6, 2) == "Eq. 6.12");

    // Away from t = 1 the printed P3 prefactor differs from P * omega.
    const Point p{1.1, 0.9, 1.7};
    const double derived = eval_branch({FamilyId::P3, 4, 1.0}, params, p);
    const double printed = eval_printed({FamilyId::P3, 4, 1.0}, params, p);
    CHECK(std::abs(derived - printed) > 1e-6 * std::abs(derived));

    // At t = 1 the time factors agree, so the forms differ by a constant only.
    const Point a{1.1, 0.9, 1.0};
    const Point b{0.6, 1.4, 1.0};
    const double ra = eval_printed({FamilyId::P3, 4, 1.0}, params, a) / eval_branch({FamilyId::P3, 4, 1.0}, params, a);
    const double rb = eval_printed({FamilyId::P3, 4, 1.0}, params, b) / eval_branch({FamilyId::P3, 4, 1.0}, params, b);
    CHECK(ra == doctest::Approx(rb).epsilon(1e-12));

    CHECK_THROWS_AS(eval_printed({FamilyId::P2, 1, 1.0}, params, {1.0, std::nullopt, 1.0}), DomainError);
}
