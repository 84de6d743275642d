#pragma once

#include <vector>

namespace selfsim::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss rule on [0, 1] for the weight xi^(p-1) (1-xi)^(q-1), p, q > 0.
// Weights sum to B(p, q). Nodes come from the Golub-Welsch eigenproblem of the
// Jacobi matrix. p = q = 1 gives the Gauss-Legendre rule.
Rule gauss_beta(int n, double p, double q);

// Gauss-Legendre rule on [0, 1]; weights sum to 1.
Rule gauss_legendre(int n);

// 3F2(a1, a2, a3; c1, c2; x) through the double Euler integral
//
//   G * int_0^1 int_0^1 xi^(a1-1) eta^(a2-1) (1-xi)^(c1-a1-1) (1-eta)^(c2-a2-1)
//                      (1 - x xi eta)^(-a3) dxi deta,
//   G = Gamma(c1) Gamma(c2) / (Gamma(a1) Gamma(a2) Gamma(c1-a1) Gamma(c2-a2)).
//
// The endpoint powers are absorbed into the Gauss weights so the remaining
// integrand is analytic on the square. Requires c1 > a1 > 0, c2 > a2 > 0 and
// x < 1; throws DomainError otherwise.
double clausen_3f2_integral(double a1, double a2, double a3, double c1, double c2, double x,
                            int quad_nodes = 64);

} // namespace selfsim::quad
