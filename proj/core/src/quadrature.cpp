#include "selfsim/quadrature.hpp"

#include "selfsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace selfsim::quad {

namespace {

double log_beta(double p, double q) {
    return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

} // namespace

Rule gauss_beta(int n, double p, double q) {
    if (n < 1) throw std::invalid_argument("quadrature needs at least one node");
    if (!(p > 0.0) || !(q > 0.0)) throw DomainError("Beta weight exponents must be positive");

    // Jacobi weight (1-t)^a (1+t)^b on [-1, 1], mapped by xi = (1+t)/2.
    const double a = q - 1.0;
    const double b = p - 1.0;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    diag(0) = (b - a) / (a + b + 2.0);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + a + b;
        diag(k) = (b * b - a * a) / (s * (s + 2.0));
        double off2;
        if (k == 1) {
            off2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
        } else {
            off2 = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
        }
        sub(k - 1) = std::sqrt(off2);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Golub-Welsch eigenproblem failed");
    }

    const double mass = std::exp(log_beta(p, q));
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double v0 = solver.eigenvectors()(0, i);
        rule.nodes[i] = 0.5 * (1.0 + solver.eigenvalues()(i));
        rule.weights[i] = mass * v0 * v0;
    }
    return rule;
}

Rule gauss_legendre(int n) { return gauss_beta(n, 1.0, 1.0); }

double clausen_3f2_integral(double a1, double a2, double a3, double c1, double c2, double x,
                            int quad_nodes) {
    if (!(c1 > a1 && a1 > 0.0) || !(c2 > a2 && a2 > 0.0)) {
        throw DomainError("Euler integral needs c1 > a1 > 0 and c2 > a2 > 0");
    }
    if (!(x < 1.0)) throw DomainError("Euler integral needs x < 1");

    const Rule u = gauss_beta(quad_nodes, a1, c1 - a1);
    const Rule v = gauss_beta(quad_nodes, a2, c2 - a2);
    const double log_prefactor = -log_beta(a1, c1 - a1) - log_beta(a2, c2 - a2);

    double total = 0.0;
    for (std::size_t i = 0; i < u.nodes.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < v.nodes.size(); ++j) {
            row += v.weights[j] * std::pow(1.0 - x * u.nodes[i] * v.nodes[j], -a3);
        }
        total += u.weights[i] * row;
    }
    return std::exp(log_prefactor) * total;
}

} // namespace selfsim::quad
