#pragma once
// Small numerical toolkit: normalized Hermite functions and polynomials,
// Gauss-Hermite rules via Golub-Welsch, Dawson's integral, Kummer's
// confluent hypergeometric series. Everything double precision.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace dirac1d {

// h_m(y) = H_m(y) e^{-y^2/2} / sqrt(sqrt(pi) 2^m m!), m = 0..mmax.
// Stable upward recursion; the Gaussian is folded into h_0 so no
// intermediate overflows for large m or y.
inline std::vector<double> hermite_functions(double y, int mmax) {
    std::vector<double> h(static_cast<size_t>(mmax) + 1);
    h[0] = std::pow(M_PI, -0.25) * std::exp(-y * y / 2.0);
    if (mmax >= 1) h[1] = std::sqrt(2.0) * y * h[0];
    for (int m = 1; m < mmax; ++m)
        h[m + 1] = std::sqrt(2.0 / (m + 1)) * y * h[m] -
                   std::sqrt(m / (m + 1.0)) * h[m - 1];
    return h;
}

// Same recursion without the Gaussian weight: orthonormal polynomials
// under e^{-y^2} dy.
inline std::vector<double> hermite_polys_normalized(double y, int mmax) {
    std::vector<double> h(static_cast<size_t>(mmax) + 1);
    h[0] = std::pow(M_PI, -0.25);
    if (mmax >= 1) h[1] = std::sqrt(2.0) * y * h[0];
    for (int m = 1; m < mmax; ++m)
        h[m + 1] = std::sqrt(2.0 / (m + 1)) * y * h[m] -
                   std::sqrt(m / (m + 1.0)) * h[m - 1];
    return h;
}

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;  // include the e^{-x^2} factor
};

// Gauss-Hermite rule. Nodes are eigenvalues of the symmetric tridiagonal
// recurrence matrix (off-diagonal sqrt(k/2)), polished by one Newton step.
// Weights use the Christoffel form 1/sum_n p_n(x)^2 evaluated with the
// weighted recursion, which keeps full relative accuracy out in the tails.
// (First-eigenvector-component weights lose all relative precision at the
// extreme nodes: the true components sit far below the eigensolver's
// absolute error floor, and the resulting weights come out many orders of
// magnitude too large.)
inline QuadratureRule gauss_hermite(int K) {
    if (K < 1) throw std::invalid_argument("gauss_hermite: order must be positive");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(K, K);
    for (int k = 1; k < K; ++k) {
        double b = std::sqrt(k / 2.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    QuadratureRule r;
    r.nodes.resize(K);
    r.weights.resize(K);
    for (int k = 0; k < K; ++k) {
        double x = es.eigenvalues()(k);
        // p_K'(x) = sqrt(2K) p_{K-1}(x); the e^{-x^2/2} damping cancels in
        // the ratio, so the weighted values are safe to use here.
        auto h = hermite_functions(x, K);
        x -= h[K] / (std::sqrt(2.0 * K) * h[K - 1]);
        h = hermite_functions(x, K);
        double s = 0.0;
        for (int n = 0; n < K; ++n) s += h[n] * h[n];
        r.nodes[k] = x;
        // sum h_n^2 = e^{-x^2} sum p_n^2
        r.weights[k] = std::exp(-x * x) / s;
    }
    return r;
}

// Dawson's integral D(x) = e^{-x^2} int_0^x e^{t^2} dt.
// Power series has all positive terms (no cancellation); switch to the
// asymptotic series once it is cheaper and accurate.
inline double dawson(double x) {
    double ax = std::abs(x);
    if (ax < 1e-300) return x;
    if (ax <= 15.0) {
        // sum x^(2n+1) / (n! (2n+1))  then multiply by e^{-x^2}
        double term = ax, sum = ax;
        for (int n = 1; n < 600; ++n) {
            term *= ax * ax * (2.0 * n - 1.0) / (n * (2.0 * n + 1.0));
            sum += term;
            if (term < sum * 1e-18) break;
        }
        double v = std::exp(-ax * ax) * sum;
        return x < 0 ? -v : v;
    }
    // D(x) ~ 1/(2x) sum_n (2n-1)!!/(2x^2)^n, truncated at smallest term
    double inv2x2 = 1.0 / (2.0 * ax * ax);
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 40; ++n) {
        double next = term * (2.0 * n - 1.0) * inv2x2;
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-18) break;
    }
    double v = sum / (2.0 * ax);
    return x < 0 ? -v : v;
}

// Kummer's function 1F1(a; c; z) by direct series. For z > 0 and a < 0
// the terms alternate, so apply the reflection 1F1(a;c;z) =
// e^z 1F1(c-a; c; -z) first; the reflected series is then evaluated
// directly. Accuracy degrades gracefully for very large |z|.
inline double kummer_1f1(double a, double c, double z) {
    if (c <= 0.0 && c == std::floor(c))
        throw std::invalid_argument("kummer_1f1: c is a nonpositive integer");
    if (z > 0.0 && a < 0.0) return std::exp(z) * kummer_1f1(c - a, c, -z);
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < 10000; ++n) {
        term *= (a + n) * z / ((c + n) * (n + 1.0));
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17 && n > 3) return sum;
    }
    return sum;
}

// log of the normalization A_n = [pi^{1/4} 2^n sqrt((2n)!)]^{-1}
inline double log_norm_const(int n) {
    return -(0.25 * std::log(M_PI) + n * std::log(2.0) + 0.5 * std::lgamma(2.0 * n + 1.0));
}

}  // namespace dirac1d
