#pragma once
// Potential triple (V, S, U): presets, tabulated form with cubic spline,
// parity classification, and matrix elements of scalar functions between
// basis states via Gauss-Hermite quadrature.

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mathkit.hpp"

namespace dirac1d {

using ScalarFn = std::function<double(double)>;

enum class Parity { Even, Odd, None };

inline ScalarFn zero_fn() {
    return [](double) { return 0.0; };
}

// amp * exp(-((x-center)/width)^2)
inline ScalarFn gaussian_fn(double amp, double width = 1.0, double center = 0.0) {
    return [=](double x) {
        double t = (x - center) / width;
        return amp * std::exp(-t * t);
    };
}

// amp * x * exp(-((x-center)/width)^2); odd about the center
inline ScalarFn gaussian_x_fn(double amp, double width = 1.0, double center = 0.0) {
    return [=](double x) {
        double t = (x - center) / width;
        return amp * (x - center) * std::exp(-t * t);
    };
}

// amp on [center-width/2, center+width/2], zero outside
inline ScalarFn square_fn(double amp, double width = 1.0, double center = 0.0) {
    return [=](double x) {
        return (std::abs(x - center) <= width / 2.0) ? amp : 0.0;
    };
}

// amp/2 * (1 + tanh(x/width)) localized by an overall Gaussian envelope of
// range `reach` so it remains short-range
inline ScalarFn smoothed_step_fn(double amp, double width = 1.0, double reach = 4.0) {
    return [=](double x) {
        return 0.5 * amp * (1.0 + std::tanh(x / width)) * std::exp(-(x * x) / (reach * reach));
    };
}

// Natural cubic spline through strictly increasing samples; zero outside
// the sampled range (short-range premise).
class TabulatedFn {
public:
    TabulatedFn(std::vector<double> xs, std::vector<double> ys)
        : x_(std::move(xs)), y_(std::move(ys)) {
        size_t n = x_.size();
        if (n < 3) throw std::invalid_argument("TabulatedFn: need at least 3 samples");
        for (size_t i = 1; i < n; ++i)
            if (x_[i] <= x_[i - 1])
                throw std::invalid_argument("TabulatedFn: x not strictly increasing");
        // second derivatives for the natural spline (tridiagonal solve)
        m_.assign(n, 0.0);
        std::vector<double> u(n, 0.0), l(n, 1.0);
        for (size_t i = 1; i + 1 < n; ++i) {
            double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            double sig = h0 / (h0 + h1);
            double p = sig * m_[i - 1] + 2.0;
            m_[i] = (sig - 1.0) / p;
            u[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
            u[i] = (6.0 * u[i] / (h0 + h1) - sig * u[i - 1]) / p;
        }
        for (size_t i = n - 1; i-- > 0;) m_[i] = m_[i] * m_[i + 1] + u[i];
    }

    double operator()(double x) const {
        if (x <= x_.front() || x >= x_.back()) return 0.0;
        size_t hi = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
        size_t lo = hi - 1;
        double h = x_[hi] - x_[lo];
        double a = (x_[hi] - x) / h, b = (x - x_[lo]) / h;
        return a * y_[lo] + b * y_[hi] +
               ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
    }

private:
    std::vector<double> x_, y_;
    std::vector<double> m_;
};

// Two-column text: x value per line, '#' comments allowed.
inline TabulatedFn load_tabulated(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table: " + path);
    std::vector<double> xs, ys;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double x, y;
        if (ss >> x >> y) {
            xs.push_back(x);
            ys.push_back(y);
        }
    }
    return TabulatedFn(std::move(xs), std::move(ys));
}

struct PotentialSpec {
    ScalarFn V = zero_fn();
    ScalarFn S = zero_fn();
    ScalarFn U = zero_fn();
    double X = 8.0;  // range bound: all three negligible beyond |x| > X
};

// Matrix parity of the potential triple. The coupled two-channel structure
// decouples when the matrix is even: V and S even functions, U odd. The
// mirrored condition (V, S odd and U even) is the odd class.
inline Parity classify_parity(const PotentialSpec& p, int samples = 32) {
    if (samples < 16) samples = 16;
    double scale = 0.0, even_v = 0.0, odd_v = 0.0;
    double even_u = 0.0, odd_u = 0.0;
    for (int i = 1; i <= samples; ++i) {
        double x = p.X * i / samples;
        double v1 = p.V(x), v2 = p.V(-x);
        double s1 = p.S(x), s2 = p.S(-x);
        double u1 = p.U(x), u2 = p.U(-x);
        scale = std::max({scale, std::abs(v1), std::abs(s1), std::abs(u1),
                          std::abs(v2), std::abs(s2), std::abs(u2), 1e-30});
        even_v = std::max({even_v, std::abs(v1 - v2), std::abs(s1 - s2)});
        odd_v = std::max({odd_v, std::abs(v1 + v2), std::abs(s1 + s2)});
        odd_u = std::max(odd_u, std::abs(u1 + u2));
        even_u = std::max(even_u, std::abs(u1 - u2));
    }
    double tol = 1e-10 * scale;
    // A nonvanishing even U fails the first test (|U(x)+U(-x)| = 2|U|), so
    // a configuration whose only nonzero component is an even U falls
    // through to the odd class. Identically zero triples land in Even.
    if (even_v <= tol && odd_u <= tol) return Parity::Even;
    if (odd_v <= tol && even_u <= tol) return Parity::Odd;
    return Parity::None;
}

// Quadrature overlap <n| F |m> in the orthonormal-polynomial basis under
// e^{-y^2}: F_nm = sum_k L[n,k] L[m,k] F(eta_k/lam). L is the poly value
// matrix times sqrt(weight).
class FunctionElements {
public:
    FunctionElements(const ScalarFn& F, double lam, int H, const QuadratureRule& rule)
        : H_(H) {
        int K = static_cast<int>(rule.nodes.size());
        if (H > K) throw std::invalid_argument("FunctionElements: basis order exceeds rule order");
        Eigen::MatrixXd L(H, K);
        for (int k = 0; k < K; ++k) {
            std::vector<double> h = hermite_polys_normalized(rule.nodes[k], H - 1);
            double sw = std::sqrt(rule.weights[k]);
            for (int a = 0; a < H; ++a) L(a, k) = h[a] * sw;
        }
        Eigen::VectorXd f(K);
        for (int k = 0; k < K; ++k) f(k) = F(rule.nodes[k] / lam);
        mat_ = L * f.asDiagonal() * L.transpose();
    }

    double operator()(int n, int m) const {
        if (n < 0 || m < 0 || n >= H_ || m >= H_)
            throw std::out_of_range("FunctionElements: index");
        return mat_(n, m);
    }
    const Eigen::MatrixXd& matrix() const { return mat_; }

private:
    int H_;
    Eigen::MatrixXd mat_;
};

inline double function_matrix_element(const ScalarFn& F, int n, int m, double lam,
                                      const QuadratureRule& rule) {
    int H = std::max(n, m) + 1;
    return FunctionElements(F, lam, H, rule)(n, m);
}

// Potential blocks in the tied two-component channel basis with lower
// weight tau (companion of basis.hpp's tied_middle_h0). pp/mm are the
// even-even and odd-odd channel blocks; pm is even-odd (its transpose
// completes the symmetric 2N x 2N matrix in zeta order).
struct PotentialBlocks {
    Eigen::MatrixXd pp, mm, pm;
};

inline PotentialBlocks assemble_potential_blocks(const PotentialSpec& p, int N,
                                                 double lam, double tau,
                                                 const QuadratureRule& rule) {
    int H = 2 * N;
    FunctionElements Vp([&](double x) { return p.V(x) + p.S(x); }, lam, H, rule);
    FunctionElements Vm([&](double x) { return p.V(x) - p.S(x); }, lam, H, rule);
    FunctionElements Um(p.U, lam, H, rule);
    PotentialBlocks b;
    b.pp = Eigen::MatrixXd::Zero(N, N);
    b.mm = Eigen::MatrixXd::Zero(N, N);
    b.pm = Eigen::MatrixXd::Zero(N, N);
    auto sq = [](double v) { return std::sqrt(v); };
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            double v = Vp(2 * n, 2 * m);
            if (n > 0 && m > 0) v += tau * tau * sq(1.0 * n * m) * Vm(2 * n - 1, 2 * m - 1);
            if (n > 0) v += tau * sq(1.0 * n) * Um(2 * n - 1, 2 * m);
            if (m > 0) v += tau * sq(1.0 * m) * Um(2 * n, 2 * m - 1);
            b.pp(n, m) = v;

            b.mm(n, m) = Vp(2 * n + 1, 2 * m + 1) +
                         tau * tau * sq((n + 0.5) * (m + 0.5)) * Vm(2 * n, 2 * m) +
                         tau * (sq(n + 0.5) * Um(2 * n, 2 * m + 1) +
                                sq(m + 0.5) * Um(2 * n + 1, 2 * m));

            v = Vp(2 * n, 2 * m + 1) + tau * sq(m + 0.5) * Um(2 * n, 2 * m);
            if (n > 0)
                v += tau * tau * sq(n * (m + 0.5)) * Vm(2 * n - 1, 2 * m) +
                     tau * sq(1.0 * n) * Um(2 * n - 1, 2 * m + 1);
            b.pm(n, m) = v;
        }
    }
    return b;
}

}  // namespace dirac1d
