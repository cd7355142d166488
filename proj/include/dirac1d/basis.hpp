#pragma once
// Tridiagonal structure of the free wave operator in the channel bases,
// plus the tied two-component basis (lower component slaved to the upper
// with weight tau) used by the overlap/Hamiltonian consistency checks.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "refsol.hpp"

namespace dirac1d {

// (H0 - eps) in the even channel basis is tridiagonal. Row n couples to
// n-1, n, n+1 with the coefficients below; the odd channel is the same
// with n -> n + 1/2.
inline Eigen::MatrixXd wave_operator_even(const Kinematics& kin, int N) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
    double pref = kin.lam * kin.lam / (kin.eps + kin.M);
    double mu2 = kin.mu * kin.mu;
    for (int n = 0; n < N; ++n) {
        J(n, n) = pref * ((2.0 * n + 0.5) - mu2);
        if (n > 0) J(n, n - 1) = -pref * std::sqrt(n * (n - 0.5));
        if (n + 1 < N) J(n, n + 1) = -pref * std::sqrt((n + 1.0) * (n + 0.5));
    }
    return J;
}

inline Eigen::MatrixXd wave_operator_odd(const Kinematics& kin, int N) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
    double pref = kin.lam * kin.lam / (kin.eps + kin.M);
    double mu2 = kin.mu * kin.mu;
    for (int n = 0; n < N; ++n) {
        J(n, n) = pref * ((2.0 * n + 1.5) - mu2);
        if (n > 0) J(n, n - 1) = -pref * std::sqrt(n * (n + 0.5));
        if (n + 1 < N) J(n, n + 1) = -pref * std::sqrt((n + 1.0) * (n + 1.5));
    }
    return J;
}

// Off-diagonal wave-operator element linking the last interior index to
// the first exterior one, J(N, N-1), per channel. The closed-form
// amplitude expressions take these as inputs.
inline double boundary_coupling_even(const Kinematics& kin, int N) {
    return -(kin.lam * kin.lam / (kin.eps + kin.M)) * std::sqrt(N * (N - 0.5));
}
inline double boundary_coupling_odd(const Kinematics& kin, int N) {
    return -(kin.lam * kin.lam / (kin.eps + kin.M)) * std::sqrt(N * (N + 0.5));
}

// ---- tied two-component middle basis (diagnostic / cross-check layer) ----
//
// Here the lower component is tied to the upper with a fixed weight tau
// instead of being energy dependent. Free Hamiltonian and overlap are
// tridiagonal/diagonal in each channel. Index convention ("zeta order"):
// slot i < N is the odd channel with n = N-1-i, slot i >= N is the even
// channel with n = i-N. This packs both channels into one 2N vector with
// the two boundary-adjacent states at the ends.

struct TiedMiddle {
    Eigen::MatrixXd H0;       // 2N x 2N, symmetric
    Eigen::VectorXd overlap;  // diagonal entries
};

inline TiedMiddle tied_middle_h0(int N, double M, double lam, double tau) {
    TiedMiddle t;
    t.H0 = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    t.overlap = Eigen::VectorXd::Zero(2 * N);
    for (int n = 0; n < N; ++n) {  // even block
        int i = N + n;
        t.H0(i, i) = M + tau * (2.0 * lam - tau * M) * n;
        t.overlap(i) = 1.0 + tau * tau * n;
        if (n + 1 < N) {
            double off = -lam * tau * std::sqrt((n + 1.0) * (n + 0.5));
            t.H0(i, i + 1) = off;
            t.H0(i + 1, i) = off;
        }
    }
    for (int n = 0; n < N; ++n) {  // odd block
        int i = N - 1 - n;
        t.H0(i, i) = M + tau * (2.0 * lam - tau * M) * (n + 0.5);
        t.overlap(i) = 1.0 + tau * tau * (n + 0.5);
        if (n + 1 < N) {
            double off = -lam * tau * std::sqrt((n + 1.0) * (n + 1.5));
            int j = N - 1 - (n + 1);
            t.H0(i, j) = off;
            t.H0(j, i) = off;
        }
    }
    return t;
}

// Tied middle basis spinor values (for quadrature cross-checks of the
// matrices above). Channel +: upper h_{2n}, lower tau*sqrt(n)*h_{2n-1}.
// Channel -: upper h_{2n+1}, lower tau*sqrt(n+1/2)*h_{2n}.
inline Spinor tied_spinor_even(int n, double tau, double y) {
    std::vector<double> h = hermite_functions(y, 2 * n + 1);
    double lo = (n >= 1) ? tau * std::sqrt(static_cast<double>(n)) * h[2 * n - 1] : 0.0;
    return {h[2 * n], lo};
}
inline Spinor tied_spinor_odd(int n, double tau, double y) {
    std::vector<double> h = hermite_functions(y, 2 * n + 1);
    return {h[2 * n + 1], tau * std::sqrt(n + 0.5) * h[2 * n]};
}

}  // namespace dirac1d
