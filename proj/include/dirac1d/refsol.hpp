#pragma once
// Free-particle reference solutions of the 1D Dirac equation expanded in
// oscillator (Hermite-function) bases, one basis per parity channel.
//
// Two independent solution families exist per channel: sine-like (regular)
// and cosine-like (its quadrature partner, phase-shifted by pi/2 at
// infinity). Their expansion coefficients obey the same symmetric
// three-term recursion; they differ in the initial data. The sine-like
// coefficients have a closed form in Hermite functions evaluated at the
// scaled momentum; the cosine-like starts use Dawson's integral, after
// which the recursion is run upward (stable here because mu^2 stays small
// against the recursion diagonal at the orders we use).

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "mathkit.hpp"

namespace dirac1d {

using cd = std::complex<double>;

struct Kinematics {
    double eps;    // total energy, > M
    double M;      // mass
    double lam;    // basis inverse-length scale
    double k;      // sqrt(eps^2 - M^2)
    double mu;     // k / lam
    double omega;  // sqrt((eps-M)/(eps+M)), lower/upper asymptotic ratio

    Kinematics(double eps_, double M_, double lam_)
        : eps(eps_), M(M_), lam(lam_) {
        if (eps <= M) throw std::invalid_argument("Kinematics: need eps > M");
        if (lam <= 0.0) throw std::invalid_argument("Kinematics: need lam > 0");
        k = std::sqrt(eps * eps - M * M);
        mu = k / lam;
        omega = std::sqrt((eps - M) / (eps + M));
    }
};

// Expansion coefficients of the four reference families up to index nmax.
// sp/sm: sine-like even/odd channel. cp/cm: cosine-like even/odd channel.
// A and B are the overall amplitudes of the even and odd families.
struct ReferenceCoeffs {
    std::vector<double> sp, sm, cp, cm;
};

inline ReferenceCoeffs reference_coeffs(const Kinematics& kin, int nmax,
                                        double A = 1.0, double B = 1.0) {
    const double mu = kin.mu;
    ReferenceCoeffs rc;
    rc.sp.resize(nmax + 1);
    rc.sm.resize(nmax + 1);
    rc.cp.resize(nmax + 1);
    rc.cm.resize(nmax + 1);

    std::vector<double> h = hermite_functions(mu, 2 * nmax + 1);
    const double s2pi = std::sqrt(2.0 * M_PI);
    for (int n = 0; n <= nmax; ++n) {
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        rc.sp[n] = sign * s2pi * A * h[2 * n];
        rc.sm[n] = sign * s2pi * B * h[2 * n + 1];
    }

    const double D = dawson(mu);
    const double pf = std::exp(mu * mu / 2.0) * std::pow(M_PI, -0.25);
    rc.cp[0] = 2.0 * std::sqrt(2.0) * A * pf * D;
    rc.cm[0] = 2.0 * B * pf * (1.0 - 2.0 * mu * D);
    if (nmax >= 1) {
        rc.cp[1] = 4.0 * A * pf * ((0.5 - mu * mu) * D + mu / 2.0);
        rc.cm[1] = (2.0 * std::sqrt(2.0) / std::sqrt(3.0)) * B * pf *
                   ((1.5 - mu * mu) * (1.0 - 2.0 * mu * D) - 0.5);
    }
    for (int i = 1; i < nmax; ++i) {
        rc.cp[i + 1] = (((2.0 * i + 0.5) - mu * mu) * rc.cp[i] -
                        std::sqrt(i * (i - 0.5)) * rc.cp[i - 1]) /
                       std::sqrt((i + 1.0) * (i + 0.5));
        rc.cm[i + 1] = (((2.0 * i + 1.5) - mu * mu) * rc.cm[i] -
                        std::sqrt(i * (i + 0.5)) * rc.cm[i - 1]) /
                       std::sqrt((i + 1.0) * (i + 1.5));
    }
    return rc;
}

// Outgoing/incoming tail combinations. The even-channel tail of the
// transmitted/reflected wave is a_m = W_even * pp[m] + pm[m]; the odd
// channel uses A_m = W_odd * qp[m] - qm[m].
struct TailCoeffs {
    std::vector<cd> pp, pm, qp, qm;
};

inline TailCoeffs tail_coeffs(const Kinematics& kin, int nmax,
                              double A = 1.0, double B = 1.0) {
    ReferenceCoeffs rc = reference_coeffs(kin, nmax, A, B);
    TailCoeffs t;
    t.pp.resize(nmax + 1);
    t.pm.resize(nmax + 1);
    t.qp.resize(nmax + 1);
    t.qm.resize(nmax + 1);
    const cd I(0.0, 1.0);
    for (int n = 0; n <= nmax; ++n) {
        t.pp[n] = (rc.sp[n] + I * rc.cp[n]) / (2.0 * A);
        t.pm[n] = (rc.sp[n] - I * rc.cp[n]) / (2.0 * A);
        t.qp[n] = (rc.cm[n] + I * rc.sm[n]) / (2.0 * B);
        t.qm[n] = (rc.cm[n] - I * rc.sm[n]) / (2.0 * B);
    }
    return t;
}

// Ratio bundle consumed by the closed-form amplitude expressions, all
// evaluated at a boundary index nb (the first index governed purely by
// the free tail): alpha/beta are successor ratios of the outgoing tails,
// rho/sigma convert outgoing to incoming, gamma links the two channels.
struct KinematicRatios {
    int nb;
    cd alpha_p, alpha_m;  // pp[nb+1]/pp[nb], pm[nb+1]/pm[nb]
    cd beta_p, beta_m;    // qp[nb+1]/qp[nb], qm[nb+1]/qm[nb]
    cd rho, sigma;        // pm[nb]/pp[nb], qm[nb]/qp[nb]
    cd rho1, sigma1;      // same one index up
    cd gamma;             // pp[nb]/qp[nb], cross-channel weight
    cd gamma1;            // pp[nb+1]/qp[nb+1]
};

inline KinematicRatios kinematic_ratios(const Kinematics& kin, int nb) {
    TailCoeffs t = tail_coeffs(kin, nb + 1);
    KinematicRatios r;
    r.nb = nb;
    r.alpha_p = t.pp[nb + 1] / t.pp[nb];
    r.alpha_m = t.pm[nb + 1] / t.pm[nb];
    r.beta_p = t.qp[nb + 1] / t.qp[nb];
    r.beta_m = t.qm[nb + 1] / t.qm[nb];
    r.rho = t.pm[nb] / t.pp[nb];
    r.sigma = t.qm[nb] / t.qp[nb];
    r.rho1 = t.pm[nb + 1] / t.pp[nb + 1];
    r.sigma1 = t.qm[nb + 1] / t.qp[nb + 1];
    r.gamma = t.pp[nb] / t.qp[nb];
    r.gamma1 = t.pp[nb + 1] / t.qp[nb + 1];
    return r;
}

struct Spinor {
    double up, dn;
};

// Basis spinors of the even channel: upper component h_{2n}(y), lower
// component the scaled derivative combination fixed by the free coupling
// of upper to lower. The odd channel is the same construction shifted by
// half a step (uppers h_{2n+1}).
inline Spinor basis_spinor_even(const Kinematics& kin, int n, double x) {
    double y = kin.lam * x;
    std::vector<double> h = hermite_functions(y, 2 * n + 1);
    double c = kin.lam / (kin.M + kin.eps);
    double lower = -std::sqrt(n + 0.5) * h[2 * n + 1];
    if (n >= 1) lower += std::sqrt(static_cast<double>(n)) * h[2 * n - 1];
    return {h[2 * n], c * lower};
}

inline Spinor basis_spinor_odd(const Kinematics& kin, int n, double x) {
    double y = kin.lam * x;
    std::vector<double> h = hermite_functions(y, 2 * n + 2);
    double c = kin.lam / (kin.M + kin.eps);
    double lower = std::sqrt(n + 0.5) * h[2 * n] - std::sqrt(n + 1.0) * h[2 * n + 2];
    return {h[2 * n + 1], c * lower};
}

// The two free sinusoidal spinor forms. The odd-channel sine family and
// the even-channel cosine family approach sine_form; the even-channel
// sine family and the odd-channel cosine family approach cosine_form
// (the latter two with a sign tracking that of x).
inline Spinor sine_form(const Kinematics& kin, double x, double amp = 1.0) {
    return {amp * std::sin(kin.k * x), amp * kin.omega * std::cos(kin.k * x)};
}
inline Spinor cosine_form(const Kinematics& kin, double x, double amp = 1.0) {
    return {amp * std::cos(kin.k * x), -amp * kin.omega * std::sin(kin.k * x)};
}

// Partial sums of the four reference families at a point. n0..n1 is the
// inclusive index window (n0 = 0 gives the full partial sum; n0 = N gives
// the truncated tail sum).
struct FamilySums {
    Spinor Sp{0, 0}, Sm{0, 0}, Cp{0, 0}, Cm{0, 0};
};

inline FamilySums partial_sums(const Kinematics& kin, double x, int n0, int n1,
                               double A = 1.0, double B = 1.0) {
    ReferenceCoeffs rc = reference_coeffs(kin, n1, A, B);
    double y = kin.lam * x;
    std::vector<double> h = hermite_functions(y, 2 * n1 + 2);
    double c = kin.lam / (kin.M + kin.eps);
    FamilySums f;
    for (int n = n0; n <= n1; ++n) {
        double lo_e = -std::sqrt(n + 0.5) * h[2 * n + 1];
        if (n >= 1) lo_e += std::sqrt(static_cast<double>(n)) * h[2 * n - 1];
        lo_e *= c;
        double up_e = h[2 * n];
        double lo_o = c * (std::sqrt(n + 0.5) * h[2 * n] - std::sqrt(n + 1.0) * h[2 * n + 2]);
        double up_o = h[2 * n + 1];
        f.Sp.up += rc.sp[n] * up_e;  f.Sp.dn += rc.sp[n] * lo_e;
        f.Cp.up += rc.cp[n] * up_e;  f.Cp.dn += rc.cp[n] * lo_e;
        f.Sm.up += rc.sm[n] * up_o;  f.Sm.dn += rc.sm[n] * lo_o;
        f.Cm.up += rc.cm[n] * up_o;  f.Cm.dn += rc.cm[n] * lo_o;
    }
    return f;
}

// Truncated tail sums starting at N, the regularized remainder that the
// scattering construction relies on being small near the origin.
inline FamilySums truncated_tail(const Kinematics& kin, double x, int N, int n_max,
                                 double A = 1.0, double B = 1.0) {
    if (n_max < N + 60) n_max = N + 60;
    return partial_sums(kin, x, N, n_max, A, B);
}

}  // namespace dirac1d
