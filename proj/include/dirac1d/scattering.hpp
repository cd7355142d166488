#pragma once
// Two-channel scattering pipeline. The middle region is expanded in
// oscillator spinors with independent upper/lower coefficients; outside,
// the exact free-recursion tails carry one unknown walk-off amplitude per
// parity channel (W+ even, W- odd). Bordering the middle resolvent with
// potential-free reference rows closes a 2x2 system for (W+, W-), and
// T = (W+ + W-)/2, R = (W+ - W-)/2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "basis.hpp"
#include "greens.hpp"
#include "potential.hpp"
#include "refsol.hpp"

namespace dirac1d {

// Layout of the middle coefficient vector (size 4N+1):
//   even channel uppers a_n (n = 0..N-1), lowers b_n (n = 1..N),
//   odd channel uppers A_n (n = 0..N-1), lowers B_n (n = 0..N).
// The two lower slots of highest index are the boundary rows the tails
// couple into. Channel labels m in [-N, N-1] used by the reduced
// coefficient vector map as m >= 0 -> even a_m, m < 0 -> odd A_{-m-1}.
struct MiddleBasisIndex {
    int N = 0;
    int size() const { return 4 * N + 1; }
    int upper_even(int n) const { return n; }
    int lower_even(int n) const { return N + n - 1; }
    int upper_odd(int n) const { return 2 * N + n; }
    int lower_odd(int n) const { return 3 * N + n; }
    int boundary_even() const { return lower_even(N); }
    int boundary_odd() const { return lower_odd(N); }
};

struct MiddleSystem {
    double mass = 1.0;
    double lam = 1.0;
    int N = 0;
    int nbuf = 0;  // retained tail potential columns beyond the middle
    int K = 0;
    MiddleBasisIndex idx;
    Parity parity = Parity::None;
    Eigen::MatrixXd A0;             // symmetric, energy independent
    Eigen::MatrixXd VpS, VmS, Um;   // function elements over single-index space
    GreenEigen eig;
};

inline MiddleSystem build_middle_system(const PotentialSpec& pot, double mass, double lam,
                                        int N, int nbuf = 0, int K = 0) {
    if (N < 2) throw std::invalid_argument("build_middle_system: N must be >= 2");
    if (nbuf < 0) throw std::invalid_argument("build_middle_system: nbuf must be >= 0");
    if (lam <= 0) throw std::invalid_argument("build_middle_system: lam must be positive");
    MiddleSystem s;
    s.mass = mass;
    s.lam = lam;
    s.N = N;
    s.nbuf = nbuf;
    s.K = (K > 0) ? K : 2 * (N + nbuf) + 40;
    s.idx.N = N;
    s.parity = classify_parity(pot);

    int H = 2 * (N + nbuf) + 6;
    if (s.K < H) throw std::invalid_argument("build_middle_system: quadrature order too small");
    QuadratureRule rule = gauss_hermite(s.K);
    s.VpS = FunctionElements([&](double x) { return pot.V(x) + pot.S(x); }, lam, H, rule).matrix();
    s.VmS = FunctionElements([&](double x) { return pot.V(x) - pot.S(x); }, lam, H, rule).matrix();
    s.Um = FunctionElements(pot.U, lam, H, rule).matrix();

    const auto& idx = s.idx;
    int sz = idx.size();
    Eigen::MatrixXd& A = s.A0;
    A = Eigen::MatrixXd::Zero(sz, sz);
    for (int n = 0; n < N; ++n) A(idx.upper_even(n), idx.upper_even(n)) += mass;
    for (int n = 1; n <= N; ++n) A(idx.lower_even(n), idx.lower_even(n)) -= mass;
    for (int n = 0; n < N; ++n) A(idx.upper_odd(n), idx.upper_odd(n)) += mass;
    for (int n = 0; n <= N; ++n) A(idx.lower_odd(n), idx.lower_odd(n)) -= mass;
    for (int n = 0; n < N; ++n) {
        if (n >= 1) {
            double c = lam * std::sqrt(static_cast<double>(n));
            A(idx.upper_even(n), idx.lower_even(n)) += c;
            A(idx.lower_even(n), idx.upper_even(n)) += c;
        }
        double c = -lam * std::sqrt(n + 0.5);
        A(idx.upper_even(n), idx.lower_even(n + 1)) += c;
        A(idx.lower_even(n + 1), idx.upper_even(n)) += c;
        c = lam * std::sqrt(n + 0.5);
        A(idx.upper_odd(n), idx.lower_odd(n)) += c;
        A(idx.lower_odd(n), idx.upper_odd(n)) += c;
        c = -lam * std::sqrt(n + 1.0);
        A(idx.upper_odd(n), idx.lower_odd(n + 1)) += c;
        A(idx.lower_odd(n + 1), idx.upper_odd(n)) += c;
    }
    // potential blocks: uppers live on single-index slots (2n even / 2n+1
    // odd channel), lowers on (2n-1 even / 2n odd)
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
            A(idx.upper_even(n), idx.upper_even(m)) += s.VpS(2 * n, 2 * m);
            A(idx.upper_even(n), idx.upper_odd(m)) += s.VpS(2 * n, 2 * m + 1);
            A(idx.upper_odd(n), idx.upper_even(m)) += s.VpS(2 * n + 1, 2 * m);
            A(idx.upper_odd(n), idx.upper_odd(m)) += s.VpS(2 * n + 1, 2 * m + 1);
        }
    for (int n = 1; n <= N; ++n) {
        for (int m = 1; m <= N; ++m)
            A(idx.lower_even(n), idx.lower_even(m)) += s.VmS(2 * n - 1, 2 * m - 1);
        for (int m = 0; m <= N; ++m) {
            A(idx.lower_even(n), idx.lower_odd(m)) += s.VmS(2 * n - 1, 2 * m);
            A(idx.lower_odd(m), idx.lower_even(n)) += s.VmS(2 * m, 2 * n - 1);
        }
    }
    for (int n = 0; n <= N; ++n)
        for (int m = 0; m <= N; ++m)
            A(idx.lower_odd(n), idx.lower_odd(m)) += s.VmS(2 * n, 2 * m);
    for (int n = 0; n < N; ++n) {
        for (int m = 1; m <= N; ++m) {
            A(idx.upper_even(n), idx.lower_even(m)) += s.Um(2 * n, 2 * m - 1);
            A(idx.lower_even(m), idx.upper_even(n)) += s.Um(2 * m - 1, 2 * n);
            A(idx.upper_odd(n), idx.lower_even(m)) += s.Um(2 * n + 1, 2 * m - 1);
            A(idx.lower_even(m), idx.upper_odd(n)) += s.Um(2 * m - 1, 2 * n + 1);
        }
        for (int m = 0; m <= N; ++m) {
            A(idx.upper_even(n), idx.lower_odd(m)) += s.Um(2 * n, 2 * m);
            A(idx.lower_odd(m), idx.upper_even(n)) += s.Um(2 * m, 2 * n);
            A(idx.upper_odd(n), idx.lower_odd(m)) += s.Um(2 * n + 1, 2 * m);
            A(idx.lower_odd(m), idx.upper_odd(n)) += s.Um(2 * m, 2 * n + 1);
        }
    }

    s.eig = diagonalize(s.A0);
    return s;
}

// Tail coefficients beyond the middle: each is affine in the channel
// amplitude, value = W * one + zero. Lower tails are slaved to the uppers
// through the first-order coupling.
struct TailSet {
    int N = 0, nbuf = 0;
    std::vector<cd> a_one, a_zero;  // even uppers, index m-N, m in [N, N+nbuf+2]
    std::vector<cd> A_one, A_zero;  // odd uppers, same indexing
    std::vector<cd> b_one, b_zero;  // even lowers, index m-(N+1), m in [N+1, N+nbuf+1]
    std::vector<cd> B_one, B_zero;  // odd lowers, same indexing
};

inline TailSet make_tails(const Kinematics& kin, int N, int nbuf) {
    TailCoeffs t = tail_coeffs(kin, N + nbuf + 2);
    TailSet ts;
    ts.N = N;
    ts.nbuf = nbuf;
    int nu = nbuf + 3;
    ts.a_one.resize(nu);
    ts.a_zero.resize(nu);
    ts.A_one.resize(nu);
    ts.A_zero.resize(nu);
    for (int j = 0; j < nu; ++j) {
        int m = N + j;
        ts.a_one[j] = t.pp[m];
        ts.a_zero[j] = t.pm[m];
        ts.A_one[j] = t.qp[m];
        ts.A_zero[j] = -t.qm[m];
    }
    int nl = nbuf + 1;
    ts.b_one.resize(nl);
    ts.b_zero.resize(nl);
    ts.B_one.resize(nl);
    ts.B_zero.resize(nl);
    double c = kin.lam / (kin.eps + kin.M);
    for (int j = 0; j < nl; ++j) {
        int m = N + 1 + j;
        ts.b_one[j] = c * (std::sqrt(static_cast<double>(m)) * ts.a_one[j + 1] -
                           std::sqrt(m - 0.5) * ts.a_one[j]);
        ts.b_zero[j] = c * (std::sqrt(static_cast<double>(m)) * ts.a_zero[j + 1] -
                            std::sqrt(m - 0.5) * ts.a_zero[j]);
        ts.B_one[j] = c * (std::sqrt(m + 0.5) * ts.A_one[j + 1] -
                           std::sqrt(static_cast<double>(m)) * ts.A_one[j]);
        ts.B_zero[j] = c * (std::sqrt(m + 0.5) * ts.A_zero[j + 1] -
                            std::sqrt(static_cast<double>(m)) * ts.A_zero[j]);
    }
    return ts;
}

// Tail feed-in to the middle rows, split as r = r0 + W+ rp + W- rm.
// Always contains the kinetic injection at the two boundary rows; with
// nbuf > 0 also the potential columns of the first tail coefficients.
struct BorderRhs {
    Eigen::VectorXcd r0, rp, rm;
};

inline BorderRhs middle_rhs(const MiddleSystem& sys, const Kinematics& kin, const TailSet& t) {
    const auto& idx = sys.idx;
    int N = sys.N, sz = idx.size();
    BorderRhs r;
    r.r0 = Eigen::VectorXcd::Zero(sz);
    r.rp = Eigen::VectorXcd::Zero(sz);
    r.rm = Eigen::VectorXcd::Zero(sz);
    double ce = kin.lam * std::sqrt(static_cast<double>(N));
    double co = kin.lam * std::sqrt(N + 0.5);
    r.rp(idx.boundary_even()) += ce * t.a_one[0];
    r.r0(idx.boundary_even()) += ce * t.a_zero[0];
    r.rm(idx.boundary_odd()) += co * t.A_one[0];
    r.r0(idx.boundary_odd()) += co * t.A_zero[0];
    if (sys.nbuf == 0) return r;
    for (int j = 0; j <= sys.nbuf; ++j) {
        int m = N + j;
        for (int n = 0; n < N; ++n) {
            r.rp(idx.upper_even(n)) += sys.VpS(2 * n, 2 * m) * t.a_one[j];
            r.r0(idx.upper_even(n)) += sys.VpS(2 * n, 2 * m) * t.a_zero[j];
            r.rm(idx.upper_even(n)) += sys.VpS(2 * n, 2 * m + 1) * t.A_one[j];
            r.r0(idx.upper_even(n)) += sys.VpS(2 * n, 2 * m + 1) * t.A_zero[j];
            r.rp(idx.upper_odd(n)) += sys.VpS(2 * n + 1, 2 * m) * t.a_one[j];
            r.r0(idx.upper_odd(n)) += sys.VpS(2 * n + 1, 2 * m) * t.a_zero[j];
            r.rm(idx.upper_odd(n)) += sys.VpS(2 * n + 1, 2 * m + 1) * t.A_one[j];
            r.r0(idx.upper_odd(n)) += sys.VpS(2 * n + 1, 2 * m + 1) * t.A_zero[j];
        }
        for (int n = 1; n <= N; ++n) {
            r.rp(idx.lower_even(n)) += sys.Um(2 * n - 1, 2 * m) * t.a_one[j];
            r.r0(idx.lower_even(n)) += sys.Um(2 * n - 1, 2 * m) * t.a_zero[j];
            r.rm(idx.lower_even(n)) += sys.Um(2 * n - 1, 2 * m + 1) * t.A_one[j];
            r.r0(idx.lower_even(n)) += sys.Um(2 * n - 1, 2 * m + 1) * t.A_zero[j];
        }
        for (int n = 0; n <= N; ++n) {
            r.rp(idx.lower_odd(n)) += sys.Um(2 * n, 2 * m) * t.a_one[j];
            r.r0(idx.lower_odd(n)) += sys.Um(2 * n, 2 * m) * t.a_zero[j];
            r.rm(idx.lower_odd(n)) += sys.Um(2 * n, 2 * m + 1) * t.A_one[j];
            r.r0(idx.lower_odd(n)) += sys.Um(2 * n, 2 * m + 1) * t.A_zero[j];
        }
    }
    for (int j = 1; j <= sys.nbuf; ++j) {
        int m = N + j;
        for (int n = 1; n <= N; ++n) {
            r.rp(idx.lower_even(n)) += sys.VmS(2 * n - 1, 2 * m - 1) * t.b_one[j - 1];
            r.r0(idx.lower_even(n)) += sys.VmS(2 * n - 1, 2 * m - 1) * t.b_zero[j - 1];
            r.rm(idx.lower_even(n)) += sys.VmS(2 * n - 1, 2 * m) * t.B_one[j - 1];
            r.r0(idx.lower_even(n)) += sys.VmS(2 * n - 1, 2 * m) * t.B_zero[j - 1];
        }
        for (int n = 0; n <= N; ++n) {
            r.rp(idx.lower_odd(n)) += sys.VmS(2 * n, 2 * m - 1) * t.b_one[j - 1];
            r.r0(idx.lower_odd(n)) += sys.VmS(2 * n, 2 * m - 1) * t.b_zero[j - 1];
            r.rm(idx.lower_odd(n)) += sys.VmS(2 * n, 2 * m) * t.B_one[j - 1];
            r.r0(idx.lower_odd(n)) += sys.VmS(2 * n, 2 * m) * t.B_zero[j - 1];
        }
        for (int n = 0; n < N; ++n) {
            r.rp(idx.upper_even(n)) += sys.Um(2 * n, 2 * m - 1) * t.b_one[j - 1];
            r.r0(idx.upper_even(n)) += sys.Um(2 * n, 2 * m - 1) * t.b_zero[j - 1];
            r.rm(idx.upper_even(n)) += sys.Um(2 * n, 2 * m) * t.B_one[j - 1];
            r.r0(idx.upper_even(n)) += sys.Um(2 * n, 2 * m) * t.B_zero[j - 1];
            r.rp(idx.upper_odd(n)) += sys.Um(2 * n + 1, 2 * m - 1) * t.b_one[j - 1];
            r.r0(idx.upper_odd(n)) += sys.Um(2 * n + 1, 2 * m - 1) * t.b_zero[j - 1];
            r.rm(idx.upper_odd(n)) += sys.Um(2 * n + 1, 2 * m) * t.B_one[j - 1];
            r.r0(idx.upper_odd(n)) += sys.Um(2 * n + 1, 2 * m) * t.B_zero[j - 1];
        }
    }
    return r;
}

// Effective corner resolvent entries at the two channel boundaries. The
// boundary lower rows are eliminated through the middle resolvent, which
// dresses the bare boundary diagonal into kappa+-; the channel-diagonal
// corners are their reciprocals and the cross corner carries the
// symmetric inter-channel leakage.
struct CornerGreens {
    double Gpp = 0, Gmm = 0, Gpm = 0, Gmp = 0;
};

inline CornerGreens corner_greens(const GreenEigen& eig, const Kinematics& kin,
                                  const MiddleBasisIndex& idx) {
    int N = idx.N;
    double l2 = kin.lam * kin.lam;
    double pref = l2 / (kin.eps + kin.M);
    double Gbb = green_element(eig, idx.boundary_even(), idx.boundary_even(), kin.eps);
    double GBB = green_element(eig, idx.boundary_odd(), idx.boundary_odd(), kin.eps);
    double GbB = green_element(eig, idx.boundary_even(), idx.boundary_odd(), kin.eps);
    double kap_p = (kin.M - kin.eps) + pref * (N + 0.5) - l2 * N * Gbb;
    double kap_m = (kin.M - kin.eps) + pref * (N + 1.0) - l2 * (N + 0.5) * GBB;
    double X = l2 * std::sqrt(N * (N + 0.5)) * GbB;
    CornerGreens cg;
    cg.Gpp = 1.0 / kap_p;
    cg.Gmm = 1.0 / kap_m;
    cg.Gpm = cg.Gmp = X * cg.Gpp * cg.Gmm;
    return cg;
}

// Decoupled channel amplitudes: each W is a ratio of the boundary
// three-term relation closed by the corner element. Requires an even
// potential matrix (vanishing cross corner). The ratios must be taken at
// base N and the couplings at N+1.
inline std::pair<cd, cd> amplitudes_decoupled(const CornerGreens& cg,
                                              const KinematicRatios& r, double Jp,
                                              double Jm) {
    cd den_p = 1.0 + cg.Gpp * Jp * r.alpha_p;
    cd den_m = 1.0 + cg.Gmm * Jm * r.beta_p;
    if (std::abs(den_p) < 1e-300 || std::abs(den_m) < 1e-300)
        throw std::runtime_error("amplitudes_decoupled: vanishing denominator");
    cd Wp = -r.rho * (1.0 + cg.Gpp * Jp * r.alpha_m) / den_p;
    cd Wm = r.sigma * (1.0 + cg.Gmm * Jm * r.beta_m) / den_m;
    return {Wp, Wm};
}

// General form: the two boundary relations stay coupled through the cross
// corner, and the cross contribution enters the determinant through the
// product Gpm * Gmp. Reduces exactly to the decoupled form when the cross
// corner vanishes.
inline std::pair<cd, cd> amplitudes_coupled(const CornerGreens& cg, const KinematicRatios& r,
                                            double Jp, double Jm) {
    double kap_p = 1.0 / cg.Gpp;
    double kap_m = 1.0 / cg.Gmm;
    double X = 0.5 * (cg.Gpm + cg.Gmp) / (cg.Gpp * cg.Gmm);
    cd a11 = kap_p + Jp * r.alpha_p;
    cd a12 = -X / r.gamma;
    cd a21 = -X * r.gamma;
    cd a22 = kap_m + Jm * r.beta_p;
    cd b1 = -r.rho * (kap_p + Jp * r.alpha_m) - (X / r.gamma) * r.sigma;
    cd b2 = r.sigma * (kap_m + Jm * r.beta_m) + X * r.gamma * r.rho;
    cd det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-300)
        throw std::runtime_error("amplitudes_coupled: vanishing determinant");
    cd Wp = (b1 * a22 - a12 * b2) / det;
    cd Wm = (a11 * b2 - b1 * a21) / det;
    return {Wp, Wm};
}

namespace detail {

inline void require_off_spectrum(const GreenEigen& eig, double z) {
    double scale = spectral_scale(eig);
    double best = eig.eps(0);
    for (int i = 0; i < eig.eps.size(); ++i)
        if (std::abs(eig.eps(i) - z) < std::abs(best - z)) best = eig.eps(i);
    if (std::abs(best - z) <= 1e-12 * scale) throw PoleError(best);
}

// y = resolvent(z) * r through the eigen-decomposition
inline Eigen::VectorXcd apply_resolvent(const GreenEigen& eig, double z,
                                        const Eigen::VectorXcd& r) {
    Eigen::VectorXcd u = eig.gamma.transpose().cast<cd>() * r;
    for (int i = 0; i < u.size(); ++i) u(i) /= (eig.eps(i) - z);
    return eig.gamma.cast<cd>() * u;
}

}  // namespace detail

// Direct bordered solve for (W+, W-): eliminates the middle via the
// resolvent applied to the tail feed-in and closes the two potential-free
// reference rows at the boundary. Equivalent to the corner formulas when
// nbuf = 0; required when tail potential columns are retained.
inline std::pair<cd, cd> solve_border(const MiddleSystem& sys, const Kinematics& kin,
                                      const TailSet& t, const BorderRhs& rhs) {
    detail::require_off_spectrum(sys.eig, kin.eps);
    const auto& idx = sys.idx;
    int N = sys.N;
    double l2 = kin.lam * kin.lam;
    double c1p = (kin.M - kin.eps) + l2 * (N + 0.5) / (kin.eps + kin.M);
    double c1m = (kin.M - kin.eps) + l2 * (N + 1.0) / (kin.eps + kin.M);
    double Jt_p = -l2 / (kin.eps + kin.M) * std::sqrt((N + 1.0) * (N + 0.5));
    double Jt_m = -l2 / (kin.eps + kin.M) * std::sqrt((N + 1.0) * (N + 1.5));
    Eigen::VectorXcd g0 = detail::apply_resolvent(sys.eig, kin.eps, rhs.r0);
    Eigen::VectorXcd gp = detail::apply_resolvent(sys.eig, kin.eps, rhs.rp);
    Eigen::VectorXcd gm = detail::apply_resolvent(sys.eig, kin.eps, rhs.rm);
    double ce = kin.lam * std::sqrt(static_cast<double>(N));
    double co = kin.lam * std::sqrt(N + 0.5);
    int be = idx.boundary_even(), bo = idx.boundary_odd();
    Eigen::Matrix2cd m2;
    Eigen::Vector2cd v2;
    m2(0, 0) = c1p * t.a_one[0] + Jt_p * t.a_one[1] - ce * gp(be);
    m2(0, 1) = -ce * gm(be);
    v2(0) = -(c1p * t.a_zero[0] + Jt_p * t.a_zero[1]) + ce * g0(be);
    m2(1, 1) = c1m * t.A_one[0] + Jt_m * t.A_one[1] - co * gm(bo);
    m2(1, 0) = -co * gp(bo);
    v2(1) = -(c1m * t.A_zero[0] + Jt_m * t.A_zero[1]) + co * g0(bo);
    Eigen::Vector2cd w = m2.fullPivLu().solve(v2);
    return {w(0), w(1)};
}

// Middle coefficients given the first outer coefficient of each channel
// (b_plus = even-channel value at index N, b_minus = odd-channel value).
// Returns the full middle vector; reduce_middle_uppers extracts the 2N
// upper coefficients ordered odd-channel reversed then even-channel, i.e.
// [A_{N-1}, ..., A_0, a_0, ..., a_{N-1}].
inline Eigen::VectorXcd solve_middle_coefficients(const MiddleSystem& sys,
                                                  const Kinematics& kin, cd b_plus,
                                                  cd b_minus) {
    detail::require_off_spectrum(sys.eig, kin.eps);
    const auto& idx = sys.idx;
    int N = sys.N;
    Eigen::VectorXcd r = Eigen::VectorXcd::Zero(idx.size());
    r(idx.boundary_even()) = kin.lam * std::sqrt(static_cast<double>(N)) * b_plus;
    r(idx.boundary_odd()) = kin.lam * std::sqrt(N + 0.5) * b_minus;
    return -detail::apply_resolvent(sys.eig, kin.eps, r);
}

inline Eigen::VectorXcd reduce_middle_uppers(const MiddleSystem& sys,
                                             const Eigen::VectorXcd& x) {
    int N = sys.N;
    Eigen::VectorXcd out(2 * N);
    for (int i = 0; i < N; ++i) out(i) = x(sys.idx.upper_odd(N - 1 - i));
    for (int i = 0; i < N; ++i) out(N + i) = x(sys.idx.upper_even(i));
    return out;
}

struct ScatteringResult {
    double eps = 0;       // requested energy
    double eps_used = 0;  // actual energy after any pole nudge
    cd T{0, 0}, R{0, 0};
    cd Wp{0, 0}, Wm{0, 0};
    double theta_p = std::numeric_limits<double>::quiet_NaN();  // decoupled only
    double theta_m = std::numeric_limits<double>::quiet_NaN();
    double unitarity_defect = 0;
    double channel_coupling = 0;
    bool decoupled_path = false;
    bool nudged = false;
    bool flagged = false;  // unitarity defect beyond 1e-3
    bool failed = false;
    std::string error;
};

inline ScatteringResult evaluate_point(const MiddleSystem& sys, double eps) {
    ScatteringResult res;
    res.eps = eps;
    const double shifts[] = {0.0, 1e-8, -1e-8, 3e-8};
    std::string last_error;
    for (double sh : shifts) {
        double e = eps + sh * sys.mass;
        if (!(e > sys.mass)) {
            last_error = "energy not above the mass gap";
            continue;
        }
        try {
            Kinematics kin(e, sys.mass, sys.lam);
            KinematicRatios ratios = kinematic_ratios(kin, sys.N);
            double Jp = boundary_coupling_even(kin, sys.N + 1);
            double Jm = boundary_coupling_odd(kin, sys.N + 1);
            CornerGreens cg = corner_greens(sys.eig, kin, sys.idx);
            res.channel_coupling = std::max(std::abs(cg.Gpm), std::abs(cg.Gmp));
            std::pair<cd, cd> w;
            if (sys.nbuf > 0) {
                TailSet tails = make_tails(kin, sys.N, sys.nbuf);
                BorderRhs rhs = middle_rhs(sys, kin, tails);
                w = solve_border(sys, kin, tails, rhs);
            } else if (sys.parity == Parity::Even && res.channel_coupling < 1e-10) {
                w = amplitudes_decoupled(cg, ratios, Jp, Jm);
                res.decoupled_path = true;
                res.theta_p = std::arg(w.first) / 2.0;
                res.theta_m = std::arg(w.second) / 2.0;
            } else {
                w = amplitudes_coupled(cg, ratios, Jp, Jm);
            }
            res.Wp = w.first;
            res.Wm = w.second;
            res.T = (res.Wp + res.Wm) / 2.0;
            res.R = (res.Wp - res.Wm) / 2.0;
            if (!std::isfinite(res.T.real()) || !std::isfinite(res.T.imag()) ||
                !std::isfinite(res.R.real()) || !std::isfinite(res.R.imag()))
                throw std::runtime_error("non-finite amplitude");
            res.eps_used = e;
            res.nudged = (sh != 0.0);
            res.unitarity_defect = std::abs(std::norm(res.T) + std::norm(res.R) - 1.0);
            res.flagged = res.unitarity_defect > 1e-3;
            return res;
        } catch (const std::exception& ex) {
            last_error = ex.what();
        }
    }
    res.failed = true;
    res.error = last_error;
    res.eps_used = eps;
    return res;
}

// Sequential sweep over an energy grid sharing one diagonalized system.
// Phases of the decoupled path are continued across the sweep: each theta
// is shifted by the multiple of pi closest to its predecessor.
inline std::vector<ScatteringResult> energy_sweep(const MiddleSystem& sys,
                                                  const std::vector<double>& energies) {
    std::vector<ScatteringResult> out;
    out.reserve(energies.size());
    for (double e : energies) out.push_back(evaluate_point(sys, e));
    const double pi = 3.14159265358979323846;
    double prev_p = std::numeric_limits<double>::quiet_NaN();
    double prev_m = std::numeric_limits<double>::quiet_NaN();
    for (auto& r : out) {
        if (r.failed || !r.decoupled_path) continue;
        if (!std::isnan(prev_p)) r.theta_p += pi * std::round((prev_p - r.theta_p) / pi);
        if (!std::isnan(prev_m)) r.theta_m += pi * std::round((prev_m - r.theta_m) / pi);
        prev_p = r.theta_p;
        prev_m = r.theta_m;
    }
    return out;
}

// Stability-plateau scan of |T(eps0)|^2 over a (lam, tau) grid for each N.
// tau rescales the lower components of the tied diagnostic basis only; in
// this pipeline the lowers are independent unknowns, so tau cancels
// exactly and the value is replicated along the tau axis. The axis is kept
// so reports and region bookkeeping stay two-dimensional.
struct PlateauEntry {
    int N = 0;
    Eigen::MatrixXd values;  // lam rows x tau columns, NaN on failure
    bool found = false;
    int area = 0;
    double spread = std::numeric_limits<double>::infinity();
    double value = std::numeric_limits<double>::quiet_NaN();  // region median
    double max_spread = 0;  // over the whole grid, for no-plateau reports
    std::vector<std::pair<int, int>> cells;
};

struct PlateauReport {
    double eps0 = 0;
    double tolerance = 1e-4;
    std::vector<PlateauEntry> per_N;
    bool growth_monotone = true;  // plateau area non-decreasing in N
};

namespace detail {

// Largest 4-connected cell set whose value spread stays below tol: slide a
// value window over the sorted cells and take the biggest component.
inline void best_plateau_region(PlateauEntry& e, double tol) {
    int R = static_cast<int>(e.values.rows()), C = static_cast<int>(e.values.cols());
    struct Cell {
        double v;
        int i, j;
    };
    std::vector<Cell> cells;
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j)
            if (std::isfinite(e.values(i, j))) cells.push_back({e.values(i, j), i, j});
    if (cells.empty()) return;
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.v < b.v; });
    double maxv = cells.back().v, minv = cells.front().v;
    e.max_spread = maxv - minv;
    for (size_t lo = 0, hi = 0; lo < cells.size(); ++lo) {
        if (hi < lo) hi = lo;
        while (hi + 1 < cells.size() && cells[hi + 1].v - cells[lo].v < tol) ++hi;
        // BFS over the cells inside the window [lo, hi]
        Eigen::MatrixXi in = Eigen::MatrixXi::Zero(R, C);
        for (size_t k = lo; k <= hi; ++k) in(cells[k].i, cells[k].j) = 1;
        Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(R, C);
        for (size_t k = lo; k <= hi; ++k) {
            if (seen(cells[k].i, cells[k].j)) continue;
            std::vector<std::pair<int, int>> comp, stack{{cells[k].i, cells[k].j}};
            seen(cells[k].i, cells[k].j) = 1;
            while (!stack.empty()) {
                auto [ci, cj] = stack.back();
                stack.pop_back();
                comp.push_back({ci, cj});
                const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    int ni = ci + di[d], nj = cj + dj[d];
                    if (ni < 0 || nj < 0 || ni >= R || nj >= C) continue;
                    if (!in(ni, nj) || seen(ni, nj)) continue;
                    seen(ni, nj) = 1;
                    stack.push_back({ni, nj});
                }
            }
            if (static_cast<int>(comp.size()) > e.area) {
                double cmin = std::numeric_limits<double>::infinity(), cmax = -cmin;
                std::vector<double> vals;
                for (auto& [ci, cj] : comp) {
                    cmin = std::min(cmin, e.values(ci, cj));
                    cmax = std::max(cmax, e.values(ci, cj));
                    vals.push_back(e.values(ci, cj));
                }
                e.area = static_cast<int>(comp.size());
                e.spread = cmax - cmin;
                std::sort(vals.begin(), vals.end());
                e.value = vals[vals.size() / 2];
                e.cells = comp;
                e.found = true;
            }
        }
    }
}

}  // namespace detail

inline PlateauReport plateau_scan(const PotentialSpec& pot, double mass, double eps0,
                                  const std::vector<double>& lam_grid,
                                  const std::vector<double>& tau_grid,
                                  const std::vector<int>& N_list, int nbuf = 0,
                                  double tol = 1e-4) {
    if (lam_grid.empty() || tau_grid.empty() || N_list.empty())
        throw std::invalid_argument("plateau_scan: empty grid");
    PlateauReport rep;
    rep.eps0 = eps0;
    rep.tolerance = tol;
    for (int N : N_list) {
        PlateauEntry e;
        e.N = N;
        e.values.resize(static_cast<int>(lam_grid.size()), static_cast<int>(tau_grid.size()));
        for (size_t i = 0; i < lam_grid.size(); ++i) {
            double t2 = std::numeric_limits<double>::quiet_NaN();
            try {
                MiddleSystem sys = build_middle_system(pot, mass, lam_grid[i], N, nbuf);
                ScatteringResult r = evaluate_point(sys, eps0);
                if (!r.failed) t2 = std::norm(r.T);
            } catch (const std::exception&) {
            }
            for (size_t j = 0; j < tau_grid.size(); ++j)
                e.values(static_cast<int>(i), static_cast<int>(j)) = t2;
        }
        detail::best_plateau_region(e, tol);
        rep.per_N.push_back(std::move(e));
    }
    for (size_t k = 1; k < rep.per_N.size(); ++k)
        if (rep.per_N[k].area < rep.per_N[k - 1].area) rep.growth_monotone = false;
    return rep;
}

}  // namespace dirac1d
