#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dirac1d/basis.hpp"

using namespace dirac1d;

TEST_CASE("wave operators are symmetric tridiagonal", "[basis]") {
    Kinematics kin(1.8, 1.0, 1.4);
    for (auto J : {wave_operator_even(kin, 12), wave_operator_odd(kin, 12)}) {
        REQUIRE((J - J.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                if (std::abs(i - j) > 1) REQUIRE(J(i, j) == 0.0);
    }
}

TEST_CASE("wave operators annihilate the sine families", "[basis]") {
    // interior rows of J acting on the expansion coefficients of a free
    // solution must vanish; the last row reaches outside the block
    Kinematics kin(1.6, 1.0, 1.0);
    int N = 30;
    ReferenceCoeffs rc = reference_coeffs(kin, N);
    Eigen::MatrixXd Je = wave_operator_even(kin, N);
    Eigen::MatrixXd Jo = wave_operator_odd(kin, N);
    Eigen::VectorXd sp(N), sm(N), cp(N), cm(N);
    for (int n = 0; n < N; ++n) {
        sp(n) = rc.sp[n];
        sm(n) = rc.sm[n];
        cp(n) = rc.cp[n];
        cm(n) = rc.cm[n];
    }
    Eigen::VectorXd re = Je * sp, ro = Jo * sm;
    double scale_e = Je.cwiseAbs().maxCoeff() * sp.cwiseAbs().maxCoeff();
    double scale_o = Jo.cwiseAbs().maxCoeff() * sm.cwiseAbs().maxCoeff();
    for (int n = 0; n + 1 < N; ++n) {
        INFO("row " << n);
        REQUIRE(std::abs(re(n)) < 1e-12 * scale_e);
        REQUIRE(std::abs(ro(n)) < 1e-12 * scale_o);
    }

    // cosine families: all interior rows except the sourced first one
    Eigen::VectorXd qe = Je * cp, qo = Jo * cm;
    for (int n = 1; n + 1 < N; ++n) {
        REQUIRE(std::abs(qe(n)) < 1e-12 * Je.cwiseAbs().maxCoeff() * cp.cwiseAbs().maxCoeff());
        REQUIRE(std::abs(qo(n)) < 1e-12 * Jo.cwiseAbs().maxCoeff() * cm.cwiseAbs().maxCoeff());
    }
    // row 0 carries the seed source with a closed form
    double pref = kin.lam * kin.lam / (kin.eps + kin.M);
    double pf = std::exp(kin.mu * kin.mu / 2.0) * std::pow(M_PI, -0.25);
    REQUIRE(qe(0) == Catch::Approx(-pref * std::sqrt(2.0) * pf * kin.mu).epsilon(1e-10));
    REQUIRE(qo(0) == Catch::Approx(pref * pf).epsilon(1e-10));
}

TEST_CASE("boundary couplings equal the adjacent off-diagonal entry", "[basis]") {
    Kinematics kin(2.1, 1.0, 0.8);
    for (int N : {5, 17}) {
        Eigen::MatrixXd Je = wave_operator_even(kin, N + 1);
        Eigen::MatrixXd Jo = wave_operator_odd(kin, N + 1);
        REQUIRE(boundary_coupling_even(kin, N) == Catch::Approx(Je(N, N - 1)).epsilon(1e-14));
        REQUIRE(boundary_coupling_odd(kin, N) == Catch::Approx(Jo(N, N - 1)).epsilon(1e-14));
    }
}

namespace {

// free two-component Hamiltonian element between tied spinors by Gauss
// quadrature: <a|H|b> = int [M ua ub - M la lb - ua lb' + la ub'] dx,
// with x = y / lam and d/dx = lam d/dy
struct TiedChannel {
    int n;
    bool odd;
    double tau;
};

double tied_h_element(const TiedChannel& a, const TiedChannel& b, double M, double lam) {
    auto rule = gauss_hermite(80);
    double acc = 0.0;
    for (size_t k = 0; k < rule.nodes.size(); ++k) {
        double y = rule.nodes[k], w = rule.weights[k];
        double h = 1e-5;
        auto val = [&](const TiedChannel& c, double yy) {
            return c.odd ? tied_spinor_odd(c.n, c.tau, yy) : tied_spinor_even(c.n, c.tau, yy);
        };
        Spinor sa = val(a, y), sb = val(b, y);
        double lbp = lam * (val(b, y + h).dn - val(b, y - h).dn) / (2.0 * h);
        double ubp = lam * (val(b, y + h).up - val(b, y - h).up) / (2.0 * h);
        double integrand = M * sa.up * sb.up - M * sa.dn * sb.dn - sa.up * lbp + sa.dn * ubp;
        // the spinor values already carry e^{-y^2/2} each; scale their
        // combined Gaussian back out since the weight provides it
        acc += w * integrand * std::exp(y * y);
    }
    // each x-space basis function carries sqrt(lam); the pair supplies the
    // lam that cancels dx = dy / lam, and d/dx = lam d/dy is in lbp/ubp
    return acc;
}

}  // namespace

TEST_CASE("tied middle matrices match direct quadrature", "[basis]") {
    double M = 1.1, lam = 1.3, tau = 0.7;
    int N = 4;
    TiedMiddle t = tied_middle_h0(N, M, lam, tau);

    // overlap: 1 + tau^2 n (even), 1 + tau^2 (n + 1/2) (odd)
    for (int n = 0; n < N; ++n) {
        REQUIRE(t.overlap(N + n) == Catch::Approx(1.0 + tau * tau * n).epsilon(1e-14));
        REQUIRE(t.overlap(N - 1 - n) ==
                Catch::Approx(1.0 + tau * tau * (n + 0.5)).epsilon(1e-14));
    }

    for (int n = 0; n < N; ++n) {
        TiedChannel en{n, false, tau}, on{n, true, tau};
        REQUIRE(t.H0(N + n, N + n) ==
                Catch::Approx(tied_h_element(en, en, M, lam)).margin(1e-8));
        REQUIRE(t.H0(N - 1 - n, N - 1 - n) ==
                Catch::Approx(tied_h_element(on, on, M, lam)).margin(1e-8));
        if (n + 1 < N) {
            TiedChannel en1{n + 1, false, tau}, on1{n + 1, true, tau};
            REQUIRE(t.H0(N + n, N + n + 1) ==
                    Catch::Approx(tied_h_element(en, en1, M, lam)).margin(1e-8));
            REQUIRE(t.H0(N - 1 - n, N - 2 - n) ==
                    Catch::Approx(tied_h_element(on, on1, M, lam)).margin(1e-8));
        }
        // cross-channel kinetic elements vanish by parity
        REQUIRE(std::abs(tied_h_element(en, on, M, lam)) < 1e-8);
    }
    REQUIRE((t.H0 - t.H0.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("tied middle at zero lower weight is the rest mass", "[basis]") {
    TiedMiddle t = tied_middle_h0(3, 1.4, 1.0, 0.0);
    REQUIRE((t.H0 - 1.4 * Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE((t.overlap - Eigen::VectorXd::Ones(6)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("tied spinor components", "[basis]") {
    double y = 0.6, tau = 0.9;
    auto h = hermite_functions(y, 7);
    Spinor e2 = tied_spinor_even(2, tau, y);
    REQUIRE(e2.up == Catch::Approx(h[4]).epsilon(1e-14));
    REQUIRE(e2.dn == Catch::Approx(tau * std::sqrt(2.0) * h[3]).epsilon(1e-14));
    Spinor e0 = tied_spinor_even(0, tau, y);
    REQUIRE(e0.dn == 0.0);
    Spinor o2 = tied_spinor_odd(2, tau, y);
    REQUIRE(o2.up == Catch::Approx(h[5]).epsilon(1e-14));
    REQUIRE(o2.dn == Catch::Approx(tau * std::sqrt(2.5) * h[4]).epsilon(1e-14));
}
