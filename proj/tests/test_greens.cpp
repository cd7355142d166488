#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "dirac1d/greens.hpp"

using namespace dirac1d;

namespace {

struct RandomSystem {
    Eigen::MatrixXd H;
    Eigen::VectorXd omega;
    double z;  // off-spectrum probe point
};

RandomSystem make_system(std::mt19937& rng, int dim) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd A(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A(i, j) = u(rng);
    RandomSystem s;
    s.H = 0.5 * (A + A.transpose());
    s.omega = Eigen::VectorXd(dim);
    for (int i = 0; i < dim; ++i) s.omega(i) = 1.0 + 0.5 * std::abs(u(rng));
    Eigen::VectorXd eps = diagonalize(s.H, s.omega).eps;
    // probe midway inside the widest gap so every route is well conditioned
    int gap = 0;
    for (int i = 1; i + 1 < dim; ++i)
        if (eps(i + 1) - eps(i) > eps(gap + 1) - eps(gap)) gap = i;
    s.z = 0.5 * (eps(gap) + eps(gap + 1));
    return s;
}

}  // namespace

TEST_CASE("resolvent routes agree on random symmetric systems", "[greens]") {
    std::mt19937 rng(24601);
    std::uniform_int_distribution<int> dims(3, 10);
    for (int trial = 0; trial < 50; ++trial) {
        int dim = dims(rng);
        RandomSystem s = make_system(rng, dim);
        GreenEigen eig = diagonalize(s.H, s.omega);

        Eigen::MatrixXd shifted = s.H;
        shifted.diagonal() -= s.z * s.omega;
        Eigen::MatrixXd dense = shifted.fullPivLu().inverse();

        for (int n = 0; n < dim; ++n)
            for (int m = 0; m <= n; ++m) {
                double spectral = green_element(eig, n, m, s.z);
                double ref = dense(n, m);
                double tol = 1e-9 * std::max(1.0, std::abs(ref));
                REQUIRE(std::abs(spectral - ref) < tol);
                double resid = 0.0;
                double detratio =
                    green_element_eigenvalues_only(s.H, s.omega, n, m, s.z, &resid);
                REQUIRE(std::abs(detratio - ref) < tol);
                if (n != m) REQUIRE(resid < 1e-8 * std::max(1.0, std::abs(ref)));
            }
    }
}

TEST_CASE("eigenvector squares recovered from eigenvalue sets", "[greens]") {
    std::mt19937 rng(7171);
    std::uniform_int_distribution<int> dims(3, 10);
    for (int trial = 0; trial < 50; ++trial) {
        int dim = dims(rng);
        RandomSystem s = make_system(rng, dim);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.H);
        for (int k = 0; k < dim; ++k)
            for (int n = 0; n < dim; ++n) {
                double direct = es.eigenvectors()(n, k);
                REQUIRE(eigenvector_squares_from_eigenvalues(s.H, k, n) ==
                        Catch::Approx(direct * direct).margin(1e-10));
            }
    }
}

TEST_CASE("squared components sum to the inverse overlap", "[greens]") {
    std::mt19937 rng(5150);
    RandomSystem s = make_system(rng, 6);
    GreenEigen eig = diagonalize(s.H, s.omega);
    for (int n = 0; n < 6; ++n) {
        double acc = 0.0;
        for (int k = 0; k < 6; ++k) acc += eig.gamma(n, k) * eig.gamma(n, k);
        REQUIRE(acc == Catch::Approx(1.0 / s.omega(n)).epsilon(1e-12));
    }
}

TEST_CASE("two by two resolvent closed form", "[greens]") {
    Eigen::MatrixXd H(2, 2);
    H << 1.3, 0.4, 0.4, -0.7;
    double z = 0.21;
    double det = (1.3 - z) * (-0.7 - z) - 0.16;
    GreenEigen eig = diagonalize(H);
    REQUIRE(green_element(eig, 0, 0, z) == Catch::Approx((-0.7 - z) / det).epsilon(1e-12));
    REQUIRE(green_element(eig, 0, 1, z) == Catch::Approx(-0.4 / det).epsilon(1e-12));
    REQUIRE(green_element_eigenvalues_only(H, 0, 1, z) ==
            Catch::Approx(-0.4 / det).epsilon(1e-12));
}

TEST_CASE("one dimensional pencil", "[greens]") {
    Eigen::MatrixXd H(1, 1);
    H << 2.0;
    Eigen::VectorXd om(1);
    om << 4.0;
    double z = 0.1;  // generalized eigenvalue is 2/4 = 0.5
    double ref = 1.0 / (4.0 * (0.5 - z));
    REQUIRE(green_element_eigenvalues_only(H, om, 0, 0, z) == Catch::Approx(ref).epsilon(1e-13));
    GreenEigen eig = diagonalize(H, om);
    REQUIRE(green_element(eig, 0, 0, z) == Catch::Approx(ref).epsilon(1e-13));
}

TEST_CASE("probing at an eigenvalue raises the pole error", "[greens]") {
    Eigen::MatrixXd H(3, 3);
    H << 2.0, 0.3, 0.0, 0.3, 1.0, 0.2, 0.0, 0.2, -1.0;
    GreenEigen eig = diagonalize(H);
    REQUIRE_THROWS_AS(green_element(eig, 0, 0, eig.eps(1)), PoleError);
    REQUIRE_THROWS_AS(green_element_eigenvalues_only(H, 1, 2, eig.eps(0)), PoleError);
}

TEST_CASE("degenerate spectra are rejected for the squares recipe", "[greens]") {
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(3, 3);
    REQUIRE_THROWS_AS(eigenvector_squares_from_eigenvalues(H, 0, 0), std::domain_error);
}

TEST_CASE("diagonalize validates its inputs", "[greens]") {
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd bad(3);
    bad << 1.0, -1.0, 1.0;
    REQUIRE_THROWS_AS(diagonalize(H, bad), std::domain_error);
    REQUIRE_THROWS_AS(diagonalize(H, Eigen::VectorXd::Ones(2)), std::invalid_argument);
}
