#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "dirac1d/oracle.hpp"

using namespace dirac1d;

TEST_CASE("integrator is exact on the free line", "[oracle]") {
    PotentialSpec free_pot;
    for (double eps : {1.05, 1.6, 2.9}) {
        OracleResult r = dirac_oracle(free_pot, eps, 1.0, 1.0);
        REQUIRE(std::abs(r.T - 1.0) < 1e-10);
        REQUIRE(std::abs(r.R) < 1e-10);
        REQUIRE(r.steps > 0);
    }
}

TEST_CASE("flat barrier reproduces the closed form", "[oracle]") {
    PotentialSpec pot;
    pot.V = square_fn(0.5, 2.0);
    pot.X = 1.0;  // range bound on the barrier edge keeps each sweep smooth
    SECTION("propagating interior") {
        OracleResult r = dirac_oracle(pot, 1.7, 1.0, 2.0);
        cd ref = square_barrier_dirac(1.7, 1.0, 0.5, 2.0);
        REQUIRE(std::abs(r.T - ref) < 1e-8);
    }
    SECTION("tunneling interior") {
        OracleResult r = dirac_oracle(pot, 1.3, 1.0, 2.0);
        cd ref = square_barrier_dirac(1.3, 1.0, 0.5, 2.0);
        REQUIRE(std::abs(r.T - ref) < 1e-8);
    }
}

TEST_CASE("strong barrier keeps the flux balanced", "[oracle]") {
    // interior gap reopens for V0 > eps + M; propagation resumes inside
    PotentialSpec pot;
    pot.V = square_fn(5.0, 2.0);
    pot.X = 1.0;
    OracleResult r = dirac_oracle(pot, 1.2, 1.0, 2.0);
    REQUIRE(r.unitarity_defect < 1e-8);
    cd ref = square_barrier_dirac(1.2, 1.0, 5.0, 2.0);
    REQUIRE(std::abs(r.T - ref) < 1e-7);
}

TEST_CASE("nonrelativistic barrier reproduces its closed form", "[oracle]") {
    PotentialSpec pot;
    pot.V = square_fn(0.4, 2.0);
    pot.X = 1.0;
    for (double k : {0.7, 1.1}) {
        OracleResult r = nonrelativistic_oracle(pot, k, 1.0, 2.0);
        cd ref = square_barrier_schrodinger(k, 1.0, 0.4, 2.0);
        REQUIRE(std::abs(r.T - ref) < 1e-8);
        REQUIRE(r.unitarity_defect < 1e-10);
    }
}

TEST_CASE("heavy mass limit approaches the nonrelativistic result", "[oracle]") {
    double v0 = 2.5, g0 = 1.0, k = 1.2, M = 100.0;
    PotentialSpec rel;
    rel.V = [=](double x) {
        double g = std::exp(-x * x);
        return 0.5 * (v0 * g / (2.0 * M) + g0 * g);
    };
    rel.S = [=](double x) {
        double g = std::exp(-x * x);
        return 0.5 * (v0 * g / (2.0 * M) - g0 * g);
    };
    OracleResult rd = dirac_oracle(rel, std::sqrt(M * M + k * k), M, 2.0);

    PotentialSpec nr;
    nr.V = gaussian_fn(v0);
    OracleResult rs = nonrelativistic_oracle(nr, k, 0.5, 2.0);
    REQUIRE(std::norm(rs.T) == Catch::Approx(0.143627341319).margin(1e-9));
    REQUIRE(std::abs(std::norm(rd.T) - std::norm(rs.T)) < 5e-3);
}

TEST_CASE("smooth barrier conserves flux", "[oracle]") {
    PotentialSpec pot;
    pot.V = gaussian_fn(2.0);
    for (double eps : {1.2, 1.5, 2.5}) {
        OracleResult r = dirac_oracle(pot, eps, 1.0, 2.0);
        REQUIRE(r.unitarity_defect < 1e-8);
    }
    OracleResult r = dirac_oracle(pot, 1.5, 1.0, 2.0);
    REQUIRE(std::norm(r.T) == Catch::Approx(0.022699694227).margin(1e-9));
}

TEST_CASE("transmission ignores where the barrier sits", "[oracle]") {
    PotentialSpec right, left;
    right.V = gaussian_fn(2.0, 1.0, 0.8);
    left.V = gaussian_fn(2.0, 1.0, -0.8);
    OracleResult a = dirac_oracle(right, 1.6, 1.0, 2.0);
    OracleResult b = dirac_oracle(left, 1.6, 1.0, 2.0);
    REQUIRE(std::abs(a.T - b.T) < 1e-9);
    REQUIRE(std::norm(a.R) == Catch::Approx(std::norm(b.R)).margin(1e-9));
}

TEST_CASE("tolerance knob trades steps for accuracy", "[oracle]") {
    PotentialSpec pot;
    pot.V = gaussian_fn(2.0);
    OracleResult coarse = dirac_oracle(pot, 1.6, 1.0, 2.0, 1e-6);
    OracleResult fine = dirac_oracle(pot, 1.6, 1.0, 2.0, 1e-12);
    REQUIRE(std::abs(coarse.T - fine.T) < 1e-5);
    REQUIRE(coarse.steps <= fine.steps);
    REQUIRE(coarse.tol == 1e-6);
}

TEST_CASE("oracles validate their inputs", "[oracle]") {
    PotentialSpec pot;
    REQUIRE_THROWS_AS(dirac_oracle(pot, 0.9, 1.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(dirac_oracle(pot, 1.5, 1.0, -1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(nonrelativistic_oracle(pot, 0.0, 1.0, 1.0), std::domain_error);
}
