#pragma once
// Finite-matrix resolvents for the generalized symmetric problem
// H g = eps Omega g with diagonal positive overlap: spectral form,
// an eigenvalues-only determinant-ratio form, and the recipe recovering
// squared eigenvector components from eigenvalue sets alone.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace dirac1d {

struct PoleError : std::runtime_error {
    double nearest_eigenvalue;
    explicit PoleError(double eps)
        : std::runtime_error("resolvent evaluated at an eigenvalue: " + std::to_string(eps)),
          nearest_eigenvalue(eps) {}
};

// Simultaneous diagonalization data: columns of gamma satisfy
// H gamma_i = eps_i Omega gamma_i with gamma^T Omega gamma = identity.
struct GreenEigen {
    Eigen::VectorXd eps;    // ascending
    Eigen::MatrixXd gamma;  // overlap-orthonormal columns
};

inline GreenEigen diagonalize(const Eigen::MatrixXd& H, const Eigen::VectorXd& omega) {
    int n = static_cast<int>(H.rows());
    if (H.cols() != n || omega.size() != n)
        throw std::invalid_argument("diagonalize: dimension mismatch");
    for (int i = 0; i < n; ++i)
        if (!(omega(i) > 0.0))
            throw std::domain_error("diagonalize: overlap entries must be positive");
    // reduce to a standard symmetric problem with the diagonal square root
    Eigen::VectorXd rs = omega.array().sqrt().inverse();
    Eigen::MatrixXd Hs = rs.asDiagonal() * H * rs.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigensolver failed");
    GreenEigen out;
    out.eps = es.eigenvalues();
    out.gamma = rs.asDiagonal() * es.eigenvectors();
    return out;
}

inline GreenEigen diagonalize(const Eigen::MatrixXd& H) {
    return diagonalize(H, Eigen::VectorXd::Ones(H.rows()));
}

inline double spectral_scale(const GreenEigen& eig) {
    double s = 0.0;
    for (int i = 0; i < eig.eps.size(); ++i) s = std::max(s, std::abs(eig.eps(i)));
    return std::max(s, 1e-300);
}

// G_nm(z) = sum_i gamma_ni gamma_mi / (eps_i - z)
inline double green_element(const GreenEigen& eig, int n, int m, double z) {
    int dim = static_cast<int>(eig.eps.size());
    if (n < 0 || m < 0 || n >= dim || m >= dim)
        throw std::out_of_range("green_element: index");
    double scale = spectral_scale(eig);
    double best = eig.eps(0);
    for (int i = 0; i < dim; ++i)
        if (std::abs(eig.eps(i) - z) < std::abs(best - z)) best = eig.eps(i);
    if (std::abs(best - z) <= 1e-12 * scale) throw PoleError(best);
    double g = 0.0;
    for (int i = 0; i < dim; ++i) g += eig.gamma(n, i) * eig.gamma(m, i) / (eig.eps(i) - z);
    return g;
}

namespace detail {

inline Eigen::MatrixXd drop_row_col(const Eigen::MatrixXd& A, int row, int col) {
    int n = static_cast<int>(A.rows());
    Eigen::MatrixXd B(n - 1, n - 1);
    for (int i = 0, bi = 0; i < n; ++i) {
        if (i == row) continue;
        for (int j = 0, bj = 0; j < n; ++j) {
            if (j == col) continue;
            B(bi, bj) = A(i, j);
            ++bj;
        }
        ++bi;
    }
    return B;
}

inline Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& H,
                                               const Eigen::VectorXd& omega) {
    Eigen::VectorXd rs = omega.array().sqrt().inverse();
    Eigen::MatrixXd Hs = rs.asDiagonal() * H * rs.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

}  // namespace detail

// Determinant-ratio (eigenvalues-only) form of the same resolvent element.
//
//   G_nm(z) = (-1)^{n+m} det(sub_{nm}(H - z Omega)) / det(H - z Omega)
//
// For n = m both pencils are symmetric, so the value is a ratio of real
// eigenvalue products times the ratio of overlap-eigenvalue products. For
// n != m the deleted-row/column submatrix is nonsymmetric (and its overlap
// block is singular), so the numerator is evaluated as the complex product
// of the eigenvalues of the shifted submatrix itself; the product of a
// real matrix's eigenvalues is its determinant, so the imaginary part is
// pure roundoff and is exposed through imag_residue for monitoring.
inline double green_element_eigenvalues_only(const Eigen::MatrixXd& H,
                                             const Eigen::VectorXd& omega, int n, int m,
                                             double z, double* imag_residue = nullptr) {
    int dim = static_cast<int>(H.rows());
    if (n < 0 || m < 0 || n >= dim || m >= dim)
        throw std::out_of_range("green_element_eigenvalues_only: index");
    if (imag_residue) *imag_residue = 0.0;
    Eigen::VectorXd eps = detail::generalized_eigenvalues(H, omega);
    double scale = std::max(eps.cwiseAbs().maxCoeff(), 1e-300);
    for (int i = 0; i < dim; ++i)
        if (std::abs(eps(i) - z) <= 1e-12 * scale) throw PoleError(eps(i));

    // denominator det(H - z Omega) = prod(omega) * prod(eps_j - z)
    double logden = 0.0;
    int sigden = 1;
    for (int i = 0; i < dim; ++i) {
        logden += std::log(omega(i));
        double t = eps(i) - z;
        logden += std::log(std::abs(t));
        if (t < 0) sigden = -sigden;
    }

    if (dim == 1) return 1.0 / (omega(0) * (eps(0) - z));

    std::complex<double> lognum(0.0, 0.0);
    if (n == m) {
        Eigen::MatrixXd Hs = detail::drop_row_col(H, n, n);
        Eigen::VectorXd os(dim - 1);
        for (int i = 0, k = 0; i < dim; ++i)
            if (i != n) os(k++) = omega(i);
        Eigen::VectorXd se = detail::generalized_eigenvalues(Hs, os);
        for (int i = 0; i < dim - 1; ++i)
            lognum += std::log(std::complex<double>(os(i) * (se(i) - z), 0.0));
    } else {
        Eigen::MatrixXd A = H;
        A.diagonal() -= z * omega;
        Eigen::MatrixXd As = detail::drop_row_col(A, n, m);
        Eigen::EigenSolver<Eigen::MatrixXd> es(As, false);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("green_element_eigenvalues_only: eigensolver failed");
        for (int i = 0; i < dim - 1; ++i) lognum += std::log(es.eigenvalues()(i));
    }

    std::complex<double> val =
        std::exp(lognum - logden) * static_cast<double>(sigden) *
        ((((n + m) % 2) != 0) ? -1.0 : 1.0);
    if (imag_residue) *imag_residue = std::abs(val.imag());
    return val.real();
}

inline double green_element_eigenvalues_only(const Eigen::MatrixXd& H, int n, int m, double z,
                                             double* imag_residue = nullptr) {
    return green_element_eigenvalues_only(H, Eigen::VectorXd::Ones(H.rows()), n, m, z,
                                          imag_residue);
}

// Squared component of the k-th normalized eigenvector at row n, from
// eigenvalue sets alone:
//   gamma_nk^2 = prod_i (sub_nn eps_i - eps_k) / prod_{j != k} (eps_j - eps_k)
// Requires a simple spectrum: consecutive gaps must exceed 1e-10 of the
// spectral range, else the division is ill-conditioned.
inline double eigenvector_squares_from_eigenvalues(const Eigen::MatrixXd& H, int k, int n) {
    int dim = static_cast<int>(H.rows());
    if (n < 0 || k < 0 || n >= dim || k >= dim)
        throw std::out_of_range("eigenvector_squares_from_eigenvalues: index");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    Eigen::VectorXd eps = es.eigenvalues();
    if (dim == 1) return 1.0;
    double range = std::max(eps(dim - 1) - eps(0), 1e-300);
    for (int i = 1; i < dim; ++i)
        if (eps(i) - eps(i - 1) <= 1e-10 * range)
            throw std::domain_error(
                "eigenvector_squares_from_eigenvalues: spectrum not simple");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ess(detail::drop_row_col(H, n, n),
                                                       Eigen::EigenvaluesOnly);
    Eigen::VectorXd se = ess.eigenvalues();
    double val = 1.0;
    for (int i = 0; i < dim - 1; ++i) val *= se(i) - eps(k);
    for (int j = 0; j < dim; ++j)
        if (j != k) val /= eps(j) - eps(k);
    return val;
}

}  // namespace dirac1d
