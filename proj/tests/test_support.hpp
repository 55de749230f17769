// Shared helpers for the test suites: random Hermitian matrices, quadrature
// moments of a work distribution, and finite-difference derivatives of the
// characteristic function.

#pragma once

#include "qws/numerics.hpp"
#include "qws/quadrature.hpp"
#include "qws/work_distribution.hpp"

#include <random>

namespace qws::test {

inline ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937& rng, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    ComplexMatrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            a(i, j) = Complex(gauss(rng), gauss(rng));
        }
    }
    return 0.5 * (a + a.adjoint()).eval();
}

inline ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937& rng) {
    return unitary_from_eigensystem(hermitian_eigendecompose(random_hermitian(dim, rng)), 1.0);
}

// Quadrature over the stated window [mu_min - 8 sigma, mu_max + 8 sigma].
inline double quadrature_moment(const WorkDistribution& dist, int order, double tol = 1e-10) {
    const double lo = dist.min_mean() - 8.0 * dist.sigma;
    const double hi = dist.max_mean() + 8.0 * dist.sigma;
    return adaptive_simpson<double>(
        [&](double w) { return std::pow(w, order) * dist.density(w); }, lo, hi, tol);
}

// Fourier transform of the density by quadrature, the independent oracle for
// the characteristic function.
inline Complex quadrature_characteristic(const WorkDistribution& dist, double kappa,
                                         double tol = 1e-10) {
    const double lo = dist.min_mean() - 8.0 * dist.sigma;
    const double hi = dist.max_mean() + 8.0 * dist.sigma;
    return adaptive_simpson<Complex>(
        [&](double w) {
            return dist.density(w) * std::exp(Complex(0.0, kappa * w));
        },
        lo, hi, tol);
}

// Central finite differences of chi, Richardson-extrapolated once, with the
// spec's step 1e-4 / sigma.
inline double fd_first_moment(const HeisenbergPieces& pieces, double sigma) {
    const double h = 1e-4 / sigma;
    const auto d1 = [&](double step) {
        const Complex hi = characteristic_function(pieces, Complex(step, 0.0));
        const Complex lo = characteristic_function(pieces, Complex(-step, 0.0));
        return ((hi - lo) / (2.0 * step)).imag();  // -i chi' real part
    };
    const double coarse = d1(2.0 * h);
    const double fine = d1(h);
    return (4.0 * fine - coarse) / 3.0;
}

inline double fd_second_moment(const HeisenbergPieces& pieces, double sigma) {
    const double h = 1e-4 / sigma;
    const Complex chi0 = characteristic_function(pieces, Complex(0.0, 0.0));
    const auto d2 = [&](double step) {
        const Complex hi = characteristic_function(pieces, Complex(step, 0.0));
        const Complex lo = characteristic_function(pieces, Complex(-step, 0.0));
        return -((hi - 2.0 * chi0 + lo) / (step * step)).real();  // -chi''
    };
    const double coarse = d2(2.0 * h);
    const double fine = d2(h);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace qws::test
