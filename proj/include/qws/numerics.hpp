// numerics.hpp — dense complex Hermitian eigendecomposition, Hamiltonian
// exponentials, and matrix distance utilities shared by every other module.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace qws {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;

// Largest entrywise deviation of H from its adjoint.
inline double hermiticity_defect(const ComplexMatrix& H) {
    return (H - H.adjoint()).cwiseAbs().maxCoeff();
}

inline void require_square(const ComplexMatrix& H, const char* who) {
    if (H.rows() != H.cols() || H.rows() < 1) {
        std::ostringstream msg;
        msg << who << ": matrix must be square and nonempty, got " << H.rows() << "x" << H.cols();
        throw std::invalid_argument(msg.str());
    }
}

inline void require_hermitian(const ComplexMatrix& H, const char* who,
                              double tol = kHermitianTol) {
    require_square(H, who);
    const double defect = hermiticity_defect(H);
    if (!(defect <= tol)) {
        std::ostringstream msg;
        msg << who << ": matrix is not Hermitian, max |H - H^dag| entry = " << defect;
        throw std::invalid_argument(msg.str());
    }
}

// Eigenvalues ascending, eigenvector columns orthonormal.
struct EigenSystem {
    RealVector values;
    ComplexMatrix vectors;

    Eigen::Index dim() const { return values.size(); }
};

inline EigenSystem hermitian_eigendecompose(const ComplexMatrix& H) {
    require_hermitian(H, "hermitian_eigendecompose");
    // Symmetrize so roundoff-level asymmetry cannot leak into the solver.
    const ComplexMatrix Hs = 0.5 * (H + H.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(Hs);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eigendecompose: eigensolver failed to converge");
    }
    return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

// U = exp(-i H t) assembled from an existing eigendecomposition of H.
inline ComplexMatrix unitary_from_eigensystem(const EigenSystem& eig, double t) {
    const Eigen::Index d = eig.dim();
    ComplexVector phases(d);
    for (Eigen::Index n = 0; n < d; ++n) {
        phases(n) = std::polar(1.0, -eig.values(n) * t);
    }
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

namespace detail {

// Closed form for 2x2 Hermitian H = m*I + K with K traceless, K^2 = w^2 I:
// exp(-iHt) = e^{-imt} (cos(wt) I - i sin(wt)/w K).
inline ComplexMatrix unitary_2x2(const ComplexMatrix& H, double t) {
    const double a = H(0, 0).real();
    const double b = H(1, 1).real();
    const Complex c = H(0, 1);
    const double m = 0.5 * (a + b);
    const double delta = 0.5 * (a - b);
    const double w = std::sqrt(delta * delta + std::norm(c));
    const double wt = w * t;
    // sin(wt)/w with a stable small-w limit
    const double sinc_t = (wt * wt > 1e-30) ? std::sin(wt) / w : t * (1.0 - wt * wt / 6.0);
    ComplexMatrix U(2, 2);
    const Complex phase = std::polar(1.0, -m * t);
    const double cwt = std::cos(wt);
    const Complex mi(0.0, -1.0);
    U(0, 0) = phase * (cwt + mi * sinc_t * delta);
    U(0, 1) = phase * (mi * sinc_t * c);
    U(1, 0) = phase * (mi * sinc_t * std::conj(c));
    U(1, 1) = phase * (cwt - mi * sinc_t * delta);
    return U;
}

}  // namespace detail

inline ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix& H, double t) {
    require_hermitian(H, "unitary_from_hamiltonian");
    if (!std::isfinite(t)) {
        throw std::invalid_argument("unitary_from_hamiltonian: duration must be finite");
    }
    if (H.rows() == 2) {
        return detail::unitary_2x2(H, t);
    }
    return unitary_from_eigensystem(hermitian_eigendecompose(H), t);
}

inline double frobenius_distance(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) {
        std::ostringstream msg;
        msg << "frobenius_distance: dimension mismatch " << A.rows() << "x" << A.cols()
            << " vs " << B.rows() << "x" << B.cols();
        throw std::invalid_argument(msg.str());
    }
    return (A - B).norm();
}

}  // namespace qws
