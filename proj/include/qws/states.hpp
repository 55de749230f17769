// states.hpp — Gibbs thermal states, coherent Gibbs states, and the
// measurement-dephased state. States are stored in the computational basis
// and constructed through an explicit eigenbasis.

#pragma once

#include "qws/numerics.hpp"

#include <string>

namespace qws {

struct DensityMatrix {
    ComplexMatrix matrix;
    std::string basis_tag;  // optional label of the eigenbasis it was built in

    Eigen::Index dim() const { return matrix.rows(); }
};

// Hermitian to 1e-10, unit trace to 1e-10, eigenvalues >= -1e-10.
inline void validate_density(const DensityMatrix& rho, const char* who) {
    require_hermitian(rho.matrix, who);
    const double trace_defect = std::abs(rho.matrix.trace() - Complex(1.0, 0.0));
    if (!(trace_defect <= 1e-10)) {
        std::ostringstream msg;
        msg << who << ": density matrix trace deviates from 1 by " << trace_defect;
        throw std::invalid_argument(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho.matrix + rho.matrix.adjoint()));
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        std::ostringstream msg;
        msg << who << ": density matrix has negative eigenvalue " << solver.eigenvalues().minCoeff();
        throw std::invalid_argument(msg.str());
    }
}

struct GibbsState {
    DensityMatrix rho;
    double log_partition;

    // May overflow to +inf for extreme beta*E; log_partition is always finite.
    double partition() const { return std::exp(log_partition); }
};

// exp(-beta H) / Z, computed with the spectrum shifted by its minimum so that
// large beta stays finite.
inline GibbsState gibbs_state(const ComplexMatrix& H, double beta) {
    require_hermitian(H, "gibbs_state");
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("gibbs_state: beta must be finite and >= 0");
    }
    const EigenSystem eig = hermitian_eigendecompose(H);
    const double e_min = eig.values.minCoeff();
    RealVector weights = (-beta * (eig.values.array() - e_min)).exp();
    const double z_shifted = weights.sum();
    weights /= z_shifted;
    ComplexMatrix rho = eig.vectors * weights.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    return GibbsState{DensityMatrix{std::move(rho), "gibbs"},
                      std::log(z_shifted) - beta * e_min};
}

// Pure state |psi> = sum_n sqrt(e^{-beta E_n}/Z) |E_n>, all amplitudes taken
// real positive relative to the supplied eigenvectors (the relative phases of
// the superposition are physical, so the caller's basis convention matters).
inline DensityMatrix coherent_gibbs_state(const EigenSystem& eig, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("coherent_gibbs_state: beta must be finite and >= 0");
    }
    const double e_min = eig.values.minCoeff();
    RealVector amps = (-0.5 * beta * (eig.values.array() - e_min)).exp();
    amps /= amps.norm();
    const ComplexVector psi = eig.vectors * amps.cast<Complex>();
    return DensityMatrix{psi * psi.adjoint(), "coherent-gibbs"};
}

// Same diagonal as the Gibbs state in the H eigenbasis.
inline DensityMatrix coherent_gibbs_state(const ComplexMatrix& H, double beta) {
    require_hermitian(H, "coherent_gibbs_state");
    return coherent_gibbs_state(hermitian_eigendecompose(H), beta);
}

// In the eig0 basis, damp each off-diagonal (m != n) by
// exp{-(E_m - E_n)^2 / (4 sigma^2)}; the diagonal is untouched.
inline DensityMatrix decohere_for_measurement(const DensityMatrix& rho,
                                              const EigenSystem& eig0, double sigma) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("decohere_for_measurement: sigma must be > 0");
    }
    validate_density(rho, "decohere_for_measurement");
    if (rho.dim() != eig0.dim()) {
        throw std::invalid_argument("decohere_for_measurement: state/eigenbasis dimension mismatch");
    }
    const Eigen::Index d = rho.dim();
    ComplexMatrix in_eig = eig0.vectors.adjoint() * rho.matrix * eig0.vectors;
    for (Eigen::Index m = 0; m < d; ++m) {
        for (Eigen::Index n = 0; n < d; ++n) {
            if (m == n) continue;
            const double gap = eig0.values(m) - eig0.values(n);
            in_eig(m, n) *= std::exp(-gap * gap / (4.0 * sigma * sigma));
        }
    }
    return DensityMatrix{eig0.vectors * in_eig * eig0.vectors.adjoint(), rho.basis_tag};
}

}  // namespace qws
