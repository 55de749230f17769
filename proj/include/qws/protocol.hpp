// protocol.hpp — driving protocols lambda_0 -> lambda_{t'} and the
// time-ordered propagator with step-doubling error control.

#pragma once

#include "qws/numerics.hpp"

#include <functional>
#include <utility>

namespace qws {

// Time-parametrized Hamiltonian on [0, duration].
struct DrivingProtocol {
    std::function<ComplexMatrix(double)> hamiltonian_at;
    double duration = 0.0;
    Eigen::Index dim = 0;

    ComplexMatrix at(double t) const {
        if (!(t >= 0.0 && t <= duration)) {
            std::ostringstream msg;
            msg << "DrivingProtocol: time " << t << " outside [0, " << duration << "]";
            throw std::invalid_argument(msg.str());
        }
        ComplexMatrix H = hamiltonian_at(t);
        if (H.rows() != dim || H.cols() != dim) {
            throw std::invalid_argument("DrivingProtocol: hamiltonian_at returned wrong dimension");
        }
        return H;
    }
};

struct PropagationResult {
    ComplexMatrix U;
    long steps = 0;
    double estimated_error = 0.0;
};

inline constexpr long kPropagationStepCap = 1L << 20;

namespace detail {

// Midpoint piecewise-constant exponential product, later times leftmost.
inline ComplexMatrix propagate_raw(const DrivingProtocol& protocol, long steps) {
    const double dt = protocol.duration / static_cast<double>(steps);
    ComplexMatrix U = ComplexMatrix::Identity(protocol.dim, protocol.dim);
    for (long k = 0; k < steps; ++k) {
        const double t_mid = (static_cast<double>(k) + 0.5) * dt;
        U = unitary_from_hamiltonian(protocol.at(t_mid), dt) * U;
    }
    return U;
}

}  // namespace detail

// estimated_error compares against the doubled-step product (Richardson style).
inline PropagationResult propagate(const DrivingProtocol& protocol, long steps) {
    if (steps < 1) {
        throw std::invalid_argument("propagate: steps must be >= 1");
    }
    if (!(protocol.duration > 0.0)) {
        throw std::invalid_argument("propagate: protocol duration must be > 0");
    }
    ComplexMatrix U = detail::propagate_raw(protocol, steps);
    ComplexMatrix U2 = detail::propagate_raw(protocol, 2 * steps);
    const double err = frobenius_distance(U, U2);
    return PropagationResult{std::move(U), steps, err};
}

// Doubles steps from 64 until the step-doubling estimate meets tol. No
// propagation ever uses more than kPropagationStepCap steps.
inline PropagationResult auto_propagate(const DrivingProtocol& protocol, double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("auto_propagate: tol must be > 0");
    }
    long steps = 64;
    ComplexMatrix U = detail::propagate_raw(protocol, steps);
    double err = 0.0;
    while (2 * steps <= kPropagationStepCap) {
        ComplexMatrix U2 = detail::propagate_raw(protocol, 2 * steps);
        err = frobenius_distance(U, U2);
        if (err <= tol) {
            return PropagationResult{std::move(U), steps, err};
        }
        U = std::move(U2);
        steps *= 2;
    }
    std::ostringstream msg;
    msg << "auto_propagate: step cap " << kPropagationStepCap
        << " reached without convergence, last error estimate " << err << " > tol " << tol;
    throw std::runtime_error(msg.str());
}

// U_{lm} = <E^l_T | U | E^m_0>.
inline ComplexMatrix transition_amplitudes(const ComplexMatrix& U, const EigenSystem& eig0,
                                           const EigenSystem& eigT) {
    require_square(U, "transition_amplitudes");
    if (eig0.dim() != U.rows() || eigT.dim() != U.rows()) {
        throw std::invalid_argument("transition_amplitudes: dimension mismatch");
    }
    const double unitarity = (U.adjoint() * U - ComplexMatrix::Identity(U.rows(), U.cols())).norm();
    if (!(unitarity <= 1e-8)) {
        std::ostringstream msg;
        msg << "transition_amplitudes: input is not unitary, |U^dag U - I| = " << unitarity;
        throw std::invalid_argument(msg.str());
    }
    return eigT.vectors.adjoint() * U * eig0.vectors;
}

}  // namespace qws
