// two_level.hpp — the rf-driven nuclear-spin model: H(t) rotates from
// nu_0 sigma_x to nu_t' sigma_y under a linear frequency ramp. Provides the
// analytic P+/P-/Pc decomposition, the average-work breakdown, and the
// duration-sweep / distribution-profile experiments.
//
// Basis conventions, fixed throughout (relative phases are physical):
//   |+->  = (|1> +- |0>)/sqrt2        eigenvectors of sigma_x
//   |+-i> = (|1> +- i|0>)/sqrt2       eigenvectors of sigma_y
//   sigma_y = -i|1><0| + i|0><1|
// with computational coordinate order (<0|psi>, <1|psi>).

#pragma once

#include "qws/numerics.hpp"
#include "qws/protocol.hpp"
#include "qws/states.hpp"
#include "qws/work_distribution.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace qws {

inline ComplexMatrix pauli_x() {
    ComplexMatrix s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

inline ComplexMatrix pauli_y() {
    ComplexMatrix s(2, 2);
    s << 0.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 0.0;
    return s;
}

inline ComplexVector spin_plus() {
    ComplexVector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return v;
}
inline ComplexVector spin_minus() {
    ComplexVector v(2);
    v << -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return v;
}
inline ComplexVector spin_plus_i() {
    ComplexVector v(2);
    v << Complex(0.0, 1.0) / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return v;
}
inline ComplexVector spin_minus_i() {
    ComplexVector v(2);
    v << Complex(0.0, -1.0) / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return v;
}

struct SpinParams {
    double nu0 = 1.0;
    double nu_t = 1.8;     // final rf frequency nu_{t'}
    double t_prime = 1.0;
    double beta = 0.01;
    double sigma = 1.0;

    void validate() const {
        if (!(nu0 > 0.0) || !(nu_t > 0.0) || !(t_prime > 0.0) || !(sigma > 0.0) ||
            !(beta >= 0.0)) {
            throw std::invalid_argument(
                "SpinParams: need nu0, nu_t, t_prime, sigma > 0 and beta >= 0");
        }
    }
};

// H(t) = nu(t) (sigma_x cos(pi t / 2t') + sigma_y sin(pi t / 2t')),
// nu(t) = nu0 (1 - t/t') + nu_t' t/t'.
inline ComplexMatrix spin_hamiltonian(double t, const SpinParams& p) {
    p.validate();
    if (!(t >= 0.0 && t <= p.t_prime)) {
        std::ostringstream msg;
        msg << "spin_hamiltonian: time " << t << " outside [0, " << p.t_prime << "]";
        throw std::invalid_argument(msg.str());
    }
    const double nu = p.nu0 * (1.0 - t / p.t_prime) + p.nu_t * t / p.t_prime;
    const double angle = std::numbers::pi * t / (2.0 * p.t_prime);
    return nu * (std::cos(angle) * pauli_x() + std::sin(angle) * pauli_y());
}

inline DrivingProtocol spin_protocol(const SpinParams& p) {
    p.validate();
    return DrivingProtocol{[p](double t) { return spin_hamiltonian(t, p); }, p.t_prime, 2};
}

// Paper-convention eigensystems of H(0) and H(t').
inline EigenSystem spin_eig0(const SpinParams& p) {
    EigenSystem eig;
    eig.values = RealVector(2);
    eig.values << -p.nu0, p.nu0;
    eig.vectors = ComplexMatrix(2, 2);
    eig.vectors.col(0) = spin_minus();
    eig.vectors.col(1) = spin_plus();
    return eig;
}

inline EigenSystem spin_eigT(const SpinParams& p) {
    EigenSystem eig;
    eig.values = RealVector(2);
    eig.values << -p.nu_t, p.nu_t;
    eig.vectors = ComplexMatrix(2, 2);
    eig.vectors.col(0) = spin_minus_i();
    eig.vectors.col(1) = spin_plus_i();
    return eig;
}

enum class StateKind { Thermal, CoherentGibbs };

inline StateKind parse_state_kind(const std::string& name) {
    if (name == "thermal") return StateKind::Thermal;
    if (name == "coherent-gibbs") return StateKind::CoherentGibbs;
    throw std::invalid_argument("state must be 'thermal' or 'coherent-gibbs', got '" + name + "'");
}

inline const char* state_kind_name(StateKind kind) {
    return kind == StateKind::Thermal ? "thermal" : "coherent-gibbs";
}

// Full process snapshot for the spin model. The propagator comes from
// auto_propagate at the given tolerance; the initial state is built in the
// paper's |+->. basis so the coherent Gibbs relative phase matches Sec. IV.
inline ProcessSnapshot make_spin_snapshot(const SpinParams& p, StateKind state,
                                          double propagation_tol = 1e-9) {
    p.validate();
    const EigenSystem eig0 = spin_eig0(p);
    const EigenSystem eigT = spin_eigT(p);
    const ComplexMatrix u_op = auto_propagate(spin_protocol(p), propagation_tol).U;
    ProcessSnapshot snap;
    snap.eig0 = eig0;
    snap.eigT = eigT;
    snap.amplitudes = transition_amplitudes(u_op, eig0, eigT);
    snap.rho0 = (state == StateKind::Thermal) ? gibbs_state(spin_hamiltonian(0.0, p), p.beta).rho
                                              : coherent_gibbs_state(eig0, p.beta);
    snap.sigma = p.sigma;
    return snap;
}

// U_{+-i, +-} = <+-i| U_s(t') |+->
struct TransitionElements {
    Complex u_ip, u_im;  // <+i|U|+>, <+i|U|->
    Complex u_mp, u_mm;  // <-i|U|+>, <-i|U|->
};

inline TransitionElements paper_transition_elements(const ComplexMatrix& u_op) {
    if (u_op.rows() != 2 || u_op.cols() != 2) {
        throw std::invalid_argument("paper_transition_elements: propagator must be 2x2");
    }
    TransitionElements e;
    e.u_ip = (spin_plus_i().adjoint() * u_op * spin_plus()).value();
    e.u_im = (spin_plus_i().adjoint() * u_op * spin_minus()).value();
    e.u_mp = (spin_minus_i().adjoint() * u_op * spin_plus()).value();
    e.u_mm = (spin_minus_i().adjoint() * u_op * spin_minus()).value();
    return e;
}

// The Sec. IV closed forms.
//   P_+-(W) = e^{-+ beta nu0}/Z0 [ |U_{i,+-}|^2 N(W | nu_t -+ nu0, sigma)
//                                + |U_{-i,+-}|^2 N(W | -nu_t -+ nu0, sigma) ]
//   P_c(W)  = 2 e^{-nu0^2/sigma^2} Re(U_{i,+} U*_{i,-}) / Z0
//             [ N(W | nu_t, sigma) - N(W | -nu_t, sigma) ]
struct AnalyticComponents {
    WorkDistribution p_plus;
    WorkDistribution p_minus;
    WorkDistribution p_coherent;

    WorkDistribution pooled() const {
        WorkDistribution all;
        all.sigma = p_plus.sigma;
        for (const auto* part : {&p_plus, &p_minus, &p_coherent}) {
            all.components.insert(all.components.end(), part->components.begin(),
                                  part->components.end());
        }
        return all;
    }
};

inline AnalyticComponents analytic_components(const SpinParams& p, const ComplexMatrix& u_op) {
    p.validate();
    const TransitionElements e = paper_transition_elements(u_op);
    const double z0 = 2.0 * std::cosh(p.beta * p.nu0);
    const double w_plus = std::exp(-p.beta * p.nu0) / z0;
    const double w_minus = std::exp(p.beta * p.nu0) / z0;

    AnalyticComponents out;
    out.p_plus.sigma = out.p_minus.sigma = out.p_coherent.sigma = p.sigma;
    out.p_plus.components = {
        {Complex(w_plus * std::norm(e.u_ip), 0.0), p.nu_t - p.nu0, ComponentKind::Incoherent},
        {Complex(w_plus * std::norm(e.u_mp), 0.0), -p.nu_t - p.nu0, ComponentKind::Incoherent}};
    out.p_minus.components = {
        {Complex(w_minus * std::norm(e.u_im), 0.0), p.nu_t + p.nu0, ComponentKind::Incoherent},
        {Complex(w_minus * std::norm(e.u_mm), 0.0), -p.nu_t + p.nu0, ComponentKind::Incoherent}};

    const double coh = 2.0 * std::exp(-p.nu0 * p.nu0 / (p.sigma * p.sigma)) *
                       (e.u_ip * std::conj(e.u_im)).real() / z0;
    out.p_coherent.components = {{Complex(coh, 0.0), p.nu_t, ComponentKind::Coherent},
                                 {Complex(-coh, 0.0), -p.nu_t, ComponentKind::Coherent}};
    return out;
}

struct WorkBreakdown {
    double w_plus = 0.0;
    double w_minus = 0.0;
    double w_coherent = 0.0;
    double total = 0.0;
};

//   <W_+-> = e^{-+ beta nu0}/Z0 [ |U_{i,+-}|^2 (nu_t -+ nu0) - |U_{-i,+-}|^2 (nu_t +- nu0) ]
//   <W_c>  = 4/Z0 e^{-nu0^2/sigma^2} Re(U_{i,+} U*_{i,-}) nu_t
inline WorkBreakdown average_works(const SpinParams& p, const ComplexMatrix& u_op) {
    p.validate();
    const TransitionElements e = paper_transition_elements(u_op);
    const double z0 = 2.0 * std::cosh(p.beta * p.nu0);
    WorkBreakdown b;
    b.w_plus = std::exp(-p.beta * p.nu0) / z0 *
               (std::norm(e.u_ip) * (p.nu_t - p.nu0) - std::norm(e.u_mp) * (p.nu_t + p.nu0));
    b.w_minus = std::exp(p.beta * p.nu0) / z0 *
                (std::norm(e.u_im) * (p.nu_t + p.nu0) - std::norm(e.u_mm) * (p.nu_t - p.nu0));
    b.w_coherent = 4.0 / z0 * std::exp(-p.nu0 * p.nu0 / (p.sigma * p.sigma)) *
                   (e.u_ip * std::conj(e.u_im)).real() * p.nu_t;
    b.total = b.w_plus + b.w_minus + b.w_coherent;
    return b;
}

// Free-energy difference from the two spectra; beta -> 0 limit is the
// infinite-temperature mean-energy difference.
inline double free_energy_difference(const EigenSystem& eig0, const EigenSystem& eigT,
                                     double beta) {
    if (beta > 0.0) {
        return -(detail::log_partition(eigT.values, beta) -
                 detail::log_partition(eig0.values, beta)) / beta;
    }
    return eigT.values.mean() - eig0.values.mean();
}

struct SweepRow {
    double t_prime = 0.0;
    double w_incoherent = 0.0;
    double half_beta_var = 0.0;
    double w_coherent = 0.0;
    double fdt_residual = 0.0;
    double jarzynski_residual = 0.0;
    bool ok = true;
    std::string error;
};

// One row per duration. Work columns and the FDT residual use the requested
// state; the Jarzynski residual always uses the thermal variant. A failed
// propagation marks the row and the sweep continues.
inline std::vector<SweepRow> sweep_duration(const SpinParams& base,
                                            std::span<const double> t_primes,
                                            StateKind state = StateKind::CoherentGibbs,
                                            double propagation_tol = 1e-9) {
    base.validate();
    std::vector<SweepRow> rows;
    rows.reserve(t_primes.size());
    for (double tp : t_primes) {
        SweepRow row;
        row.t_prime = tp;
        try {
            SpinParams p = base;
            p.t_prime = tp;
            p.validate();
            const ComplexMatrix u_op = auto_propagate(spin_protocol(p), propagation_tol).U;
            const WorkBreakdown b = average_works(p, u_op);
            row.w_incoherent = b.w_plus + b.w_minus;
            row.w_coherent = b.w_coherent;

            ProcessSnapshot snap = make_spin_snapshot(p, state, propagation_tol);
            snap.amplitudes = transition_amplitudes(u_op, snap.eig0, snap.eigT);
            const WorkMoments m = analytic_moments(snap);
            row.half_beta_var = 0.5 * p.beta * m.internal_energy_variance;
            const double delta_f = free_energy_difference(snap.eig0, snap.eigT, p.beta);
            row.fdt_residual = fdt_residual(snap, p.beta, delta_f);

            ProcessSnapshot thermal_snap = snap;
            thermal_snap.rho0 = gibbs_state(spin_hamiltonian(0.0, p), p.beta).rho;
            row.jarzynski_residual = jarzynski_residual(thermal_snap, p.beta);
        } catch (const std::exception& ex) {
            row.ok = false;
            row.error = ex.what();
            row.w_incoherent = row.half_beta_var = row.w_coherent = row.fdt_residual =
                row.jarzynski_residual = std::nan("");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct ProfileRow {
    double w = 0.0;
    double total = 0.0;
    double incoherent = 0.0;
    double coherent = 0.0;
};

// Sampled work density split into incoherent and coherent parts
// (total = incoherent + coherent pointwise by construction).
inline std::vector<ProfileRow> fig2_profile(const SpinParams& p, std::span<const double> w_grid,
                                            StateKind state = StateKind::CoherentGibbs,
                                            double propagation_tol = 1e-9) {
    const ProcessSnapshot snap = make_spin_snapshot(p, state, propagation_tol);
    const WorkDistribution dist = build_work_distribution(snap);
    WorkDistribution incoherent{{}, dist.sigma}, coherent{{}, dist.sigma};
    for (const auto& c : dist.components) {
        (c.kind == ComponentKind::Incoherent ? incoherent : coherent).components.push_back(c);
    }
    std::vector<ProfileRow> rows;
    rows.reserve(w_grid.size());
    for (double w : w_grid) {
        ProfileRow row;
        row.w = w;
        row.incoherent = incoherent.density(w);
        row.coherent = coherent.components.empty() ? 0.0 : coherent.density(w);
        row.total = row.incoherent + row.coherent;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qws
