// detector.hpp — brute-force validation of the measurement scheme: the
// five-step protocol simulated in a truncated Fock space, the detector's
// Husimi Q function, and the work marginal recovered from it.

#pragma once

#include "qws/numerics.hpp"
#include "qws/protocol.hpp"
#include "qws/states.hpp"
#include "qws/work_distribution.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <string>
#include <vector>

namespace qws {

// Truncated harmonic-oscillator algebra on levels 0..N. [a, a^dag] = I holds
// exactly below the top level; the corner deviation is the truncation artifact.
struct FockSpace {
    int cutoff = 0;
    ComplexMatrix a;
    ComplexMatrix a_dag;
    ComplexMatrix q;  // (a + a^dag) / 2
    ComplexMatrix p;  // (a - a^dag) / (2i)

    Eigen::Index dim() const { return a.rows(); }
};

inline FockSpace build_fock(int cutoff) {
    if (cutoff < 2) {
        throw std::invalid_argument("build_fock: cutoff must be >= 2");
    }
    const Eigen::Index d = cutoff + 1;
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    for (int n = 1; n <= cutoff; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    FockSpace fock;
    fock.cutoff = cutoff;
    fock.a_dag = a.adjoint();
    fock.q = 0.5 * (a + fock.a_dag);
    fock.p = (a - fock.a_dag) / Complex(0.0, 2.0);
    fock.a = std::move(a);
    return fock;
}

// |alpha> = e^{-|alpha|^2/2} sum_n alpha^n / sqrt(n!) |n>
inline ComplexVector coherent_vector(int cutoff, Complex alpha) {
    ComplexVector v(cutoff + 1);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= cutoff; ++n) {
        v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    return v;
}

// S(r) = exp{ (r/2) (a^2 - a_dag^2) }, squeezing along the real axis.
inline ComplexMatrix squeezing_operator(const FockSpace& fock, double r) {
    const ComplexMatrix gen = 0.5 * r * (fock.a * fock.a - fock.a_dag * fock.a_dag);
    // gen is anti-Hermitian; exp(gen) = exp(-i (i gen)) with i*gen Hermitian.
    return unitary_from_hamiltonian(Complex(0.0, 1.0) * gen, 1.0);
}

inline ComplexVector squeezed_vacuum(const FockSpace& fock, double r) {
    ComplexVector v = squeezing_operator(fock, r).col(0);
    const double top2 = std::norm(v(fock.cutoff)) + std::norm(v(fock.cutoff - 1));
    if (!(top2 < 1e-10)) {
        std::ostringstream msg;
        msg << "squeezed_vacuum: cutoff " << fock.cutoff
            << " too small, top-two-level population " << top2;
        throw std::invalid_argument(msg.str());
    }
    return v;
}

// Operator-valued displacement exp{ sign (H_s (x) a_dag - H_s (x) a) } on the
// detector (x) system space, with gk*tau/2 = 1. Applied to |0>_a (x) |E^n>
// it produces the coherent state |sign E^n>_a (x) |E^n>.
inline ComplexMatrix coupling_unitary(const FockSpace& fock, const ComplexMatrix& hs, int sign) {
    require_hermitian(hs, "coupling_unitary");
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("coupling_unitary: sign must be +1 or -1");
    }
    const ComplexMatrix gen =
        static_cast<double>(sign) *
        (Eigen::kroneckerProduct(fock.a_dag, hs) - Eigen::kroneckerProduct(fock.a, hs));
    return unitary_from_hamiltonian(Complex(0.0, 1.0) * gen, 1.0);
}

// beta-plane grid for the Q function, detector in the b representation.
struct PhaseSpaceGrid {
    double re_min = 0.0;
    double re_max = 0.0;
    int re_points = 0;
    double im_min = 0.0;
    double im_max = 0.0;
    int im_points = 0;
};

struct DetectorConfig {
    double squeezing = 0.0;  // r, with sigma = e^{-r} / sqrt(2)
    int cutoff = 0;
    PhaseSpaceGrid grid;
    double propagation_tol = 1e-9;
    int max_cutoff_doublings = 6;
};

// Cutoff rule plus grid spec: Re covers e^r (W_min - 6 sigma, W_max + 6 sigma)
// at >= 20 points per sigma*e^r; Im covers 7 Q-widths at >= 20 points per width.
inline DetectorConfig make_detector_config(const EigenSystem& eig0, const EigenSystem& eigT,
                                           double sigma, int cutoff_override = 0) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("make_detector_config: sigma must be > 0");
    }
    DetectorConfig cfg;
    cfg.squeezing = squeezing_from_sigma(sigma);
    const double er = std::exp(cfg.squeezing);

    double e_max = 0.0, w_min = 0.0, w_max = 0.0;
    bool first = true;
    for (Eigen::Index l = 0; l < eigT.dim(); ++l) {
        for (Eigen::Index m = 0; m < eig0.dim(); ++m) {
            const double diff = eigT.values(l) - eig0.values(m);
            e_max = std::max(e_max, std::abs(diff));
            w_min = first ? diff : std::min(w_min, diff);
            w_max = first ? diff : std::max(w_max, diff);
            first = false;
        }
    }
    cfg.cutoff = cutoff_override > 0
                     ? cutoff_override
                     : std::max(2, static_cast<int>(std::ceil(std::pow(er * e_max + 6.0, 2))));

    cfg.grid.re_min = er * (w_min - 6.0 * sigma);
    cfg.grid.re_max = er * (w_max + 6.0 * sigma);
    const double re_spacing = sigma * er / 20.0;
    cfg.grid.re_points =
        static_cast<int>(std::ceil((cfg.grid.re_max - cfg.grid.re_min) / re_spacing)) + 1;

    const double im_width = 1.0 / std::sqrt(2.0);  // Q std in the Im direction
    cfg.grid.im_min = -7.0 * im_width;
    cfg.grid.im_max = 7.0 * im_width;
    cfg.grid.im_points =
        static_cast<int>(std::ceil((cfg.grid.im_max - cfg.grid.im_min) / (im_width / 20.0))) + 1;
    return cfg;
}

namespace detail {

// Population of the top two detector levels of a (detector (x) system) state.
inline double top_two_population(const ComplexMatrix& rho_joint, Eigen::Index fock_dim,
                                 Eigen::Index sys_dim) {
    double pop = 0.0;
    for (Eigen::Index level : {fock_dim - 1, fock_dim - 2}) {
        for (Eigen::Index s = 0; s < sys_dim; ++s) {
            pop += rho_joint(level * sys_dim + s, level * sys_dim + s).real();
        }
    }
    return pop;
}

inline void check_stage(const ComplexMatrix& rho_joint, Eigen::Index fock_dim,
                        Eigen::Index sys_dim, const char* stage) {
    const double pop = top_two_population(rho_joint, fock_dim, sys_dim);
    if (!(pop < 1e-8)) {
        std::ostringstream msg;
        msg << "run_measurement_scheme: cutoff breach at stage '" << stage
            << "', top-two-level population " << pop;
        throw std::runtime_error(msg.str());
    }
}

inline DensityMatrix run_pipeline(const DensityMatrix& rho_s0, const ComplexMatrix& h0,
                                  const ComplexMatrix& hT, const ComplexMatrix& u_s, double r,
                                  int cutoff) {
    const FockSpace fock = build_fock(cutoff);
    const Eigen::Index nd = fock.dim();
    const Eigen::Index d = rho_s0.dim();

    const ComplexVector sv = squeezed_vacuum(fock, r);
    ComplexMatrix rho = Eigen::kroneckerProduct((sv * sv.adjoint()).eval(), rho_s0.matrix);

    const ComplexMatrix u1 = coupling_unitary(fock, h0, -1);
    rho = u1 * rho * u1.adjoint();
    check_stage(rho, nd, d, "first-coupling");

    const ComplexMatrix u2 =
        Eigen::kroneckerProduct(ComplexMatrix::Identity(nd, nd), u_s);
    rho = u2 * rho * u2.adjoint();
    check_stage(rho, nd, d, "system-evolution");

    const ComplexMatrix u3 = coupling_unitary(fock, hT, +1);
    rho = u3 * rho * u3.adjoint();
    check_stage(rho, nd, d, "second-coupling");

    ComplexMatrix rho_a = ComplexMatrix::Zero(nd, nd);
    for (Eigen::Index i = 0; i < nd; ++i) {
        for (Eigen::Index j = 0; j < nd; ++j) {
            Complex acc{0.0, 0.0};
            for (Eigen::Index s = 0; s < d; ++s) {
                acc += rho(i * d + s, j * d + s);
            }
            rho_a(i, j) = acc;
        }
    }
    return DensityMatrix{std::move(rho_a), "detector"};
}

}  // namespace detail

// Steps 1-4 of the scheme: squeezed-vacuum detector, displacement coupling at
// lambda_0 (sign -1), system evolution U_s(t'), displacement coupling at
// lambda_{t'} (sign +1), then partial trace over the system. The cutoff is
// doubled on breach up to cfg.max_cutoff_doublings.
inline DensityMatrix run_measurement_scheme(const DensityMatrix& rho_s0,
                                            const DrivingProtocol& protocol,
                                            const DetectorConfig& cfg) {
    validate_density(rho_s0, "run_measurement_scheme");
    const ComplexMatrix h0 = protocol.at(0.0);
    const ComplexMatrix hT = protocol.at(protocol.duration);
    const ComplexMatrix u_s = auto_propagate(protocol, cfg.propagation_tol).U;

    int cutoff = cfg.cutoff;
    for (int attempt = 0;; ++attempt) {
        try {
            return detail::run_pipeline(rho_s0, h0, hT, u_s, cfg.squeezing, cutoff);
        } catch (const std::runtime_error&) {
            if (attempt >= cfg.max_cutoff_doublings) throw;
            cutoff *= 2;
        } catch (const std::invalid_argument&) {  // squeezed-vacuum cutoff too small
            if (attempt >= cfg.max_cutoff_doublings) throw;
            cutoff *= 2;
        }
    }
}

struct HusimiGrid {
    RealVector re_axis;
    RealVector im_axis;
    Eigen::MatrixXd values;  // values(re_index, im_index)
};

// Q(beta) = <beta, r| rho_a |beta, r> / pi with probe states
// |beta, r> = S(r) D(beta) |0>; S(r) is absorbed into the state once.
inline HusimiGrid husimi_q(const DensityMatrix& rho_a, const DetectorConfig& cfg) {
    const int cutoff = static_cast<int>(rho_a.dim()) - 1;
    if (cutoff < 2) {
        throw std::invalid_argument("husimi_q: detector state dimension too small");
    }
    const FockSpace fock = build_fock(cutoff);
    const ComplexMatrix s_op = squeezing_operator(fock, cfg.squeezing);
    const ComplexMatrix m = s_op.adjoint() * rho_a.matrix * s_op;

    HusimiGrid grid;
    grid.re_axis = RealVector::LinSpaced(cfg.grid.re_points, cfg.grid.re_min, cfg.grid.re_max);
    grid.im_axis = RealVector::LinSpaced(cfg.grid.im_points, cfg.grid.im_min, cfg.grid.im_max);
    grid.values.resize(cfg.grid.re_points, cfg.grid.im_points);

    constexpr double inv_pi = 1.0 / std::numbers::pi;
    for (int i = 0; i < cfg.grid.re_points; ++i) {
        for (int j = 0; j < cfg.grid.im_points; ++j) {
            const ComplexVector probe =
                coherent_vector(cutoff, Complex(grid.re_axis(i), grid.im_axis(j)));
            const double q = (probe.adjoint() * m * probe).value().real() * inv_pi;
            if (q < -1e-12) {
                std::ostringstream msg;
                msg << "husimi_q: negative Q value " << q << " at grid point (" << i << "," << j << ")";
                throw std::runtime_error(msg.str());
            }
            grid.values(i, j) = q;
        }
    }
    return grid;
}

struct MarginalDistribution {
    RealVector w;
    RealVector density;
};

// P(W) = int dIm(beta) e^r Q(beta), sampled at W = Re(beta) / e^r.
inline MarginalDistribution marginal_work_distribution(const HusimiGrid& grid,
                                                       const DetectorConfig& cfg) {
    const Eigen::Index nr = grid.re_axis.size();
    const Eigen::Index ni = grid.im_axis.size();
    if (nr < 2 || ni < 2) {
        throw std::invalid_argument("marginal_work_distribution: grid too small");
    }
    const double boundary =
        std::max(grid.values.col(0).maxCoeff(), grid.values.col(ni - 1).maxCoeff());
    if (!(boundary <= 1e-8)) {
        std::ostringstream msg;
        msg << "marginal_work_distribution: Im range under-covered, boundary Q = " << boundary;
        throw std::invalid_argument(msg.str());
    }
    const double er = std::exp(cfg.squeezing);
    MarginalDistribution out;
    out.w = grid.re_axis / er;
    out.density.resize(nr);
    for (Eigen::Index i = 0; i < nr; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j + 1 < ni; ++j) {
            acc += 0.5 * (grid.values(i, j) + grid.values(i, j + 1)) *
                   (grid.im_axis(j + 1) - grid.im_axis(j));
        }
        out.density(i) = er * acc;
    }
    return out;
}

// The detector state the scheme should produce, assembled directly from the
// transition amplitudes: sum_{lmn} rho^{mn} U_lm U*_ln |beta^lm>_b <beta^ln|_b
// with beta^lm = e^r (E^l_T - E^m_0).
inline DensityMatrix analytic_detector_state(const ProcessSnapshot& snap, int cutoff) {
    validate_snapshot(snap, "analytic_detector_state");
    const FockSpace fock = build_fock(cutoff);
    const double r = snap.squeezing();
    const double er = std::exp(r);
    const ComplexMatrix s_op = squeezing_operator(fock, r);
    const Eigen::Index d = snap.dim();
    const ComplexMatrix rho_eig = snap.eig0.vectors.adjoint() * snap.rho0.matrix * snap.eig0.vectors;

    std::vector<std::vector<ComplexVector>> dyad_vecs(static_cast<std::size_t>(d));
    for (Eigen::Index l = 0; l < d; ++l) {
        for (Eigen::Index m = 0; m < d; ++m) {
            dyad_vecs[static_cast<std::size_t>(l)].push_back(
                s_op * coherent_vector(cutoff, er * (snap.eigT.values(l) - snap.eig0.values(m))));
        }
    }
    ComplexMatrix rho_a = ComplexMatrix::Zero(fock.dim(), fock.dim());
    for (Eigen::Index l = 0; l < d; ++l) {
        for (Eigen::Index m = 0; m < d; ++m) {
            for (Eigen::Index n = 0; n < d; ++n) {
                rho_a += rho_eig(m, n) * snap.amplitudes(l, m) * std::conj(snap.amplitudes(l, n)) *
                         dyad_vecs[static_cast<std::size_t>(l)][static_cast<std::size_t>(m)] *
                         dyad_vecs[static_cast<std::size_t>(l)][static_cast<std::size_t>(n)].adjoint();
            }
        }
    }
    return DensityMatrix{std::move(rho_a), "detector-analytic"};
}

}  // namespace qws
