#include "qws/states.hpp"
#include "qws/two_level.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qws;

TEST_CASE("gibbs state at beta = 0 is maximally mixed", "[states]") {
    std::mt19937 rng(11);
    const ComplexMatrix h = test::random_hermitian(4, rng);
    const GibbsState g = gibbs_state(h, 0.0);
    REQUIRE((g.rho.matrix - 0.25 * ComplexMatrix::Identity(4, 4)).norm() < 1e-12);
    REQUIRE(g.partition() == Catch::Approx(4.0));
}

TEST_CASE("gibbs weights of the two-level model", "[states]") {
    const double beta = 0.01;
    const GibbsState g = gibbs_state(pauli_x(), beta);  // nu0 = 1
    const double z0 = std::exp(-beta) + std::exp(beta);
    const EigenSystem eig = spin_eig0(SpinParams{});
    const ComplexMatrix in_eig = eig.vectors.adjoint() * g.rho.matrix * eig.vectors;
    REQUIRE(in_eig(1, 1).real() == Catch::Approx(std::exp(-beta) / z0).epsilon(1e-12));
    REQUIRE(in_eig(0, 0).real() == Catch::Approx(std::exp(beta) / z0).epsilon(1e-12));
    REQUIRE(std::abs(in_eig(0, 1)) < 1e-14);
    REQUIRE(g.partition() == Catch::Approx(z0).epsilon(1e-12));
}

TEST_CASE("gibbs state in the zero-temperature limit is the ground projector", "[states]") {
    std::mt19937 rng(5);
    const ComplexMatrix h = test::random_hermitian(3, rng);
    const EigenSystem eig = hermitian_eigendecompose(h);
    const GibbsState g = gibbs_state(h, 1e3);
    const ComplexVector ground = eig.vectors.col(0);
    REQUIRE((g.rho.matrix - ground * ground.adjoint()).norm() < 1e-10);
    validate_density(g.rho, "test");
}

TEST_CASE("gibbs state rejections", "[states]") {
    ComplexMatrix bad(2, 2);
    bad << 0.0, 1.0, 0.0, 0.0;
    REQUIRE_THROWS_AS(gibbs_state(bad, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(gibbs_state(pauli_x(), -0.5), std::invalid_argument);
}

TEST_CASE("coherent gibbs state matches the paper two-level superposition", "[states]") {
    const double beta = 0.25;
    const SpinParams p{1.0, 1.8, 1.0, beta, 1.0};
    const DensityMatrix rho = coherent_gibbs_state(spin_eig0(p), beta * p.nu0);
    const double z0 = std::exp(-beta) + std::exp(beta);
    const ComplexVector psi = std::sqrt(std::exp(-beta) / z0) * spin_plus() +
                              std::sqrt(std::exp(beta) / z0) * spin_minus();
    REQUIRE((rho.matrix - psi * psi.adjoint()).norm() < 1e-12);
}

TEST_CASE("coherent gibbs state is pure and diagonal-matched to gibbs", "[states]") {
    std::mt19937 rng(13);
    for (double beta : {0.0, 0.3, 2.0}) {
        const ComplexMatrix h = test::random_hermitian(5, rng);
        const EigenSystem eig = hermitian_eigendecompose(h);
        const DensityMatrix cg = coherent_gibbs_state(h, beta);
        const GibbsState g = gibbs_state(h, beta);

        REQUIRE(std::abs((cg.matrix * cg.matrix).trace().real() - 1.0) < 1e-12);

        const ComplexMatrix cg_eig = eig.vectors.adjoint() * cg.matrix * eig.vectors;
        const ComplexMatrix g_eig = eig.vectors.adjoint() * g.rho.matrix * eig.vectors;
        REQUIRE((cg_eig.diagonal() - g_eig.diagonal()).norm() < 1e-12);
        if (beta == 0.0) {
            // uniform superposition: every entry 1/d
            REQUIRE((cg_eig - ComplexMatrix::Constant(5, 5, Complex(0.2, 0.0))).norm() < 1e-12);
        }
        validate_density(cg, "test");
    }
}

TEST_CASE("decohere_for_measurement limits", "[states]") {
    const SpinParams p{};
    const EigenSystem eig = spin_eig0(p);
    const DensityMatrix rho = coherent_gibbs_state(eig, 0.4);

    const DensityMatrix wide = decohere_for_measurement(rho, eig, 1e12);
    REQUIRE((wide.matrix - rho.matrix).norm() < 1e-10);

    const DensityMatrix narrow = decohere_for_measurement(rho, eig, 1e-12);
    const ComplexMatrix in_eig = eig.vectors.adjoint() * narrow.matrix * eig.vectors;
    REQUIRE(std::abs(in_eig(0, 1)) < 1e-300);
    REQUIRE(std::abs(in_eig(0, 0).real() + in_eig(1, 1).real() - 1.0) < 1e-12);
}

TEST_CASE("decohere damping factor for gap 2 nu0 at sigma = nu0", "[states]") {
    const SpinParams p{};
    const EigenSystem eig = spin_eig0(p);
    const DensityMatrix rho = coherent_gibbs_state(eig, 0.7);
    const DensityMatrix damped = decohere_for_measurement(rho, eig, p.nu0);
    const ComplexMatrix before = eig.vectors.adjoint() * rho.matrix * eig.vectors;
    const ComplexMatrix after = eig.vectors.adjoint() * damped.matrix * eig.vectors;
    // gap 2 nu0, sigma = nu0 -> off-diagonal damped by e^{-1}
    REQUIRE(std::abs(after(0, 1) / before(0, 1) - std::exp(-1.0)) < 1e-12);
    REQUIRE(std::abs(after(0, 0) - before(0, 0)) < 1e-14);
}

TEST_CASE("decohere preserves trace and positivity, fixes eig0-diagonal states", "[states]") {
    std::mt19937 rng(17);
    const ComplexMatrix h = test::random_hermitian(4, rng);
    const EigenSystem eig = hermitian_eigendecompose(h);

    // random valid density matrix
    const ComplexMatrix g = test::random_hermitian(4, rng);
    ComplexMatrix rho_m = g * g.adjoint();
    rho_m /= rho_m.trace();
    const DensityMatrix rho{rho_m, ""};

    const DensityMatrix out = decohere_for_measurement(rho, eig, 0.3);
    validate_density(out, "test");
    REQUIRE(std::abs(out.matrix.trace().real() - 1.0) < 1e-12);

    const GibbsState diag = gibbs_state(h, 0.8);
    const DensityMatrix fixed = decohere_for_measurement(diag.rho, eig, 0.3);
    REQUIRE((fixed.matrix - diag.rho.matrix).norm() < 1e-12);

    REQUIRE_THROWS_AS(decohere_for_measurement(rho, eig, 0.0), std::invalid_argument);
}
