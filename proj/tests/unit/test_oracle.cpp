#include <doctest.h>

#include <cmath>
#include <random>

#include "dret/model.hpp"
#include "dret_oracle/oracle.hpp"

using namespace dret;
using namespace dret::oracle;

namespace {

BathSpec one_site(double lambda, double gamma, double kt) {
    BathSpec b;
    b.reorganization = {lambda};
    b.relaxation = {gamma};
    b.scaling = {0.0};
    b.thermal_energy = kt;
    return b;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g;
    ComplexMatrix m(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) m(a, b) = cplx(g(rng), g(rng));
    return 0.5 * (m + m.adjoint());
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("dense exponential of a diagonal Hamiltonian is a phase") {
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h.diagonal() << 0.5, -1.0, 2.0;
    ComplexVector psi(3);
    psi << 0.6, cplx(0.0, 0.8), 0.0;
    for (auto m : {ExpmMethod::Eigendecomposition, ExpmMethod::TaylorSquaring}) {
        auto out = dense_expm_evolve(h, psi, 1.7, m);
        CHECK(std::abs(out[0] - psi[0] * std::exp(cplx(0.0, -0.5 * 1.7))) < 1e-14);
        CHECK(std::abs(out[1] - psi[1] * std::exp(cplx(0.0, 1.0 * 1.7))) < 1e-14);
        CHECK(std::abs(out[2]) == 0.0);
    }
}

TEST_CASE("dense exponential reproduces Rabi flopping") {
    ComplexMatrix h(2, 2);
    h << 0.0, 1.0, 1.0, 0.0;
    ComplexVector psi(2);
    psi << 1.0, 0.0;
    for (auto m : {ExpmMethod::Eigendecomposition, ExpmMethod::TaylorSquaring}) {
        for (double t : {0.3, 1.0, 7.5}) {
            auto out = dense_expm_evolve(h, psi, t, m);
            CHECK(std::norm(out[1]) == doctest::Approx(std::pow(std::sin(t), 2)).epsilon(1e-12));
        }
    }
}

TEST_CASE("both exponential methods agree on random Hermitian matrices") {
    std::mt19937_64 rng(27);
    for (int trial = 0; trial < 3; ++trial) {
        auto h = random_hermitian(rng, 27);
        ComplexVector psi = ComplexVector::Random(27).normalized();
        auto a = dense_expm_evolve(h, psi, 2.3, ExpmMethod::Eigendecomposition);
        auto b = dense_expm_evolve(h, psi, 2.3, ExpmMethod::TaylorSquaring);
        CHECK((a - b).norm() < 1e-10);
    }
    CHECK_THROWS_AS(dense_expm_evolve(ComplexMatrix::Identity(513, 513), ComplexVector::Zero(513), 1.0),
                    std::length_error);
}

TEST_CASE("imaginary part of the bath response") {
    auto b = one_site(0.35, 0.35, 2.0);
    for (double tau : {0.05, 0.5, 2.0, 10.0}) {
        CAPTURE(tau);
        auto a = response_quadrature(b, 0, tau);
        CHECK(std::abs(a.imag() - (-0.35 * 0.35 * std::exp(-0.35 * tau))) < 1e-8);
    }
    CHECK(std::abs(response_quadrature(one_site(0.0, 0.35, 2.0), 0, 1.0)) == 0.0);
    CHECK_THROWS_AS(response_quadrature(b, 0, 0.0), std::domain_error);
}

TEST_CASE("real part approaches the high-temperature kernel") {
    const double gamma = 0.35, lambda = 0.35, tau = 1.0;
    double prev = 1e300;
    for (double kt : {1.0, 2.0, 8.0, 32.0}) {
        auto b = one_site(lambda, gamma, kt);
        const double full = response_quadrature(b, 0, tau).real();
        const double high = bath_response_high_temperature(b, 0, tau).real();
        const double rel = std::abs(full - high) / std::abs(high);
        MESSAGE("beta hbar gamma = " << gamma / kt << ": real-part relative deviation " << rel);
        CHECK(rel < prev);
        prev = rel;
    }
    CHECK(prev < 0.01);
}

TEST_CASE("spectral sum rule") {
    for (double gamma : {0.1, 0.35, 3.0}) {
        auto b = one_site(0.35, gamma, 2.0);
        CHECK(std::abs(spectral_sum_rule(b, 0) / 0.35 - 1.0) < 1e-6);
    }
}

TEST_CASE("oracle kernel integrals match the closed-form lineshape") {
    auto b = one_site(0.2, 0.5, 3.0);
    for (double t : {0.1, 1.0, 8.0}) {
        const double shape = (0.5 * t - 1.0 + std::exp(-0.5 * t)) / 0.25;
        const cplx expect = cplx(2.0 * 0.2 * 3.0, -0.2 * 0.5) * shape;
        CHECK(std::abs(lineshape_quadrature(b, 0, t) - expect) < 1e-11);
    }
    CHECK(lineshape_quadrature(b, 0, 0.0) == cplx(0.0, 0.0));
}

TEST_CASE("dephasing reference") {
    MoleculeChain chain{{1.0, 0.0}, RealMatrix::Zero(2, 2)};
    BathSpec none;
    none.reorganization = {0.0, 0.0};
    none.relaxation = {0.5, 0.5};
    none.scaling = {0.0, 0.0};
    none.thermal_energy = 2.0;
    for (double t : {0.0, 1.0, 5.0}) {
        auto r = dephasing_analytic(chain, none, 0.5, t);
        CHECK(std::abs(r) == doctest::Approx(0.5));
        CHECK(std::abs(r - 0.5 * std::exp(cplx(0.0, -t))) < 1e-12);
    }

    BathSpec b = none;
    b.reorganization = {0.1, 0.2};
    // Gaussian short-time decay: 1 - |rho(2t)|/|rho(0)| ~ 4 (1 - |rho(t)|/|rho(0)|)
    const double t = 1e-3;
    const double d1 = 1.0 - std::abs(dephasing_analytic(chain, b, 0.5, t)) / 0.5;
    const double d2 = 1.0 - std::abs(dephasing_analytic(chain, b, 0.5, 2 * t)) / 0.5;
    CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(1e-2));

    MoleculeChain coupled = MoleculeChain::linear({1.0, 0.0}, 1.0);
    CHECK_THROWS_AS(dephasing_analytic(coupled, b, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("reference hierarchy without bath is unitary") {
    auto chain = MoleculeChain::linear({0.0, 0.0}, 1.0);
    BathSpec b;
    b.reorganization = {0.0, 0.0};
    b.relaxation = {0.3, 0.3};
    b.scaling = {0.0, 0.0};
    b.thermal_energy = 1.0;
    ComplexMatrix rho0 = ComplexMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    auto run = local_bath_heom(chain, b, rho0, 3, 4.0, 0.25);
    REQUIRE(run.times.size() == 17);
    for (std::size_t i = 0; i < run.times.size(); ++i) {
        CHECK(std::abs(run.populations[i][1] - std::pow(std::sin(run.times[i]), 2)) < 1e-12);
    }
    b.scaling = {1.0, 0.0};
    CHECK_THROWS_AS(local_bath_heom(chain, b, rho0, 3, 1.0, 0.5), std::invalid_argument);
}

}  // TEST_SUITE
