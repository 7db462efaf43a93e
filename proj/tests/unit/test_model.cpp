#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "dret/model.hpp"

using namespace dret;

namespace {

BathSpec uniform_bath(std::size_t n, double lambda, double gamma, double s, double kt) {
    BathSpec b;
    b.reorganization.assign(n, lambda);
    b.relaxation.assign(n, gamma);
    b.scaling.assign(n, s);
    b.thermal_energy = kt;
    return b;
}

SharedMode fig1_mode() { return SharedMode{1.0, {1.0, 2.0}}; }

}  // namespace

TEST_SUITE("model") {

TEST_CASE("validate_chain accepts the two-site mismatch chain") {
    auto chain = MoleculeChain::linear({2.0, 0.0}, 1.0);
    CHECK(validate_chain(chain).ok());
}

TEST_CASE("validate_chain names asymmetric couplings") {
    auto chain = MoleculeChain::linear({2.0, 0.0}, 1.0);
    chain.couplings(0, 1) = 0.5;
    auto r = validate_chain(chain);
    REQUIRE_FALSE(r.ok());
    CHECK(r.summary().find("symmetric") != std::string::npos);
}

TEST_CASE("validate_chain single site and broken invariants") {
    CHECK(validate_chain(MoleculeChain::linear({0.3}, 1.0)).ok());
    auto diag = MoleculeChain::linear({0.0, 0.0}, 1.0);
    diag.couplings(0, 0) = 0.1;
    CHECK_FALSE(validate_chain(diag).ok());
    auto nan = MoleculeChain::linear({0.0, NAN}, 1.0);
    CHECK_FALSE(validate_chain(nan).ok());
    MoleculeChain wrong{{0.0, 1.0, 2.0}, RealMatrix::Zero(2, 2)};
    CHECK_FALSE(validate_chain(wrong).ok());
    CHECK_THROWS_AS(require(validate_chain(wrong), "chain"), ValidationError);
}

TEST_CASE("validate_mode and validate_bath") {
    CHECK(validate_mode(fig1_mode(), 2).ok());
    CHECK_FALSE(validate_mode(SharedMode{0.0, {1.0, 2.0}}, 2).ok());
    CHECK_FALSE(validate_mode(SharedMode{1.0, {1.0}}, 2).ok());
    CHECK(validate_bath(uniform_bath(2, 0.1, 0.1, 0.0, 4.0), 2).ok());
    CHECK_FALSE(validate_bath(uniform_bath(2, -0.1, 0.1, 0.0, 4.0), 2).ok());
    CHECK_FALSE(validate_bath(uniform_bath(2, 0.1, 0.0, 0.0, 4.0), 2).ok());
    CHECK_FALSE(validate_bath(uniform_bath(2, 0.1, 0.1, 0.0, 0.0), 2).ok());
    CHECK_FALSE(validate_bath(uniform_bath(3, 0.1, 0.1, 0.0, 4.0), 2).ok());
}

TEST_CASE("bath warns when beta hbar gamma reaches 1") {
    auto ok = uniform_bath(2, 0.35, 0.35, 0.0, 2.0);
    CHECK(ok.high_temperature_valid());
    CHECK(ok.warnings().empty());
    auto cold = uniform_bath(2, 0.35, 0.35, 0.0, 0.3);
    CHECK_FALSE(cold.high_temperature_valid());
    CHECK(cold.warnings().size() == 2);
    CHECK(validate_bath(cold, 2).ok());  // a warning, not an error
}

TEST_CASE("polaron Hamiltonian dimension and hermiticity") {
    auto chain = MoleculeChain::linear({2.0, 0.0}, 1.0);
    auto h = build_polaron_hamiltonian(chain, fig1_mode(), FockTruncation{30, 400});
    CHECK(h.rows() == 62);
    CHECK(h.cols() == 62);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    // site-diagonal shift and ladder element
    CHECK(h(polaron_index(0, 0, 30), polaron_index(0, 0, 30)) == doctest::Approx(2.0 + 1.0 + 0.5));
    CHECK(h(polaron_index(1, 4, 30), polaron_index(1, 3, 30)) == doctest::Approx(-2.0 * 2.0));
    CHECK(h(polaron_index(0, 3, 30), polaron_index(1, 3, 30)) == doctest::Approx(1.0));
}

TEST_CASE("zero phonon coupling commutes with the number operator") {
    auto chain = MoleculeChain::linear({0.0, 3.0, 1.0}, 1.0);
    const int nmax = 12;
    auto h = build_polaron_hamiltonian(chain, SharedMode{1.0, {0.0, 0.0, 0.0}}, FockTruncation{nmax, 400});
    RealMatrix num = RealMatrix::Zero(h.rows(), h.cols());
    for (std::size_t k = 0; k < 3; ++k)
        for (int n = 0; n <= nmax; ++n) num(polaron_index(k, n, nmax), polaron_index(k, n, nmax)) = n;
    CHECK((h * num - num * h).norm() < 1e-12);
}

TEST_CASE("single site gives the displaced oscillator spectrum") {
    MoleculeChain chain{{0.7}, RealMatrix::Zero(1, 1)};
    const double w = 1.3, f = 0.9;
    const int nmax = 60;
    auto h = build_polaron_hamiltonian(chain, SharedMode{w, {f}}, FockTruncation{nmax, 400});
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
    for (int n = 0; n < 30; ++n) {
        CHECK(es.eigenvalues()[n] == doctest::Approx(0.7 + w * (n + 0.5)).epsilon(1e-10));
    }
}

TEST_CASE("polaron dimension guard and truncation precondition") {
    auto chain = MoleculeChain::linear({0.0, 0.0}, 1.0);
    CHECK_THROWS_AS(build_polaron_hamiltonian(chain, fig1_mode(), FockTruncation{0, 400}), ValidationError);
    CHECK_THROWS_AS(build_polaron_hamiltonian(chain, fig1_mode(), FockTruncation{100, 400}, 150), ValidationError);
}

TEST_CASE("lamb shift closed form") {
    auto b = uniform_bath(2, 0.35, 0.35, 4.0, 2.0);
    CHECK(lamb_shift(b, 0, 0.0) == 2.0 * 4.0 * 0.35);
    CHECK(lamb_shift(b, 0, 1.0 / 0.35) == doctest::Approx(2.0 * 4.0 * 0.35 * std::exp(-1.0)));
    auto local = uniform_bath(2, 0.35, 0.35, 0.0, 2.0);
    for (double t : {0.0, 0.5, 10.0}) CHECK(lamb_shift(local, 1, t) == 0.0);
    double prev = lamb_shift(b, 0, 0.0);
    for (int i = 1; i < 100; ++i) {
        const double v = lamb_shift(b, 0, 0.1 * i);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS(lamb_shift(b, 0, -1.0));
}

TEST_CASE("symmetric coupling makes the lamb shifts equal") {
    BathSpec b;
    b.reorganization = {0.1, 0.2, 0.4};
    b.scaling = {8.0, 4.0, 2.0};
    b.relaxation = {0.3, 0.3, 0.3};
    b.thermal_energy = 2.0;
    for (double t : {0.0, 0.3, 1.7, 25.0}) {
        CHECK(std::abs(lamb_shift(b, 0, t) - lamb_shift(b, 1, t)) < 1e-14);
        CHECK(std::abs(lamb_shift(b, 1, t) - lamb_shift(b, 2, t)) < 1e-14);
    }
}

TEST_CASE("effective electronic Hamiltonian limits") {
    auto chain = MoleculeChain::linear({2.0, 0.0}, 1.0);
    BathSpec b;
    b.reorganization = {0.1, 0.2};
    b.relaxation = {0.5, 0.5};
    b.scaling = {3.0, 1.0};
    b.thermal_energy = 4.0;
    auto h0 = build_effective_electronic_hamiltonian(chain, b, 0.0);
    CHECK(h0(0, 0) == doctest::Approx(2.0 + 0.1 * (1 + 2 * 3.0)));
    CHECK(h0(1, 1) == doctest::Approx(0.0 + 0.2 * (1 + 2 * 1.0)));
    CHECK(h0(0, 1) == 1.0);
    auto hinf = build_effective_electronic_hamiltonian(chain, b, 200.0);
    CHECK(hinf(0, 0) == doctest::Approx(2.1).epsilon(1e-14));
    CHECK(hinf(1, 1) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK((hinf - hinf.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    auto nobath = uniform_bath(2, 0.0, 0.5, 2.0, 4.0);
    for (double t : {0.0, 1.0, 9.0}) {
        CHECK((build_effective_electronic_hamiltonian(chain, nobath, t) - electronic_hamiltonian(chain)).norm() == 0.0);
    }
}

TEST_CASE("Drude spectral density values") {
    auto b = uniform_bath(1, 0.35, 0.7, 0.0, 2.0);
    CHECK(spectral_density(b, 0, 0.7) == doctest::Approx(0.35 / M_PI));
    CHECK(spectral_density(b, 0, 0.0) == 0.0);
    CHECK_THROWS(spectral_density(b, 0, -1.0));
}

TEST_CASE("high-temperature kernel") {
    auto b = uniform_bath(1, 0.35, 0.7, 0.0, 2.0);
    auto a0 = bath_response_high_temperature(b, 0, 0.0);
    CHECK(a0.real() == doctest::Approx(2 * 0.35 * 2.0));
    CHECK(a0.imag() == doctest::Approx(-0.35 * 0.7));
    auto a1 = bath_response_high_temperature(b, 0, 1.0);
    CHECK(std::abs(a1 - a0 * std::exp(-0.7)) < 1e-15);
    auto none = uniform_bath(1, 0.0, 0.7, 0.0, 2.0);
    CHECK(std::abs(bath_response_high_temperature(none, 0, 0.4)) == 0.0);
}

}  // TEST_SUITE
