#include <doctest.h>

#include <cmath>

#include "dret/closed.hpp"

using namespace dret;

namespace {

ComplexMatrix fock_projector(int n, int dim) {
    ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
    r(n, n) = 1.0;
    return r;
}

ComplexMatrix coherent(double q0, double p0, int dim) {
    const cplx alpha(q0 / std::sqrt(2.0), p0 / std::sqrt(2.0));
    ComplexVector c(dim);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    return c * c.adjoint();
}

}  // namespace

TEST_SUITE("phase_space") {

TEST_CASE("vacuum Wigner function") {
    auto w = wigner_function(fock_projector(0, 10), PhaseGrid::symmetric(6.0, 121));
    CHECK(w.at_origin() == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    CHECK(w.values.maxCoeff() == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    CHECK(std::abs(w.integral() - 1.0) < 1e-3);
    for (std::size_t i = 0; i < w.grid.q_points; i += 17) {
        for (std::size_t j = 0; j < w.grid.p_points; j += 13) {
            const double q = w.grid.q_at(i), p = w.grid.p_at(j);
            CHECK(w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                  doctest::Approx(std::exp(-q * q - p * p) / M_PI).epsilon(1e-10));
        }
    }
}

TEST_CASE("first Fock state is negative at the origin") {
    auto w = wigner_function(fock_projector(1, 6), PhaseGrid::symmetric(6.0, 121));
    CHECK(w.at_origin() == doctest::Approx(-1.0 / M_PI).epsilon(1e-12));
    CHECK(std::abs(w.integral() - 1.0) < 1e-3);
}

TEST_CASE("coherent state is a translated vacuum") {
    const double q0 = 1.5, p0 = -0.8;
    auto w = wigner_function(coherent(q0, p0, 40), PhaseGrid::symmetric(7.0, 141));
    double worst = 0.0;
    for (std::size_t i = 0; i < w.grid.q_points; ++i) {
        for (std::size_t j = 0; j < w.grid.p_points; ++j) {
            const double dq = w.grid.q_at(i) - q0, dp = w.grid.p_at(j) - p0;
            worst = std::max(worst, std::abs(w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                             std::exp(-dq * dq - dp * dp) / M_PI));
        }
    }
    CHECK(worst < 1e-7);  // levels below 1e-14 population are dropped
}

TEST_CASE("Wigner grid that misses the state is rejected") {
    CHECK_THROWS_AS(wigner_function(fock_projector(20, 25), PhaseGrid::symmetric(2.0, 51)), ValidationError);
    CHECK_THROWS_AS(wigner_function(coherent(5.0, 0.0, 60), PhaseGrid::symmetric(3.0, 61)), ValidationError);
}

TEST_CASE("Wigner normalization follows the trace on a displaced polaron state") {
    auto chain = MoleculeChain::linear({2.0, 0.0}, 1.0);
    SharedMode mode{1.0, {1.0, 2.0}};
    FockTruncation tr{30, 400};
    ClosedOptions opts;
    opts.tmax = 6.0;
    opts.dt_out = 0.5;
    opts.wigner_frames = 4;
    opts.wigner_grid = PhaseGrid::symmetric(8.0, 161);
    auto traj = evolve_closed(build_polaron_hamiltonian(chain, mode, tr), initial_state(chain, mode, tr, 0), 0, opts);
    REQUIRE(traj.wigner_frames.size() == 4);
    CHECK(traj.wigner_frames.front().t == 0.0);
    CHECK(traj.wigner_frames.back().t == 6.0);
    for (const auto& f : traj.wigner_frames) CHECK(std::abs(f.normalization - 1.0) < 1e-3);
}

TEST_CASE("energy surfaces") {
    auto chain = MoleculeChain::linear({2.0, 0.0}, 1.0);
    SharedMode same{1.7, {0.8, 0.8}};
    for (double q : {-2.0, 0.0, 1.3})
        for (double p : {-1.0, 0.4})
            CHECK(energy_surface(chain, same, 0, q, p) - energy_surface(chain, same, 1, q, p) == doctest::Approx(2.0));

    SharedMode mode{2.4, {-0.5, 1.0}};
    CHECK(energy_surface(chain, mode, 0, 0.0, 0.0) == doctest::Approx(2.0 + 0.25 / 2.4));
    CHECK(energy_surface(chain, mode, 1, 0.0, 0.0) == doctest::Approx(1.0 / 2.4));
    // affine in Q with slope -sqrt(2)(f_1 - f_2), independent of P
    auto diff = [&](double q, double p) { return energy_surface(chain, mode, 0, q, p) - energy_surface(chain, mode, 1, q, p); };
    const double slope = -std::sqrt(2.0) * (-0.5 - 1.0);
    CHECK(diff(1.0, 0.0) - diff(0.0, 0.0) == doctest::Approx(slope));
    CHECK(diff(3.0, 2.0) - diff(0.0, -1.0) == doctest::Approx(3.0 * slope));
}

TEST_CASE("contours intersect across the mismatch range") {
    SharedMode mode{1.0, {1.0, 2.0}};
    for (double d : {-1.0, 0.0, 1.0, 2.0, 3.0}) {
        CAPTURE(d);
        auto chain = MoleculeChain::linear({d, 0.0}, 1.0);
        auto a = resonance_intersections(chain, mode, 0);
        CHECK(a.pair_with(1).intersects());
        for (const auto& [q, p] : a.pair_with(1).points) {
            CHECK(energy_surface(chain, mode, 0, q, p) == doctest::Approx(a.energy));
            CHECK(energy_surface(chain, mode, 1, q, p) == doctest::Approx(a.energy));
        }
    }
    auto mid = resonance_intersections(MoleculeChain::linear({1.0, 0.0}, 1.0), mode, 0);
    CHECK(mid.pair_with(1).relation == ContourRelation::Intersecting);
    CHECK(mid.pair_with(1).points.size() == 2);
    REQUIRE(mid.pair_with(1).near_resonance_band.has_value());
}

TEST_CASE("no resonance from the low site of the downhill pair") {
    auto chain = MoleculeChain::linear({2.0, 0.0}, 1.0);
    SharedMode mode{2.4, {-0.5, 1.0}};
    auto a = resonance_intersections(chain, mode, 1);
    CHECK_FALSE(a.pair_with(0).intersects());
    CHECK(a.contours[0].radius_squared < 0.0);  // reported, not hidden
    CHECK(a.pair_with(0).relation == ContourRelation::Missing);
    // from the high site the contours stay apart but the site-1 circle lies
    // inside the near-resonance band
    auto forward = resonance_intersections(chain, mode, 0);
    CHECK(forward.pair_with(1).relation == ContourRelation::Disjoint);
    REQUIRE(forward.pair_with(1).near_resonance_band.has_value());
    const auto [lo, hi] = *forward.pair_with(1).near_resonance_band;
    const auto& c = forward.contours[0];
    const double r = std::sqrt(c.radius_squared);
    CHECK(lo < c.centre_q + r);
    CHECK(hi > c.centre_q - r);
}

TEST_CASE("identical sites give coincident contours") {
    auto chain = MoleculeChain::linear({0.5, 0.5}, 1.0);
    SharedMode mode{1.0, {0.7, 0.7}};
    auto a = resonance_intersections(chain, mode, 0);
    CHECK(a.pair_with(1).relation == ContourRelation::Coincident);
    CHECK(a.pair_with(1).points.empty());
    CHECK_FALSE(a.pair_with(1).intersects());
    CHECK_THROWS_AS(resonance_intersections(chain, mode, 0, -3.0), ValidationError);
}

}  // TEST_SUITE
