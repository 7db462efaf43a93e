// Unitary exciton + shared-mode dynamics, observables, phase-space analysis

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dret/model.hpp"

namespace dret {

// Amplitudes on |k> (x) |n>, k = 0..sites-1, n = 0..n_max, site-major.
struct PolaronState {
    ComplexVector amplitudes;
    std::size_t sites{0};
    int n_max{0};

    std::size_t levels() const noexcept { return static_cast<std::size_t>(n_max) + 1; }
    double norm() const { return amplitudes.norm(); }
};

PolaronState initial_state(const MoleculeChain& chain, const SharedMode& mode,
                           const FockTruncation& trunc, std::size_t start_site);

// P_k = sum_n |amp(k, n)|^2.
std::vector<double> site_populations(const PolaronState& psi);

// Delta = (sum_k (k - k0)^2 P_k)^(1/2); k and k0 are site positions along the chain.
double rms_displacement(std::span<const double> populations, std::size_t start_site);

double total_energy_expectation(const RealMatrix& h, const PolaronState& psi);

// rho_ph[n, n'] = sum_k amp(k, n) conj(amp(k, n')).
ComplexMatrix reduced_phonon_state(const PolaronState& psi);

// --------------------------------------------------------------------------
// Wigner function over dimensionless (Q, P), Q = q sqrt(m w), P = p / sqrt(m w).

struct PhaseGrid {
    double q_min{-8.0}, q_max{8.0};
    double p_min{-8.0}, p_max{8.0};
    std::size_t q_points{201}, p_points{201};

    double q_at(std::size_t i) const;
    double p_at(std::size_t i) const;
    static PhaseGrid symmetric(double extent, std::size_t points);
};

struct WignerField {
    PhaseGrid grid;
    RealMatrix values;  // (q_points x p_points), values(i, j) = W(q_i, p_j)

    // Trapezoidal integral of W over the grid.
    double integral() const;
    double at_origin() const;  // nearest grid point to (0, 0)
};

// Highest Fock level carrying population above `threshold`.
int occupied_fock_max(const ComplexMatrix& rho, double threshold = 1e-12);

// Fock-basis Laguerre recursion. Throws ValidationError when the grid does not
// cover the occupied Fock space or when the quadrature normalization differs
// from tr(rho) by more than `normalization_tolerance`.
WignerField wigner_function(const ComplexMatrix& rho, const PhaseGrid& grid,
                            double normalization_tolerance = 1e-3);

// --------------------------------------------------------------------------
// Energy surfaces E_j(P, Q)/hbar = Omega_j + (w/2) (P^2 + (Q - sqrt(2) f_j / w)^2).

double energy_surface(const MoleculeChain& chain, const SharedMode& mode, std::size_t site,
                      double q, double p);

// Contour E_k(P, Q) = E0: circle centred at (Q = centre_q, P = 0).
struct PhaseContour {
    std::size_t site{0};
    double centre_q{0.0};
    double radius_squared{0.0};  // reported even when negative (no real contour)

    bool exists() const noexcept { return radius_squared >= 0.0; }
};

enum class ContourRelation {
    Intersecting,  // two crossing points
    Tangent,       // single touching point
    Disjoint,      // separate or nested circles
    Coincident,    // identical circles (degenerate)
    Missing,       // at least one contour has negative radius squared
};

const char* to_string(ContourRelation r) noexcept;

struct ContourPair {
    std::size_t first{0}, second{0};
    ContourRelation relation{ContourRelation::Disjoint};
    std::vector<std::pair<double, double>> points;  // (Q, P)

    // Q interval on which |E_first - E_second| < J_first,second. Empty when
    // the band does not exist; both ends infinite when it covers all of phase space.
    std::optional<std::pair<double, double>> near_resonance_band;

    bool intersects() const noexcept {
        return relation == ContourRelation::Intersecting || relation == ContourRelation::Tangent;
    }
};

struct ResonanceAnalysis {
    std::size_t occupied_site{0};
    double energy{0.0};
    std::vector<PhaseContour> contours;  // one per site
    std::vector<ContourPair> pairs;      // every (occupied_site, k), k != occupied_site

    const ContourPair& pair_with(std::size_t site) const;
};

// E0 defaults to E_j(0, 0) of the occupied site when not given.
ResonanceAnalysis resonance_intersections(const MoleculeChain& chain, const SharedMode& mode,
                                          std::size_t occupied_site,
                                          std::optional<double> energy = std::nullopt);

// --------------------------------------------------------------------------
// Time evolution.

struct WignerFrame {
    double t{0.0};
    WignerField field;
    double normalization{0.0};
};

struct ClosedOptions {
    double tmax{30.0};
    double dt_out{0.05};
    double tolerance{1e-15};  // Chebyshev coefficient cutoff
    std::size_t wigner_frames{0};
    PhaseGrid wigner_grid{};
    bool keep_states{false};
};

struct TrajectoryResult {
    std::vector<double> times;
    std::vector<std::vector<double>> populations;  // [time][site]
    std::vector<double> rms_displacement;
    std::vector<double> energy;
    std::vector<double> norm;
    std::vector<WignerFrame> wigner_frames;
    std::vector<PolaronState> states;  // filled only with keep_states
    std::size_t start_site{0};
    int n_max{0};
};

// Chebyshev expansion of exp(-i H dt) between output times.
TrajectoryResult evolve_closed(const RealMatrix& h, const PolaronState& psi0,
                               std::size_t start_site, const ClosedOptions& options);

// Output times 0, dt, 2dt, ... up to and including tmax (last point clamped).
std::vector<double> output_times(double tmax, double dt_out);

// Indices into an output grid of `count` evenly spread frames.
std::vector<std::size_t> frame_indices(std::size_t samples, std::size_t count);

struct FockConvergence {
    int accepted_n_max{0};
    double max_population_change{0.0};  // vs. 2 * accepted_n_max
    std::vector<std::pair<int, double>> history;  // (n_max, change vs 2 n_max)
    TrajectoryResult trajectory;                  // at accepted_n_max
};

// Escalates n_max by 1.5x until doubling it changes every P_k(t) by less than
// `threshold`. Throws NumericError when the escalation cap is reached.
FockConvergence converge_fock(const MoleculeChain& chain, const SharedMode& mode,
                              std::size_t start_site, const FockTruncation& trunc,
                              const ClosedOptions& options, double threshold = 1e-6);

}  // namespace dret
