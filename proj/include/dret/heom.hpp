// Hierarchically coupled master equations for Drude baths with a time-dependent Lamb shift
//
//   d sigma(n)/dt = -i [H_eff(t), sigma(n)] - sum_j n_j gamma_j sigma(n)
//                   + sum_j i [P_j, sigma(n_j+)]
//                   + sum_j n_j ( i 2 lambda_j kT [P_j, sigma(n_j-)] + lambda_j gamma_j {P_j, sigma(n_j-)} )
//
// with P_j = |j><j| and H_eff(t) from build_effective_electronic_hamiltonian.
// sigma(0) is the reduced electronic state; ranks >= cutoff are dropped.

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dret/model.hpp"
#include "dret/ode.hpp"

namespace dret::heom {

inline constexpr std::ptrdiff_t kAbsent = -1;

// All multi-indices n = (n_1..n_N) with sum n_j < cutoff, in lexicographic order.
struct Hierarchy {
    std::size_t sites{0};
    std::size_t cutoff{0};
    std::vector<int> indices;           // count * sites
    std::vector<std::ptrdiff_t> plus;   // position of n_j+, or kAbsent
    std::vector<std::ptrdiff_t> minus;  // position of n_j-, or kAbsent

    std::size_t count() const noexcept { return sites ? indices.size() / sites : 0; }
    std::span<const int> index(std::size_t k) const {
        return {indices.data() + k * sites, sites};
    }
    int rank(std::size_t k) const;
    std::optional<std::size_t> find(std::span<const int> n) const;
};

// C(cutoff - 1 + sites, sites); throws ValidationError past `max_count`.
std::size_t hierarchy_size(std::size_t sites, std::size_t cutoff,
                           std::size_t max_count = 5'000'000);

Hierarchy enumerate_hierarchy(std::size_t sites, std::size_t cutoff,
                              std::size_t max_count = 5'000'000);

// One N x N matrix per hierarchy index, stored row-major and contiguous.
struct AdoSet {
    std::shared_ptr<const Hierarchy> hierarchy;
    std::vector<cplx> data;

    explicit AdoSet(std::shared_ptr<const Hierarchy> h);

    std::size_t matrix_size() const noexcept { return hierarchy->sites * hierarchy->sites; }
    ComplexMatrix matrix(std::size_t k) const;
    void set_matrix(std::size_t k, const ComplexMatrix& m);
    ComplexMatrix density() const { return matrix(0); }
};

// Time-independent coefficients of the hierarchy right-hand side.
class HeomOperator {
public:
    HeomOperator(std::shared_ptr<const Hierarchy> hierarchy, const MoleculeChain& chain,
                 const BathSpec& bath, std::size_t threads = 1);

    // General right-hand side, valid for any input.
    void apply(double t, std::span<const cplx> in, std::span<cplx> out) const;

    // Computes the upper triangle and mirrors it; valid only when every input
    // matrix is Hermitian, which the hierarchy preserves.
    void apply_hermitian(double t, std::span<const cplx> in, std::span<cplx> out) const;

    const Hierarchy& hierarchy() const noexcept { return *hierarchy_; }
    std::size_t threads() const noexcept { return threads_; }

private:
    template <bool Hermitian>
    void apply_range(double t, std::span<const cplx> in, std::span<cplx> out, std::size_t begin,
                     std::size_t end) const;
    template <bool Hermitian>
    void dispatch(double t, std::span<const cplx> in, std::span<cplx> out) const;

    std::shared_ptr<const Hierarchy> hierarchy_;
    std::size_t n_{0};
    std::vector<double> static_diag_;  // Omega_j + lambda_j
    std::vector<double> lamb_amp_;     // 2 s_j lambda_j
    std::vector<double> gamma_;
    std::vector<double> thermal_;      // 2 lambda_j kT
    std::vector<double> dissipative_;  // lambda_j gamma_j
    std::vector<std::vector<std::pair<std::size_t, double>>> hops_;  // per row: (col, J)
    std::vector<double> damping_;      // per ADO: sum_j n_j gamma_j
    std::size_t threads_{1};
};

AdoSet heom_rhs(const AdoSet& ados, const MoleculeChain& chain, const BathSpec& bath, double t);

struct HeomOptions {
    double tmax{10.0};
    double dt_out{0.05};
    std::size_t cutoff{6};
    double rtol{1e-7};
    double atol{1e-10};
    std::optional<double> fixed_step;  // classical RK4 when set
    std::size_t threads{1};
    double psd_tolerance{1e-5};
    std::optional<std::size_t> reference_site;  // for Delta(t); default argmax of initial populations
};

struct HeomResult {
    std::vector<double> times;
    std::vector<ComplexMatrix> rho;
    std::vector<std::vector<double>> populations;
    std::vector<double> rms_displacement;
    std::vector<double> trace;
    std::vector<std::vector<double>> coherences;  // |rho_jk| for j < k, row-major pair order
    std::size_t reference_site{0};
    std::size_t cutoff{0};
    std::size_t ado_count{0};
    double rtol{0.0}, atol{0.0};
    std::optional<double> fixed_step;
    ode::StepStats stats;
    std::vector<std::string> warnings;
};

HeomResult heom_evolve(const MoleculeChain& chain, const BathSpec& bath, const ComplexMatrix& rho0,
                       const HeomOptions& options);

// rho_e(0) = |site><site|.
ComplexMatrix site_projector(std::size_t sites, std::size_t site);

struct HeomProblem {
    MoleculeChain chain;
    BathSpec bath;
    ComplexMatrix rho0;
    HeomOptions options;
};

struct ConvergenceReport {
    std::vector<std::size_t> cutoffs;
    std::vector<double> deviations;  // max |dP| between cutoffs[i] and cutoffs[i+1]
    std::optional<std::size_t> accepted_cutoff;
    double threshold{1e-3};
    std::vector<HeomResult> runs;
};

ConvergenceReport convergence_scan(const HeomProblem& problem, std::span<const std::size_t> cutoffs,
                                   double threshold = 1e-3);

double max_population_deviation(const HeomResult& a, const HeomResult& b);

}  // namespace dret::heom
