// Slow, independent reference calculations for the test suite
//
// Nothing here calls the propagators, hierarchy code or kernels of the main
// library; only its plain parameter structs are reused.

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dret/model.hpp"

namespace dret::oracle {

struct OracleReport {
    std::string quantity;
    double reference{0.0};
    std::string target;
    double max_deviation{0.0};
    double threshold{0.0};

    bool passed() const noexcept { return max_deviation <= threshold; }
    std::string line() const;
};

// --------------------------------------------------------------------------
// exp(-i H t) psi0

enum class ExpmMethod { Eigendecomposition, TaylorSquaring };

inline constexpr std::size_t kMaxDenseDimension = 512;

// Throws std::length_error above kMaxDenseDimension.
ComplexVector dense_expm_evolve(const ComplexMatrix& h, const ComplexVector& psi0, double t,
                                ExpmMethod method = ExpmMethod::Eigendecomposition);

// --------------------------------------------------------------------------
// Bath kernels by quadrature

// Full bath response (1/hbar) int_0^inf Lambda(w) [coth(w/2kT) cos(w tau) - i sin(w tau)] dw
// for the Drude density. Gauss-Kronrod on [0, 50 gamma], Ooura Fourier
// quadrature for the tail. The real part diverges at tau = 0 (std::domain_error).
cplx response_quadrature(const BathSpec& bath, std::size_t site, double tau);

// Spectral sum rule int_0^inf Lambda(w)/w dw, which should equal lambda.
double spectral_sum_rule(const BathSpec& bath, std::size_t site);

// Lineshape g_j(t) = int_0^t dt1 int_0^t1 dt2 alpha_j(t2) for the high-temperature
// kernel, by nested adaptive quadrature.
cplx lineshape_quadrature(const BathSpec& bath, std::size_t site, double t);

// Pure-dephasing coherence for two uncoupled sites:
//   rho_12(t) = rho_12(0) exp(-g_1(t) - conj(g_2(t))) exp(-i int_0^t dW_eff(t') dt')
// with dW_eff the effective (Lamb-shifted) splitting. Rejects J_12 != 0.
cplx dephasing_analytic(const MoleculeChain& chain, const BathSpec& bath, cplx rho12_0, double t);

// --------------------------------------------------------------------------
// Hierarchy reference: ADOs keyed by multi-index, Eigen matrices, linear search-free map.

using AdoMap = std::map<std::vector<int>, ComplexMatrix>;

// Every multi-index with sum < cutoff, zero-initialised.
AdoMap empty_hierarchy(std::size_t sites, std::size_t cutoff);

// Right-hand side evaluated term by term with dense commutators, including
// the time-dependent Lamb shift of the shared bath.
AdoMap naive_heom_rhs(const MoleculeChain& chain, const BathSpec& bath, const AdoMap& ados, double t);

struct LocalHeomRun {
    std::vector<double> times;
    std::vector<std::vector<double>> populations;
    std::vector<ComplexMatrix> rho;
};

// Standard local-bath hierarchy with the static Hamiltonian diag(Omega_j + lambda_j) + J,
// advanced by a truncated Taylor series of the (time-independent) generator.
// Requires scaling = 0 everywhere.
LocalHeomRun local_bath_heom(const MoleculeChain& chain, const BathSpec& bath, const ComplexMatrix& rho0,
                             std::size_t cutoff, double tmax, double dt_out);

}  // namespace dret::oracle
