// Molecular chain, shared phonon mode, Drude baths and the Hamiltonians built from them
//
// Sites are 0-based in the library API. User-facing surfaces (config files,
// CSV headers, CLI) are 1-based.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dret/types.hpp"

namespace dret {

// Electronic sites in the single-exciton manifold.
struct MoleculeChain {
    std::vector<double> site_energies;  // Omega_j
    RealMatrix couplings;               // J_jk, symmetric, zero diagonal

    std::size_t site_count() const noexcept { return site_energies.size(); }

    // Nearest-neighbour chain with uniform coupling J (J_{j,j+1} = J_{j+1,j} = J).
    static MoleculeChain linear(std::vector<double> energies, double coupling);
};

// Single phonon mode shared by all sites. f_j fixes the displaced mode centre
// at Q_j = sqrt(2) f_j / omega in dimensionless phase-space coordinates.
struct SharedMode {
    double frequency{1.0};
    std::vector<double> site_couplings;  // f_j
};

// Per-site Drude-Lorentz bath. scaling = 0 everywhere is the local-bath model.
struct BathSpec {
    std::vector<double> reorganization;  // lambda_j
    std::vector<double> relaxation;      // gamma_j
    std::vector<double> scaling;         // s_j
    double thermal_energy{1.0};          // k_B T / hbar

    // beta*hbar*gamma_j < 1 for every site; the hierarchy drops Matsubara terms.
    bool high_temperature_valid() const noexcept;
    std::vector<std::string> warnings() const;
};

struct FockTruncation {
    int n_max{30};
    int escalation_cap{400};
};

struct ValidationReport {
    std::vector<std::string> failures;

    bool ok() const noexcept { return failures.empty(); }
    explicit operator bool() const noexcept { return ok(); }
    std::string summary() const;
};

ValidationReport validate_chain(const MoleculeChain& chain);
ValidationReport validate_mode(const SharedMode& mode, std::size_t site_count);
ValidationReport validate_bath(const BathSpec& bath, std::size_t site_count);

// Throws ValidationError with the report summary when the report fails.
void require(const ValidationReport& report, const std::string& what);

// Bare electronic Hamiltonian: diag(Omega_j) + J_jk.
RealMatrix electronic_hamiltonian(const MoleculeChain& chain);

// Basis index of |site> (x) |n> in the polaron product space.
inline std::size_t polaron_index(std::size_t site, int n, int n_max) noexcept {
    return site * static_cast<std::size_t>(n_max + 1) + static_cast<std::size_t>(n);
}

// H = H_e + H_ph + H_e-ph on |j> (x) |n>, n = 0..n_max:
//   H_e    = sum_j (Omega_j + f_j^2/omega)|j><j| + sum_{j!=k} J_jk |j><k|
//   H_ph   = omega (b^dag b + 1/2)
//   H_e-ph = -sum_j f_j |j><j| (x) (b^dag + b)
// The matrix is real symmetric.
RealMatrix build_polaron_hamiltonian(const MoleculeChain& chain, const SharedMode& mode,
                                     const FockTruncation& trunc,
                                     std::size_t max_dimension = 20000);

// Time-dependent Lamb shift of the Drude bath, 2 s_j lambda_j exp(-gamma_j t).
double lamb_shift(const BathSpec& bath, std::size_t site, double t);

// diag(Omega_j + lambda_j + lamb_shift_j(t)) + J_jk.
RealMatrix build_effective_electronic_hamiltonian(const MoleculeChain& chain,
                                                  const BathSpec& bath, double t);

// Drude-Lorentz spectral density (2 lambda_j / pi) omega gamma_j / (omega^2 + gamma_j^2).
double spectral_density(const BathSpec& bath, std::size_t site, double omega);

// Bath response kernel with Matsubara terms dropped:
// (2 lambda_j k_B T - i lambda_j gamma_j) exp(-gamma_j tau).
cplx bath_response_high_temperature(const BathSpec& bath, std::size_t site, double tau);

}  // namespace dret
