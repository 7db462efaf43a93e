// Hamiltonian constructors and Drude bath kernels

#include "dret/model.hpp"

#include <cmath>
#include <sstream>

namespace dret {

namespace {

bool finite(double x) { return std::isfinite(x); }

void check_site(const BathSpec& bath, std::size_t site) {
    if (site >= bath.reorganization.size()) {
        throw std::out_of_range("bath site index out of range");
    }
}

}  // namespace

MoleculeChain MoleculeChain::linear(std::vector<double> energies, double coupling) {
    MoleculeChain chain;
    const auto n = static_cast<Eigen::Index>(energies.size());
    chain.site_energies = std::move(energies);
    chain.couplings = RealMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        chain.couplings(j, j + 1) = coupling;
        chain.couplings(j + 1, j) = coupling;
    }
    return chain;
}

bool BathSpec::high_temperature_valid() const noexcept {
    for (double g : relaxation) {
        if (g / thermal_energy >= 1.0) return false;
    }
    return true;
}

std::vector<std::string> BathSpec::warnings() const {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < relaxation.size(); ++j) {
        const double bg = relaxation[j] / thermal_energy;
        if (bg >= 1.0) {
            std::ostringstream os;
            os << "site " << j + 1 << ": beta*hbar*gamma = " << bg
               << " >= 1, high-temperature hierarchy truncation is not justified";
            out.push_back(os.str());
        }
    }
    return out;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (i) os << "; ";
        os << failures[i];
    }
    return os.str();
}

ValidationReport validate_chain(const MoleculeChain& chain) {
    ValidationReport r;
    const auto n = chain.site_count();
    if (n == 0) {
        r.failures.emplace_back("chain has no sites");
        return r;
    }
    if (static_cast<std::size_t>(chain.couplings.rows()) != n ||
        static_cast<std::size_t>(chain.couplings.cols()) != n) {
        r.failures.emplace_back("coupling matrix shape does not match site count");
        return r;
    }
    for (double e : chain.site_energies) {
        if (!finite(e)) {
            r.failures.emplace_back("non-finite site energy");
            break;
        }
    }
    bool asym = false, diag = false, nonfinite = false;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double v = chain.couplings(j, k);
            if (!finite(v)) nonfinite = true;
            if (j == k && v != 0.0) diag = true;
            if (chain.couplings(j, k) != chain.couplings(k, j)) asym = true;
        }
    }
    if (nonfinite) r.failures.emplace_back("non-finite coupling");
    if (asym) r.failures.emplace_back("asymmetric couplings (J_jk != J_kj)");
    if (diag) r.failures.emplace_back("non-zero coupling diagonal");
    return r;
}

ValidationReport validate_mode(const SharedMode& mode, std::size_t site_count) {
    ValidationReport r;
    if (!(mode.frequency > 0.0) || !finite(mode.frequency)) {
        r.failures.emplace_back("mode frequency must be positive and finite");
    }
    if (mode.site_couplings.size() != site_count) {
        r.failures.emplace_back("mode site_couplings length does not match site count");
    }
    for (double f : mode.site_couplings) {
        if (!finite(f)) {
            r.failures.emplace_back("non-finite mode coupling");
            break;
        }
    }
    return r;
}

ValidationReport validate_bath(const BathSpec& bath, std::size_t site_count) {
    ValidationReport r;
    if (bath.reorganization.size() != site_count || bath.relaxation.size() != site_count ||
        bath.scaling.size() != site_count) {
        r.failures.emplace_back("bath lists must have one entry per site");
        return r;
    }
    for (std::size_t j = 0; j < site_count; ++j) {
        if (!(bath.reorganization[j] >= 0.0) || !finite(bath.reorganization[j])) {
            r.failures.emplace_back("reorganization energy must be >= 0 (site " +
                                    std::to_string(j + 1) + ")");
        }
        if (!(bath.relaxation[j] > 0.0) || !finite(bath.relaxation[j])) {
            r.failures.emplace_back("relaxation rate must be > 0 (site " +
                                    std::to_string(j + 1) + ")");
        }
        if (!finite(bath.scaling[j])) {
            r.failures.emplace_back("non-finite scaling (site " + std::to_string(j + 1) + ")");
        }
    }
    if (!(bath.thermal_energy > 0.0) || !finite(bath.thermal_energy)) {
        r.failures.emplace_back("thermal energy must be > 0");
    }
    return r;
}

void require(const ValidationReport& report, const std::string& what) {
    if (!report.ok()) throw ValidationError(what + ": " + report.summary());
}

RealMatrix electronic_hamiltonian(const MoleculeChain& chain) {
    RealMatrix h = chain.couplings;
    for (std::size_t j = 0; j < chain.site_count(); ++j) {
        h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = chain.site_energies[j];
    }
    return h;
}

RealMatrix build_polaron_hamiltonian(const MoleculeChain& chain, const SharedMode& mode,
                                     const FockTruncation& trunc, std::size_t max_dimension) {
    require(validate_chain(chain), "molecule chain");
    require(validate_mode(mode, chain.site_count()), "shared mode");
    if (trunc.n_max < 1) throw ValidationError("Fock truncation n_max must be >= 1");

    const std::size_t sites = chain.site_count();
    const std::size_t levels = static_cast<std::size_t>(trunc.n_max) + 1;
    if (levels > max_dimension / sites) {
        throw ValidationError("polaron dimension " + std::to_string(sites * levels) +
                              " exceeds limit " + std::to_string(max_dimension));
    }
    const auto dim = static_cast<Eigen::Index>(sites * levels);
    const double w = mode.frequency;

    RealMatrix h = RealMatrix::Zero(dim, dim);
    for (std::size_t j = 0; j < sites; ++j) {
        const double fj = mode.site_couplings[j];
        const double onsite = chain.site_energies[j] + fj * fj / w;
        for (int n = 0; n <= trunc.n_max; ++n) {
            const auto a = static_cast<Eigen::Index>(polaron_index(j, n, trunc.n_max));
            h(a, a) = onsite + w * (n + 0.5);
            if (n < trunc.n_max) {
                const auto b = static_cast<Eigen::Index>(polaron_index(j, n + 1, trunc.n_max));
                const double ladder = -fj * std::sqrt(static_cast<double>(n + 1));
                h(a, b) = ladder;
                h(b, a) = ladder;
            }
        }
        for (std::size_t k = 0; k < sites; ++k) {
            const double jk = chain.couplings(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            if (k == j || jk == 0.0) continue;
            for (int n = 0; n <= trunc.n_max; ++n) {
                h(static_cast<Eigen::Index>(polaron_index(j, n, trunc.n_max)),
                  static_cast<Eigen::Index>(polaron_index(k, n, trunc.n_max))) = jk;
            }
        }
    }
    return h;
}

double lamb_shift(const BathSpec& bath, std::size_t site, double t) {
    check_site(bath, site);
    if (t < 0.0) throw std::domain_error("lamb_shift: t must be >= 0");
    return 2.0 * bath.scaling[site] * bath.reorganization[site] *
           std::exp(-bath.relaxation[site] * t);
}

RealMatrix build_effective_electronic_hamiltonian(const MoleculeChain& chain,
                                                  const BathSpec& bath, double t) {
    if (t < 0.0) throw std::domain_error("effective Hamiltonian: t must be >= 0");
    RealMatrix h = electronic_hamiltonian(chain);
    for (std::size_t j = 0; j < chain.site_count(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        h(i, i) += bath.reorganization[j] + lamb_shift(bath, j, t);
    }
    return h;
}

double spectral_density(const BathSpec& bath, std::size_t site, double omega) {
    check_site(bath, site);
    if (omega < 0.0) throw std::domain_error("spectral_density: omega must be >= 0");
    const double g = bath.relaxation[site];
    return (2.0 * bath.reorganization[site] / M_PI) * omega * g / (omega * omega + g * g);
}

cplx bath_response_high_temperature(const BathSpec& bath, std::size_t site, double tau) {
    check_site(bath, site);
    if (tau < 0.0) throw std::domain_error("bath response: tau must be >= 0");
    const double lam = bath.reorganization[site];
    const double g = bath.relaxation[site];
    return cplx(2.0 * lam * bath.thermal_energy, -lam * g) * std::exp(-g * tau);
}

}  // namespace dret
