// Hierarchy enumeration, right-hand side and propagation

#include "dret/heom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "dret/closed.hpp"

namespace dret::heom {

namespace {

void enumerate_recursive(std::size_t site, std::size_t sites, int budget, std::vector<int>& cur,
                         std::vector<int>& out) {
    if (site == sites) {
        out.insert(out.end(), cur.begin(), cur.end());
        return;
    }
    for (int v = 0; v <= budget; ++v) {
        cur[site] = v;
        enumerate_recursive(site + 1, sites, budget - v, cur, out);
    }
    cur[site] = 0;
}

}  // namespace

int Hierarchy::rank(std::size_t k) const {
    int r = 0;
    for (int v : index(k)) r += v;
    return r;
}

std::optional<std::size_t> Hierarchy::find(std::span<const int> n) const {
    if (n.size() != sites) return std::nullopt;
    std::size_t lo = 0, hi = count();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const auto m = index(mid);
        if (std::lexicographical_compare(m.begin(), m.end(), n.begin(), n.end())) lo = mid + 1;
        else hi = mid;
    }
    if (lo < count() && std::equal(n.begin(), n.end(), index(lo).begin())) return lo;
    return std::nullopt;
}

std::size_t hierarchy_size(std::size_t sites, std::size_t cutoff, std::size_t max_count) {
    if (sites == 0 || cutoff == 0) throw ValidationError("hierarchy needs sites >= 1 and cutoff >= 1");
    // C(cutoff - 1 + sites, sites) computed incrementally.
    const std::size_t top = cutoff - 1 + sites;
    const std::size_t k = std::min(sites, cutoff - 1);
    double value = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        value = value * static_cast<double>(top - k + i) / static_cast<double>(i);
        if (value > static_cast<double>(max_count)) {
            throw ValidationError("hierarchy with " + std::to_string(sites) + " sites and cutoff " +
                                  std::to_string(cutoff) + " exceeds " + std::to_string(max_count) +
                                  " auxiliary operators");
        }
    }
    return static_cast<std::size_t>(std::llround(value));
}

Hierarchy enumerate_hierarchy(std::size_t sites, std::size_t cutoff, std::size_t max_count) {
    const std::size_t expected = hierarchy_size(sites, cutoff, max_count);
    Hierarchy h;
    h.sites = sites;
    h.cutoff = cutoff;
    h.indices.reserve(expected * sites);
    std::vector<int> cur(sites, 0);
    enumerate_recursive(0, sites, static_cast<int>(cutoff) - 1, cur, h.indices);

    const std::size_t count = h.count();
    h.plus.assign(count * sites, kAbsent);
    h.minus.assign(count * sites, kAbsent);
    std::vector<int> probe(sites);
    for (std::size_t k = 0; k < count; ++k) {
        const auto n = h.index(k);
        for (std::size_t j = 0; j < sites; ++j) {
            std::copy(n.begin(), n.end(), probe.begin());
            probe[j] += 1;
            if (auto pos = h.find(probe)) h.plus[k * sites + j] = static_cast<std::ptrdiff_t>(*pos);
            if (n[j] > 0) {
                probe[j] -= 2;
                if (auto pos = h.find(probe)) h.minus[k * sites + j] = static_cast<std::ptrdiff_t>(*pos);
            }
        }
    }
    return h;
}

AdoSet::AdoSet(std::shared_ptr<const Hierarchy> h)
    : hierarchy(std::move(h)), data(hierarchy->count() * hierarchy->sites * hierarchy->sites) {}

ComplexMatrix AdoSet::matrix(std::size_t k) const {
    const auto n = static_cast<Eigen::Index>(hierarchy->sites);
    ComplexMatrix m(n, n);
    const cplx* src = data.data() + k * matrix_size();
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) m(a, b) = src[a * n + b];
    return m;
}

void AdoSet::set_matrix(std::size_t k, const ComplexMatrix& m) {
    const auto n = static_cast<Eigen::Index>(hierarchy->sites);
    if (m.rows() != n || m.cols() != n) throw std::invalid_argument("AdoSet: matrix shape mismatch");
    cplx* dst = data.data() + k * matrix_size();
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) dst[a * n + b] = m(a, b);
}

HeomOperator::HeomOperator(std::shared_ptr<const Hierarchy> hierarchy, const MoleculeChain& chain,
                           const BathSpec& bath, std::size_t threads)
    : hierarchy_(std::move(hierarchy)), n_(chain.site_count()), threads_(std::max<std::size_t>(1, threads)) {
    require(validate_chain(chain), "molecule chain");
    require(validate_bath(bath, n_), "bath");
    if (hierarchy_->sites != n_) throw ValidationError("hierarchy site count does not match chain");

    hops_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        static_diag_.push_back(chain.site_energies[j] + bath.reorganization[j]);
        lamb_amp_.push_back(2.0 * bath.scaling[j] * bath.reorganization[j]);
        gamma_.push_back(bath.relaxation[j]);
        thermal_.push_back(2.0 * bath.reorganization[j] * bath.thermal_energy);
        dissipative_.push_back(bath.reorganization[j] * bath.relaxation[j]);
        for (std::size_t k = 0; k < n_; ++k) {
            const double v = chain.couplings(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            if (k != j && v != 0.0) hops_[j].emplace_back(k, v);
        }
    }
    const auto& h = *hierarchy_;
    damping_.resize(h.count());
    for (std::size_t k = 0; k < h.count(); ++k) {
        double d = 0.0;
        const auto idx = h.index(k);
        for (std::size_t j = 0; j < n_; ++j) d += idx[j] * gamma_[j];
        damping_[k] = d;
    }
}

template <bool Hermitian>
void HeomOperator::apply_range(double t, std::span<const cplx> in, std::span<cplx> out,
                               std::size_t begin, std::size_t end) const {
    const std::size_t n = n_;
    const std::size_t msize = n * n;
    const auto& h = *hierarchy_;
    constexpr cplx I(0.0, 1.0);

    std::vector<double> diag(n);
    for (std::size_t j = 0; j < n; ++j) diag[j] = static_diag_[j] + lamb_amp_[j] * std::exp(-gamma_[j] * t);

    for (std::size_t k = begin; k < end; ++k) {
        const cplx* s = in.data() + k * msize;
        cplx* o = out.data() + k * msize;
        const double damp = damping_[k];

        // -i [H, sigma] - damping sigma
        for (std::size_t a = 0; a < n; ++a) {
            const std::size_t b0 = Hermitian ? a : 0;
            for (std::size_t b = b0; b < n; ++b) {
                cplx comm = (diag[a] - diag[b]) * s[a * n + b];
                for (const auto& [c, v] : hops_[a]) comm += v * s[c * n + b];
                for (const auto& [c, v] : hops_[b]) comm -= v * s[a * n + c];
                o[a * n + b] = -I * comm - damp * s[a * n + b];
            }
        }

        const auto idx = h.index(k);
        for (std::size_t j = 0; j < n; ++j) {
            const std::ptrdiff_t up = h.plus[k * n + j];
            if (up != kAbsent) {
                const cplx* sp = in.data() + static_cast<std::size_t>(up) * msize;
                // i [P_j, sigma]: row j gets +i, column j gets -i, (j, j) cancels.
                for (std::size_t b = Hermitian ? j + 1 : 0; b < n; ++b) {
                    if (b != j) o[j * n + b] += I * sp[j * n + b];
                }
                for (std::size_t a = 0; a < (Hermitian ? j : n); ++a) {
                    if (a != j) o[a * n + j] -= I * sp[a * n + j];
                }
            }
            const std::ptrdiff_t down = h.minus[k * n + j];
            if (down != kAbsent) {
                const cplx* sm = in.data() + static_cast<std::size_t>(down) * msize;
                const double nj = idx[j];
                const cplx row = nj * cplx(dissipative_[j], thermal_[j]);
                const cplx col = nj * cplx(dissipative_[j], -thermal_[j]);
                for (std::size_t b = Hermitian ? j + 1 : 0; b < n; ++b) {
                    if (b != j) o[j * n + b] += row * sm[j * n + b];
                }
                for (std::size_t a = 0; a < (Hermitian ? j : n); ++a) {
                    if (a != j) o[a * n + j] += col * sm[a * n + j];
                }
                o[j * n + j] += 2.0 * nj * dissipative_[j] * sm[j * n + j];
            }
        }

        if constexpr (Hermitian) {
            for (std::size_t a = 0; a < n; ++a) {
                o[a * n + a] = cplx(o[a * n + a].real(), 0.0);
                for (std::size_t b = a + 1; b < n; ++b) o[b * n + a] = std::conj(o[a * n + b]);
            }
        }
    }
}

template <bool Hermitian>
void HeomOperator::dispatch(double t, std::span<const cplx> in, std::span<cplx> out) const {
    const std::size_t count = hierarchy_->count();
    if (in.size() != count * n_ * n_ || out.size() != in.size()) {
        throw std::invalid_argument("HeomOperator: state size mismatch");
    }
    const std::size_t workers = std::min(threads_, count);
    if (workers <= 1) {
        apply_range<Hermitian>(t, in, out, 0, count);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t b = std::min(count, w * chunk);
        const std::size_t e = std::min(count, b + chunk);
        if (b < e) pool.emplace_back([=, this] { apply_range<Hermitian>(t, in, out, b, e); });
    }
    apply_range<Hermitian>(t, in, out, 0, std::min(count, chunk));
}

void HeomOperator::apply(double t, std::span<const cplx> in, std::span<cplx> out) const {
    dispatch<false>(t, in, out);
}

void HeomOperator::apply_hermitian(double t, std::span<const cplx> in, std::span<cplx> out) const {
    dispatch<true>(t, in, out);
}

AdoSet heom_rhs(const AdoSet& ados, const MoleculeChain& chain, const BathSpec& bath, double t) {
    if (t < 0.0) throw std::domain_error("heom_rhs: t must be >= 0");
    HeomOperator op(ados.hierarchy, chain, bath);
    AdoSet out(ados.hierarchy);
    op.apply(t, ados.data, out.data);
    return out;
}

ComplexMatrix site_projector(std::size_t sites, std::size_t site) {
    if (site >= sites) throw std::out_of_range("site_projector: site out of range");
    ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(sites), static_cast<Eigen::Index>(sites));
    rho(static_cast<Eigen::Index>(site), static_cast<Eigen::Index>(site)) = 1.0;
    return rho;
}

namespace {

void validate_initial_density(const ComplexMatrix& rho0, std::size_t sites) {
    const auto n = static_cast<Eigen::Index>(sites);
    if (rho0.rows() != n || rho0.cols() != n) {
        throw ValidationError("initial density matrix shape does not match site count");
    }
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw ValidationError("initial density matrix is not Hermitian");
    }
    if (std::abs(rho0.trace() - cplx(1.0, 0.0)) > 1e-10) {
        throw ValidationError("initial density matrix does not have unit trace");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho0);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw ValidationError("initial density matrix is not positive semidefinite");
    }
}

}  // namespace

HeomResult heom_evolve(const MoleculeChain& chain, const BathSpec& bath, const ComplexMatrix& rho0,
                       const HeomOptions& options) {
    require(validate_chain(chain), "molecule chain");
    const std::size_t n = chain.site_count();
    require(validate_bath(bath, n), "bath");
    validate_initial_density(rho0, n);
    if (options.cutoff < 1) throw ValidationError("hierarchy cutoff must be >= 1");

    auto hierarchy = std::make_shared<const Hierarchy>(enumerate_hierarchy(n, options.cutoff));
    HeomOperator op(hierarchy, chain, bath, options.threads);

    HeomResult res;
    res.times = output_times(options.tmax, options.dt_out);
    res.cutoff = options.cutoff;
    res.ado_count = hierarchy->count();
    res.rtol = options.rtol;
    res.atol = options.atol;
    res.fixed_step = options.fixed_step;
    res.warnings = bath.warnings();

    std::size_t ref = 0;
    if (options.reference_site) {
        ref = *options.reference_site;
        if (ref >= n) throw std::out_of_range("heom_evolve: reference site out of range");
    } else {
        for (std::size_t j = 1; j < n; ++j) {
            if (rho0(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real() >
                rho0(static_cast<Eigen::Index>(ref), static_cast<Eigen::Index>(ref)).real()) ref = j;
        }
    }
    res.reference_site = ref;

    AdoSet state(hierarchy);
    state.set_matrix(0, rho0);

    const ode::Rhs rhs = [&op](double t, std::span<const cplx> y, std::span<cplx> dy) {
        op.apply_hermitian(t, y, dy);
    };
    ode::AdaptiveOptions aopts;
    aopts.rtol = options.rtol;
    aopts.atol = options.atol;
    ode::DormandPrince stepper(state.data.size(), aopts);
    double step = 0.0;

    for (std::size_t i = 0; i < res.times.size(); ++i) {
        if (i > 0) {
            if (options.fixed_step) {
                ode::advance_rk4(rhs, state.data, res.times[i - 1], res.times[i], *options.fixed_step, res.stats);
            } else {
                stepper.advance(rhs, state.data, res.times[i - 1], res.times[i], step, res.stats);
            }
        }
        ComplexMatrix rho = state.density();
        if (!rho.allFinite()) {
            throw NumericError("heom_evolve: non-finite density matrix at t=" + std::to_string(res.times[i]));
        }
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
        const double min_eig = es.eigenvalues().minCoeff();
        if (herm > 1e-8 || min_eig < -options.psd_tolerance) {
            std::ostringstream os;
            os << "heom_evolve: non-physical reduced state at t=" << res.times[i]
               << " (min eigenvalue " << min_eig << ", hermiticity defect " << herm
               << ", cutoff " << options.cutoff << ")";
            throw NumericError(os.str());
        }

        std::vector<double> pops(n);
        for (std::size_t j = 0; j < n; ++j) pops[j] = rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real();
        std::vector<double> coh;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                coh.push_back(std::abs(rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))));
        res.rms_displacement.push_back(rms_displacement(pops, ref));
        res.trace.push_back(rho.trace().real());
        res.populations.push_back(std::move(pops));
        res.coherences.push_back(std::move(coh));
        res.rho.push_back(std::move(rho));
    }
    return res;
}

double max_population_deviation(const HeomResult& a, const HeomResult& b) {
    if (a.times.size() != b.times.size()) throw std::invalid_argument("result time grids differ");
    double dev = 0.0;
    for (std::size_t i = 0; i < a.times.size(); ++i)
        for (std::size_t j = 0; j < a.populations[i].size(); ++j)
            dev = std::max(dev, std::abs(a.populations[i][j] - b.populations[i][j]));
    return dev;
}

ConvergenceReport convergence_scan(const HeomProblem& problem, std::span<const std::size_t> cutoffs,
                                   double threshold) {
    if (cutoffs.size() < 2) throw ValidationError("convergence_scan needs at least two cutoffs");
    ConvergenceReport rep;
    rep.threshold = threshold;
    rep.cutoffs.assign(cutoffs.begin(), cutoffs.end());
    for (std::size_t c : cutoffs) {
        HeomOptions opt = problem.options;
        opt.cutoff = c;
        rep.runs.push_back(heom_evolve(problem.chain, problem.bath, problem.rho0, opt));
    }
    for (std::size_t i = 0; i + 1 < rep.runs.size(); ++i) {
        rep.deviations.push_back(max_population_deviation(rep.runs[i], rep.runs[i + 1]));
        if (!rep.accepted_cutoff && rep.deviations.back() < threshold) rep.accepted_cutoff = rep.cutoffs[i];
    }
    return rep;
}

}  // namespace dret::heom
