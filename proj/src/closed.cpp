// Polaron state handling and Chebyshev propagation

#include "dret/closed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/Sparse>

namespace dret {

PolaronState initial_state(const MoleculeChain& chain, const SharedMode& mode,
                           const FockTruncation& trunc, std::size_t start_site) {
    require(validate_chain(chain), "molecule chain");
    require(validate_mode(mode, chain.site_count()), "shared mode");
    if (start_site >= chain.site_count()) {
        throw std::out_of_range("initial_state: start site " + std::to_string(start_site + 1) +
                                " outside 1.." + std::to_string(chain.site_count()));
    }
    if (trunc.n_max < 1) throw ValidationError("Fock truncation n_max must be >= 1");
    PolaronState psi;
    psi.sites = chain.site_count();
    psi.n_max = trunc.n_max;
    psi.amplitudes = ComplexVector::Zero(static_cast<Eigen::Index>(psi.sites * psi.levels()));
    psi.amplitudes(static_cast<Eigen::Index>(polaron_index(start_site, 0, trunc.n_max))) = 1.0;
    return psi;
}

std::vector<double> site_populations(const PolaronState& psi) {
    std::vector<double> p(psi.sites, 0.0);
    const std::size_t levels = psi.levels();
    for (std::size_t k = 0; k < psi.sites; ++k) {
        double acc = 0.0;
        for (std::size_t n = 0; n < levels; ++n) {
            acc += std::norm(psi.amplitudes(static_cast<Eigen::Index>(k * levels + n)));
        }
        p[k] = acc;
    }
    return p;
}

double rms_displacement(std::span<const double> populations, std::size_t start_site) {
    double acc = 0.0;
    for (std::size_t k = 0; k < populations.size(); ++k) {
        const double d = static_cast<double>(k) - static_cast<double>(start_site);
        acc += d * d * populations[k];
    }
    return std::sqrt(std::max(acc, 0.0));
}

double total_energy_expectation(const RealMatrix& h, const PolaronState& psi) {
    if (h.rows() != psi.amplitudes.size()) {
        throw std::invalid_argument("total_energy_expectation: dimension mismatch");
    }
    const ComplexVector hpsi = h.cast<cplx>() * psi.amplitudes;
    return psi.amplitudes.dot(hpsi).real();
}

ComplexMatrix reduced_phonon_state(const PolaronState& psi) {
    const auto levels = static_cast<Eigen::Index>(psi.levels());
    ComplexMatrix rho = ComplexMatrix::Zero(levels, levels);
    for (std::size_t k = 0; k < psi.sites; ++k) {
        const auto block = psi.amplitudes.segment(static_cast<Eigen::Index>(k) * levels, levels);
        rho.noalias() += block * block.adjoint();
    }
    return rho;
}

std::vector<double> output_times(double tmax, double dt_out) {
    if (!(tmax > 0.0)) throw ValidationError("tmax must be positive");
    if (!(dt_out > 0.0)) throw ValidationError("dt_out must be positive");
    std::vector<double> times;
    const auto steps = static_cast<std::size_t>(std::floor(tmax / dt_out + 1e-9));
    times.reserve(steps + 2);
    for (std::size_t i = 0; i <= steps; ++i) times.push_back(static_cast<double>(i) * dt_out);
    if (tmax - times.back() > 1e-9 * dt_out) times.push_back(tmax);
    else times.back() = std::min(times.back(), tmax);
    return times;
}

std::vector<std::size_t> frame_indices(std::size_t samples, std::size_t count) {
    std::vector<std::size_t> idx;
    if (samples == 0 || count == 0) return idx;
    if (count == 1) return {0};
    for (std::size_t f = 0; f < count; ++f) {
        const double x = static_cast<double>(f) * static_cast<double>(samples - 1) /
                         static_cast<double>(count - 1);
        idx.push_back(static_cast<std::size_t>(std::llround(x)));
    }
    return idx;
}

namespace {

using SparseReal = Eigen::SparseMatrix<double, Eigen::RowMajor>;

class ChebyshevPropagator {
public:
    ChebyshevPropagator(const RealMatrix& h, double series_tolerance)
        : tol_(series_tolerance) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            const double radius = h.row(i).cwiseAbs().sum() - std::abs(h(i, i));
            lo = std::min(lo, h(i, i) - radius);
            hi = std::max(hi, h(i, i) + radius);
        }
        shift_ = 0.5 * (hi + lo);
        half_width_ = std::max(0.5 * (hi - lo), 1e-12);
        RealMatrix scaled = (h - shift_ * RealMatrix::Identity(h.rows(), h.cols())) / half_width_;
        hn_ = scaled.sparseView(0.0, 0.0);
        hn_.makeCompressed();
    }

    // psi <- exp(-i H tau) psi
    void apply(ComplexVector& psi, double tau) {
        const auto& coeff = coefficients(tau);
        ComplexVector prev = psi;
        ComplexVector cur = hn_ * psi;
        ComplexVector acc = coeff[0] * prev + coeff[1] * cur;
        for (std::size_t k = 2; k < coeff.size(); ++k) {
            ComplexVector next = 2.0 * (hn_ * cur) - prev;
            acc += coeff[k] * next;
            prev.swap(cur);
            cur.swap(next);
        }
        psi = std::polar(1.0, -shift_ * tau) * acc;
    }

private:
    const std::vector<cplx>& coefficients(double tau) {
        auto it = cache_.find(tau);
        if (it != cache_.end()) return it->second;
        const double x = half_width_ * tau;
        std::vector<cplx> c;
        const std::size_t limit = static_cast<std::size_t>(x) + 400;
        cplx phase(1.0, 0.0);  // (-i)^k
        for (std::size_t k = 0;; ++k) {
            const double jk = std::cyl_bessel_j(static_cast<double>(k), x);
            c.push_back((k == 0 ? 1.0 : 2.0) * phase * jk);
            phase *= cplx(0.0, -1.0);
            if (k >= 2 && static_cast<double>(k) > x && std::abs(jk) < tol_) break;
            if (k > limit) {
                throw NumericError("Chebyshev series did not converge for tau=" + std::to_string(tau));
            }
        }
        return cache_.emplace(tau, std::move(c)).first->second;
    }

    double tol_;
    double shift_{0.0};
    double half_width_{1.0};
    SparseReal hn_;
    std::map<double, std::vector<cplx>> cache_;
};

}  // namespace

TrajectoryResult evolve_closed(const RealMatrix& h, const PolaronState& psi0,
                               std::size_t start_site, const ClosedOptions& options) {
    if (h.rows() != h.cols() || h.rows() != psi0.amplitudes.size()) {
        throw std::invalid_argument("evolve_closed: Hamiltonian dimension " +
                                    std::to_string(h.rows()) + " does not match state dimension " +
                                    std::to_string(psi0.amplitudes.size()));
    }
    if (start_site >= psi0.sites) throw std::out_of_range("evolve_closed: start site out of range");

    TrajectoryResult out;
    out.times = output_times(options.tmax, options.dt_out);
    out.start_site = start_site;
    out.n_max = psi0.n_max;

    const auto frames = frame_indices(out.times.size(), options.wigner_frames);
    std::size_t next_frame = 0;

    ChebyshevPropagator prop(h, options.tolerance);
    const ComplexMatrix hc = h.cast<cplx>();
    PolaronState psi = psi0;

    for (std::size_t i = 0; i < out.times.size(); ++i) {
        if (i > 0) prop.apply(psi.amplitudes, out.times[i] - out.times[i - 1]);
        auto pops = site_populations(psi);
        out.rms_displacement.push_back(rms_displacement(pops, start_site));
        out.populations.push_back(std::move(pops));
        out.energy.push_back(psi.amplitudes.dot(hc * psi.amplitudes).real());
        out.norm.push_back(psi.norm());
        if (!std::isfinite(out.norm.back())) {
            throw NumericError("evolve_closed: non-finite state at t=" + std::to_string(out.times[i]));
        }
        while (next_frame < frames.size() && frames[next_frame] == i) {
            WignerFrame frame;
            frame.t = out.times[i];
            frame.field = wigner_function(reduced_phonon_state(psi), options.wigner_grid);
            frame.normalization = frame.field.integral();
            out.wigner_frames.push_back(std::move(frame));
            ++next_frame;
        }
        if (options.keep_states) out.states.push_back(psi);
    }
    return out;
}

FockConvergence converge_fock(const MoleculeChain& chain, const SharedMode& mode,
                              std::size_t start_site, const FockTruncation& trunc,
                              const ClosedOptions& options, double threshold) {
    FockConvergence result;
    int n = trunc.n_max;
    ClosedOptions probe = options;
    probe.wigner_frames = 0;
    probe.keep_states = false;
    while (true) {
        if (n >= trunc.escalation_cap) {
            throw NumericError("Fock truncation did not converge below escalation cap " +
                               std::to_string(trunc.escalation_cap));
        }
        FockTruncation lo{n, trunc.escalation_cap};
        FockTruncation hi{2 * n, trunc.escalation_cap};
        auto run = [&](const FockTruncation& tr, const ClosedOptions& opt) {
            return evolve_closed(build_polaron_hamiltonian(chain, mode, tr),
                                 initial_state(chain, mode, tr, start_site), start_site, opt);
        };
        auto a = run(lo, options);
        auto b = run(hi, probe);
        double change = 0.0;
        for (std::size_t i = 0; i < a.times.size(); ++i) {
            for (std::size_t k = 0; k < a.populations[i].size(); ++k) {
                change = std::max(change, std::abs(a.populations[i][k] - b.populations[i][k]));
            }
        }
        result.history.emplace_back(n, change);
        if (change < threshold) {
            result.accepted_n_max = n;
            result.max_population_change = change;
            result.trajectory = std::move(a);
            return result;
        }
        n = static_cast<int>(std::ceil(1.5 * n));
    }
}

}  // namespace dret
