// Wigner function of a Fock-space density matrix

#include "dret/closed.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dret {

double PhaseGrid::q_at(std::size_t i) const {
    if (q_points < 2) return q_min;
    return q_min + (q_max - q_min) * static_cast<double>(i) / static_cast<double>(q_points - 1);
}

double PhaseGrid::p_at(std::size_t i) const {
    if (p_points < 2) return p_min;
    return p_min + (p_max - p_min) * static_cast<double>(i) / static_cast<double>(p_points - 1);
}

PhaseGrid PhaseGrid::symmetric(double extent, std::size_t points) {
    return PhaseGrid{-extent, extent, -extent, extent, points, points};
}

double WignerField::integral() const {
    const std::size_t nq = grid.q_points, np = grid.p_points;
    if (nq < 2 || np < 2) return 0.0;
    const double dq = (grid.q_max - grid.q_min) / static_cast<double>(nq - 1);
    const double dp = (grid.p_max - grid.p_min) / static_cast<double>(np - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        const double wq = (i == 0 || i == nq - 1) ? 0.5 : 1.0;
        for (std::size_t j = 0; j < np; ++j) {
            const double wp = (j == 0 || j == np - 1) ? 0.5 : 1.0;
            acc += wq * wp * values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return acc * dq * dp;
}

double WignerField::at_origin() const {
    auto nearest = [](double lo, double hi, std::size_t n) {
        if (n < 2) return std::size_t{0};
        const double x = (0.0 - lo) / (hi - lo) * static_cast<double>(n - 1);
        return static_cast<std::size_t>(std::clamp<long long>(std::llround(x), 0, static_cast<long long>(n - 1)));
    };
    return values(static_cast<Eigen::Index>(nearest(grid.q_min, grid.q_max, grid.q_points)),
                  static_cast<Eigen::Index>(nearest(grid.p_min, grid.p_max, grid.p_points)));
}

int occupied_fock_max(const ComplexMatrix& rho, double threshold) {
    for (Eigen::Index n = rho.rows() - 1; n > 0; --n) {
        if (std::abs(rho(n, n)) > threshold) return static_cast<int>(n);
    }
    return 0;
}

WignerField wigner_function(const ComplexMatrix& rho, const PhaseGrid& grid,
                            double normalization_tolerance) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        throw std::invalid_argument("wigner_function: density matrix must be square and non-empty");
    }
    if (grid.q_points < 2 || grid.p_points < 2 || !(grid.q_max > grid.q_min) ||
        !(grid.p_max > grid.p_min)) {
        throw ValidationError("wigner_function: degenerate phase-space grid");
    }

    const double trace = rho.trace().real();
    double mean_n = 0.0;
    for (Eigen::Index n = 0; n < rho.rows(); ++n) mean_n += static_cast<double>(n) * rho(n, n).real();
    if (trace > 0.0) mean_n /= trace;
    const double reach = std::sqrt(2.0 * std::max(mean_n, 0.0)) + 2.0;
    if (grid.q_min > -reach || grid.q_max < reach || grid.p_min > -reach || grid.p_max < reach) {
        std::ostringstream os;
        os << "wigner_function: grid must span at least +/-" << reach << " in Q and P";
        throw ValidationError(os.str());
    }

    // Levels above the occupied space contribute nothing.
    const int m_levels = occupied_fock_max(rho, 1e-14) + 1;

    WignerField field;
    field.grid = grid;
    field.values = RealMatrix::Zero(static_cast<Eigen::Index>(grid.q_points),
                                    static_cast<Eigen::Index>(grid.p_points));

    std::vector<double> sqrt_int(static_cast<std::size_t>(m_levels) + 1);
    for (std::size_t k = 0; k < sqrt_int.size(); ++k) sqrt_int[k] = std::sqrt(static_cast<double>(k));

    // Laguerre recursion over the matrix elements W_mn(alpha), alpha = (Q + iP)/sqrt(2).
    std::vector<cplx> wl(static_cast<std::size_t>(m_levels));
    for (std::size_t iq = 0; iq < grid.q_points; ++iq) {
        const double q = grid.q_at(iq);
        for (std::size_t ip = 0; ip < grid.p_points; ++ip) {
            const double p = grid.p_at(ip);
            const cplx a(q / std::sqrt(2.0), p / std::sqrt(2.0));
            const cplx a2 = 2.0 * a;
            const cplx a2c = 2.0 * std::conj(a);
            wl[0] = std::exp(-2.0 * std::norm(a)) / M_PI;
            double w = rho(0, 0).real() * wl[0].real();
            for (int n = 1; n < m_levels; ++n) {
                wl[n] = a2 * wl[n - 1] / sqrt_int[n];
                w += 2.0 * (rho(0, n) * wl[n]).real();
            }
            for (int m = 1; m < m_levels; ++m) {
                cplx temp = wl[m];
                wl[m] = (a2c * temp - sqrt_int[m] * wl[m - 1]) / sqrt_int[m];
                w += (rho(m, m) * wl[m]).real();
                for (int n = m + 1; n < m_levels; ++n) {
                    const cplx temp2 = (a2 * wl[n - 1] - sqrt_int[m] * temp) / sqrt_int[n];
                    temp = wl[n];
                    wl[n] = temp2;
                    w += 2.0 * (rho(m, n) * wl[n]).real();
                }
            }
            field.values(static_cast<Eigen::Index>(iq), static_cast<Eigen::Index>(ip)) = w;
        }
    }

    const double norm = field.integral();
    if (std::abs(norm - trace) > normalization_tolerance) {
        std::ostringstream os;
        os << "wigner_function: grid too small, normalization " << norm << " vs trace " << trace;
        throw ValidationError(os.str());
    }
    return field;
}

}  // namespace dret
