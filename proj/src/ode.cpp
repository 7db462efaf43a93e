// Dormand-Prince 5(4) and fixed-step RK4

#include "dret/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dret::ode {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double scaled_rms(std::span<const cplx> v, std::span<const cplx> y, double atol, double rtol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double sc = atol + rtol * std::abs(y[i]);
        const double r = std::abs(v[i]) / sc;
        acc += r * r;
    }
    return v.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

DormandPrince::DormandPrince(std::size_t size, AdaptiveOptions options)
    : opts_(options),
      k1_(size), k2_(size), k3_(size), k4_(size), k5_(size), k6_(size), k7_(size),
      tmp_(size), y5_(size) {}

void DormandPrince::advance(const Rhs& rhs, std::vector<cplx>& y, double t0, double t1,
                            double& step, StepStats& stats) {
    const std::size_t n = y.size();
    if (n != k1_.size()) throw std::invalid_argument("DormandPrince: state size mismatch");
    if (t1 <= t0) return;

    double t = t0;
    rhs(t, y, k1_);
    ++stats.rhs_evaluations;

    double h = step;
    if (!(h > 0.0)) {
        h = opts_.initial_step;
        if (!(h > 0.0)) {
            const double d0 = scaled_rms(y, y, opts_.atol, opts_.rtol);
            const double d1 = scaled_rms(k1_, y, opts_.atol, opts_.rtol);
            h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        }
    }

    std::size_t steps = 0;
    while (t < t1) {
        if (++steps > opts_.max_steps) {
            throw NumericError("DormandPrince: exceeded maximum step count at t=" + std::to_string(t));
        }
        bool last = false;
        if (t + h >= t1 || t1 - (t + h) < 1e-12 * std::max(1.0, std::abs(t1))) {
            h = t1 - t;
            last = true;
        }

        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a21 * k1_[i]);
        rhs(t + c2 * h, tmp_, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        rhs(t + c3 * h, tmp_, k3_);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        rhs(t + c4 * h, tmp_, k4_);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        rhs(t + c5 * h, tmp_, k5_);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                  a65 * k5_[i]);
        rhs(t + h, tmp_, k6_);
        for (std::size_t i = 0; i < n; ++i)
            y5_[i] = y[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] +
                                 b6 * k6_[i]);
        rhs(t + h, y5_, k7_);
        stats.rhs_evaluations += 6;

        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx err = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                  e6 * k6_[i] + e7 * k7_[i]);
            const double sc = opts_.atol + opts_.rtol * std::max(std::abs(y[i]), std::abs(y5_[i]));
            const double r = std::abs(err) / sc;
            acc += r * r;
        }
        const double err_norm = std::sqrt(acc / static_cast<double>(n));
        if (!std::isfinite(err_norm)) {
            throw NumericError("DormandPrince: non-finite error estimate at t=" + std::to_string(t));
        }

        const double factor =
            err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
        if (err_norm <= 1.0) {
            t = last ? t1 : t + h;
            y.swap(y5_);
            k1_.swap(k7_);
            ++stats.accepted;
            stats.last_step = h;
            if (!last) step = h * factor;
            else if (step <= 0.0) step = h;
            h = step;
        } else {
            ++stats.rejected;
            h *= std::max(factor, 0.2);
            step = h;
            if (h < opts_.min_step) {
                throw NumericError("DormandPrince: step size underflow at t=" + std::to_string(t));
            }
        }
    }
}

void advance_rk4(const Rhs& rhs, std::vector<cplx>& y, double t0, double t1, double step,
                 StepStats& stats) {
    if (!(step > 0.0)) throw std::invalid_argument("advance_rk4: step must be positive");
    const std::size_t n = y.size();
    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = t0;
    while (t < t1) {
        double h = step;
        if (t + h > t1 || t1 - (t + h) < 1e-12 * std::max(1.0, std::abs(t1))) h = t1 - t;
        rhs(t, y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        stats.rhs_evaluations += 4;
        ++stats.accepted;
        stats.last_step = h;
        t = (t + h >= t1) ? t1 : t + h;
    }
}

}  // namespace dret::ode
