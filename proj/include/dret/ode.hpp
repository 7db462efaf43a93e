// Explicit Runge-Kutta integrators for flat complex state vectors

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dret/types.hpp"

namespace dret::ode {

using Rhs = std::function<void(double t, std::span<const cplx> y, std::span<cplx> dydt)>;

struct AdaptiveOptions {
    double rtol{1e-7};
    double atol{1e-10};
    double initial_step{0.0};  // 0 picks a step from the initial derivative
    double min_step{1e-12};
    std::size_t max_steps{50'000'000};
};

struct StepStats {
    std::size_t accepted{0};
    std::size_t rejected{0};
    std::size_t rhs_evaluations{0};
    double last_step{0.0};
};

// Dormand-Prince 5(4) with an elementary (non-PI) step controller. Advances y from
// t0 to t1, landing exactly on t1. `step` carries the proposed step size across
// successive calls; pass 0 on the first call.
class DormandPrince {
public:
    DormandPrince(std::size_t size, AdaptiveOptions options);

    void advance(const Rhs& rhs, std::vector<cplx>& y, double t0, double t1, double& step,
                 StepStats& stats);

    const AdaptiveOptions& options() const noexcept { return opts_; }

private:
    AdaptiveOptions opts_;
    std::vector<cplx> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y5_;
    bool fsal_valid_{false};
    double fsal_t_{0.0};
};

// Classical fourth-order Runge-Kutta with a fixed step (the last step is
// shortened to land on t1). Bit-reproducible for a given step.
void advance_rk4(const Rhs& rhs, std::vector<cplx>& y, double t0, double t1, double step,
                 StepStats& stats);

}  // namespace dret::ode
