// integrator.hpp: adaptive Dormand-Prince 5(4) for complex linear ODE systems

#pragma once

#include <cstddef>
#include <functional>

#include "afc/common.hpp"

namespace afc {

struct IntegratorOptions {
    double rtol{1e-9};
    double atol{1e-12};
    double initial_step{0.0}; // 0 selects automatically
    double max_step{0.0};     // 0 means unbounded
    double min_step{1e-14};
    std::size_t max_steps{50'000'000};
};

/// Embedded explicit Runge-Kutta 5(4) with FSAL and 4th-order dense output.
///
/// The caller drives it step by step; between two accepted steps any time in
/// [t_prev(), t()] can be evaluated with interpolate().
class DormandPrince45 {
public:
    using State = Eigen::VectorXcd;
    /// dy/dt = f(t, y), written into the third argument.
    using Rhs = std::function<void(double, const State&, State&)>;

    DormandPrince45(Rhs rhs, IntegratorOptions options);

    void reset(double t0, const State& y0);

    /// Advances by one accepted step, never past t_limit.
    void step(double t_limit);

    double t() const { return t_; }
    double t_prev() const { return t_prev_; }
    const State& y() const { return y_; }
    std::size_t accepted_steps() const { return accepted_; }
    std::size_t rejected_steps() const { return rejected_; }

    void interpolate(double t, State& out) const;

private:
    double error_norm(const State& y_old, const State& y_new) const;
    double initial_step(double t_limit);

    Rhs rhs_;
    IntegratorOptions opt_;
    double t_{0.0};
    double t_prev_{0.0};
    double h_{0.0};
    State y_;
    State k1_, k2_, k3_, k4_, k5_, k6_, k7_;
    State y_stage_, y_new_, err_;
    // dense output coefficients of the last accepted step
    State r1_, r2_, r3_, r4_, r5_;
    std::size_t accepted_{0};
    std::size_t rejected_{0};
};

} // namespace afc
