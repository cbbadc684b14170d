#include "afc/integrator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace afc {

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Hairer's continuous extension (DOPRI5 "contd5").
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

} // namespace

DormandPrince45::DormandPrince45(Rhs rhs, IntegratorOptions options)
    : rhs_(std::move(rhs)), opt_(options) {
    if (!(opt_.rtol > 0.0) || !(opt_.atol >= 0.0)) {
        throw ValidationError("integrator tolerances must be positive");
    }
}

void DormandPrince45::reset(double t0, const State& y0) {
    t_ = t0;
    t_prev_ = t0;
    y_ = y0;
    const auto n = y0.size();
    for (State* s : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &y_stage_, &y_new_, &err_}) {
        s->resize(n);
    }
    rhs_(t_, y_, k1_);
    h_ = 0.0;
    r1_ = y_;
    r2_.setZero(n);
    r3_.setZero(n);
    r4_.setZero(n);
    r5_.setZero(n);
}

double DormandPrince45::error_norm(const State& y_old, const State& y_new) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < err_.size(); ++i) {
        const double scale = opt_.atol + opt_.rtol * std::max(std::abs(y_old[i]), std::abs(y_new[i]));
        sum += std::norm(err_[i]) / (scale * scale);
    }
    return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(err_.size(), 1)));
}

double DormandPrince45::initial_step(double t_limit) {
    if (opt_.initial_step > 0.0) {
        return opt_.initial_step;
    }
    // Hairer, Norsett & Wanner, "Solving ODEs I", II.4.
    double d0 = 0.0;
    double d1n = 0.0;
    for (Eigen::Index i = 0; i < y_.size(); ++i) {
        const double sc = opt_.atol + opt_.rtol * std::abs(y_[i]);
        d0 += std::norm(y_[i]) / (sc * sc);
        d1n += std::norm(k1_[i]) / (sc * sc);
    }
    const double n = static_cast<double>(std::max<Eigen::Index>(y_.size(), 1));
    d0 = std::sqrt(d0 / n);
    d1n = std::sqrt(d1n / n);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, t_limit - t_);
    y_stage_ = y_ + h0 * k1_;
    rhs_(t_ + h0, y_stage_, k2_);
    double d2 = 0.0;
    for (Eigen::Index i = 0; i < y_.size(); ++i) {
        const double sc = opt_.atol + opt_.rtol * std::abs(y_[i]);
        d2 += std::norm(k2_[i] - k1_[i]) / (sc * sc);
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double dmax = std::max(d1n, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
    return std::min(100.0 * h0, h1);
}

void DormandPrince45::step(double t_limit) {
    if (t_limit <= t_) {
        throw NumericalError("integrator asked to step to a time not after the current time");
    }
    if (h_ == 0.0) {
        h_ = initial_step(t_limit);
    }
    if (opt_.max_step > 0.0) {
        h_ = std::min(h_, opt_.max_step);
    }

    while (true) {
        if (accepted_ + rejected_ >= opt_.max_steps) {
            throw NumericalError(fmt::format("integrator exceeded {} steps", opt_.max_steps));
        }
        bool last = false;
        double h = h_;
        if (t_ + h >= t_limit) {
            h = t_limit - t_;
            last = true;
        }
        if (h < opt_.min_step * std::max(1.0, std::abs(t_))) {
            throw NumericalError(fmt::format("step size underflow at t = {:.6g} (h = {:.3g})", t_, h));
        }

        y_stage_ = y_ + h * (a21 * k1_);
        rhs_(t_ + c2 * h, y_stage_, k2_);
        y_stage_ = y_ + h * (a31 * k1_ + a32 * k2_);
        rhs_(t_ + c3 * h, y_stage_, k3_);
        y_stage_ = y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
        rhs_(t_ + c4 * h, y_stage_, k4_);
        y_stage_ = y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
        rhs_(t_ + c5 * h, y_stage_, k5_);
        y_stage_ = y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
        rhs_(t_ + h, y_stage_, k6_);
        y_new_ = y_ + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
        rhs_(t_ + h, y_new_, k7_);
        err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);

        const double err = error_norm(y_, y_new_);
        if (!std::isfinite(err)) {
            throw NumericalError(fmt::format("non-finite integrator error at t = {:.6g}", t_));
        }
        if (err <= 1.0) {
            r1_ = y_;
            r2_ = y_new_ - y_;
            r3_ = h * k1_ - r2_;
            r4_ = r2_ - h * k7_ - r3_;
            r5_ = h * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k7_);

            t_prev_ = t_;
            t_ = last ? t_limit : t_ + h;
            y_.swap(y_new_);
            k1_.swap(k7_);
            ++accepted_;
            const double factor =
                err == 0.0 ? kMaxFactor : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
            // A step clipped at t_limit does not tell us the natural step size.
            h_ = last ? std::max(h_, h * factor) : h * factor;
            return;
        }
        ++rejected_;
        h_ = h * std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, 1.0);
    }
}

void DormandPrince45::interpolate(double t, State& out) const {
    const double h = t_ - t_prev_;
    if (h == 0.0) {
        out = y_;
        return;
    }
    const double theta = (t - t_prev_) / h;
    const double theta1 = 1.0 - theta;
    out = r1_ + theta * (r2_ + theta1 * (r3_ + theta * (r4_ + theta1 * r5_)));
}

} // namespace afc
