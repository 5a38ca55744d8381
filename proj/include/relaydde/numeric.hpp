#pragma once

#include <span>
#include <vector>

#include "relaydde/exact.hpp"
#include "relaydde/model.hpp"

namespace relaydde {

/// Grid solution of the (possibly smoothed) equation with (value, derivative)
/// samples at every node. The base grid is uniform; nodes are added where the
/// right-hand side loses smoothness (event_times()).
class DenseSolution {
public:
    DenseSolution(double history, double step, std::vector<double> times, std::vector<double> values,
                  std::vector<double> left_slopes, std::vector<double> right_slopes,
                  std::vector<double> events);

    double start_time() const noexcept { return times_.front(); }
    double end_time() const noexcept { return times_.back(); }
    double step() const noexcept { return step_; }
    double history_value() const noexcept { return history_; }

    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> values() const noexcept { return values_; }
    /// One-sided derivatives at each node (they differ only at kinks).
    std::span<const double> left_derivatives() const noexcept { return left_; }
    std::span<const double> right_derivatives() const noexcept { return right_; }
    std::span<const double> event_times() const noexcept { return events_; }

    /// Cubic Hermite interpolation; the constant history before start_time().
    double value_at(double t) const;
    double derivative_at(double t) const;

private:
    std::size_t interval_of(double t) const;

    double history_;
    double step_;
    std::vector<double> times_, values_, left_, right_;
    std::vector<double> events_;
};

/// min(delta / 16, 1/64) for delta > 0, 1e-3 otherwise.
double default_step(const SmoothingSpec& smoothing);

/// Fourth-order one-step integration of x'(t) = a(t) f(x(t-1)) with x = h on
/// [-1, 0]. Steps are split at coefficient knots, at crossings of the
/// nonlinearity's kinks by the delayed state, and at their delay translates.
/// Throws Error{StepTooLarge} if step > delta/16 (delta > 0) or > 1e-3 (delta == 0).
DenseSolution integrate(const Params& params, const SmoothingSpec& smoothing, double h, double t_end,
                        double step);

struct ParabolaCoefficients {
    double A, B, C;
    /// P(t) = A (t - centre)^2 + B (t - centre) + C
    double operator()(double offset) const noexcept { return (A * offset + B) * offset + C; }
};

/// Parabolic arc replacing a corner at x1 where the slope switches from a1 to a2
/// over [-eps, eps]. Throws Error{Validation} unless eps > 0.
ParabolaCoefficients parabola_coefficients(double a1, double a2, double eps, double x1);

struct TimeWindow {
    double lo, hi;
};

struct SmoothedComparison {
    double max_dev_outside_corners = 0.0;
    double max_dev_overall = 0.0;
    double reference_start = 0.0;  ///< exact reference starts here from the smoothed value
    std::vector<TimeWindow> corner_windows;
};

/// Integrates the smoothed system, restarts the exact system from the smoothed
/// state at t = delta (after the initial coefficient ramp) and reports the
/// sup-norm deviation over grid nodes with and without the corner windows.
/// Corner windows: half-width delta/min(a1, a2) about each zero + 1 of the
/// reference and half-width delta about each coefficient switch.
SmoothedComparison compare_exact_smoothed(const Params& params, double delta, double h, double t_end,
                                          double step = 0.0, Profile profile = Profile::Affine);

/// Same comparison against a precomputed smoothed run.
SmoothedComparison compare_exact_smoothed(const Params& params, const SmoothingSpec& smoothing,
                                          const DenseSolution& smoothed);

struct PerturbationGrowth {
    double multiplier = 0.0;        ///< mean of the two one-sided estimates
    double multiplier_plus = 0.0;   ///< (x(T; h* + eps) - h*) / eps
    double multiplier_minus = 0.0;  ///< (x(T; h* - eps) - h*) / (-eps)
    double expected_m = 0.0;        ///< slope of the closed-form map G
};

/// One-period growth of a perturbation of an unstable Type I orbit, measured
/// with the exact propagator. Throws Error{PreconditionViolated} unless
/// classify(params) is a validated UnstableT at h_star and eps0 in [1e-8, 1e-3];
/// Error{ShapeLost} if a perturbed orbit leaves the Type I shape.
PerturbationGrowth perturbation_growth(const Params& params, double h_star, double eps0);

}  // namespace relaydde
