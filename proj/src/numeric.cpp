#include "relaydde/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "relaydde/error.hpp"
#include "relaydde/maps.hpp"

namespace relaydde {

// ---------------------------------------------------------------------------
// DenseSolution

DenseSolution::DenseSolution(double history, double step, std::vector<double> times,
                             std::vector<double> values, std::vector<double> left_slopes,
                             std::vector<double> right_slopes, std::vector<double> events)
    : history_(history),
      step_(step),
      times_(std::move(times)),
      values_(std::move(values)),
      left_(std::move(left_slopes)),
      right_(std::move(right_slopes)),
      events_(std::move(events)) {
    const std::size_t n = times_.size();
    if (n < 2 || values_.size() != n || left_.size() != n || right_.size() != n) {
        fail_validation("samples", "inconsistent or too few samples");
    }
}

std::size_t DenseSolution::interval_of(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - times_.begin());
    i = std::clamp<std::size_t>(i, 1, times_.size() - 1);
    return i - 1;
}

namespace {

struct HermiteSegment {
    double t0, t1, x0, x1, d0, d1;

    double value(double t) const noexcept {
        const double h = t1 - t0;
        const double s = (t - t0) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * x1 +
               (s3 - s2) * h * d1;
    }

    double derivative(double t) const noexcept {
        const double h = t1 - t0;
        const double s = (t - t0) / h;
        const double s2 = s * s;
        return ((6 * s2 - 6 * s) * x0 + (-6 * s2 + 6 * s) * x1) / h + (3 * s2 - 4 * s + 1) * d0 +
               (3 * s2 - 2 * s) * d1;
    }
};

}  // namespace

double DenseSolution::value_at(double t) const {
    if (t < times_.front()) return history_;
    if (t >= times_.back()) return values_.back();
    const std::size_t i = interval_of(t);
    return HermiteSegment{times_[i], times_[i + 1], values_[i], values_[i + 1], right_[i], left_[i + 1]}
        .value(t);
}

double DenseSolution::derivative_at(double t) const {
    if (t < times_.front()) return 0.0;
    if (t >= times_.back()) return left_.back();
    const std::size_t i = interval_of(t);
    return HermiteSegment{times_[i], times_[i + 1], values_[i], values_[i + 1], right_[i], left_[i + 1]}
        .derivative(t);
}

double default_step(const SmoothingSpec& smoothing) {
    return smoothing.smoothed() ? std::min(smoothing.delta / 16.0, 1.0 / 64.0) : 1e-3;
}

// ---------------------------------------------------------------------------
// Integrator

namespace {

/// Derivative-discontinuity bookkeeping: a knot of order j (x^(j) jumps) at tau
/// induces one of order j + 1 at tau + 1. Orders above 4 do not affect the scheme.
struct Knot {
    double time;
    int order;
    bool operator>(const Knot& o) const noexcept { return time > o.time; }
};
constexpr int kMaxKnotOrder = 4;

/// Coefficient restricted to the piece containing a given time, evaluable at
/// any time of the step (one-sided limits at the piece ends).
struct CoefficientPiece {
    double a_const = 0.0;
    bool ramp = false;
    double centre = 0.0, before = 0.0, after = 0.0, delta = 0.0;

    double operator()(double s) const noexcept {
        if (!ramp) return a_const;
        return before + (after - before) * (s - centre + delta) / (2.0 * delta);
    }
};

CoefficientPiece coefficient_piece(double mid, const Params& p, double delta) {
    const double period = p.period();
    const double k = std::floor(mid / period);
    const double r = mid - k * period;
    CoefficientPiece piece;
    if (delta > 0.0) {
        if (r < delta) return {0.0, true, k * period, p.a2, p.a1, delta};
        if (r > period - delta) return {0.0, true, (k + 1.0) * period, p.a2, p.a1, delta};
        if (r > p.p1 - delta && r < p.p1 + delta) return {0.0, true, k * period + p.p1, p.a1, p.a2, delta};
    }
    piece.a_const = r < p.p1 ? p.a1 : p.a2;
    return piece;
}

/// Nonlinearity restricted to the region of the delayed value at the step midpoint.
struct NonlinearityPiece {
    enum class Branch { Constant, Linear, ExpPositive, ExpNegative } branch = Branch::Constant;
    double constant = 0.0;
    double delta = 0.0;

    double operator()(double u) const noexcept {
        switch (branch) {
            case Branch::Constant: return constant;
            case Branch::Linear: return -u / delta;
            case Branch::ExpPositive: {
                const double v = std::clamp(u, 0.0, delta);
                return v >= delta ? -1.0 : std::exp(delta * v / (v - delta)) - 1.0;
            }
            case Branch::ExpNegative: {
                const double v = std::clamp(-u, 0.0, delta);
                return v >= delta ? 1.0 : 1.0 - std::exp(delta * v / (v - delta));
            }
        }
        return 0.0;
    }
};

NonlinearityPiece nonlinearity_piece(double u, const SmoothingSpec& s) {
    NonlinearityPiece piece;
    piece.delta = s.delta;
    if (!s.smoothed() || std::abs(u) >= s.delta) {
        piece.constant = nonlinearity_value(u, SmoothingSpec{});
        return piece;
    }
    if (s.profile == Profile::Affine) {
        piece.branch = NonlinearityPiece::Branch::Linear;
    } else {
        piece.branch = u >= 0.0 ? NonlinearityPiece::Branch::ExpPositive
                                : NonlinearityPiece::Branch::ExpNegative;
    }
    return piece;
}

/// Levels of the delayed state where the nonlinearity loses smoothness, with
/// the derivative order of x that jumps one delay later.
std::vector<std::pair<double, int>> kink_levels(const SmoothingSpec& s) {
    if (!s.smoothed()) return {{0.0, 1}};
    if (s.profile == Profile::Affine) return {{-s.delta, 2}, {s.delta, 2}};
    return {{0.0, 3}};
}

class CoefficientKnots {
public:
    CoefficientKnots(const Params& p, double delta) : p_(p), delta_(delta) {}

    /// Smallest coefficient knot strictly after t.
    double next_after(double t) const {
        const double period = p_.period();
        const double k = std::floor(t / period);
        double best = std::numeric_limits<double>::infinity();
        for (double base : {k * period, k * period + p_.p1, (k + 1.0) * period, (k + 1.0) * period + p_.p1}) {
            const std::array<double, 2> candidates{base - delta_, base + delta_};
            for (double c : candidates) {
                if (c > t && c < best) best = c;
            }
        }
        return best;
    }
    int order() const noexcept { return delta_ > 0.0 ? 2 : 1; }

private:
    Params p_;
    double delta_;
};

class Integrator {
public:
    Integrator(const Params& p, const SmoothingSpec& s, double h, double step)
        : params_(p), smoothing_(s), history_(h), step_(step), coef_knots_(p, s.delta),
          levels_(kink_levels(s)) {}

    DenseSolution run(double t_end) {
        times_.push_back(0.0);
        values_.push_back(history_);
        left_.push_back(0.0);
        right_.push_back(0.0);
        knots_.push({0.0, 1});
        next_coef_ = coef_knots_.next_after(0.0);

        const double snap = 1e-9 * step_;
        double t = 0.0;
        long long grid_index = 1;
        while (t < t_end - snap) {
            pop_reached_knots(t, snap);
            double end = std::min(static_cast<double>(grid_index) * step_, t_end);
            bool on_knot = false;
            const double knot = std::min(next_coef_, knots_.empty() ? next_coef_ : knots_.top().time);
            if (knot < end - snap) {
                end = knot;
                on_knot = true;
            } else if (std::abs(knot - end) <= snap) {
                end = knot;
            }
            advance(t, end);
            if (on_knot) events_.push_back(end);
            t = end;
            while (static_cast<double>(grid_index) * step_ <= t + snap) ++grid_index;
        }
        pop_reached_knots(t, snap);
        return DenseSolution(history_, step_, std::move(times_), std::move(values_), std::move(left_),
                             std::move(right_), std::move(events_));
    }

private:
    void pop_reached_knots(double t, double snap) {
        while (next_coef_ <= t + snap) {
            push_translate({next_coef_, coef_knots_.order()});
            next_coef_ = coef_knots_.next_after(next_coef_ + snap);
        }
        while (!knots_.empty() && knots_.top().time <= t + snap) {
            const Knot k = knots_.top();
            knots_.pop();
            push_translate(k);
        }
    }

    void push_translate(const Knot& k) {
        if (k.order + 1 <= kMaxKnotOrder) knots_.push({k.time + 1.0, k.order + 1});
    }

    double delayed(double s) const {
        if (s <= 0.0) return history_;
        auto it = std::upper_bound(times_.begin(), times_.end(), s);
        std::size_t i = static_cast<std::size_t>(it - times_.begin());
        if (i >= times_.size()) return values_.back();
        --i;
        return HermiteSegment{times_[i], times_[i + 1], values_[i], values_[i + 1], right_[i], left_[i + 1]}
            .value(s);
    }

    void advance(double t, double end) {
        const double h = end - t;
        const double mid = t + 0.5 * h;
        const CoefficientPiece a = coefficient_piece(mid, params_, smoothing_.delta);
        const NonlinearityPiece f = nonlinearity_piece(delayed(mid - 1.0), smoothing_);

        const double k1 = a(t) * f(delayed(t - 1.0));
        const double k2 = a(mid) * f(delayed(mid - 1.0));
        const double k4 = a(end) * f(delayed(end - 1.0));
        const double x0 = values_.back();
        const double x1 = x0 + h / 6.0 * (k1 + 4.0 * k2 + k4);
        if (!std::isfinite(x1)) throw Error(ErrorKind::NonFiniteState, "state left double range");

        right_.back() = k1;
        times_.push_back(end);
        values_.push_back(x1);
        left_.push_back(k4);
        right_.push_back(k4);
        locate_level_crossings();
    }

    void locate_level_crossings() {
        const std::size_t i = times_.size() - 2;
        const HermiteSegment seg{times_[i], times_[i + 1], values_[i], values_[i + 1], right_[i], left_[i + 1]};
        for (const auto& [level, order] : levels_) {
            const double lo = values_[i] - level;
            const double hi = values_[i + 1] - level;
            if (lo == 0.0 || !((lo < 0.0 && hi >= 0.0) || (lo > 0.0 && hi <= 0.0))) continue;
            double a = seg.t0, b = seg.t1;
            for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, b); ++it) {
                const double m = 0.5 * (a + b);
                const double v = seg.value(m) - level;
                if ((v < 0.0) == (lo < 0.0) && v != 0.0) a = m; else b = m;
            }
            knots_.push({0.5 * (a + b) + 1.0, order});
        }
    }

    Params params_;
    SmoothingSpec smoothing_;
    double history_;
    double step_;
    CoefficientKnots coef_knots_;
    std::vector<std::pair<double, int>> levels_;
    double next_coef_ = 0.0;
    std::priority_queue<Knot, std::vector<Knot>, std::greater<>> knots_;
    std::vector<double> times_, values_, left_, right_, events_;
};

}  // namespace

DenseSolution integrate(const Params& params, const SmoothingSpec& smoothing, double h, double t_end,
                        double step) {
    params.validate();
    smoothing.validate(params);
    if (!std::isfinite(h)) fail_validation("h", "must be finite");
    if (!std::isfinite(t_end) || !(t_end > 0.0)) fail_validation("t_end", "must be positive");
    if (!std::isfinite(step) || !(step > 0.0)) fail_validation("step", "must be positive");
    const double limit = smoothing.smoothed() ? smoothing.delta / 16.0 : 1e-3;
    if (step > limit * (1.0 + 1e-12)) {
        throw Error(ErrorKind::StepTooLarge, "step exceeds " + std::to_string(limit) +
                                                 " (delta/16 when smoothed, 1e-3 otherwise)");
    }
    return Integrator(params, smoothing, h, step).run(t_end);
}

// ---------------------------------------------------------------------------
// Corner matching and comparisons

ParabolaCoefficients parabola_coefficients(double a1, double a2, double eps, double x1) {
    if (!std::isfinite(eps) || !(eps > 0.0)) fail_validation("eps", "must be positive");
    return {(a2 - a1) / (4.0 * eps), 0.5 * (a1 + a2), (a2 - a1) * eps / 4.0 + x1};
}

namespace {

int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

std::vector<TimeWindow> merge(std::vector<TimeWindow> w) {
    std::sort(w.begin(), w.end(), [](const TimeWindow& a, const TimeWindow& b) { return a.lo < b.lo; });
    std::vector<TimeWindow> out;
    for (const auto& x : w) {
        if (!out.empty() && x.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, x.hi);
        } else {
            out.push_back(x);
        }
    }
    return out;
}

}  // namespace

SmoothedComparison compare_exact_smoothed(const Params& params, const SmoothingSpec& smoothing,
                                          const DenseSolution& smoothed) {
    params.validate();
    smoothing.validate(params);
    const double delta = smoothing.delta;
    const double t0 = delta;
    const double t_end = smoothed.end_time();
    if (!(t_end > t0)) fail_validation("t_end", "smoothed run ends before the reference start");

    SmoothedComparison report;
    report.reference_start = t0;
    const auto times = smoothed.times();
    const auto values = smoothed.values();

    const double start_value = smoothed.value_at(t0);
    if (smoothed.history_value() == 0.0) {
        for (std::size_t i = 0; i < times.size(); ++i) {
            report.max_dev_overall = std::max(report.max_dev_overall, std::abs(values[i]));
        }
        report.max_dev_outside_corners = report.max_dev_overall;
        return report;
    }
    // the exact restart needs a sign-definite history on [t0 - 1, t0]
    const int s = sign_of(start_value);
    if (s != sign_of(smoothed.history_value())) {
        throw Error(ErrorKind::PreconditionViolated, "smoothed state changes sign before t = delta");
    }
    for (std::size_t i = 0; i < times.size() && times[i] <= t0; ++i) {
        if (sign_of(values[i]) != s) {
            throw Error(ErrorKind::PreconditionViolated, "smoothed state changes sign before t = delta");
        }
    }

    const PiecewisePath reference = propagate(params, {start_value}, t_end, t0);

    std::vector<TimeWindow> windows;
    const double eps = delta / std::min(params.a1, params.a2);
    for (double z : zeros(reference)) {
        if (z + 1.0 - eps <= t_end) windows.push_back({z + 1.0 - eps, z + 1.0 + eps});
    }
    const double period = params.period();
    for (double k = 0.0; k * period <= t_end + delta; k += 1.0) {
        for (double c : {k * period, k * period + params.p1}) {
            if (c + delta >= t0 && c - delta <= t_end) windows.push_back({c - delta, c + delta});
        }
    }
    report.corner_windows = merge(std::move(windows));

    std::size_t w = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < t0) continue;
        const double dev = std::abs(values[i] - reference.value_at(t));
        report.max_dev_overall = std::max(report.max_dev_overall, dev);
        while (w < report.corner_windows.size() && report.corner_windows[w].hi < t) ++w;
        const bool inside = w < report.corner_windows.size() && report.corner_windows[w].lo <= t;
        if (!inside) report.max_dev_outside_corners = std::max(report.max_dev_outside_corners, dev);
    }
    return report;
}

SmoothedComparison compare_exact_smoothed(const Params& params, double delta, double h, double t_end,
                                          double step, Profile profile) {
    const SmoothingSpec smoothing{delta, profile};
    params.validate();
    smoothing.validate(params);
    const double dt = step > 0.0 ? step : default_step(smoothing);
    return compare_exact_smoothed(params, smoothing, integrate(params, smoothing, h, t_end, dt));
}

PerturbationGrowth perturbation_growth(const Params& params, double h_star, double eps0) {
    params.validate();
    if (!(eps0 >= 1e-8 && eps0 <= 1e-3)) fail_validation("eps0", "must lie in [1e-8, 1e-3]");
    const Classification c = classify(params);
    bool unstable = false;
    for (const auto& v : c.verdicts) {
        if (v.kind == SolutionKind::UnstableT && v.validated &&
            std::abs(v.h_star - h_star) <= kClosureTolerance * std::max(1.0, std::abs(h_star))) {
            unstable = true;
        }
    }
    if (!unstable) {
        throw Error(ErrorKind::PreconditionViolated,
                    "perturbation growth needs a validated unstable T-periodic orbit at h*");
    }

    const double period = params.period();
    PerturbationGrowth out;
    out.expected_m = type1_m(params);
    auto measure = [&](double signed_eps) {
        const double h = h_star + signed_eps;
        if (!type1_shape_holds(params, h)) {
            throw Error(ErrorKind::ShapeLost, "perturbed orbit leaves the Type I shape");
        }
        const PiecewisePath path = propagate(params, {h}, period);
        if (shape_signature(path, 0.0, period).zero_count != 2) {
            throw Error(ErrorKind::ShapeLost, "perturbed orbit leaves the Type I shape");
        }
        return (path.value_at(period) - h_star) / signed_eps;
    };
    out.multiplier_plus = measure(eps0);
    out.multiplier_minus = measure(-eps0);
    out.multiplier = 0.5 * (out.multiplier_plus + out.multiplier_minus);
    return out;
}

}  // namespace relaydde
