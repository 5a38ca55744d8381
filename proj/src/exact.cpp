#include "relaydde/exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "relaydde/error.hpp"

namespace relaydde {

namespace {

int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

/// First coefficient switch (kT or kT + p1) strictly after t + tolerance.
double next_switch_after(double t, const Params& params) {
    const double period = params.period();
    const double k = std::floor((t + kTimeTolerance) / period);
    const double mid = k * period + params.p1;
    if (mid > t + kTimeTolerance) return mid;
    return (k + 1.0) * period;
}

double step_coefficient(double t, const Params& params) {
    return coefficient_value(t, params, SmoothingSpec{});
}

}  // namespace

PiecewisePath::PiecewisePath(std::vector<Breakpoint> breakpoints, double history_value)
    : breakpoints_(std::move(breakpoints)), history_(history_value) {
    if (breakpoints_.size() < 2) fail_validation("breakpoints", "need at least two breakpoints");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i].t > breakpoints_[i - 1].t)) {
            fail_validation("breakpoints", "times must be strictly increasing");
        }
    }
}

double PiecewisePath::value_at(double t) const {
    if (t < start_time()) return history_;
    if (t >= end_time()) return breakpoints_.back().x;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                               [](double v, const Breakpoint& b) { return v < b.t; });
    const Breakpoint& right = *it;
    const Breakpoint& left = *(it - 1);
    const double w = (t - left.t) / (right.t - left.t);
    return left.x + w * (right.x - left.x);
}

double PiecewisePath::slope_of_segment(std::size_t i) const {
    const Breakpoint& l = breakpoints_[i];
    const Breakpoint& r = breakpoints_[i + 1];
    return (r.x - l.x) / (r.t - l.t);
}

PiecewisePath propagate(const Params& params, ConstantHistory history, double t_end,
                        double start_time) {
    params.validate();
    if (!std::isfinite(history.h) || history.h == 0.0) {
        fail_validation("h", "constant history must be a finite nonzero value");
    }
    if (!std::isfinite(t_end) || !(t_end > start_time)) {
        fail_validation("t_end", "must exceed the start time");
    }

    std::vector<Breakpoint> out;
    out.push_back({start_time, history.h});

    double t = start_time;
    double x = history.h;
    int delayed_sign = sign_of(history.h);
    int current_sign = delayed_sign;  // sign of the path just before t
    std::deque<double> pending;       // z + 1 for each zero z, increasing

    while (t < t_end - kTimeTolerance) {
        double end = std::min(next_switch_after(t, params), t_end);
        if (!pending.empty()) end = std::min(end, pending.front());

        if (delayed_sign == 0) {
            throw Error(ErrorKind::DegenerateStall,
                        "delayed value vanishes on an interval; slope would be zero");
        }
        const double slope = -delayed_sign * step_coefficient(0.5 * (t + end), params);
        double x_end = 0.0;

        if (x == 0.0) {
            // zero on the current breakpoint: a sign change only if the path leaves to the other side
            if (sign_of(slope) != current_sign) {
                current_sign = sign_of(slope);
                pending.push_back(t + 1.0);
                end = std::min(end, t + 1.0);
            }
            x_end = slope * (end - t);
        } else {
            x_end = x + slope * (end - t);
            if (sign_of(x) * sign_of(x_end) < 0) {
                const double z = t - x / slope;
                if (end - z <= kTimeTolerance) {
                    // crossing lands on the event; resolved next iteration
                    x_end = 0.0;
                } else {
                    if (z + 1.0 < end) {
                        end = z + 1.0;
                        x_end = x + slope * (end - t);
                    }
                    out.push_back({z, 0.0});
                    current_sign = sign_of(slope);
                    pending.push_back(z + 1.0);
                }
            }
        }
        if (std::abs(x_end) <= kZeroTolerance) x_end = 0.0;
        if (!std::isfinite(x_end)) throw Error(ErrorKind::NonFiniteState, "path left double range");

        t = end;
        x = x_end;
        out.push_back({t, x});
        while (!pending.empty() && pending.front() <= t + kTimeTolerance) {
            pending.pop_front();
            delayed_sign = -delayed_sign;
        }
    }
    return PiecewisePath(std::move(out), history.h);
}

std::vector<double> zeros(const PiecewisePath& path) {
    std::vector<double> result;
    auto bps = path.breakpoints();
    int last_sign = sign_of(path.history_value());
    for (std::size_t i = 0; i < bps.size(); ++i) {
        const double x = std::abs(bps[i].x) <= kZeroTolerance ? 0.0 : bps[i].x;
        if (x == 0.0) {
            // decide by the first nonzero value to the right
            std::size_t j = i + 1;
            while (j < bps.size() && std::abs(bps[j].x) <= kZeroTolerance) ++j;
            if (j == bps.size()) break;
            const int next_sign = sign_of(bps[j].x);
            if (last_sign != 0 && next_sign != last_sign) result.push_back(bps[i].t);
            last_sign = next_sign;
            i = j - 1;
            continue;
        }
        const int s = sign_of(x);
        if (last_sign != 0 && s != last_sign && i > 0) {
            // strict crossing inside segment i-1
            const Breakpoint& l = bps[i - 1];
            const Breakpoint& r = bps[i];
            result.push_back(l.t + (r.t - l.t) * (l.x / (l.x - r.x)));
        }
        last_sign = s;
    }
    return result;
}

bool is_slowly_oscillating(const PiecewisePath& path) {
    const auto z = zeros(path);
    for (std::size_t i = 1; i < z.size(); ++i) {
        if (!(z[i] - z[i - 1] > 1.0)) return false;
    }
    return true;
}

namespace {

int sign_just_after(const PiecewisePath& path, double t) {
    const double v = path.value_at(t);
    if (std::abs(v) > kZeroTolerance) return sign_of(v);
    auto bps = path.breakpoints();
    for (const auto& b : bps) {
        if (b.t > t + kTimeTolerance && std::abs(b.x) > kZeroTolerance) return sign_of(b.x);
    }
    return 0;
}

int sign_just_before(const PiecewisePath& path, double t) {
    const double v = path.value_at(t);
    if (std::abs(v) > kZeroTolerance) return sign_of(v);
    auto bps = path.breakpoints();
    for (auto it = bps.rbegin(); it != bps.rend(); ++it) {
        if (it->t < t - kTimeTolerance && std::abs(it->x) > kZeroTolerance) return sign_of(it->x);
    }
    return sign_of(path.history_value());
}

}  // namespace

ShapeSignature shape_signature(const PiecewisePath& path, double t_a, double t_b) {
    if (!(t_b > t_a)) fail_validation("window", "t_b must exceed t_a");
    ShapeSignature sig;
    for (double z : zeros(path)) {
        if (z > t_a + kTimeTolerance && z <= t_b + kTimeTolerance) ++sig.zero_count;
    }
    sig.start_sign = sign_just_after(path, t_a);
    sig.end_sign = sign_just_before(path, t_b);
    return sig;
}

}  // namespace relaydde
