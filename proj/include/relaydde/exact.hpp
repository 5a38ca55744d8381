#pragma once

#include <span>
#include <vector>

#include "relaydde/model.hpp"

namespace relaydde {

struct Breakpoint {
    double t;
    double x;
    bool operator==(const Breakpoint&) const = default;
};

/// Continuous piecewise-affine function given by its breakpoints. The value on
/// the history interval [start - 1, start] is the constant history_value().
class PiecewisePath {
public:
    PiecewisePath() = default;
    /// Throws Error{Validation} unless times are strictly increasing and there
    /// are at least two breakpoints.
    PiecewisePath(std::vector<Breakpoint> breakpoints, double history_value);

    std::span<const Breakpoint> breakpoints() const noexcept { return breakpoints_; }
    double start_time() const noexcept { return breakpoints_.front().t; }
    double end_time() const noexcept { return breakpoints_.back().t; }
    double history_value() const noexcept { return history_; }
    std::size_t segment_count() const noexcept { return breakpoints_.size() - 1; }

    /// Linear interpolation; history value for t in [start - 1, start).
    double value_at(double t) const;
    double slope_of_segment(std::size_t i) const;

private:
    std::vector<Breakpoint> breakpoints_;
    double history_ = 0.0;
};

/// Sign-definite constant initial function phi(s) = h on [-1, 0].
struct ConstantHistory {
    double h;
};

inline constexpr double kTimeTolerance = 1e-12;
inline constexpr double kZeroTolerance = 1e-12;

/// Exact solution of x'(t) = A0(t) f0(x(t-1)) with x = h on [start-1, start],
/// on [start, t_end]. Zeros are inserted as breakpoints with value exactly 0.
/// Throws Error{Validation} for h == 0 or t_end <= start, Error{DegenerateStall}
/// if the delayed value vanishes on an interval.
PiecewisePath propagate(const Params& params, ConstantHistory history, double t_end,
                        double start_time = 0.0);

/// Sign-change times of the path, closed form per segment. A zero sitting on a
/// breakpoint is reported once; touching zeros without a sign change are skipped.
std::vector<double> zeros(const PiecewisePath& path);

/// Every gap between consecutive zeros exceeds the delay (vacuous for < 2 zeros).
bool is_slowly_oscillating(const PiecewisePath& path);

struct ShapeSignature {
    int zero_count = 0;
    int start_sign = 0;
    int end_sign = 0;
    bool operator==(const ShapeSignature&) const = default;
};

/// Zeros in the half-open window (t_a, t_b] and the signs at both ends.
ShapeSignature shape_signature(const PiecewisePath& path, double t_a, double t_b);

}  // namespace relaydde
