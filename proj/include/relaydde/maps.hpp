#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "relaydde/model.hpp"

namespace relaydde {

/// h -> slope * h + intercept
struct AffineMap1D {
    double slope = 1.0;
    double intercept = 0.0;

    constexpr double operator()(double h) const noexcept { return slope * h + intercept; }

    /// (this o inner)(h) = this(inner(h))
    constexpr AffineMap1D after(const AffineMap1D& inner) const noexcept {
        return {slope * inner.slope, slope * inner.intercept + intercept};
    }

    bool operator==(const AffineMap1D&) const = default;
};

// ---------------------------------------------------------------------------
// Type I: two zeros per coefficient period, return map G(h) = m h - b.

/// slope m = 2 a2/a1 - 1, intercept -b with b = a1 (p1 - 2) + a2 (6 - 2 p1 - p2).
AffineMap1D type1_map(const Params& params);

inline double type1_m(const Params& p) { return type1_map(p).slope; }
inline double type1_b(const Params& p) { return -type1_map(p).intercept; }

/// h* = b / (m - 1). Throws Error{MIsOne} when a1 == a2.
double type1_fixed_point(const Params& params);

/// True when the orbit from h < 0 follows the Type I construction on [0, T]:
/// t1 = -h/a1, t1 + 2 <= p1 <= t1 + 3 <= T and G(h) < 0.
bool type1_shape_holds(const Params& params, double h);

// ---------------------------------------------------------------------------
// Type II: one zero per coefficient period, F1(h) = k h + d (h < 0), F2(h) = k h - d (h > 0).

struct Type2Maps {
    double k = 0.0;
    double d = 0.0;

    AffineMap1D f1() const noexcept { return {k, d}; }
    AffineMap1D f2() const noexcept { return {k, -d}; }
    /// F0 = F2 o F1: h -> k^2 h + (k - 1) d
    AffineMap1D through() const noexcept { return f2().after(f1()); }
};

/// k = 1 - 2 a2/a1, d = a1 p1 + a2 (2 - 2 p1 - p2).
Type2Maps type2_map(const Params& params);

/// Piecewise map F. Throws Error{HZero} for h == 0 (F is discontinuous there).
double apply_F(double h, double k, double d);

/// Period-two orbit {h*, -h*} with h* = -d/(k + 1) < 0.
/// Throws Error{NoCycle} unless |k| < 1 and d > 0.
std::pair<double, double> type2_two_cycle(const Params& params);

/// True when the orbit from h < 0 follows the Type II construction on [0, T]:
/// t1 = -h/a1, p1 - 1 <= t1 < p1, t1 + 1 <= T and F1(h) > 0.
bool type2_shape_holds(const Params& params, double h);

struct BasinDescriptor {
    enum class Kind { AllNonzero, Interval };
    Kind kind = Kind::AllNonzero;
    /// Interval (-radius, radius) without 0; unused for AllNonzero.
    double radius = 0.0;
};

/// Attraction basin of the 2-cycle as stated for the interval map F.
/// Throws Error{NotApplicable} unless d > 0 and a2 < a1.
BasinDescriptor basin(const Params& params);

// ---------------------------------------------------------------------------
// Classification.

enum class SolutionKind { StableT, UnstableT, Stable2T, Diverges2T, ShapeInvalid };

std::string_view to_string(SolutionKind kind) noexcept;

struct Verdict {
    SolutionKind kind = SolutionKind::ShapeInvalid;
    int type = 1;             ///< 1 or 2: which return map produced the verdict
    double h_star = 0.0;      ///< negative representative; 2-cycle partner is -h_star
    double period = 0.0;      ///< T or 2T
    bool validated = false;   ///< exact propagation closes the orbit with the expected shape
    bool boundary = false;    ///< m, k = +-1 or b, d = 0
    double closure_error = 0.0;
};

struct Classification {
    SolutionKind kind = SolutionKind::ShapeInvalid;
    double h_star = 0.0;
    double period = 0.0;
    double m = 0.0, b = 0.0, k = 0.0, d = 0.0;
    bool validated = false;
    bool boundary = false;
    /// Every branch verdict, Type I first. `kind` is the preferred one.
    std::vector<Verdict> verdicts;

    bool has_validated(SolutionKind k) const noexcept;
};

inline constexpr double kClosureTolerance = 1e-9;

struct ClosureCheck {
    bool closure_ok = false;  ///< returns to h within kClosureTolerance (relative to max(1, |h|))
    bool shape_ok = false;    ///< expected zero count and signs, slowly oscillating
    double closure_error = 0.0;
};

/// Exact propagation from h over one period (Type I: two zeros, negative at both
/// ends) or two periods (Type II: one zero per period, -h after one period).
ClosureCheck check_orbit_closure(const Params& params, double h, int type);

/// Applies the Type I and Type II stability conditions and confirms each
/// closed-form orbit with the exact propagator over one (two) period(s).
Classification classify(const Params& params);

/// (a1, a2, p1, p2) -> (a2, a1, p2, p1): the coefficient seen from time p1.
Params dual_params(const Params& params);

}  // namespace relaydde
