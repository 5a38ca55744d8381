#include "relaydde/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "relaydde/error.hpp"
#include "relaydde/exact.hpp"

namespace relaydde {

AffineMap1D type1_map(const Params& params) {
    params.validate();
    const auto& [a1, a2, p1, p2] = params;
    const double m = 2.0 * a2 / a1 - 1.0;
    const double b = a1 * (p1 - 2.0) + a2 * (6.0 - (2.0 * p1 + p2));
    return {m, -b};
}

double type1_fixed_point(const Params& params) {
    const AffineMap1D g = type1_map(params);
    if (params.a1 == params.a2) {
        throw Error(ErrorKind::MIsOne, "a1 == a2 gives m = 1; G has no unique fixed point");
    }
    return -g.intercept / (g.slope - 1.0);
}

bool type1_shape_holds(const Params& params, double h) {
    if (!(h < 0.0)) return false;
    const double t1 = -h / params.a1;
    const double tol = kTimeTolerance;
    return t1 + 2.0 <= params.p1 + tol && params.p1 <= t1 + 3.0 + tol &&
           t1 + 3.0 <= params.period() + tol && type1_map(params)(h) < 0.0;
}

Type2Maps type2_map(const Params& params) {
    params.validate();
    const auto& [a1, a2, p1, p2] = params;
    return {1.0 - 2.0 * a2 / a1, a1 * p1 + a2 * (2.0 - 2.0 * p1 - p2)};
}

double apply_F(double h, double k, double d) {
    if (h == 0.0) throw Error(ErrorKind::HZero, "F is undefined at h = 0");
    return h < 0.0 ? k * h + d : k * h - d;
}

std::pair<double, double> type2_two_cycle(const Params& params) {
    const Type2Maps maps = type2_map(params);
    if (!(maps.d > 0.0)) throw Error(ErrorKind::NoCycle, "d <= 0: F has no 2-cycle of the stated form");
    if (!(std::abs(maps.k) < 1.0)) {
        throw Error(ErrorKind::NoCycle, "|k| >= 1 (a1 <= a2): F has no 2-cycle");
    }
    const double h = -maps.d / (maps.k + 1.0);
    return {h, -h};
}

bool type2_shape_holds(const Params& params, double h) {
    if (!(h < 0.0)) return false;
    const double t1 = -h / params.a1;
    const double tol = kTimeTolerance;
    return params.p1 - 1.0 <= t1 + tol && t1 < params.p1 && t1 + 1.0 <= params.period() + tol &&
           type2_map(params).f1()(h) > 0.0;
}

BasinDescriptor basin(const Params& params) {
    const Type2Maps maps = type2_map(params);
    if (!(maps.d > 0.0) || !(params.a2 < params.a1)) {
        throw Error(ErrorKind::NotApplicable, "basin requires d > 0 and a2 < a1");
    }
    if (params.a1 >= 2.0 * params.a2) return {BasinDescriptor::Kind::AllNonzero, 0.0};
    return {BasinDescriptor::Kind::Interval, std::abs(maps.d / maps.k)};
}

std::string_view to_string(SolutionKind kind) noexcept {
    switch (kind) {
        case SolutionKind::StableT: return "StableT";
        case SolutionKind::UnstableT: return "UnstableT";
        case SolutionKind::Stable2T: return "Stable2T";
        case SolutionKind::Diverges2T: return "Diverges2T";
        case SolutionKind::ShapeInvalid: return "ShapeInvalid";
    }
    return "Unknown";
}

bool Classification::has_validated(SolutionKind k) const noexcept {
    for (const auto& v : verdicts) {
        if (v.kind == k && v.validated) return true;
    }
    return false;
}

namespace {

std::optional<Verdict> type1_verdict(const Params& params, double m, double b) {
    Verdict v;
    v.type = 1;
    v.period = params.period();
    const bool stable = std::abs(m) < 1.0 && b > 0.0;
    const bool unstable = m > 1.0 && b < 0.0;
    if (m == 1.0 || m == -1.0 || b == 0.0) {
        v.boundary = true;
        v.kind = SolutionKind::ShapeInvalid;
        return v;
    }
    if (!stable && !unstable) {
        // a fixed point exists but is not negative under either set of inequalities
        v.h_star = b / (m - 1.0);
        v.kind = SolutionKind::ShapeInvalid;
        return v;
    }
    v.h_star = b / (m - 1.0);
    if (!(v.h_star < 0.0)) {
        v.kind = SolutionKind::ShapeInvalid;
        return v;
    }
    const ClosureCheck check = check_orbit_closure(params, v.h_star, 1);
    v.closure_error = check.closure_error;
    v.validated = check.closure_ok && check.shape_ok;
    v.kind = v.validated ? (stable ? SolutionKind::StableT : SolutionKind::UnstableT)
                         : SolutionKind::ShapeInvalid;
    return v;
}

std::optional<Verdict> type2_verdict(const Params& params, double k, double d) {
    Verdict v;
    v.type = 2;
    v.period = 2.0 * params.period();
    if (k == 1.0 || k == -1.0 || d == 0.0) {
        v.boundary = true;
        v.kind = SolutionKind::ShapeInvalid;
        return v;
    }
    if (k < -1.0) {
        v.kind = SolutionKind::Diverges2T;
        return v;
    }
    if (!(d > 0.0)) return std::nullopt;  // outside the standing hypothesis d > 0
    v.h_star = -d / (k + 1.0);
    const ClosureCheck check = check_orbit_closure(params, v.h_star, 2);
    v.closure_error = check.closure_error;
    v.validated = check.closure_ok && check.shape_ok;
    v.kind = v.validated ? SolutionKind::Stable2T : SolutionKind::ShapeInvalid;
    return v;
}

int preference(SolutionKind kind) {
    switch (kind) {
        case SolutionKind::StableT:
        case SolutionKind::UnstableT:
        case SolutionKind::Stable2T: return 0;
        case SolutionKind::Diverges2T: return 1;
        case SolutionKind::ShapeInvalid: return 2;
    }
    return 3;
}

}  // namespace

ClosureCheck check_orbit_closure(const Params& params, double h, int type) {
    ClosureCheck out;
    if (!std::isfinite(h) || h == 0.0) {
        out.closure_error = std::numeric_limits<double>::infinity();
        return out;
    }
    const double period = params.period();
    const double scale = std::max(1.0, std::abs(h));
    if (type == 1) {
        const PiecewisePath path = propagate(params, {h}, period);
        const ShapeSignature sig = shape_signature(path, 0.0, period);
        out.closure_error = std::abs(path.value_at(period) - h);
        out.shape_ok = sig.zero_count == 2 && sig.start_sign < 0 && sig.end_sign < 0 &&
                       is_slowly_oscillating(path);
    } else {
        const PiecewisePath path = propagate(params, {h}, 2.0 * period);
        const ShapeSignature first = shape_signature(path, 0.0, period);
        const ShapeSignature both = shape_signature(path, 0.0, 2.0 * period);
        out.closure_error = std::max(std::abs(path.value_at(period) + h),
                                     std::abs(path.value_at(2.0 * period) - h));
        out.shape_ok = first.zero_count == 1 && first.start_sign < 0 && first.end_sign > 0 &&
                       both.zero_count == 2 && both.end_sign == both.start_sign &&
                       is_slowly_oscillating(path);
    }
    out.closure_ok = out.closure_error <= kClosureTolerance * scale;
    return out;
}

Classification classify(const Params& params) {
    params.validate();
    Classification c;
    const AffineMap1D g = type1_map(params);
    const Type2Maps f = type2_map(params);
    c.m = g.slope;
    c.b = -g.intercept;
    c.k = f.k;
    c.d = f.d;

    if (auto v = type1_verdict(params, c.m, c.b)) c.verdicts.push_back(*v);
    if (auto v = type2_verdict(params, c.k, c.d)) c.verdicts.push_back(*v);

    const Verdict* best = nullptr;
    for (const auto& v : c.verdicts) {
        if (!best || preference(v.kind) < preference(best->kind)) best = &v;
    }
    if (best) {
        c.kind = best->kind;
        c.h_star = best->h_star;
        c.period = best->period;
        c.validated = best->validated;
        c.boundary = best->boundary;
    } else {
        c.kind = SolutionKind::ShapeInvalid;
        c.period = params.period();
    }
    return c;
}

Params dual_params(const Params& params) {
    return {params.a2, params.a1, params.p2, params.p1};
}

}  // namespace relaydde
