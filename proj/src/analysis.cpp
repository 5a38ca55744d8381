#include "relaydde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <thread>

#include "relaydde/error.hpp"
#include "relaydde/exact.hpp"

namespace relaydde {

std::string_view to_string(TableId id) noexcept {
    switch (id) {
        case TableId::T1: return "T1";
        case TableId::T2: return "T2";
        case TableId::T3: return "T3";
        case TableId::T4: return "T4";
        case TableId::T5: return "T5";
    }
    return "T?";
}

namespace {

using std::numbers::e;
using std::numbers::pi;

constexpr double kTwoDecimals = 5e-3;
constexpr double kFourDecimals = 1e-4;
constexpr double kExactFraction = 1e-12;

const double kSqrt10 = std::sqrt(10.0);
const double kInvSqrt5 = 1.0 / std::sqrt(5.0);

// h* and period as printed; 2T for T3 and T5.
const std::vector<TableRow> kRows = {
    {TableId::T1, 1, {1, 0.25, 2.5, 1.5}, -0.25, 4, kTwoDecimals, "-0.25"},
    {TableId::T1, 2, {2, 0.5, 2.5, 2}, -1.0 / 3.0, 4.5, kExactFraction, "-1/3"},
    {TableId::T1, 3, {2, 0.25, 2.5, 1}, -4.0 / 7.0, 3.5, kExactFraction, "-4/7"},
    {TableId::T1, 4, {1, 0.5, 3, 1}, -0.5, 4, kTwoDecimals, "-0.5"},
    {TableId::T1, 5, {2, 1, 3, 1.5}, -0.5, 4.5, kTwoDecimals, "-0.5"},
    {TableId::T1, 6, {2.5, 0.5, 3, 4}, -0.31, 7, kTwoDecimals, "-0.31"},
    {TableId::T1, 7, {3, 0.5, 3, 4.5}, -0.45, 7.5, kTwoDecimals, "-0.45"},
    {TableId::T1, 8, {4, 1, 3.5, 2}, -2, 5.5, kTwoDecimals, "-2"},
    {TableId::T1, 9, {5, 0.5, 3, 3}, -1.94, 6, kTwoDecimals, "-1.94"},
    {TableId::T1, 10, {5, 1, 3, 2}, -1.88, 5, kTwoDecimals, "-1.88"},
    {TableId::T1, 11, {kSqrt10, kInvSqrt5, pi, e + 1}, -1.0602, pi + e + 1, kFourDecimals, "-1.0602"},

    {TableId::T2, 1, {0.5, 5, 5, 1}, -1.31, 6, kTwoDecimals, "-1.31"},
    {TableId::T2, 2, {1, 5, 4, 1}, -1.625, 5, kTwoDecimals, "-1.625"},
    {TableId::T2, 3, {1, 7, 4, 1}, -1.5, 5, kTwoDecimals, "-1.5"},
    {TableId::T2, 4, {1, 7, 3, 2}, -1.0833, 5, kTwoDecimals, "-1.0833"},
    {TableId::T2, 5, {1.5, 7, 2.5, 2.5}, -1.3295, 5, kTwoDecimals, "-1.3295"},
    {TableId::T2, 6, {1.5, 7, 3.5, 1.5}, -2.0795, 5, kTwoDecimals, "-2.0795"},
    {TableId::T2, 7, {1.5, 7, 4, 3}, -4.3636, 7, kTwoDecimals, "-4.3636"},
    {TableId::T2, 8, {2, 7, 3, 2}, -2.4, 5, kTwoDecimals, "-2.4"},
    {TableId::T2, 9, {2, 7, 3, 3}, -4.6, 6, kTwoDecimals, "-4.6"},
    {TableId::T2, 10, {2, 7, 3.5, 2.5}, -4.3, 6, kTwoDecimals, "-4.3"},
    {TableId::T2, 11, {2.5, 7, 2.5, 2.5}, -1.2614, 5, kTwoDecimals, "-1.2614"},
    {TableId::T2, 12, {2.5, 7, 3, 2}, -1.5682, 5, kTwoDecimals, "-1.5682"},
    {TableId::T2, 13, {kInvSqrt5, 3 * pi / 2, 2 * e, pi / 3}, -1.382, 2 * e + pi / 3, kTwoDecimals, "-1.382"},

    {TableId::T3, 1, {4, 1, 0.5, 2.5}, -0.33, 6, kTwoDecimals, "-0.33"},
    {TableId::T3, 2, {4, 1, 1, 3.5}, -0.33, 9, kTwoDecimals, "-0.33"},
    {TableId::T3, 3, {5, 1, 1, 3.5}, -0.938, 9, kTwoDecimals, "-0.938"},
    {TableId::T3, 4, {5, 1, 0.5, 3}, -0.313, 7, kTwoDecimals, "-0.313"},
    {TableId::T3, 5, {6, 1, 1, 3.5}, -1.5, 9, kTwoDecimals, "-1.5"},
    {TableId::T3, 6, {6, 1, 1, 4.5}, -0.9, 11, kTwoDecimals, "-0.9"},
    {TableId::T3, 7, {6, 1.5, 1.0, 3.5}, -0.5, 9, kTwoDecimals, "-0.5"},
    {TableId::T3, 8, {7, 1.5, 1.5, 3.5}, -2.39, 10, kTwoDecimals, "-2.39"},
    {TableId::T3, 9, {7, 2.5, 2.5, 2.5}, -2.92, 10, kTwoDecimals, "-2.92"},
    {TableId::T3, 10, {7, 2.5, 2, 3}, -1.17, 10, kTwoDecimals, "-1.17"},
    {TableId::T3, 11, {kInvSqrt5, 3 * pi / 2, 3 * pi / 2, e / 2}, -1.12, 3 * pi + e, kTwoDecimals, "-1.12"},

    {TableId::T4, 1, {0.5, 2.5, 3, 0.5}, -0.09, 3.5, kTwoDecimals, "-0.09"},
    {TableId::T4, 2, {0.5, 3, 5, 1}, -1.35, 6, kTwoDecimals, "-1.35"},
    {TableId::T4, 3, {0.5, 5, 4, 0.5}, -0.64, 4.5, kTwoDecimals, "-0.64"},
    {TableId::T4, 4, {0.5, 7, 3, 2}, -0.52, 5, kTwoDecimals, "-0.52"},
    {TableId::T4, 5, {1, 6, 3, 1}, -0.5, 4, kTwoDecimals, "-0.5"},
    {TableId::T4, 6, {1, 7, 5, 1}, -2.67, 6, kTwoDecimals, "-2.67"},
    {TableId::T4, 7, {2, 7, 2, 3}, -1.4, 5, kTwoDecimals, "-1.4"},
    {TableId::T4, 8, {3, 7, 4, 1}, -5.62, 5, kTwoDecimals, "-5.62"},
    {TableId::T4, 9, {pi / 6, e, pi, 0.5}, -0.18, pi + 0.5, kTwoDecimals, "-0.18"},

    {TableId::T5, 1, {2.5, 0.5, 0.5, 3}, -0.156, 7, kTwoDecimals, "-0.156"},
    {TableId::T5, 2, {3, 0.5, 1, 5}, -0.3, 12, kTwoDecimals, "-0.3"},
    {TableId::T5, 3, {5, 0.5, 0.5, 4}, -0.56, 9, kTwoDecimals, "-0.56"},
    {TableId::T5, 4, {7, 0.5, 2, 3}, -6.19, 10, kTwoDecimals, "-6.19"},
    {TableId::T5, 5, {6, 1, 1, 3}, -1.8, 8, kTwoDecimals, "-1.8"},
    {TableId::T5, 6, {7, 1, 1, 5}, -1.17, 12, kTwoDecimals, "-1.17"},
    {TableId::T5, 7, {7, 2, 3, 2}, -6.3, 10, kTwoDecimals, "-6.3"},
    {TableId::T5, 8, {7, 3, 1, 4}, -4.375, 10, kTwoDecimals, "-4.375"},
    {TableId::T5, 9, {e, pi / 6, 0.5, pi}, -1.92, 2 * pi + 1, kTwoDecimals, "-1.92"},
};

}  // namespace

std::span<const TableRow> table_rows() { return kRows; }

std::vector<TableResult> reproduce_tables() {
    std::vector<TableResult> out;
    out.reserve(kRows.size());
    for (const TableRow& row : kRows) {
        TableResult r;
        r.row = row;
        const bool doubled = is_double_period_table(row.table);
        r.period = (doubled ? 2.0 : 1.0) * row.params.period();
        r.period_ok = std::abs(r.period - row.period_expected) <= 1e-12 * row.period_expected;
        try {
            r.h_star = doubled ? type2_two_cycle(row.params).first : type1_fixed_point(row.params);
        } catch (const Error& err) {
            r.note = std::string(to_string(err.kind())) + ": " + err.what();
        }
        if (r.h_star) {
            // printed values are rounded; the extra 1e-12 absorbs representation error of the bound
            r.value_ok = std::abs(*r.h_star - row.h_star_expected) <= row.tolerance + 1e-12;
            const ClosureCheck check = check_orbit_closure(row.params, *r.h_star, doubled ? 2 : 1);
            r.closure_ok = check.closure_ok;
            r.shape_ok = check.shape_ok;
            r.closure_error = check.closure_error;
            if (!r.value_ok) r.note += "closed form differs from printed value; ";
            if (!r.shape_ok) r.note += "exact orbit does not have the closed-form shape; ";
            if (!r.closure_ok) r.note += "exact orbit does not return to h*; ";
        }
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Coexistence

CoexistenceReport coexistence_report(const Params& params) {
    CoexistenceReport rep;
    rep.params = params;
    rep.dual = dual_params(params);

    const Classification c = classify(params);
    const Verdict* unstable = nullptr;
    for (const auto& v : c.verdicts) {
        if (v.kind == SolutionKind::UnstableT && v.validated) unstable = &v;
    }
    if (!unstable) {
        throw Error(ErrorKind::PreconditionViolated,
                    "coexistence check needs params with a validated unstable T-periodic orbit");
    }
    rep.unstable_h_star = unstable->h_star;
    rep.m = c.m;

    rep.dual_classification = classify(rep.dual);
    const double period = params.period();
    const double shift = params.p1;
    bool dual_ok = false;
    for (const auto& v : rep.dual_classification.verdicts) {
        if (v.kind == SolutionKind::Stable2T && v.validated) {
            rep.stable_dual_h_star = v.h_star;
            dual_ok = true;
        }
    }
    if (!dual_ok) return rep;

    // the dual system from time 0 is the original system started at p1
    const double h_s = rep.stable_dual_h_star;
    const PiecewisePath dual_path = propagate(rep.dual, {h_s}, 2.0 * period);
    const PiecewisePath shifted = propagate(params, {h_s}, shift + 2.0 * period, shift);
    for (const auto& b : dual_path.breakpoints()) {
        rep.shift_max_deviation = std::max(rep.shift_max_deviation, std::abs(b.x - shifted.value_at(b.t + shift)));
    }
    for (const auto& b : shifted.breakpoints()) {
        rep.shift_max_deviation = std::max(rep.shift_max_deviation, std::abs(b.x - dual_path.value_at(b.t - shift)));
    }

    bool all_converged = true;
    for (double sgn : {1.0, -1.0}) {
        PairingTrace trace;
        trace.start = rep.unstable_h_star + sgn * kPairingPerturbation;
        const double horizon = shift + 2.0 * period * kPairingPeriods;
        const PiecewisePath path = propagate(params, {trace.start}, horizon);
        for (int j = 0; j <= kPairingPeriods; ++j) trace.samples.push_back(path.value_at(shift + 2.0 * period * j));
        const double last = trace.samples.back();
        trace.final_return_distance = std::abs(last - trace.samples[trace.samples.size() - 2]);
        trace.limit_error = std::min(std::abs(last - h_s), std::abs(last + h_s));
        trace.converged = trace.final_return_distance <= kPairingThreshold && trace.limit_error <= 1e-4;
        all_converged = all_converged && trace.converged;
        rep.pairing.push_back(std::move(trace));
    }
    rep.verified = rep.shift_max_deviation <= kClosureTolerance * std::max(1.0, std::abs(h_s)) && all_converged;
    return rep;
}

CoexistenceReport coexistence_check(const Params& params) {
    CoexistenceReport rep = coexistence_report(params);
    if (!rep.verified) {
        std::string why = "coexistence not verified:";
        if (!rep.dual_classification.has_validated(SolutionKind::Stable2T)) {
            why += " dual has no validated stable 2T orbit (kind " +
                   std::string(to_string(rep.dual_classification.kind)) + ");";
        }
        if (rep.shift_max_deviation > kClosureTolerance) {
            why += " shifted orbits differ by " + std::to_string(rep.shift_max_deviation) + ";";
        }
        for (const auto& t : rep.pairing) {
            if (!t.converged) {
                why += " start " + std::to_string(t.start) + " return distance " +
                       std::to_string(t.final_return_distance) + ";";
            }
        }
        throw Error(ErrorKind::PairingFailed, why);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Scan

std::size_t ScanReport::count(SolutionKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        cells.begin(), cells.end(), [kind](const ScanCell& c) { return c.classification.kind == kind; }));
}

namespace {

void check_axis(const AxisRange& r, int res, const char* name) {
    if (!(r.lo > 0.0) || !(r.hi >= r.lo) || !std::isfinite(r.hi)) {
        fail_validation(name, "range must satisfy 0 < lo <= hi");
    }
    if (res < 2) fail_validation(name, "resolution must be at least 2");
}

double axis_value(const AxisRange& r, int i, int res) {
    return r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(res - 1);
}

}  // namespace

ScanReport scan(const ScanBox& box, unsigned threads) {
    check_axis(box.a1, box.resolution[0], "a1");
    check_axis(box.a2, box.resolution[1], "a2");
    check_axis(box.p1, box.resolution[2], "p1");
    check_axis(box.p2, box.resolution[3], "p2");

    const auto& res = box.resolution;
    const std::size_t total = static_cast<std::size_t>(res[0]) * res[1] * res[2] * res[3];
    ScanReport rep;
    rep.box = box;
    rep.cells.resize(total);
    for (std::size_t n = 0; n < total; ++n) {
        std::size_t rest = n;
        std::array<int, 4> idx{};
        for (int axis = 3; axis >= 0; --axis) {
            idx[axis] = static_cast<int>(rest % res[axis]);
            rest /= res[axis];
        }
        rep.cells[n].index = idx;
        rep.cells[n].params = {axis_value(box.a1, idx[0], res[0]), axis_value(box.a2, idx[1], res[1]),
                               axis_value(box.p1, idx[2], res[2]), axis_value(box.p2, idx[3], res[3])};
    }

    auto classify_range = [&rep](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
            try {
                rep.cells[n].classification = classify(rep.cells[n].params);
            } catch (const Error&) {
                // p1 + p2 <= 1 corner of the box
                rep.cells[n].classification = Classification{};
            }
        }
    };
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (total + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(total, begin + chunk);
            if (begin < end) pool.emplace_back(classify_range, begin, end);
        }
    }

    for (const auto& cell : rep.cells) {
        if (cell.classification.has_validated(SolutionKind::StableT) &&
            cell.classification.has_validated(SolutionKind::UnstableT)) {
            rep.stable_unstable_overlap = true;
        }
    }

    // connected components of equal kind, 4D grid adjacency
    const std::array<std::size_t, 4> stride{static_cast<std::size_t>(res[1]) * res[2] * res[3],
                                            static_cast<std::size_t>(res[2]) * res[3],
                                            static_cast<std::size_t>(res[3]), 1};
    std::vector<bool> seen(total, false);
    for (std::size_t n = 0; n < total; ++n) {
        if (seen[n]) continue;
        const SolutionKind kind = rep.cells[n].classification.kind;
        std::size_t size = 0;
        std::queue<std::size_t> todo;
        todo.push(n);
        seen[n] = true;
        while (!todo.empty()) {
            const std::size_t cur = todo.front();
            todo.pop();
            ++size;
            const auto& idx = rep.cells[cur].index;
            for (int axis = 0; axis < 4; ++axis) {
                for (int dir : {-1, 1}) {
                    const int v = idx[axis] + dir;
                    if (v < 0 || v >= res[axis]) continue;
                    const std::size_t nb = dir < 0 ? cur - stride[axis] : cur + stride[axis];
                    if (!seen[nb] && rep.cells[nb].classification.kind == kind) {
                        seen[nb] = true;
                        todo.push(nb);
                    }
                }
            }
        }
        rep.components.push_back({kind, size});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Smoothing convergence

double orbit_period_of(const Params& params) {
    const Classification c = classify(params);
    return c.kind == SolutionKind::Stable2T ? 2.0 * params.period() : params.period();
}

double periodicity_residual(const DenseSolution& solution, double period, double from) {
    const auto times = solution.times();
    const auto values = solution.values();
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < from || t + period > solution.end_time()) continue;
        worst = std::max(worst, std::abs(solution.value_at(t + period) - values[i]));
    }
    return worst;
}

namespace {

constexpr double kIntegratorErrorFloor = 1e-12;

double outside_difference(const DenseSolution& coarse, const DenseSolution& fine,
                          const std::vector<TimeWindow>& windows, double from) {
    double worst = 0.0;
    std::size_t w = 0;
    const auto times = coarse.times();
    const auto values = coarse.values();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < from) continue;
        while (w < windows.size() && windows[w].hi < t) ++w;
        if (w < windows.size() && windows[w].lo <= t) continue;
        worst = std::max(worst, std::abs(values[i] - fine.value_at(t)));
    }
    return worst;
}

}  // namespace

ConvergenceTable smoothing_convergence(const Params& params, double h, std::span<const double> deltas,
                                       Profile profile) {
    params.validate();
    if (deltas.empty()) fail_validation("deltas", "need at least one delta");
    for (double d : deltas) SmoothingSpec{d, profile}.validate(params);

    ConvergenceTable table;
    table.params = params;
    table.h = h;
    table.orbit_period = orbit_period_of(params);
    table.transient = transient_time(table.orbit_period);
    const double t_end = table.transient + 3.0 * table.orbit_period;

    for (double delta : deltas) {
        const SmoothingSpec smoothing{delta, profile};
        const double step = default_step(smoothing);
        const DenseSolution coarse = integrate(params, smoothing, h, t_end, step);
        const DenseSolution fine = integrate(params, smoothing, h, t_end, 0.5 * step);
        const SmoothedComparison cmp = compare_exact_smoothed(params, smoothing, coarse);

        ConvergenceRow row;
        row.delta = delta;
        row.max_dev_overall = cmp.max_dev_overall;
        row.max_dev_outside = cmp.max_dev_outside_corners;
        row.integrator_error = std::max(kIntegratorErrorFloor,
                                        outside_difference(coarse, fine, cmp.corner_windows, cmp.reference_start));
        row.residual = periodicity_residual(coarse, table.orbit_period, table.transient);
        table.rows.push_back(row);
    }

    table.monotone = true;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (table.rows[i].max_dev_overall > table.rows[i - 1].max_dev_overall) table.monotone = false;
    }
    double num = 0.0, den = 0.0;
    for (const auto& r : table.rows) {
        num += r.delta * r.max_dev_overall;
        den += r.delta * r.delta;
    }
    table.fitted_constant = den > 0.0 ? num / den : 0.0;
    table.linear_ok = std::all_of(table.rows.begin(), table.rows.end(), [&](const ConvergenceRow& r) {
        return r.max_dev_overall <= 1.5 * table.fitted_constant * r.delta;
    });
    return table;
}

}  // namespace relaydde
