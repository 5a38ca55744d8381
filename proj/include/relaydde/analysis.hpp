#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaydde/maps.hpp"
#include "relaydde/model.hpp"
#include "relaydde/numeric.hpp"

namespace relaydde {

enum class TableId { T1, T2, T3, T4, T5 };

std::string_view to_string(TableId id) noexcept;

/// Printed row of one of the embedded parameter tables.
struct TableRow {
    TableId table;
    int index;                  ///< 1-based row number within the table
    Params params;
    double h_star_expected;
    double period_expected;     ///< T for T1, T2, T4; 2T for T3, T5
    double tolerance;           ///< absolute tolerance on h*
    const char* printed;        ///< h* as printed
};

/// All embedded rows, T1 to T5 in order.
std::span<const TableRow> table_rows();

/// Type I rows (T1, T2, T4) use G, Type II rows (T3, T5) use the 2-cycle.
inline bool is_double_period_table(TableId id) { return id == TableId::T3 || id == TableId::T5; }

struct TableResult {
    TableRow row;
    std::optional<double> h_star;   ///< empty when the closed form has no admissible value
    double period = 0.0;
    bool value_ok = false;          ///< |h* - printed| within the row tolerance
    bool period_ok = false;
    bool closure_ok = false;        ///< exact propagation returns to h* within 1e-9
    bool shape_ok = false;          ///< expected zero count per period
    double closure_error = 0.0;
    std::string note;

    bool pass() const noexcept { return value_ok && period_ok && closure_ok && shape_ok; }
};

std::vector<TableResult> reproduce_tables();

// ---------------------------------------------------------------------------

struct PairingTrace {
    double start = 0.0;                  ///< perturbed initial value
    std::vector<double> samples;         ///< x(p1 + 2T j), j = 0..periods
    double final_return_distance = 0.0;  ///< |x(p1 + 2T n) - x(p1 + 2T (n-1))|
    double limit_error = 0.0;            ///< distance of the last sample from +-h*_dual
    bool converged = false;
};

struct CoexistenceReport {
    Params params;
    Params dual;
    double unstable_h_star = 0.0;
    double m = 0.0;
    Classification dual_classification;
    double stable_dual_h_star = 0.0;
    double shift_max_deviation = 0.0;  ///< dual orbit vs original started at p1
    std::vector<PairingTrace> pairing;
    bool verified = false;
};

inline constexpr int kPairingPeriods = 30;
inline constexpr double kPairingThreshold = 1e-6;
inline constexpr double kPairingPerturbation = 1e-3;

/// Unstable Type I orbit of `params` against the stable Type II orbit of the
/// dual coefficient. Throws Error{PreconditionViolated} unless classify(params)
/// is a validated UnstableT; Error{PairingFailed} if any check fails.
CoexistenceReport coexistence_check(const Params& params);

/// Builds the report without throwing on failed checks (verified == false).
CoexistenceReport coexistence_report(const Params& params);

// ---------------------------------------------------------------------------

struct AxisRange {
    double lo = 0.0, hi = 0.0;
};

struct ScanBox {
    AxisRange a1, a2, p1, p2;
    std::array<int, 4> resolution{2, 2, 2, 2};
};

struct ScanCell {
    std::array<int, 4> index{};
    Params params;
    Classification classification;
};

struct ScanComponent {
    SolutionKind kind;
    std::size_t cells;
};

struct ScanReport {
    ScanBox box;
    std::vector<ScanCell> cells;           ///< row-major, a1 slowest
    std::vector<ScanComponent> components; ///< connected groups of equal kind
    bool stable_unstable_overlap = false;  ///< some cell validates both StableT and UnstableT
    std::size_t count(SolutionKind kind) const;
};

/// Classifies every grid point of the box (parallel over cells).
ScanReport scan(const ScanBox& box, unsigned threads = 0);

// ---------------------------------------------------------------------------

struct ConvergenceRow {
    double delta = 0.0;
    double max_dev_overall = 0.0;
    double max_dev_outside = 0.0;
    double integrator_error = 0.0;  ///< step-halving estimate outside the corner windows
    double residual = 0.0;          ///< periodicity residual after transients
};

struct ConvergenceTable {
    Params params;
    double h = 0.0;
    double orbit_period = 0.0;
    double transient = 0.0;
    std::vector<ConvergenceRow> rows;
    bool monotone = false;          ///< max_dev_overall non-increasing along the list
    double fitted_constant = 0.0;   ///< least-squares C in max_dev_overall ~ C delta
    bool linear_ok = false;         ///< every row within 1.5 C delta
};

/// Orbit period (T or 2T) used for residuals: 2T when the classification is Type II.
double orbit_period_of(const Params& params);

/// Discarded transient before attractor checks: max(10 periods, 20 time units).
inline double transient_time(double orbit_period) { return std::max(10.0 * orbit_period, 20.0); }

/// Runs the smoothed/exact comparison for each delta (decreasing list).
ConvergenceTable smoothing_convergence(const Params& params, double h, std::span<const double> deltas,
                                       Profile profile = Profile::Affine);

/// max |x(t + period) - x(t)| over grid nodes with t in [from, end - period].
double periodicity_residual(const DenseSolution& solution, double period, double from);

}  // namespace relaydde
