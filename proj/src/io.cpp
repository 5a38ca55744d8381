#include "relaydde/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "relaydde/error.hpp"

namespace relaydde {

using nlohmann::json;

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view field) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        fail_validation(std::string(field), "not a number: '" + std::string(text) + "'");
    }
    return v;
}

// ---------------------------------------------------------------------------

void write_path_csv(std::ostream& os, const PiecewisePath& path) {
    os << "t,x\n";
    os << format_double(path.start_time() - 1.0) << ',' << format_double(path.history_value()) << '\n';
    for (const auto& b : path.breakpoints()) os << format_double(b.t) << ',' << format_double(b.x) << '\n';
}

PiecewisePath read_path_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "t,x") fail_validation("csv", "expected header 't,x'");
    std::vector<Breakpoint> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) fail_validation("csv", "line " + std::to_string(lineno) + ": missing ','");
        const std::string_view sv(line);
        rows.push_back({parse_double(sv.substr(0, comma), "t"), parse_double(sv.substr(comma + 1), "x")});
    }
    if (rows.size() < 3) fail_validation("csv", "need the history row and at least two breakpoints");
    const double history = rows.front().x;
    rows.erase(rows.begin());
    return PiecewisePath(std::move(rows), history);
}

void write_dense_csv(std::ostream& os, const DenseSolution& solution, std::size_t thin) {
    if (thin == 0) fail_validation("thin", "must be at least 1");
    const auto t = solution.times();
    const auto x = solution.values();
    const auto dx = solution.right_derivatives();
    os << "t,x,dx\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i % thin != 0 && i + 1 != t.size()) continue;
        os << format_double(t[i]) << ',' << format_double(x[i]) << ',' << format_double(dx[i]) << '\n';
    }
}

void write_tables_csv(std::ostream& os, const std::vector<TableResult>& results) {
    os << "table,row,a1,a2,p1,p2,h_printed,h_computed,period,value_ok,period_ok,closure_ok,shape_ok,"
          "closure_error,status\n";
    for (const auto& r : results) {
        const Params& p = r.row.params;
        os << to_string(r.row.table) << ',' << r.row.index << ',' << format_double(p.a1) << ','
           << format_double(p.a2) << ',' << format_double(p.p1) << ',' << format_double(p.p2) << ','
           << r.row.printed << ',' << (r.h_star ? format_double(*r.h_star) : std::string("nan")) << ','
           << format_double(r.period) << ',' << r.value_ok << ',' << r.period_ok << ',' << r.closure_ok << ','
           << r.shape_ok << ',' << format_double(r.closure_error) << ',' << (r.pass() ? "PASS" : "FAIL") << '\n';
    }
}

void write_scan_csv(std::ostream& os, const ScanReport& report) {
    os << "i_a1,i_a2,i_p1,i_p2,a1,a2,p1,p2,kind,h_star,period,validated,m,k,d\n";
    for (const auto& cell : report.cells) {
        const auto& c = cell.classification;
        const auto& p = cell.params;
        os << cell.index[0] << ',' << cell.index[1] << ',' << cell.index[2] << ',' << cell.index[3] << ','
           << format_double(p.a1) << ',' << format_double(p.a2) << ',' << format_double(p.p1) << ','
           << format_double(p.p2) << ',' << to_string(c.kind) << ',' << format_double(c.h_star) << ','
           << format_double(c.period) << ',' << c.validated << ',' << format_double(c.m) << ','
           << format_double(c.k) << ',' << format_double(c.d) << '\n';
    }
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table) {
    os << "delta,max_dev_overall,max_dev_outside,integrator_error,residual\n";
    for (const auto& r : table.rows) {
        os << format_double(r.delta) << ',' << format_double(r.max_dev_overall) << ','
           << format_double(r.max_dev_outside) << ',' << format_double(r.integrator_error) << ','
           << format_double(r.residual) << '\n';
    }
}

// ---------------------------------------------------------------------------

namespace {

// JSON has no NaN or infinity
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json verdict_json(const Verdict& v) {
    return {{"kind", to_string(v.kind)}, {"type", v.type},           {"h_star", number(v.h_star)},
            {"period", v.period},         {"validated", v.validated}, {"boundary", v.boundary},
            {"closure_error", number(v.closure_error)}};
}

}  // namespace

json to_json(const Params& p) { return {{"a1", p.a1}, {"a2", p.a2}, {"p1", p.p1}, {"p2", p.p2}}; }

json to_json(const PiecewisePath& path) {
    json bps = json::array();
    for (const auto& b : path.breakpoints()) bps.push_back({b.t, b.x});
    return {{"history", path.history_value()}, {"start", path.start_time()}, {"breakpoints", std::move(bps)}};
}

json to_json(const DenseSolution& solution, std::size_t thin) {
    if (thin == 0) fail_validation("thin", "must be at least 1");
    json t = json::array(), x = json::array();
    const auto times = solution.times();
    const auto values = solution.values();
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i % thin != 0 && i + 1 != times.size()) continue;
        t.push_back(times[i]);
        x.push_back(values[i]);
    }
    return {{"history", solution.history_value()}, {"step", solution.step()}, {"t", std::move(t)},
            {"x", std::move(x)}};
}

json to_json(const Classification& c) {
    json verdicts = json::array();
    for (const auto& v : c.verdicts) verdicts.push_back(verdict_json(v));
    return {{"kind", to_string(c.kind)},
            {"h_star", number(c.h_star)},
            {"period", c.period},
            {"validated", c.validated},
            {"boundary", c.boundary},
            {"m", c.m},
            {"b", c.b},
            {"k", c.k},
            {"d", c.d},
            {"verdicts", std::move(verdicts)}};
}

json to_json(const std::vector<TableResult>& results) {
    json rows = json::array();
    std::size_t passed = 0;
    for (const auto& r : results) {
        passed += r.pass();
        rows.push_back({{"table", to_string(r.row.table)},
                        {"row", r.row.index},
                        {"params", to_json(r.row.params)},
                        {"h_printed", r.row.printed},
                        {"h_computed", r.h_star ? number(*r.h_star) : json(nullptr)},
                        {"period", r.period},
                        {"value_ok", r.value_ok},
                        {"period_ok", r.period_ok},
                        {"closure_ok", r.closure_ok},
                        {"shape_ok", r.shape_ok},
                        {"closure_error", number(r.closure_error)},
                        {"status", r.pass() ? "PASS" : "FAIL"},
                        {"note", r.note}});
    }
    return {{"rows", std::move(rows)}, {"passed", passed}, {"total", results.size()}};
}

json to_json(const CoexistenceReport& rep) {
    json pairing = json::array();
    for (const auto& t : rep.pairing) {
        pairing.push_back({{"start", t.start},
                           {"samples", t.samples},
                           {"final_return_distance", t.final_return_distance},
                           {"limit_error", t.limit_error},
                           {"converged", t.converged}});
    }
    return {{"params", to_json(rep.params)},
            {"dual", to_json(rep.dual)},
            {"unstable_h_star", rep.unstable_h_star},
            {"m", rep.m},
            {"dual_classification", to_json(rep.dual_classification)},
            {"stable_dual_h_star", rep.stable_dual_h_star},
            {"shift_max_deviation", rep.shift_max_deviation},
            {"pairing", std::move(pairing)},
            {"verified", rep.verified}};
}

json to_json(const ScanReport& rep) {
    auto range = [](const AxisRange& r) { return json::array({r.lo, r.hi}); };
    json counts = json::object();
    for (auto kind : {SolutionKind::StableT, SolutionKind::UnstableT, SolutionKind::Stable2T,
                      SolutionKind::Diverges2T, SolutionKind::ShapeInvalid}) {
        counts[std::string(to_string(kind))] = rep.count(kind);
    }
    json comps = json::array();
    for (const auto& c : rep.components) comps.push_back({{"kind", to_string(c.kind)}, {"cells", c.cells}});
    json cells = json::array();
    for (const auto& cell : rep.cells) {
        cells.push_back({{"index", cell.index}, {"params", to_json(cell.params)},
                         {"kind", to_string(cell.classification.kind)},
                         {"h_star", number(cell.classification.h_star)},
                         {"validated", cell.classification.validated}});
    }
    return {{"box",
             {{"a1", range(rep.box.a1)},
              {"a2", range(rep.box.a2)},
              {"p1", range(rep.box.p1)},
              {"p2", range(rep.box.p2)},
              {"resolution", rep.box.resolution}}},
            {"counts", std::move(counts)},
            {"components", std::move(comps)},
            {"stable_unstable_overlap", rep.stable_unstable_overlap},
            {"cells", std::move(cells)}};
}

json to_json(const ConvergenceTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"delta", r.delta},
                        {"max_dev_overall", r.max_dev_overall},
                        {"max_dev_outside", r.max_dev_outside},
                        {"integrator_error", r.integrator_error},
                        {"residual", r.residual}});
    }
    return {{"params", to_json(table.params)}, {"h", table.h},
            {"orbit_period", table.orbit_period}, {"transient", table.transient},
            {"rows", std::move(rows)},          {"monotone", table.monotone},
            {"fitted_constant", table.fitted_constant}, {"linear_ok", table.linear_ok}};
}

}  // namespace relaydde
