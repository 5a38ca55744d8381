#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaydde/analysis.hpp"
#include "relaydde/error.hpp"
#include "relaydde/exact.hpp"
#include "relaydde/io.hpp"
#include "relaydde/maps.hpp"
#include "relaydde/numeric.hpp"

namespace fs = std::filesystem;
using namespace relaydde;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRegression = 3;

constexpr const char* kOutputDirEnv = "RELAYDDE_OUTPUT_DIR";

struct RunConfig {
    std::string command;
    std::optional<double> a1, a2, p1, p2;
    std::optional<double> h;
    double delta = 0.0;
    std::string profile = "affine";
    std::optional<double> t_end;
    double step = 0.0;
    std::string output;
    std::string format;
    std::size_t thin = 1;
    std::vector<double> deltas{0.05, 0.025, 0.0125};
    std::vector<double> a1_range, a2_range, p1_range, p2_range;
    std::vector<int> resolution{3};
    unsigned threads = 0;
};

Params require_params(const RunConfig& cfg) {
    auto need = [](const std::optional<double>& v, const char* name) {
        if (!v) fail_validation(name, "required for this command");
        return *v;
    };
    Params p{need(cfg.a1, "a1"), need(cfg.a2, "a2"), need(cfg.p1, "p1"), need(cfg.p2, "p2")};
    p.validate();
    return p;
}

SmoothingSpec smoothing_of(const RunConfig& cfg, const Params& p) {
    SmoothingSpec s{cfg.delta, profile_from_string(cfg.profile)};
    s.validate(p);
    return s;
}

// h from the flag, otherwise the representative of the classified orbit
double initial_value(const RunConfig& cfg, const Params& p) {
    if (cfg.h) {
        if (*cfg.h == 0.0 || !std::isfinite(*cfg.h)) fail_validation("h", "must be finite and nonzero");
        return *cfg.h;
    }
    const Classification c = classify(p);
    if (!c.validated) fail_validation("h", "not given and params have no validated periodic orbit");
    return c.h_star;
}

std::string resolve_format(const RunConfig& cfg, const char* fallback) {
    const std::string f = cfg.format.empty() ? fallback : cfg.format;
    if (f != "csv" && f != "json") fail_validation("format", "must be csv or json");
    return f;
}

// Writes to --output, else to $RELAYDDE_OUTPUT_DIR/<command>.<format>, else stdout.
void emit(const RunConfig& cfg, const std::string& format, const std::string& text) {
    fs::path target;
    if (!cfg.output.empty()) {
        target = cfg.output;
    } else if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
        target = fs::path(dir) / (cfg.command + "." + format);
    }
    if (target.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(target, std::ios::binary);
    if (!out) throw Error(ErrorKind::NonFiniteState, "cannot open output file " + target.string());
    out << text;
    if (!out) throw Error(ErrorKind::NonFiniteState, "failed writing " + target.string());
    std::cerr << "wrote " << target.string() << '\n';
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int run_simulate(const RunConfig& cfg) {
    const Params p = require_params(cfg);
    const SmoothingSpec s = smoothing_of(cfg, p);
    const double h = initial_value(cfg, p);
    const double t_end = cfg.t_end.value_or(2.0 * p.period());
    if (!(t_end > 0.0)) fail_validation("t-end", "must be positive");
    const std::string format = resolve_format(cfg, "csv");
    std::ostringstream os;
    if (!s.smoothed()) {
        const PiecewisePath path = propagate(p, {h}, t_end);
        if (format == "csv") write_path_csv(os, path);
        else os << dump(to_json(path));
    } else {
        const double step = cfg.step > 0.0 ? cfg.step : default_step(s);
        const DenseSolution sol = integrate(p, s, h, t_end, step);
        if (format == "csv") write_dense_csv(os, sol, cfg.thin);
        else os << dump(to_json(sol, cfg.thin));
    }
    emit(cfg, format, os.str());
    return kExitOk;
}

int run_classify(const RunConfig& cfg) {
    const Params p = require_params(cfg);
    const std::string format = resolve_format(cfg, "json");
    const Classification c = classify(p);
    std::ostringstream os;
    if (format == "json") {
        os << dump(to_json(c));
    } else {
        os << "kind,h_star,period,validated,m,b,k,d\n"
           << to_string(c.kind) << ',' << format_double(c.h_star) << ',' << format_double(c.period) << ','
           << c.validated << ',' << format_double(c.m) << ',' << format_double(c.b) << ','
           << format_double(c.k) << ',' << format_double(c.d) << '\n';
    }
    emit(cfg, format, os.str());
    return kExitOk;
}

int run_tables(const RunConfig& cfg) {
    const auto results = reproduce_tables();
    std::size_t failed = 0;
    for (const auto& r : results) {
        const Params& p = r.row.params;
        std::cout << (r.pass() ? "PASS " : "FAIL ") << to_string(r.row.table) << " row " << r.row.index << " ("
                  << p.a1 << ", " << p.a2 << ", " << p.p1 << ", " << p.p2 << ") printed " << r.row.printed
                  << " computed " << (r.h_star ? format_double(*r.h_star) : std::string("none"));
        if (!r.pass()) std::cout << "  [" << r.note << "]";
        std::cout << '\n';
        failed += !r.pass();
    }
    std::cout << (results.size() - failed) << "/" << results.size() << " rows PASS\n";
    if (!cfg.output.empty() || std::getenv(kOutputDirEnv)) {
        const std::string format = resolve_format(cfg, "csv");
        std::ostringstream os;
        if (format == "csv") write_tables_csv(os, results);
        else os << dump(to_json(results));
        emit(cfg, format, os.str());
    }
    return failed ? kExitRegression : kExitOk;
}

AxisRange range_of(const std::vector<double>& v, const char* name) {
    if (v.size() != 2) fail_validation(name, "needs two values: lo hi");
    return {v[0], v[1]};
}

int run_scan(const RunConfig& cfg) {
    ScanBox box{range_of(cfg.a1_range, "a1-range"), range_of(cfg.a2_range, "a2-range"),
                range_of(cfg.p1_range, "p1-range"), range_of(cfg.p2_range, "p2-range")};
    if (cfg.resolution.size() == 1) box.resolution.fill(cfg.resolution[0]);
    else if (cfg.resolution.size() == 4) std::copy(cfg.resolution.begin(), cfg.resolution.end(), box.resolution.begin());
    else fail_validation("resolution", "give one value or four");
    const ScanReport rep = scan(box, cfg.threads);
    const std::string format = resolve_format(cfg, "csv");
    std::ostringstream os;
    if (format == "csv") write_scan_csv(os, rep);
    else os << dump(to_json(rep));
    emit(cfg, format, os.str());
    return kExitOk;
}

int run_smooth(const RunConfig& cfg) {
    const Params p = require_params(cfg);
    const double h = initial_value(cfg, p);
    const ConvergenceTable table = smoothing_convergence(p, h, cfg.deltas, profile_from_string(cfg.profile));
    const std::string format = resolve_format(cfg, "csv");
    std::ostringstream os;
    if (format == "csv") write_convergence_csv(os, table);
    else os << dump(to_json(table));
    emit(cfg, format, os.str());
    return kExitOk;
}

int run_coexist(const RunConfig& cfg) {
    const Params p = require_params(cfg);
    const std::string format = resolve_format(cfg, "json");
    const CoexistenceReport rep = coexistence_report(p);
    std::ostringstream os;
    if (format == "json") {
        os << dump(to_json(rep));
    } else {
        os << "start,j,x\n";
        for (const auto& t : rep.pairing) {
            for (std::size_t j = 0; j < t.samples.size(); ++j) {
                os << format_double(t.start) << ',' << j << ',' << format_double(t.samples[j]) << '\n';
            }
        }
    }
    emit(cfg, format, os.str());
    if (!rep.verified) coexistence_check(p);  // throws PairingFailed with diagnostics
    return kExitOk;
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Validation:
        case ErrorKind::PreconditionViolated:
        case ErrorKind::StepTooLarge:
            return kExitValidation;
        default:
            return kExitComputation;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic solutions of x'(t) = a(t) f(x(t-1)) with relay feedback"};
    app.set_config("--config", "", "Flat key = value file (a1, a2, p1, p2, h, delta, profile, ...)");
    app.require_subcommand(1);
    // --h is the initial value, so help is long-form only
    app.set_help_flag("--help", "Print this help message and exit");

    RunConfig cfg;
    app.add_option("--a1", cfg.a1, "Coefficient on [0, p1)");
    app.add_option("--a2", cfg.a2, "Coefficient on [p1, T)");
    app.add_option("--p1", cfg.p1, "Length of the a1 phase");
    app.add_option("--p2", cfg.p2, "Length of the a2 phase");
    app.add_option("--h", cfg.h, "Constant initial value on [-1, 0]");
    app.add_option("--delta", cfg.delta, "Smoothing half-width (0 = exact relay)");
    app.add_option("--profile", cfg.profile, "Smoothing profile: affine | smoothexp");
    app.add_option("--t-end", cfg.t_end, "Integration horizon (default 2T)");
    app.add_option("--step", cfg.step, "Base step for smoothed runs (default min(delta/16, 1/64))");
    app.add_option("--output,-o", cfg.output, "Output file (default $RELAYDDE_OUTPUT_DIR/<command>.<format> or stdout)");
    app.add_option("--format", cfg.format, "csv | json");
    app.add_option("--thin", cfg.thin, "Keep every n-th grid node in dense output");
    app.add_option("--deltas", cfg.deltas, "Decreasing delta list for smooth")->delimiter(',');
    app.add_option("--a1-range", cfg.a1_range, "Scan range lo hi")->expected(2);
    app.add_option("--a2-range", cfg.a2_range, "Scan range lo hi")->expected(2);
    app.add_option("--p1-range", cfg.p1_range, "Scan range lo hi")->expected(2);
    app.add_option("--p2-range", cfg.p2_range, "Scan range lo hi")->expected(2);
    app.add_option("--resolution", cfg.resolution, "Grid points per axis (one value or four)");
    app.add_option("--threads", cfg.threads, "Scan worker threads (0 = hardware)");

    const std::vector<std::pair<const char*, const char*>> commands{
        {"simulate", "Exact (delta = 0) or smoothed trajectory"},
        {"classify", "Closed-form return maps plus exact validation"},
        {"tables", "Regression against the embedded parameter tables"},
        {"scan", "Classify a grid over (a1, a2, p1, p2)"},
        {"smooth", "Smoothed vs exact convergence table"},
        {"coexist", "Unstable Type I orbit paired with the dual stable 2T orbit"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        sub->set_help_flag("--help", "Print this help message and exit");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (cfg.command == "simulate") return run_simulate(cfg);
        if (cfg.command == "classify") return run_classify(cfg);
        if (cfg.command == "tables") return run_tables(cfg);
        if (cfg.command == "scan") return run_scan(cfg);
        if (cfg.command == "smooth") return run_smooth(cfg);
        return run_coexist(cfg);
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitComputation;
    }
}
