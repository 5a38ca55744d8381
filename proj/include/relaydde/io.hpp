#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "relaydde/analysis.hpp"
#include "relaydde/exact.hpp"
#include "relaydde/maps.hpp"
#include "relaydde/numeric.hpp"

namespace relaydde {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Strict parse of a whole field; Error{Validation} naming `field` otherwise.
double parse_double(std::string_view text, std::string_view field);

// CSV. Exact paths use columns t,x; the first row is (start - 1, h), the left
// end of the constant history, followed by every breakpoint.
void write_path_csv(std::ostream& os, const PiecewisePath& path);
PiecewisePath read_path_csv(std::istream& is);

/// Columns t,x,dx. Keeps every `thin`-th grid node plus the last one.
void write_dense_csv(std::ostream& os, const DenseSolution& solution, std::size_t thin = 1);

void write_tables_csv(std::ostream& os, const std::vector<TableResult>& results);
void write_scan_csv(std::ostream& os, const ScanReport& report);
void write_convergence_csv(std::ostream& os, const ConvergenceTable& table);

// JSON.
nlohmann::json to_json(const Params& params);
nlohmann::json to_json(const PiecewisePath& path);
nlohmann::json to_json(const DenseSolution& solution, std::size_t thin = 1);
nlohmann::json to_json(const Classification& c);
nlohmann::json to_json(const std::vector<TableResult>& results);
nlohmann::json to_json(const CoexistenceReport& report);
nlohmann::json to_json(const ScanReport& report);
nlohmann::json to_json(const ConvergenceTable& table);

}  // namespace relaydde
