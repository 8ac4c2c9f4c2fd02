#ifndef FHL_CLI_HPP
#define FHL_CLI_HPP

#include <string>
#include <vector>

#include "fhl/archive.hpp"

namespace fhl {

/// Entry point of the `fhl` tool. Exit codes: 0 ok, 1 validation, 2 numerical.
int run_command(int argc, char** argv);
int run_command(const std::vector<std::string>& args);

/// Sweep-level diagnostics of a report; depends only on the report and config.
json analyze_report(const ContinuationReport& r, const RunConfig& cfg);

/// report.json document for a finished sweep.
json report_document(const ContinuationReport& r, const RunConfig& cfg);

/// Copy of a report document with every wall_time field removed.
json strip_timing(json j);

}  // namespace fhl

#endif
