#ifndef FHL_ARCHIVE_HPP
#define FHL_ARCHIVE_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "fhl/config.hpp"
#include "fhl/diagnostics.hpp"

namespace fhl {

using json = nlohmann::json;

/// Fixed 12-significant-digit text form used by every CSV and table.
std::string fmt12(double x);

json to_json(const Params& p);
json to_json(const DomainSpec& d);
json to_json(const SolutionRecord& r, bool with_coeffs = true);
json to_json(const ContinuationEntry& e);

Params params_from_json(const json& j);
DomainSpec domain_from_json(const json& j);

/// Rebuilds a report (basis, samples and derived fields) from report.json.
ContinuationReport report_from_json(const json& j);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

void write_field_csv(const GridField& f, const std::string& path);
void write_summary_csv(const ContinuationReport& r, const std::string& path);
const std::vector<std::string>& summary_columns();

struct Chart {
  std::string title, xlabel, ylabel;
  bool log_x = false, log_y = false;
  std::vector<std::pair<std::string, Series>> lines;
};

std::string render_svg(const Chart& c);

}  // namespace fhl

#endif
