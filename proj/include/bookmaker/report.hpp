#pragma once

#include <string>
#include <vector>

#include "bookmaker/metrics.hpp"

namespace bookmaker {

enum class ReportFormat { Table, Json, Csv };

ReportFormat report_format_from_name(const std::string& name);

/// Renders a metric report. The json and csv forms are byte-stable surfaces
/// with numbers at 17 significant digits; the table form is for humans only.
/// `class_names` supplies the per-class labels (indices when empty).
std::string render_report(const MetricReport& report,
                          const std::vector<std::string>& class_names, ReportFormat format);

/// True when some metric could not be computed (degenerate marginals), i.e.
/// the report is partial and the CLI should exit with status 3.
bool report_is_partial(const MetricReport& report);

}  // namespace bookmaker
