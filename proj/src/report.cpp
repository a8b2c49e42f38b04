#include "bookmaker/report.hpp"

#include <cstdio>
#include <sstream>

#include "bookmaker/textio.hpp"

namespace bookmaker {

namespace {

std::string class_label(const std::vector<std::string>& names, int cls) {
  if (cls >= 0 && cls < static_cast<int>(names.size())) return names[cls];
  return std::to_string(cls);
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  out += '"';
  return out;
}

std::string opt17(const std::optional<double>& v) { return v ? g17(*v) : "null"; }

std::string render_json(const MetricReport& r, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"n\": " << g17(r.n) << ",\n";
  out << "  \"k\": " << r.k << ",\n";
  out << "  \"accuracy\": " << g17(r.accuracy) << ",\n";
  out << "  \"informedness\": " << opt17(r.informedness) << ",\n";
  out << "  \"markedness\": " << opt17(r.markedness) << ",\n";
  out << "  \"kappa\": " << opt17(r.kappa) << ",\n";
  out << "  \"correlation\": " << opt17(r.correlation) << ",\n";
  out << "  \"notes\": [";
  for (std::size_t i = 0; i < r.notes.size(); ++i) {
    out << (i ? ", " : "") << json_string(r.notes[i]);
  }
  out << "],\n";
  out << "  \"per_class\": [\n";
  for (std::size_t i = 0; i < r.per_class.size(); ++i) {
    const PerClassMetrics& pc = r.per_class[i];
    out << "    {\"class\": " << json_string(class_label(names, pc.cls))
        << ", \"prevalence\": " << g17(pc.prevalence) << ", \"bias\": " << g17(pc.bias)
        << ", \"delta_p\": " << opt17(pc.delta_p)
        << ", \"delta_p_prime\": " << opt17(pc.delta_p_prime)
        << ", \"precision\": " << opt17(pc.precision) << ", \"recall\": " << opt17(pc.recall)
        << "}" << (i + 1 < r.per_class.size() ? "," : "") << '\n';
  }
  out << "  ]\n}\n";
  return out.str();
}

std::string render_csv(const MetricReport& r, const std::vector<std::string>& names) {
  std::ostringstream out;
  const auto opt = [](const std::optional<double>& v) { return v ? g17(*v) : std::string(); };
  out << "scope,metric,value\n";
  out << "overall,n," << g17(r.n) << '\n';
  out << "overall,k," << r.k << '\n';
  out << "overall,accuracy," << g17(r.accuracy) << '\n';
  out << "overall,informedness," << opt(r.informedness) << '\n';
  out << "overall,markedness," << opt(r.markedness) << '\n';
  out << "overall,kappa," << opt(r.kappa) << '\n';
  out << "overall,correlation," << opt(r.correlation) << '\n';
  for (const PerClassMetrics& pc : r.per_class) {
    const std::string label = class_label(names, pc.cls);
    out << label << ",prevalence," << g17(pc.prevalence) << '\n';
    out << label << ",bias," << g17(pc.bias) << '\n';
    out << label << ",delta_p," << opt(pc.delta_p) << '\n';
    out << label << ",delta_p_prime," << opt(pc.delta_p_prime) << '\n';
    out << label << ",precision," << opt(pc.precision) << '\n';
    out << label << ",recall," << opt(pc.recall) << '\n';
  }
  for (const std::string& note : r.notes) {
    std::string cleaned = note;
    for (char& ch : cleaned) {
      if (ch == ',') ch = ';';
    }
    out << "note,," << cleaned << '\n';
  }
  return out.str();
}

std::string fixed6(const std::optional<double>& v) {
  if (!v) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

std::string render_table(const MetricReport& r, const std::vector<std::string>& names) {
  std::ostringstream out;
  const auto cell = [&out](const std::string& text) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%-10s", text.c_str());
    out << buf;
  };
  out << "n=" << g17(r.n) << "  k=" << r.k << '\n';
  out << "accuracy      " << fixed6(r.accuracy) << '\n';
  out << "informedness  " << fixed6(r.informedness) << '\n';
  out << "markedness    " << fixed6(r.markedness) << '\n';
  out << "kappa         " << fixed6(r.kappa) << '\n';
  out << "correlation   " << fixed6(r.correlation) << '\n';
  out << '\n';
  for (const char* title : {"class", "prev", "bias", "dP", "dP'", "prec"}) cell(title);
  out << "recall\n";
  for (const PerClassMetrics& pc : r.per_class) {
    cell(class_label(names, pc.cls));
    cell(fixed6(pc.prevalence));
    cell(fixed6(pc.bias));
    cell(fixed6(pc.delta_p));
    cell(fixed6(pc.delta_p_prime));
    cell(fixed6(pc.precision));
    out << fixed6(pc.recall) << '\n';
  }
  for (const std::string& note : r.notes) out << "note: " << note << '\n';
  return out.str();
}

}  // namespace

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw ValueError("unknown report format '" + name + "'");
}

std::string render_report(const MetricReport& report,
                          const std::vector<std::string>& class_names, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return render_json(report, class_names);
    case ReportFormat::Csv: return render_csv(report, class_names);
    case ReportFormat::Table: return render_table(report, class_names);
  }
  throw ValueError("unknown report format");
}

bool report_is_partial(const MetricReport& report) { return !report.notes.empty(); }

}  // namespace bookmaker
