#include "alignkit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace alignkit {

std::string round_half_up(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", std::abs(value));
  std::string s = buf;
  if (s.find('e') != std::string::npos) {
    std::snprintf(buf, sizeof buf, "%.20f", std::abs(value));
    s = buf;
  }
  auto dot = s.find('.');
  std::string whole = dot == std::string::npos ? s : s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
  frac.resize(std::max<std::size_t>(frac.size(), static_cast<std::size_t>(digits) + 1), '0');
  bool round_up = frac[static_cast<std::size_t>(digits)] >= '5';
  std::string digits_str = whole + frac.substr(0, static_cast<std::size_t>(digits));
  if (round_up) {
    int i = static_cast<int>(digits_str.size()) - 1;
    while (i >= 0 && digits_str[static_cast<std::size_t>(i)] == '9') {
      digits_str[static_cast<std::size_t>(i)] = '0';
      --i;
    }
    if (i < 0) {
      digits_str.insert(digits_str.begin(), '1');
    } else {
      ++digits_str[static_cast<std::size_t>(i)];
    }
  }
  std::string int_part = digits_str.substr(0, digits_str.size() - static_cast<std::size_t>(digits));
  std::string out = int_part.empty() ? "0" : int_part;
  if (digits > 0) out += "." + digits_str.substr(int_part.size());
  bool zero = std::all_of(digits_str.begin(), digits_str.end(), [](char c) { return c == '0'; });
  return (value < 0 && !zero ? "-" : "") + out;
}

std::string display_metric(const std::optional<double>& value) {
  if (!value) return "undefined";
  return round_half_up(*value, 3);
}

namespace {

struct Field {
  std::string name;
  std::string (*get)(const ReportRow&);
};

std::string percent(const AmbiguityDegree& a) {
  return a.defined ? round_half_up(a.percent, 2) + "%" : "undefined";
}

std::string signed_count(long long v) { return (v > 0 ? "+" : "") + std::to_string(v); }

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      {"Variant", [](const ReportRow& r) { return r.variant; }},
      {"Threshold",
       [](const ReportRow& r) { return r.threshold ? round_half_up(*r.threshold, 2) : std::string("-"); }},
      {"R", [](const ReportRow& r) { return std::to_string(r.report.reference_size); }},
      {"A", [](const ReportRow& r) { return std::to_string(r.report.alignment_size); }},
      {"Amb", [](const ReportRow& r) { return std::to_string(r.report.ambiguity.ambiguous); }},
      {"Precision", [](const ReportRow& r) { return display_metric(r.report.precision); }},
      {"Recall", [](const ReportRow& r) { return display_metric(r.report.recall); }},
      {"F-measure", [](const ReportRow& r) { return display_metric(r.report.f_measure_alpha); }},
      {"Overall", [](const ReportRow& r) { return display_metric(r.report.overall); }},
      {"Ambiguity", [](const ReportRow& r) { return percent(r.report.ambiguity); }},
      {"Delta", [](const ReportRow& r) { return signed_count(r.report.delta.value); }},
  };
  return kFields;
}

nlohmann::ordered_json metric(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return *v < 0 ? "-inf" : "inf";
  return *v;
}

nlohmann::ordered_json report_object(const EvaluationReport& rep) {
  nlohmann::ordered_json o;
  o["tp"] = rep.counts.tp;
  o["fp"] = rep.counts.fp;
  o["fn"] = rep.counts.fn;
  o["tn"] = rep.counts.tn ? nlohmann::ordered_json(*rep.counts.tn) : nlohmann::ordered_json(nullptr);
  o["reference_size"] = rep.reference_size;
  o["alignment_size"] = rep.alignment_size;
  o["ambiguous"] = rep.ambiguity.ambiguous;
  o["precision"] = metric(rep.precision);
  o["recall"] = metric(rep.recall);
  o["noise"] = metric(rep.noise);
  o["silence"] = metric(rep.silence);
  o["alpha"] = rep.alpha;
  o["f_measure_alpha"] = metric(rep.f_measure_alpha);
  o["f1"] = metric(rep.f1);
  o["overall"] = metric(rep.overall);
  o["ambiguity_percent"] = rep.ambiguity.defined ? nlohmann::ordered_json(rep.ambiguity.percent)
                                                 : nlohmann::ordered_json(nullptr);
  o["delta"] = rep.delta.value;
  o["matching"] = std::string(to_string(rep.delta.balance));
  return o;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render_table(const std::vector<ReportRow>& rows) {
  const auto& fs = fields();
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) width[i] = fs[i].name.size();
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      line.push_back(fs[i].get(row));
      width[i] = std::max(width[i], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out << "  ";
      if (i == 0) {
        out << line[i] << std::string(width[i] - line[i].size(), ' ');
      } else {
        out << std::string(width[i] - line[i].size(), ' ') << line[i];
      }
    }
    out << "\n";
  };
  std::vector<std::string> header;
  for (const auto& f : fs) header.push_back(f.name);
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << "\n";
  for (const auto& line : cells) emit(line);
  return out.str();
}

std::string render_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "variant,threshold,R,A,amb,tp,fp,fn,precision,recall,f_measure,f1,overall,ambiguity_pct,delta\n";
  auto raw = [](const std::optional<double>& v) -> std::string {
    if (!v) return "";
    if (std::isinf(*v)) return *v < 0 ? "-inf" : "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
  };
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << csv_escape(row.variant) << ',' << raw(row.threshold) << ',' << r.reference_size << ','
        << r.alignment_size << ',' << r.ambiguity.ambiguous << ',' << r.counts.tp << ','
        << r.counts.fp << ',' << r.counts.fn << ',' << raw(r.precision) << ',' << raw(r.recall)
        << ',' << raw(r.f_measure_alpha) << ',' << raw(r.f1) << ',' << raw(r.overall) << ','
        << (r.ambiguity.defined ? raw(r.ambiguity.percent) : "") << ',' << r.delta.value << "\n";
  }
  return out.str();
}

std::string report_to_json(const EvaluationReport& report) {
  return report_object(report).dump(2) + "\n";
}

std::string render_json(const std::vector<ReportRow>& rows) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json o;
    o["variant"] = row.variant;
    o["threshold"] = row.threshold ? nlohmann::ordered_json(*row.threshold) : nlohmann::ordered_json(nullptr);
    o["report"] = report_object(row.report);
    doc.push_back(std::move(o));
  }
  return doc.dump(2) + "\n";
}

}  // namespace alignkit
