#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "devink/error.hpp"
#include "devink/harness.hpp"

namespace devink::harness {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json to_json(const EvalReport& r) {
  ordered_json confusion = ordered_json::array();
  for (int row = 0; row < kPrimitiveCount; ++row) {
    confusion.push_back(std::vector<std::int64_t>(
        r.confusion.begin() + row * kPrimitiveCount,
        r.confusion.begin() + (row + 1) * kPrimitiveCount));
  }
  ordered_json labels = ordered_json::array();
  for (auto name : primitive_names()) labels.push_back(std::string(name));

  ordered_json j;
  j["schema"] = kReportSchema;
  j["pipeline"] = {{"preprocess", preprocess::to_string(r.config.preprocess)},
                   {"feature", features::to_string(r.config.feature)},
                   {"classifier", to_string(r.config.classifier)},
                   {"dwt_levels", r.config.dwt_levels},
                   {"svm_C", r.config.svm.C},
                   {"svm_gamma", r.config.svm.gamma},
                   {"tau", r.config.tau}};
  j["folds"] = r.folds;
  j["seed"] = r.seed;
  j["alphas"] = r.alphas;
  j["accuracy"] = r.accuracy;
  j["per_fold"] = r.per_fold;
  j["tested"] = r.tested;
  j["labels"] = std::move(labels);
  j["confusion"] = std::move(confusion);
  return j;
}

EvalReport from_json(const ordered_json& j) {
  if (j.at("schema").get<std::string>() != kReportSchema) {
    throw DataError("unsupported report schema " + j.at("schema").dump());
  }
  EvalReport r;
  const auto& p = j.at("pipeline");
  r.config.preprocess = preprocess::parse_method(p.at("preprocess").get<std::string>());
  r.config.feature = features::parse_feature_kind(p.at("feature").get<std::string>());
  r.config.classifier = parse_classifier_kind(p.at("classifier").get<std::string>());
  r.config.dwt_levels = p.at("dwt_levels").get<int>();
  r.config.svm.C = p.at("svm_C").get<double>();
  r.config.svm.gamma = p.at("svm_gamma").get<double>();
  r.config.tau = p.at("tau").get<double>();
  r.folds = j.at("folds").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.alphas = j.at("alphas").get<std::vector<int>>();
  r.accuracy = j.at("accuracy").get<std::vector<double>>();
  r.per_fold = j.at("per_fold").get<std::vector<std::vector<double>>>();
  r.tested = j.at("tested").get<std::size_t>();
  const auto& rows = j.at("confusion");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(kPrimitiveCount)) {
    throw DataError("report confusion matrix must be 69x69");
  }
  r.confusion.clear();
  for (const auto& row : rows) {
    const auto values = row.get<std::vector<std::int64_t>>();
    if (values.size() != static_cast<std::size_t>(kPrimitiveCount)) {
      throw DataError("report confusion matrix must be 69x69");
    }
    r.confusion.insert(r.confusion.end(), values.begin(), values.end());
  }
  return r;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report " + path.string());
  out << text;
  if (!out) throw IoError("I/O error writing " + path.string());
}

}  // namespace

std::string report_to_json(const EvalReport& report) { return to_json(report).dump(1) + "\n"; }

EvalReport report_from_json(std::string_view text) {
  try {
    return from_json(ordered_json::parse(text));
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

std::string reports_to_json(std::span<const EvalReport> reports) {
  ordered_json j;
  j["schema"] = kReportListSchema;
  j["reports"] = ordered_json::array();
  for (const auto& r : reports) j["reports"].push_back(to_json(r));
  return j.dump(1) + "\n";
}

std::string reports_to_csv(std::span<const EvalReport> reports) {
  std::string out = "preprocess,feature,classifier";
  if (reports.empty()) return out + "\n";
  const auto& alphas = reports.front().alphas;
  for (int a : alphas) out += ",alpha=" + std::to_string(a);
  out += "\n";
  for (const auto& r : reports) {
    if (r.alphas != alphas) throw DataError("reports in one table must share the same alphas");
    out += std::string(preprocess::to_string(r.config.preprocess)) + "," +
           std::string(features::to_string(r.config.feature)) + "," +
           std::string(to_string(r.config.classifier));
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      char buf[32];
      std::snprintf(buf, sizeof buf, ",%.2f", a < r.accuracy.size() ? 100.0 * r.accuracy[a] : 0.0);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void emit_report(const EvalReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
  if (format == ReportFormat::json) {
    write_file(path, report_to_json(report));
  } else {
    write_file(path, reports_to_csv(std::span<const EvalReport>(&report, 1)));
  }
}

void emit_reports(std::span<const EvalReport> reports, const std::filesystem::path& path,
                  ReportFormat format) {
  write_file(path, format == ReportFormat::json ? reports_to_json(reports)
                                                : reports_to_csv(reports));
}

}  // namespace devink::harness
