#include "devink/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "devink/error.hpp"
#include "devink/harness.hpp"
#include "devink/pipeline.hpp"
#include "devink/service.hpp"
#include "devink/synth.hpp"

namespace devink::cli {

namespace {

struct Globals {
  std::uint64_t seed = 42;
  bool verbose = false;
};

// Loads a stroke file, echoing rejected records as warnings.
Dataset load(const std::string& path, std::ostream& err) {
  std::vector<LoadDiagnostic> diagnostics;
  Dataset d = load_strokes(path, &diagnostics);
  for (const auto& diag : diagnostics) {
    err << "warning: " << path << ":" << diag.line << ": " << diag.message << "\n";
  }
  return d;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string format_score(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Output sink: a file, or `out` for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw IoError("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  void close(const std::string& path) {
    stream_->flush();
    if (!*stream_) throw IoError("I/O error writing " + path);
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

struct PipelineFlags {
  std::string preprocess = "spline";
  std::string feature = "fdf";
  std::string classifier = "gaussian";
  int dwt_levels = 1;
  double C = classifiers::SvmParams{}.C;
  double gamma = classifiers::SvmParams{}.gamma;
  double tau = 0.0;

  void add_knobs(CLI::App* cmd) {
    cmd->add_option("--dwt-levels", dwt_levels, "DWT decomposition levels")->capture_default_str();
    cmd->add_option("--C", C, "SVM box constraint")->capture_default_str();
    cmd->add_option("--gamma", gamma, "RBF kernel width")->capture_default_str();
    cmd->add_option("--tau", tau, "DTW template clustering radius")->capture_default_str();
  }

  PipelineConfig config(const std::string& pre, const std::string& feat,
                        const std::string& cls) const {
    PipelineConfig c;
    c.preprocess = preprocess::parse_method(pre);
    c.feature = features::parse_feature_kind(feat);
    c.classifier = parse_classifier_kind(cls);
    c.dwt_levels = dwt_levels;
    c.svm.C = C;
    c.svm.gamma = gamma;
    c.tau = tau;
    return c;
  }
};

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"devink: stroke-level recognizer for the 69 Devanagari primitives", "devink"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
  app.add_flag("-v,--verbose", g.verbose, "progress on the diagnostic stream");
  app.fallthrough();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a labelled synthetic stroke set");
  synth::SynthConfig sc;
  std::string synth_primitives;
  std::string synth_out;
  synth->add_option("--primitives", synth_primitives,
                    "comma-separated primitive names (default u,i,e,k,R,v,g,gh,D,c)");
  synth->add_option("--writers", sc.writers)->capture_default_str();
  synth->add_option("--samples", sc.samples_per_writer, "samples per writer")->capture_default_str();
  synth->add_option("--jitter", sc.jitter_sigma, "per-point jitter sigma")->capture_default_str();
  synth->add_option("--rotation", sc.rotation_range, "per-writer rotation range, radians")
      ->capture_default_str();
  synth->add_option("--scale-lo", sc.scale_range.first)->capture_default_str();
  synth->add_option("--scale-hi", sc.scale_range.second)->capture_default_str();
  synth->add_option("--speed-warp", sc.speed_warp)->capture_default_str();
  synth->add_option("--out", synth_out, "output JSONL ('-' for stdout)")->required();

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "smooth strokes and write them back out");
  std::string pre_in, pre_out, pre_method = "spline";
  int pre_levels = 1;
  pre->add_option("--in", pre_in)->required();
  pre->add_option("--out", pre_out, "output JSONL ('-' for stdout)")->required();
  pre->add_option("--method", pre_method, "raw|dwt|spline")->capture_default_str();
  pre->add_option("--levels", pre_levels, "DWT levels")->capture_default_str();

  // features
  auto* feat = app.add_subcommand("features", "critical points and DF/EDF/FDF per stroke, as JSONL");
  std::string feat_in, feat_out = "-", feat_method = "spline";
  int feat_levels = 1;
  feat->add_option("--in", feat_in)->required();
  feat->add_option("--out", feat_out, "output JSONL ('-' for stdout)")->capture_default_str();
  feat->add_option("--preprocess", feat_method, "raw|dwt|spline")->capture_default_str();
  feat->add_option("--dwt-levels", feat_levels)->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "train a model on a labelled stroke file");
  PipelineFlags tf;
  std::string train_in, train_out;
  train->add_option("--in", train_in)->required();
  train->add_option("--out", train_out, "model file")->required();
  train->add_option("--preprocess", tf.preprocess, "raw|dwt|spline")->capture_default_str();
  train->add_option("--feature", tf.feature, "df|edf|fdf")->capture_default_str();
  train->add_option("--classifier", tf.classifier, "gaussian|dtw|svm")->capture_default_str();
  tf.add_knobs(train);

  // eval
  auto* eval = app.add_subcommand("eval", "k-fold N-best evaluation; lists give every combination");
  PipelineFlags ef;
  std::string eval_in, eval_report, eval_csv, eval_nbest = "1,2,5";
  int eval_folds = 5;
  eval->add_option("--in", eval_in)->required();
  eval->add_option("--preprocess", ef.preprocess, "comma list of raw|dwt|spline")
      ->capture_default_str();
  eval->add_option("--feature", ef.feature, "comma list of df|edf|fdf")->capture_default_str();
  eval->add_option("--classifier", ef.classifier, "comma list of gaussian|dtw|svm")
      ->capture_default_str();
  eval->add_option("--folds", eval_folds)->capture_default_str();
  eval->add_option("--nbest", eval_nbest, "comma list of alphas")->capture_default_str();
  eval->add_option("--report", eval_report, "JSON report path");
  eval->add_option("--csv", eval_csv, "CSV accuracy table path");
  ef.add_knobs(eval);

  // recognize
  auto* rec = app.add_subcommand("recognize", "rank primitives for each stroke in a file");
  std::string rec_model, rec_in;
  int rec_top = 5;
  rec->add_option("--model", rec_model)->required();
  rec->add_option("--in", rec_in)->required();
  rec->add_option("--top", rec_top)->capture_default_str()->check(CLI::Range(1, kPrimitiveCount));

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP recognizer for the ink pad");
  std::string serve_model, serve_host = "127.0.0.1", serve_record;
  int serve_port = 8080;
  serve->add_option("--model", serve_model, "model file")->required();
  serve->add_option("--port", serve_port)->capture_default_str()->check(CLI::Range(0, 65535));
  serve->add_option("--host", serve_host)->capture_default_str();
  serve->add_option("--record", serve_record, "append labelled strokes to this JSONL file");

  std::vector<const char*> argv{"devink"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kUsage;
  }

  auto log = [&](const std::string& msg) {
    if (g.verbose) err << msg << "\n";
  };

  if (*synth) {
    if (!synth_primitives.empty()) {
      for (const auto& name : split_list(synth_primitives)) {
        sc.primitives.push_back(PrimitiveId::from_name(name));
      }
    } else {
      sc.primitives = synth::default_primitives();
    }
    sc.seed = g.seed;
    const auto dataset = synth::generate_synthetic(sc);
    Sink sink(synth_out, out);
    write_strokes(dataset, sink.get());
    sink.close(synth_out);
    log("wrote " + std::to_string(dataset.strokes.size()) + " strokes");
    return kOk;
  }

  if (*pre) {
    const auto method = preprocess::parse_method(pre_method);
    if (pre_levels < 1) throw DataError("--levels must be >= 1");
    const auto dataset = load(pre_in, err);
    Dataset result{{}, dataset.source};
    result.strokes.reserve(dataset.strokes.size());
    for (const auto& s : dataset.strokes) {
      result.strokes.push_back(preprocess::apply(s, method, pre_levels));
    }
    Sink sink(pre_out, out);
    write_strokes(result, sink.get());
    sink.close(pre_out);
    return kOk;
  }

  if (*feat) {
    PipelineConfig cfg;
    cfg.preprocess = preprocess::parse_method(feat_method);
    cfg.dwt_levels = feat_levels;
    cfg.validate();
    const auto dataset = load(feat_in, err);
    const auto all = pipeline::extract_all(dataset.strokes, cfg);
    Sink sink(feat_out, out);
    for (const auto& f : all) {
      nlohmann::ordered_json j;
      j["id"] = f.stroke_id;
      j["label"] = f.label ? nlohmann::ordered_json(std::string(f.label->name())) : nullptr;
      auto cps = nlohmann::ordered_json::array();
      for (const auto& c : f.critical.coords) cps.push_back({c.x, c.y});
      j["critical_indices"] = f.critical.indices;
      j["critical_points"] = std::move(cps);
      j["df"] = features::code_values(f.df);
      j["edf"] = features::code_values(f.edf);
      j["fdf"] = f.fdf;
      sink.get() << j.dump() << "\n";
    }
    sink.close(feat_out);
    return kOk;
  }

  if (*train) {
    const auto cfg = tf.config(tf.preprocess, tf.feature, tf.classifier);
    cfg.validate();
    const auto dataset = load(train_in, err);
    const auto t0 = std::chrono::steady_clock::now();
    const auto model = pipeline::train_model(dataset, cfg);
    save_model(model, train_out);
    log("trained " + cfg.label() + " on " + std::to_string(dataset.strokes.size()) + " strokes in " +
        std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) +
        " s");
    return kOk;
  }

  if (*eval) {
    harness::EvalOptions opts;
    opts.folds = eval_folds;
    opts.seed = g.seed;
    opts.alphas.clear();
    for (const auto& a : split_list(eval_nbest)) {
      try {
        opts.alphas.push_back(std::stoi(a));
      } catch (const std::exception&) {
        err << "error: --nbest expects integers, got '" << a << "'\n";
        return kUsage;
      }
    }
    opts.validate();

    std::vector<PipelineConfig> configs;
    const auto pres = split_list(ef.preprocess);
    const auto feats = split_list(ef.feature);
    const auto classes = split_list(ef.classifier);
    const bool single = pres.size() * feats.size() * classes.size() == 1;
    for (const auto& c : classes) {
      for (const auto& f : feats) {
        for (const auto& p : pres) {
          auto cfg = ef.config(p, f, c);
          // In a sweep, the one invalid pairing is skipped rather than fatal.
          if (!single && cfg.classifier == ClassifierKind::dtw &&
              cfg.feature == features::FeatureKind::fdf) {
            log("skipping " + cfg.label() + " (dtw needs a code sequence)");
            continue;
          }
          cfg.validate();
          configs.push_back(cfg);
        }
      }
    }
    if (configs.empty()) throw DataError("no valid pipeline combination to evaluate");

    const auto dataset = load(eval_in, err);
    std::vector<harness::EvalReport> reports;
    for (const auto& cfg : configs) {
      const auto t0 = std::chrono::steady_clock::now();
      reports.push_back(harness::evaluate(dataset, cfg, opts));
      log("evaluated " + cfg.label() + " in " +
          std::to_string(
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) +
          " s");
    }
    out << harness::reports_to_csv(reports);
    if (!eval_report.empty()) {
      if (reports.size() == 1) {
        harness::emit_report(reports.front(), eval_report, harness::ReportFormat::json);
      } else {
        harness::emit_reports(reports, eval_report, harness::ReportFormat::json);
      }
    }
    if (!eval_csv.empty()) harness::emit_reports(reports, eval_csv, harness::ReportFormat::csv);
    return kOk;
  }

  if (*rec) {
    const auto model = load_model(rec_model);
    const auto dataset = load(rec_in, err);
    const auto all = pipeline::extract_all(dataset.strokes, model.config);
    const auto rankings = pipeline::rank_all(model, all);
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto n = std::min(rankings[i].size(), static_cast<std::size_t>(rec_top));
      for (std::size_t r = 0; r < n; ++r) {
        out << all[i].stroke_id << '\t' << (r + 1) << '\t' << rankings[i][r].id.name() << '\t'
            << format_score(rankings[i][r].score) << '\n';
      }
    }
    return kOk;
  }

  if (*serve) {
    std::optional<std::filesystem::path> record;
    if (!serve_record.empty()) record = serve_record;
    service::Service svc(load_model(serve_model), record);
    service::HttpServer http(svc);
    const int port = http.bind(serve_host, serve_port);
    err << "listening on http://" << serve_host << ":" << port << "\n";
    http.listen();
    return kOk;
  }
  return kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace devink::cli
