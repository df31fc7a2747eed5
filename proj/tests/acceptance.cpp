// Acceptance run: one [PASS]/[FAIL] line per primary criterion.
// Exit status is non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "devink/classifiers.hpp"
#include "devink/error.hpp"
#include "devink/features.hpp"
#include "devink/harness.hpp"
#include "devink/pipeline.hpp"
#include "devink/preprocess.hpp"
#include "devink/synth.hpp"
#include "oracles/dual_oracle.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace devink;
using features::FeatureKind;
using preprocess::Method;

namespace {

constexpr double kPi = 3.14159265358979323846;

int failures = 0;

void report(int number, bool ok, const std::string& title, const std::string& detail) {
  std::printf("[%s] criterion %d: %s -- %s\n", ok ? "PASS" : "FAIL", number, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

Dataset default_set() {
  synth::SynthConfig cfg;
  cfg.primitives = synth::default_primitives();
  cfg.writers = 20;
  cfg.samples_per_writer = 10;
  cfg.seed = 42;
  return synth::generate_synthetic(cfg);
}

PipelineConfig pipeline_of(Method m, FeatureKind f, ClassifierKind c) {
  PipelineConfig cfg;
  cfg.preprocess = m;
  cfg.feature = f;
  cfg.classifier = c;
  return cfg;
}

double variance(const std::vector<double>& v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size());
}

// Runs `check`, turning an exception into a failed sub-check.
bool guarded(std::vector<std::string>& notes, const std::string& name, const std::function<bool()>& check) {
  bool ok = false;
  try {
    ok = check();
  } catch (const std::exception& e) {
    notes.push_back(name + " threw: " + e.what());
    return false;
  }
  if (!ok) notes.push_back(name + " failed");
  return ok;
}

bool math_suite(std::vector<std::string>& notes) {
  bool all = true;

  all &= guarded(notes, "membership sums", [] {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int i = 0; i < 100000; ++i) {
      const auto f = features::fuzzify(u(rng));
      if (std::abs(f.m1 + f.m2 - 1.0) > 1e-12) return false;
    }
    return true;
  });

  all &= guarded(notes, "deg2dir table", [] {
    const std::pair<double, int> table[] = {
        {0.0, 1}, {kPi / 8, 2}, {3 * kPi / 8, 3}, {5 * kPi / 8, 4}, {7 * kPi / 8, 5}, {kPi, 5},
        {-kPi, 5}, {-7 * kPi / 8, 6}, {-5 * kPi / 8, 7}, {-kPi / 2, 7}, {-3 * kPi / 8, 8},
        {-kPi / 8, 1}, {kPi / 4, 2}, {kPi / 2, 3}, {3 * kPi / 4, 4}, {-3 * kPi / 4, 6}, {-kPi / 4, 8}};
    for (auto [theta, dir] : table) {
      if (features::deg2dir(theta).value() != dir) return false;
    }
    return true;
  });

  all &= guarded(notes, "EDF length", [] {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-10, 10);
    for (std::size_t k = 2; k <= 30; ++k) {
      features::CriticalPointSet c;
      for (std::size_t i = 0; i < k; ++i) {
        c.indices.push_back(i);
        c.coords.push_back({u(rng), u(rng)});
      }
      if (features::compute_edf(c).size() != k * (k - 1) / 2) return false;
    }
    return true;
  });

  all &= guarded(notes, "DTW properties", [] {
    auto codes = [](std::vector<int> v) { return features::codes_from_values(v); };
    if (classifiers::dtw_distance(codes({1, 2, 3}), codes({1, 3})) != 1.0) return false;
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> c(1, 8), len(1, 20);
    for (int t = 0; t < 500; ++t) {
      std::vector<int> a(static_cast<std::size_t>(len(rng))), b(static_cast<std::size_t>(len(rng)));
      for (auto& x : a) x = c(rng);
      for (auto& x : b) x = c(rng);
      const auto ca = codes(a), cb = codes(b);
      if (classifiers::dtw_distance(ca, cb) != classifiers::dtw_distance(cb, ca)) return false;
      if (classifiers::dtw_distance(ca, ca) != 0.0) return false;
    }
    return true;
  });

  all &= guarded(notes, "Gaussian moments", [] {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    std::vector<std::array<double, 8>> xs;
    std::vector<std::pair<features::DirectionVector, PrimitiveId>> s;
    for (int i = 0; i < 100; ++i) {
      std::array<double, 8> x{};
      for (int d = 0; d < 8; ++d) x[d] = 0.2 * d + (0.5 + 0.1 * d) * g(rng);
      xs.push_back(x);
      s.push_back({x, PrimitiveId(1)});
    }
    const auto m = classifiers::train_gaussian(s);
    const auto ref = oracle::moments(xs);
    for (int d = 0; d < 8; ++d) {
      if (std::abs(m.classes[0].mean()[d] - ref.mean[d]) > 1e-12) return false;
    }
    for (int k = 0; k < 64; ++k) {
      if (std::abs(m.classes[0].covariance()[k] - ref.covariance[k]) > 1e-12) return false;
    }
    return true;
  });

  all &= guarded(notes, "SMO vs exhaustive dual", [] {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + trial % 5;
      std::vector<features::DirectionVector> x;
      std::vector<std::vector<double>> rows;
      std::vector<int> y;
      for (int i = 0; i < n; ++i) {
        features::DirectionVector v{};
        for (int d = 0; d < 4; ++d) v[d] = u(rng);
        x.push_back(v);
        rows.emplace_back(v.begin(), v.end());
        y.push_back(i % 2 == 0 ? 1 : -1);
      }
      classifiers::SvmParams p;
      p.C = trial % 2 == 0 ? 10.0 : 0.7;
      const auto sol = classifiers::solve_smo(x, y, p);
      const auto ref = oracle::solve_dual_exhaustive(rows, y, p.C, p.gamma);
      if (std::abs(sol.objective - ref.objective) > 1e-3) return false;
    }
    return true;
  });

  all &= guarded(notes, "spline line invariance", [] {
    std::vector<Point> pts;
    for (int i = 0; i < 73; ++i) pts.push_back({-4.0 + 0.7 * i, 12.0 - 1.9 * i, 10 * i});
    const Stroke s("line", pts);
    const auto out = preprocess::knotless_spline_smooth(s);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::abs(out.points()[i].x - pts[i].x) > 1e-9) return false;
      if (std::abs(out.points()[i].y - pts[i].y) > 1e-9) return false;
    }
    return true;
  });

  all &= guarded(notes, "pipeline determinism", [] {
    synth::SynthConfig cfg;
    cfg.primitives = synth::default_primitives();
    cfg.writers = 4;
    cfg.samples_per_writer = 5;
    const auto a = synth::generate_synthetic(cfg);
    const auto b = synth::generate_synthetic(cfg);
    std::ostringstream sa, sb;
    write_strokes(a, sa);
    write_strokes(b, sb);
    if (sa.str() != sb.str()) return false;
    for (auto c : {ClassifierKind::gaussian, ClassifierKind::svm}) {
      const auto cfg2 = pipeline_of(Method::spline, FeatureKind::fdf, c);
      if (harness::report_to_json(harness::evaluate(a, cfg2)) !=
          harness::report_to_json(harness::evaluate(b, cfg2))) {
        return false;
      }
    }
    return true;
  });

  return all;
}

bool round_trips(const Dataset& data, std::vector<std::string>& notes) {
  testing::TempDir dir;
  bool all = true;
  all &= guarded(notes, "dataset", [&] {
    save_strokes(data, dir / "a.jsonl");
    save_strokes(load_strokes(dir / "a.jsonl"), dir / "b.jsonl");
    return testing::slurp(dir / "a.jsonl") == testing::slurp(dir / "b.jsonl");
  });
  const std::pair<ClassifierKind, FeatureKind> kinds[] = {{ClassifierKind::gaussian, FeatureKind::fdf},
                                                          {ClassifierKind::dtw, FeatureKind::df},
                                                          {ClassifierKind::svm, FeatureKind::fdf}};
  for (auto [c, f] : kinds) {
    all &= guarded(notes, std::string(to_string(c)) + " model", [&] {
      const auto model = pipeline::train_model(data, pipeline_of(Method::spline, f, c));
      save_model(model, dir / "m1.json");
      save_model(load_model(dir / "m1.json"), dir / "m2.json");
      return testing::slurp(dir / "m1.json") == testing::slurp(dir / "m2.json");
    });
  }
  return all;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
  return out.empty() ? "all sub-checks passed" : out;
}

}  // namespace

int main() {
  const auto data = default_set();
  const harness::EvalOptions options;  // 5 folds, seed 42, alphas {1, 2, 5}
  std::vector<harness::EvalReport> reports;

  // 1. Preprocessing ablation.
  {
    const auto t0 = std::chrono::steady_clock::now();
    double acc[3];
    int i = 0;
    for (auto m : {Method::raw, Method::dwt, Method::spline}) {
      reports.push_back(harness::evaluate(data, pipeline_of(m, FeatureKind::fdf, ClassifierKind::gaussian), options));
      acc[i++] = reports.back().accuracy[0];
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = acc[2] - acc[1] >= 0.02 && acc[1] - acc[0] >= 0.02 && seconds < 120.0;
    char detail[160];
    std::snprintf(detail, sizeof detail, "FDF+Gaussian raw=%s dwt=%s spline=%s in %.1f s",
                  pct(acc[0]).c_str(), pct(acc[1]).c_str(), pct(acc[2]).c_str(), seconds);
    report(1, ok, "preprocessing ablation spline > dwt > raw (gaps >= 2pp)", detail);
  }

  // 2. Critical-point stability on 'u'.
  {
    synth::SynthConfig cfg;
    cfg.primitives = {PrimitiveId::from_name("u")};
    cfg.writers = 10;
    cfg.samples_per_writer = 10;
    const auto us = synth::generate_synthetic(cfg);
    double var[3];
    int i = 0;
    for (auto m : {Method::raw, Method::dwt, Method::spline}) {
      std::vector<double> counts;
      for (const auto& s : us.strokes) {
        counts.push_back(static_cast<double>(features::extract_critical_points(preprocess::apply(s, m)).size()));
      }
      var[i++] = variance(counts);
    }
    const bool ok = var[2] < var[1] && var[1] < var[0] && var[2] <= 0.25 * var[0];
    char detail[160];
    std::snprintf(detail, sizeof detail, "variance raw=%.2f dwt=%.2f spline=%.2f (spline/raw=%.3f) over %zu renderings",
                  var[0], var[1], var[2], var[2] / var[0], us.strokes.size());
    report(2, ok, "critical-point count variance spline < dwt < raw, spline <= 0.25 raw", detail);
  }

  // 4 and 5. SVM feature ordering and sanity floor (spline preprocessing).
  double svm_acc[3];
  {
    int i = 0;
    for (auto f : {FeatureKind::df, FeatureKind::edf, FeatureKind::fdf}) {
      reports.push_back(harness::evaluate(data, pipeline_of(Method::spline, f, ClassifierKind::svm), options));
      svm_acc[i++] = reports.back().accuracy[0];
    }
  }
  // One template-matching pipeline so criterion 3 covers every classifier.
  reports.push_back(harness::evaluate(data, pipeline_of(Method::spline, FeatureKind::df, ClassifierKind::dtw), options));

  // 3. N-best monotonicity.
  {
    bool monotone = true, strict = false;
    std::string detail;
    for (const auto& r : reports) {
      const auto& a = r.accuracy;
      monotone = monotone && a[0] <= a[1] && a[1] <= a[2];
      strict = strict || a[0] < a[1] || a[1] < a[2];
      detail += r.config.label() + " " + pct(a[0]) + "/" + pct(a[1]) + "/" + pct(a[2]) + "; ";
    }
    report(3, monotone && strict, "accuracy(1) <= accuracy(2) <= accuracy(5), strict somewhere", detail);
  }

  {
    const bool ok = svm_acc[2] >= svm_acc[1] && svm_acc[1] >= svm_acc[0];
    report(4, ok, "SVM accuracy FDF >= EDF-histogram >= DF-histogram at alpha=1",
           "FDF=" + pct(svm_acc[2]) + " EDF-hist=" + pct(svm_acc[1]) + " DF-hist=" + pct(svm_acc[0]));
  }
  report(5, svm_acc[2] >= 0.85, "FDF+SVM five-fold alpha=1 accuracy >= 85%", "spline/fdf/svm=" + pct(svm_acc[2]));

  // 6. Math invariants.
  {
    std::vector<std::string> notes;
    const bool ok = math_suite(notes);
    report(6, ok, "math invariant suite", join(notes));
  }

  // 7. Round trips.
  {
    std::vector<std::string> notes;
    const bool ok = round_trips(data, notes);
    report(7, ok, "model and dataset files round-trip bit-exactly", join(notes));
  }

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
