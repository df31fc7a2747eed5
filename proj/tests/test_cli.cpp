#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "devink/cli.hpp"
#include "devink/harness.hpp"
#include "devink/ink.hpp"
#include "support.hpp"

using devink::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("synth writes one line per stroke and is reproducible") {
  testing::TempDir dir;
  const auto a = (dir / "a.jsonl").string(), b = (dir / "b.jsonl").string();
  auto r = cli({"synth", "--primitives", "u,i,e,k,R,v,g,gh,D,c", "--writers", "20", "--samples",
                "10", "--seed", "42", "--out", a});
  REQUIRE(r.code == 0);
  CHECK(lines(testing::slurp(a)) == 2000);
  r = cli({"--seed", "42", "synth", "--out", b});
  REQUIRE(r.code == 0);
  CHECK(testing::slurp(a) == testing::slurp(b));
}

TEST_CASE("eval writes a report and a CSV table") {
  testing::TempDir dir;
  const auto data = (dir / "s.jsonl").string();
  REQUIRE(cli({"synth", "--writers", "2", "--samples", "5", "--out", data}).code == 0);
  const auto report = (dir / "out.json").string();
  const auto csv = (dir / "out.csv").string();
  auto r = cli({"eval", "--in", data, "--preprocess", "spline", "--feature", "fdf", "--classifier",
                "svm", "--folds", "5", "--nbest", "1,2,5", "--report", report, "--csv", csv});
  REQUIRE(r.code == 0);
  const auto parsed = devink::harness::report_from_json(testing::slurp(report));
  CHECK(parsed.alphas == std::vector<int>{1, 2, 5});
  CHECK(parsed.tested == 100);
  CHECK(lines(testing::slurp(csv)) == 2);

  // Same argv, same bytes.
  const auto again = (dir / "again.json").string();
  cli({"eval", "--in", data, "--preprocess", "spline", "--feature", "fdf", "--classifier", "svm",
       "--report", again});
  CHECK(testing::slurp(report) == testing::slurp(again));
}

TEST_CASE("a sweep skips dtw+fdf while a lone dtw+fdf is refused") {
  testing::TempDir dir;
  const auto data = (dir / "s.jsonl").string();
  REQUIRE(cli({"synth", "--writers", "1", "--samples", "5", "--out", data}).code == 0);
  auto r = cli({"eval", "--in", data, "--feature", "df,fdf", "--classifier", "gaussian,dtw"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 4);  // header + 3 combinations
  r = cli({"eval", "--in", data, "--feature", "fdf", "--classifier", "dtw"});
  CHECK(r.code == 2);
  CHECK(r.err.find("fixed-length") != std::string::npos);
}

TEST_CASE("train then recognize prints top-N lines") {
  testing::TempDir dir;
  const auto data = (dir / "s.jsonl").string();
  const auto model = (dir / "m.json").string();
  REQUIRE(cli({"synth", "--writers", "2", "--samples", "3", "--out", data}).code == 0);
  REQUIRE(cli({"train", "--in", data, "--classifier", "svm", "--out", model}).code == 0);
  testing::spit(dir / "one.jsonl",
                "{\"id\": \"q1\", \"label\": null, \"y_down\": true, \"points\": "
                "[[10,10,0],[20,30,10],[30,35,20],[40,20,30],[45,5,40]]}\n"
                "{\"id\": \"q2\", \"label\": null, \"y_down\": false, \"points\": "
                "[[0,0,0],[10,0,10],[20,0,20]]}\n");
  const auto r = cli({"recognize", "--model", model, "--in", (dir / "one.jsonl").string(), "--top", "5"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 10);
  std::istringstream in(r.out);
  std::string line;
  int rank = 0;
  while (std::getline(in, line)) {
    rank = rank % 5 + 1;
    std::istringstream fields(line);
    std::string id, rk, name, score;
    std::getline(fields, id, '\t');
    std::getline(fields, rk, '\t');
    std::getline(fields, name, '\t');
    std::getline(fields, score, '\t');
    CHECK((id == "q1" || id == "q2"));
    CHECK(std::stoi(rk) == rank);
    CHECK_NOTHROW(devink::PrimitiveId::from_name(name));
    CHECK(!score.empty());
  }
}

TEST_CASE("preprocess and features subcommands") {
  testing::TempDir dir;
  const auto data = (dir / "s.jsonl").string();
  REQUIRE(cli({"synth", "--writers", "1", "--samples", "1", "--out", data}).code == 0);
  const auto smooth = (dir / "smooth.jsonl").string();
  REQUIRE(cli({"preprocess", "--in", data, "--method", "dwt", "--out", smooth}).code == 0);
  const auto d = devink::load_strokes(smooth);
  CHECK(d.strokes.size() == 10);
  const auto r = cli({"features", "--in", data});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 10);
  CHECK(r.out.find("\"fdf\"") != std::string::npos);
}

TEST_CASE("exit codes") {
  testing::TempDir dir;
  auto r = cli({"synth", "--bogus"});
  CHECK(r.code == 1);
  CHECK(r.err.find("--out") != std::string::npos);  // usage text
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"eval", "--in", (dir / "missing.jsonl").string()}).code == 2);
  CHECK(cli({"train", "--in", "x", "--out", "y", "--classifier", "hmm"}).code == 2);
  testing::spit(dir / "bad.jsonl", "{not json\n");
  CHECK(cli({"train", "--in", (dir / "bad.jsonl").string(), "--out", (dir / "m").string()}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}
