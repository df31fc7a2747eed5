#include <doctest.h>

#include <set>
#include <sstream>

#include "devink/error.hpp"
#include "devink/ink.hpp"
#include "devink/synth.hpp"
#include "support.hpp"

using namespace devink;

TEST_CASE("registry holds 69 unique names in a stable order") {
  const auto names = primitive_names();
  REQUIRE(names.size() == 69);
  std::set<std::string_view> unique(names.begin(), names.end());
  CHECK(unique.size() == 69);
  for (int i = 1; i <= 69; ++i) {
    const PrimitiveId id(i);
    CHECK(PrimitiveId::from_name(id.name()) == id);
  }
  CHECK(PrimitiveId(1).name() == names.front());
}

TEST_CASE("primitive ids reject out-of-range indices and unknown names") {
  CHECK_THROWS_AS(PrimitiveId(0), DataError);
  CHECK_THROWS_AS(PrimitiveId(70), DataError);
  try {
    PrimitiveId::from_name("zzz");
    FAIL("expected an error");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("zzz") != std::string::npos);
    for (auto name : primitive_names()) CHECK(msg.find(std::string(name)) != std::string::npos);
  }
}

TEST_CASE("stroke construction enforces its invariants") {
  CHECK_NOTHROW(Stroke("a", {{0, 0, 0}, {1, 1, 10}}));
  CHECK_THROWS_AS(Stroke("a", {{0, 0, 0}}), DataError);
  CHECK_THROWS_AS(Stroke("a", {{0, 0, 5}, {1, 1, 5}}), DataError);
  CHECK_THROWS_AS(Stroke("a", {{0, 0, 5}, {1, 1, 4}}), DataError);
  CHECK_THROWS_AS(Stroke("a", {{0, 0, -1}, {1, 1, 4}}), DataError);
  CHECK_THROWS_AS(Stroke("a", {{0, std::nan(""), 0}, {1, 1, 4}}), DataError);
}

TEST_CASE("with_coordinates keeps timestamps and label") {
  const Stroke s("a", {{0, 0, 0}, {1, 1, 10}, {2, 0, 20}}, PrimitiveId::from_name("u"));
  const std::vector<double> xs{5, 6, 7}, ys{1, 2, 3};
  const auto t = s.with_coordinates(xs, ys);
  CHECK(t.id() == "a");
  CHECK(t.label() == s.label());
  CHECK(t.points()[2] == Point{7, 3, 20});
  CHECK_THROWS_AS(s.with_coordinates(std::vector<double>{1}, ys), DataError);
}

TEST_CASE("a single valid line loads as one stroke") {
  std::istringstream in(R"({"id": "s1", "label": "u", "y_down": false, "points": [[0,0,0],[1,2,10],[2,3,20]]})");
  const auto d = read_strokes(in);
  REQUIRE(d.strokes.size() == 1);
  CHECK(d.strokes[0].size() == 3);
  CHECK(d.strokes[0].label()->name() == "u");
  CHECK(d.source == DatasetSource::isolated);
}

TEST_CASE("duplicate timestamps reject the record with a diagnostic") {
  std::istringstream in(
      "{\"id\": \"bad\", \"label\": null, \"y_down\": false, \"points\": [[0,0,0],[1,1,0]]}\n"
      "{\"id\": \"ok\", \"label\": null, \"y_down\": false, \"points\": [[0,0,0],[1,1,1]]}\n");
  std::vector<LoadDiagnostic> diags;
  const auto d = read_strokes(in, &diags);
  CHECK(d.strokes.size() == 1);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].line == 1);
  CHECK(diags[0].message.find("bad") != std::string::npos);
}

TEST_CASE("one malformed line among ten fails at that line") {
  std::ostringstream text;
  for (int i = 1; i <= 10; ++i) {
    if (i == 7) {
      text << "{\"id\": \"x\", \"points\": [[0,0,0],[1,1\n";
    } else {
      text << "{\"id\": \"s" << i << "\", \"label\": \"k\", \"y_down\": false, \"points\": [[0,0,0],[1,1,10]]}\n";
    }
  }
  std::istringstream in(text.str());
  try {
    read_strokes(in);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }
}

TEST_CASE("record-level schema errors") {
  auto parse = [](const std::string& text) {
    std::string why;
    return parse_stroke_record(text, 3, nullptr, &why);
  };
  CHECK_THROWS_AS(parse(R"({"label": null, "points": [[0,0,0],[1,1,1]]})"), ParseError);
  CHECK_THROWS_AS(parse(R"({"id": "a", "label": "nope", "points": [[0,0,0],[1,1,1]]})"), ParseError);
  CHECK_THROWS_AS(parse(R"({"id": "a", "points": [[0,0,-1],[1,1,1]]})"), ParseError);
  CHECK_THROWS_AS(parse(R"({"id": "a", "points": [[0,0,0.5],[1,1,1]]})"), ParseError);
  CHECK_THROWS_AS(parse(R"({"id": "a", "points": [[0,0],[1,1,1]]})"), ParseError);
  CHECK_THROWS_AS(parse(R"([1,2,3])"), ParseError);
  CHECK_FALSE(parse(R"({"id": "a", "points": [[0,0,0]]})").has_value());
}

TEST_CASE("y_down records are flipped into the y-up frame") {
  std::string why;
  const auto s = parse_stroke_record(
      R"({"id": "a", "label": null, "y_down": true, "points": [[1,2,0],[3,-4,10]]})", 1, nullptr, &why);
  REQUIRE(s);
  CHECK(s->points()[0] == Point{1, -2, 0});
  CHECK(s->points()[1] == Point{3, 4, 10});
  // Canonical output is always y-up.
  CHECK(format_stroke_record(*s).find("\"y_down\":false") != std::string::npos);
}

TEST_CASE("empty dataset saves to an empty file") {
  testing::TempDir dir;
  save_strokes(Dataset{}, dir / "empty.jsonl");
  CHECK(testing::slurp(dir / "empty.jsonl").empty());
  CHECK(load_strokes(dir / "empty.jsonl").strokes.empty());
}

TEST_CASE("one stroke round-trips through a file") {
  testing::TempDir dir;
  Dataset d;
  d.strokes.emplace_back("one", std::vector<Point>{{0.1, -2.5, 0}, {1e-7, 3.25, 16}, {4, 4, 33}},
                         PrimitiveId::from_name("gh"));
  d.strokes.emplace_back("two", std::vector<Point>{{0, 0, 0}, {1, 1, 1}});
  save_strokes(d, dir / "d.jsonl");
  CHECK(load_strokes(dir / "d.jsonl") == d);
}

TEST_CASE("1000 synthetic strokes reload equal and re-serialize byte-identically") {
  testing::TempDir dir;
  synth::SynthConfig cfg;
  cfg.primitives = synth::default_primitives();
  cfg.writers = 10;
  cfg.samples_per_writer = 10;
  const auto d = synth::generate_synthetic(cfg);
  REQUIRE(d.strokes.size() == 1000);
  save_strokes(d, dir / "a.jsonl");
  const auto reloaded = load_strokes(dir / "a.jsonl");
  CHECK(reloaded == d);
  CHECK(reloaded.source == DatasetSource::synthetic);
  save_strokes(reloaded, dir / "b.jsonl");
  CHECK(testing::slurp(dir / "a.jsonl") == testing::slurp(dir / "b.jsonl"));
}

TEST_CASE("file errors surface as IoError") {
  testing::TempDir dir;
  CHECK_THROWS_AS(load_strokes(dir / "missing.jsonl"), IoError);
  CHECK_THROWS_AS(save_strokes(Dataset{}, dir / "no" / "such" / "dir.jsonl"), IoError);
}

TEST_CASE("mixed sources in one file are rejected") {
  std::istringstream in(
      "{\"id\": \"a\", \"source\": \"synthetic\", \"points\": [[0,0,0],[1,1,1]]}\n"
      "{\"id\": \"b\", \"points\": [[0,0,0],[1,1,1]]}\n");
  CHECK_THROWS_AS(read_strokes(in), ParseError);
}

TEST_CASE("require_labels names the unlabelled stroke") {
  Dataset d;
  d.strokes.emplace_back("has", std::vector<Point>{{0, 0, 0}, {1, 1, 1}}, PrimitiveId(1));
  d.strokes.emplace_back("lacks", std::vector<Point>{{0, 0, 0}, {1, 1, 1}});
  try {
    d.require_labels();
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("lacks") != std::string::npos);
  }
}
