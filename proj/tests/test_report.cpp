#include "catch_amalgamated.hpp"

#include <sstream>

#include "gemstop/analysis.hpp"
#include "gemstop/report.hpp"
#include "gemstop/synth.hpp"
#include "helpers.hpp"
#include "reference_fixture.hpp"

using namespace gemstop;
using namespace gemstop::report;
using Catch::Approx;

namespace {

const DurationRow& row(const Report& r, const std::string& type, const std::string& group) {
  for (const auto& d : r.durations) {
    if (d.type == type && d.group == group) return d;
  }
  throw std::runtime_error("no row " + type + "/" + group);
}

const MeanCell& cell(const DurationRow& d, const std::string& column) {
  const auto& cols = duration_columns();
  return d.cells.at(static_cast<std::size_t>(std::find(cols.begin(), cols.end(), column) - cols.begin()));
}

const AnovaSection& section(const Report& r, const std::string& name) {
  for (const auto& s : r.anova) {
    if (s.name == name) return s;
  }
  throw std::runtime_error("no section " + name);
}

}  // namespace

TEST_CASE("reference fixture: burst counts are exact", "[report]") {
  const auto r = build_report(fixture::tokens());
  REQUIRE(r.burst_counts.size() == 3);
  const auto& fs = r.burst_counts[0];
  const auto& ms = r.burst_counts[1];
  const auto& total = r.burst_counts[2];
  CHECK(fs.speaker == "FS");
  CHECK(fs.syntactic_single == 68);
  CHECK(fs.syntactic_double == 8);
  CHECK(ms.syntactic_single == 69);
  CHECK(ms.lexical_total() == 120);
  CHECK(total.lexical_single == 210);
  CHECK(total.lexical_double == 30);
  CHECK(total.syntactic_single == 137);
  CHECK(total.syntactic_double == 15);
  CHECK(total.syntactic_total() == 152);
}

TEST_CASE("reference fixture: mean matrix echoes the group means", "[report]") {
  const auto r = build_report(fixture::tokens());
  for (const auto& e : fixture::expected_durations()) {
    const auto& d = row(r, e.type, e.group);
    for (const auto& [col, want] : e.cells) {
      INFO(e.type << " " << e.group << " " << col);
      const auto& c = cell(d, col);
      REQUIRE(c.state == CellState::Value);
      CHECK(std::abs(c.d.mean - want) <= 0.05);
    }
  }
  CHECK(cell(row(r, "Lexical", "SB"), "C1d").state == CellState::NotApplicable);
}

TEST_CASE("reference fixture: singleton vs geminate rows", "[report]") {
  const auto r = build_report(fixture::tokens());
  REQUIRE(r.classes.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& got = r.classes[i];
    const auto& want = fixture::expected_classes()[i];
    INFO(want.label);
    CHECK(std::abs(got.Vd.d.mean - want.Vd) <= 0.05);
    CHECK(std::abs(got.Cd.d.mean - want.Cd) <= 0.05);
    CHECK(std::abs(got.Cld.d.mean - want.Cld) <= 0.05);
    CHECK(std::abs(got.Bd.d.mean - want.Bd) <= 0.05);
  }
  CHECK(r.classes[0].mean_of_ratios.d.mean == Approx(0.75).margin(0.005));
  // Mean of ratios and ratio of means differ once Vd varies.
  CHECK(*r.classes[0].ratio_of_means == Approx(55.48 / 85.07).margin(0.001));
}

TEST_CASE("constant groups give explicit gaps in the ANOVA battery", "[report]") {
  const auto r = build_report(fixture::tokens());
  const auto& power = section(r, "burst_power");
  REQUIRE(power.cells.size() == 3);
  for (const auto& c : power.cells) {
    CHECK_FALSE(c.result);
    CHECK(c.reason.rfind("ZeroWithinVariance", 0) == 0);
  }
  CHECK(render_text(r).find("InsufficientData") != std::string::npos);
}

TEST_CASE("no double bursts: first/second-burst sections are gaps", "[report]") {
  std::vector<Token> t;
  for (int i = 0; i < 6; ++i)
    t.push_back(testing::single_token(i % 2 ? "FS" : "MS", GemType::Lexical, 60 + i, 80 + i, 20 + i % 3));
  const auto r = build_report(t);
  for (const char* name : {"burst_power", "c1_vs_c2_durations"}) {
    for (const auto& c : section(r, name).cells) {
      CHECK_FALSE(c.result);
      CHECK_FALSE(c.reason.empty());
    }
  }
  CHECK(cell(row(r, "Lexical", "DB"), "Vd").state == CellState::InsufficientData);
  CHECK(cell(row(r, "Lexical", "SB"), "Vd").d.n == 6);
}

TEST_CASE("all-singleton input leaves geminate sections empty", "[report]") {
  std::vector<Token> t;
  for (int i = 0; i < 5; ++i) t.push_back(testing::single_token("FS", GemType::None, 80 + i, 35, 20));
  const auto r = build_report(t);
  CHECK(r.classes[1].Vd.state == CellState::InsufficientData);
  CHECK(r.classes[0].Vd.state == CellState::Value);
  for (const auto& s : r.anova) {
    for (const auto& c : s.cells) CHECK_FALSE(c.result);
  }
  const auto json = nlohmann::json::parse(render_json(r));
  CHECK(json["singleton_vs_geminate"]["Geminate"]["Vd"]["status"] == "InsufficientData");
}

TEST_CASE("failed tokens are counted and excluded", "[report]") {
  std::vector<Token> t{testing::single_token("FS", GemType::Lexical, 60, 80, 20)};
  Token bad;
  bad.meta = {"FS", "2", "1", "w", "tt", GemType::Lexical};
  bad.error = "NoBurstFound: x";
  t.push_back(bad);
  const auto r = build_report(t);
  CHECK(r.tokens == 2);
  CHECK(r.failed == 1);
  CHECK(r.burst_counts.back().lexical_total() == 1);
}

TEST_CASE("second bursts generated stronger give a large effect", "[report]") {
  auto spec = CorpusSpec::defaults();
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < 30; ++i) {
    const auto tok = make_corpus_token(spec, 77, i, i % 2 ? 1 : 3);  // lexical.db / syntactic.db
    for (auto& t : analyze_recording(tok.stimulus.truth.annotations, tok.stimulus.wave)) tokens.push_back(t);
  }
  const auto r = build_report(tokens);
  const auto& power = section(r, "burst_power");
  for (const auto& c : power.cells) {
    INFO(c.type);
    REQUIRE(c.result);
    CHECK(c.result->effect_label == stats::EffectSize::Large);
    CHECK(*c.groups[1].mean > 2.0 * *c.groups[0].mean);
  }
}

TEST_CASE("report rendering is deterministic and complete", "[report]") {
  std::vector<Token> t;
  for (int i = 0; i < 12; ++i) {
    const auto type = i % 3 ? GemType::Lexical : GemType::Syntactic;
    if (i % 4 == 0) {
      t.push_back(testing::double_token(i % 2 ? "FS" : "MS", type, 60 + i, 40 + i, 10 + i % 3, 30, 25 + i % 5,
                                        1e-3 * (1 + i % 2), 5e-3 + 1e-4 * i));
    } else {
      t.push_back(testing::single_token(i % 2 ? "FS" : "MS", type, 60 + 2 * i, 80 + i % 4, 20 + i % 3));
    }
  }
  const auto a = build_report(t, {0.05, true});
  const auto b = build_report(t, {0.05, true});
  CHECK(render_text(a) == render_text(b));
  CHECK(render_json(a) == render_json(b));

  const auto json = nlohmann::json::parse(render_json(a));
  for (const char* key : {"burst_counts", "duration_means", "singleton_vs_geminate", "anova", "notes"})
    CHECK(json.contains(key));
  const auto& lexsyn = json["anova"]["lexical_vs_syntactic"]["cells"];
  REQUIRE(lexsyn.size() == 3);
  CHECK(lexsyn[0]["df"][1] == 10);
  CHECK(lexsyn[0]["df_total"] == 11);

  const auto text = render_text(a);
  CHECK(text.find("df(N-1)") != std::string::npos);
  CHECK(render_text(build_report(t)).find("df(N-1)") == std::string::npos);
}

TEST_CASE("plot series", "[report]") {
  const auto series = plot_series(fixture::tokens());
  REQUIRE(series.size() == 3);
  CHECK(series[0].first == "plot_burst_power.csv");
  CHECK(series[0].second.rfind("type,burst,mean,se,n,status\n", 0) == 0);
  // Constant groups leave only rounding noise in the standard error.
  CHECK(series[0].second.find("\nLexical,first,1.00000e-03,") != std::string::npos);
  CHECK(series[0].second.find(",30,ok\n") != std::string::npos);
  CHECK(series[1].second.find("Syntactic,Bd,C2,2.85600e+01") != std::string::npos);
  CHECK(series[2].second.find("\nLexical,SB,Vd,7.09000e+01,") != std::string::npos);

  const auto empty = plot_series({});
  CHECK(empty[0].second.find("Lexical,first,,,0,InsufficientData") != std::string::npos);
}
