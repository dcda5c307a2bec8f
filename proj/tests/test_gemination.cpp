#include "catch_amalgamated.hpp"

#include <random>
#include <sstream>

#include "gemstop/analysis.hpp"
#include "gemstop/gemination.hpp"
#include "gemstop/synth.hpp"
#include "helpers.hpp"

using namespace gemstop;
using Catch::Approx;

TEST_CASE("single-burst record sums and rounding", "[gemination]") {
  const double cl[] = {89.1049};
  const double b[] = {25.7};
  const auto r = make_record(70.904, cl, b);
  CHECK(r.Vd == 70.9);
  CHECK(r.Cld == 89.1);
  CHECK(r.Cd == Approx(114.8).margin(1e-9));
  CHECK_FALSE(r.split);
  CHECK(additivity_error(r) == 0.0);
}

TEST_CASE("double-burst split reproduces the lexical DB row sums", "[gemination]") {
  const double cl[] = {48.9, 39.0};
  const double b[] = {12.5, 28.7};
  const auto r = make_record(78.8, cl, b);
  REQUIRE(r.split);
  CHECK(r.split->C1d == Approx(61.4).margin(1e-9));
  CHECK(r.split->C2d == Approx(67.7).margin(1e-9));
  CHECK(r.Cld == Approx(87.9).margin(1e-9));
  CHECK(r.Bd == Approx(41.2).margin(1e-9));
  CHECK(r.Cd == Approx(129.1).margin(1e-9));
  CHECK(additivity_error(r) < 1e-9);
}

TEST_CASE("additivity holds after rounding for arbitrary inputs", "[gemination]") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> d(1.0, 120.0);
  for (int i = 0; i < 500; ++i) {
    const double cl[] = {d(gen), d(gen)};
    const double b[] = {d(gen), d(gen)};
    const auto r = make_record(d(gen), cl, b);
    CHECK(additivity_error(r) < 1e-9);
    // Also holds on the printed values.
    const double cd = std::stod(fmt_ms(r.Cd));
    CHECK(std::abs(cd - (std::stod(fmt_ms(r.split->C1d)) + std::stod(fmt_ms(r.split->C2d)))) <= 0.01 + 1e-9);
  }
}

TEST_CASE("record construction rejects bad event counts", "[gemination]") {
  const double one[] = {1.0};
  const double two[] = {1.0, 2.0};
  CHECK_THROWS_AS(make_record(50.0, one, two), Error);
  CHECK_THROWS_AS(make_record(50.0, std::span<const double>{}, std::span<const double>{}), Error);
}

TEST_CASE("durations from an event sequence", "[gemination]") {
  EventSequence seq;
  seq.consonant_interval = {1.500, 1.640};
  seq.events = {{EventKind::Closure, 1.500, 1.530, 0},
                {EventKind::Burst, 1.530, 1.549, 1e-3},
                {EventKind::Closure, 1.549, 1.610, 0},
                {EventKind::Burst, 1.610, 1.632, 4e-3}};
  const auto r = extract_durations(seq, Interval{1.42, 1.50});
  REQUIRE(r.split);
  CHECK(r.split->B1d == 19.0);
  CHECK(r.split->Cl2d == 61.0);
  CHECK(r.split->B2d == 22.0);
  CHECK(r.Vd == 80.0);
  CHECK_FALSE(extract_durations(seq, static_cast<const Segment*>(nullptr)).Vd);
}

TEST_CASE("ratio classification", "[gemination]") {
  CHECK(classify_ratio(0.75).verdict == Verdict::Singleton);
  CHECK(classify_ratio(1.84).verdict == Verdict::Geminate);
  CHECK(classify_ratio(55.48 / 85.07).verdict == Verdict::Singleton);
  CHECK(classify_ratio(111.01 / 65.98).verdict == Verdict::Geminate);
  CHECK(classify_ratio(1.0).verdict == Verdict::Geminate);
  CHECK(classify_ratio(std::nullopt).verdict == Verdict::Indeterminate);
  CHECK(classify_ratio(1.2, 1.5).verdict == Verdict::Singleton);

  DurationRecord no_vowel;
  no_vowel.Cd = 80;
  const auto call = classify_gemination(no_vowel);
  CHECK(call.verdict == Verdict::Indeterminate);
  CHECK_FALSE(call.ratio_used);
}

TEST_CASE("classification is monotone in the ratio", "[gemination]") {
  Verdict prev = Verdict::Singleton;
  for (double r = 0.0; r < 3.0; r += 0.01) {
    const auto v = classify_ratio(r).verdict;
    if (prev == Verdict::Geminate) CHECK(v == Verdict::Geminate);
    prev = v;
  }
}

TEST_CASE("token construction checks metadata and power count", "[gemination]") {
  const double cl[] = {80.0};
  const double b[] = {20.0};
  const auto r = make_record(60.0, cl, b);
  TokenMetadata meta{"FS", "4", "2", "atto", "tt", GemType::Syntactic};
  const auto t = build_token(r, {1e-3}, classify_gemination(r), meta);
  CHECK(t.ratio == Approx(100.0 / 60.0));
  CHECK(t.call.verdict == Verdict::Geminate);

  auto no_speaker = meta;
  no_speaker.speaker.clear();
  try {
    build_token(r, {1e-3}, classify_gemination(r), no_speaker);
    FAIL("expected MissingMetadata");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingMetadata);
  }
  CHECK_THROWS_AS(build_token(r, {1e-3, 2e-3}, classify_gemination(r), meta), Error);
}

TEST_CASE("token CSV round trip", "[gemination]") {
  std::vector<Token> tokens{testing::single_token("FS", GemType::Lexical, 70.9, 89.1, 25.7, 2.5e-3),
                            testing::double_token("MS", GemType::Syntactic, 59.7, 35.3, 10.9, 22.4, 28.6)};
  Token failed;
  failed.meta = {"MS", "7", "1", "a, \"b\"", "kk", GemType::Lexical};
  failed.error = "NoBurstFound: no supra-threshold onset";
  tokens.push_back(failed);

  const auto text = tokens_csv(tokens);
  std::istringstream in(text);
  const auto back = read_tokens_csv(in);
  REQUIRE(back.size() == 3);
  CHECK(back[0].record == tokens[0].record);
  CHECK(back[1].record == tokens[1].record);
  CHECK(back[1].burst_powers == tokens[1].burst_powers);
  CHECK(back[2].meta.word == "a, \"b\"");
  CHECK(back[2].error == failed.error);
  CHECK(tokens_csv(back) == text);
}

TEST_CASE("token CSV layout", "[gemination]") {
  const auto text = tokens_csv({testing::single_token("FS", GemType::Lexical, 70.9, 89.1, 25.7, 2.5e-3)});
  std::istringstream in(text);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header ==
        "speaker,sentence_id,repetition,word,consonant,gem_type,burst_count,Vd_ms,Cd_ms,Cld_ms,Bd_ms,C1d_ms,C2d_ms,"
        "Cl1d_ms,Cl2d_ms,B1d_ms,B2d_ms,P_burst1,P_burst2,ratio,error");
  CHECK(row == "FS,1,1,atto,tt,lexical,single,70.90,114.80,89.10,25.70,,,,,,,2.50000e-03,,1.619182,");
}

TEST_CASE("malformed token CSV reports the line", "[gemination]") {
  const auto good = tokens_csv({testing::single_token("FS", GemType::Lexical, 70.9, 89.1, 25.7)});
  auto expect_line = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      read_tokens_csv(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line(good + "FS,1,1,atto,tt,lexical,single,abc,1,1,1,,,,,,,,,,\n", 3);
  expect_line(good + "FS,1,1,atto,tt,lexicon,single,1,1,1,1,,,,,,,,,,\n", 3);
  expect_line(good + "FS,1\n", 3);
  expect_line("speaker,word\n", 1);
  expect_line("", 1);
  expect_line(good + "FS,\"unterminated\n", 3);
}

TEST_CASE("analysis of a synthetic recording", "[gemination]") {
  auto spec = StimulusSpec::double_burst(78.8, 48.9, 12.5, 39.0, 28.7);
  const auto st = synthesize_vcv(spec, {"MS", "100", "1", "filetto", "tt", GemType::Lexical});
  const auto tokens = analyze_recording(st.truth.annotations, st.wave);
  REQUIRE(tokens.size() == 1);
  const auto& t = tokens[0];
  REQUIRE(t.ok());
  CHECK(t.meta.sentence_id == "100");
  CHECK(t.burst_count == BurstCount::Double);
  CHECK(*t.record.Vd == Approx(*st.truth.record.Vd).margin(2.0));
  CHECK(t.record.split->B1d == Approx(st.truth.record.split->B1d).margin(2.0));
  CHECK(t.record.split->B2d == Approx(st.truth.record.split->B2d).margin(2.0));
  CHECK(additivity_error(t.record) < 1e-9);
}

TEST_CASE("a silent consonant yields an error row, others unaffected", "[gemination]") {
  const auto st = synthesize_vcv(StimulusSpec::single_burst(70, 80, 20), {"FS", "1", "1", "atto", "tt", GemType::Lexical});
  auto ann = st.truth.annotations;
  // Second consonant placed in the trailing silence.
  const double end = st.wave.duration_s();
  ann.segments.push_back({Tier::Phone, "k", end - 0.015, end - 0.001,
                          {{"gem_type", "none"}, {"speaker", "FS"}, {"sentence_id", "1"}}, 0});
  const auto tokens = analyze_recording(ann, st.wave);
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[0].ok());
  CHECK_FALSE(tokens[1].ok());
  CHECK(tokens[1].error.rfind("NoBurstFound", 0) == 0);
}

TEST_CASE("token ordering is speaker, sentence, repetition", "[gemination]") {
  std::vector<Token> t(4);
  t[0].meta = {"MS", "2", "1", "", "", GemType::None};
  t[1].meta = {"FS", "10", "1", "", "", GemType::None};
  t[2].meta = {"FS", "9", "2", "", "", GemType::None};
  t[3].meta = {"FS", "9", "1", "", "", GemType::None};
  sort_tokens(t);
  CHECK(t[0].meta.sentence_id == "9");
  CHECK(t[0].meta.repetition == "1");
  CHECK(t[1].meta.repetition == "2");
  CHECK(t[2].meta.sentence_id == "10");
  CHECK(t[3].meta.speaker == "MS");
}
