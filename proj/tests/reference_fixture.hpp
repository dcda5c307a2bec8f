#pragma once

// Token set rebuilt from reference group means and per-speaker burst counts.
// Every token in a group carries the group mean, so the report's mean matrix
// must echo the inputs. Double-burst parts use two-decimal values whose sums
// round to the reference one-decimal totals.

#include <string>
#include <vector>

#include "gemstop/gemination.hpp"

namespace fixture {

struct GroupMeans {
  double Vd;
  std::vector<double> closures;
  std::vector<double> bursts;
};

struct CountRow {
  const char* speaker;
  int lexical_sb, lexical_db, syntactic_sb, syntactic_db;
};

inline const std::vector<CountRow>& counts() {
  static const std::vector<CountRow> c{{"MS", 105, 15, 69, 7}, {"FS", 105, 15, 68, 8}};
  return c;
}

inline const GroupMeans kLexicalSB{70.9, {89.1}, {25.7}};
inline const GroupMeans kLexicalDB{78.8, {48.91, 38.97}, {12.49, 28.7}};
inline const GroupMeans kSyntacticSB{56.3, {83.0}, {19.8}};
inline const GroupMeans kSyntacticDB{59.7, {35.29, 22.38}, {10.92, 28.56}};

// Singletons: constant consonant, vowel alternating around its mean so the
// mean per-token ratio lands on 0.75.
inline constexpr double kSingletonVd = 85.07;
inline constexpr double kSingletonVdSwing = 30.72;
inline constexpr double kSingletonCld = 35.9;
inline constexpr double kSingletonBd = 19.58;
inline constexpr int kSingletonsPerSpeaker = 50;

/// Expected report cells: (type, group, column) -> printed value.
struct Expected {
  const char* type;
  const char* group;
  std::vector<std::pair<const char*, double>> cells;
};

inline const std::vector<Expected>& expected_durations() {
  static const std::vector<Expected> e{
      {"Lexical", "SB", {{"Vd", 70.9}, {"Cd", 114.8}, {"Cld", 89.1}, {"Bd", 25.7}}},
      {"Lexical",
       "DB",
       {{"Vd", 78.8},
        {"Cd", 129.1},
        {"C1d", 61.4},
        {"C2d", 67.7},
        {"Cld", 87.9},
        {"Cl1d", 48.9},
        {"Cl2d", 39.0},
        {"Bd", 41.2},
        {"B1d", 12.5},
        {"B2d", 28.7}}},
      {"Lexical", "Combined", {{"Vd", 71.9}, {"Cd", 116.6}, {"Cld", 88.9}, {"Bd", 27.6}}},
      {"Syntactic", "SB", {{"Vd", 56.3}, {"Cd", 102.8}, {"Cld", 83.0}, {"Bd", 19.8}}},
      {"Syntactic",
       "DB",
       {{"Vd", 59.7},
        {"Cd", 97.2},
        {"C1d", 46.2},
        {"C2d", 50.9},
        {"Cld", 57.7},
        {"Cl1d", 35.3},
        {"Cl2d", 22.4},
        {"Bd", 39.5},
        {"B1d", 10.9},
        {"B2d", 28.6}}},
      {"Syntactic", "Combined", {{"Vd", 56.6}, {"Cd", 102.2}, {"Cld", 80.5}, {"Bd", 21.7}}},
  };
  return e;
}

struct ExpectedClass {
  const char* label;
  double Vd, Cd, Cld, Bd, ratio;
};

inline const std::vector<ExpectedClass>& expected_classes() {
  static const std::vector<ExpectedClass> e{{"Singleton", 85.07, 55.48, 35.9, 19.58, 0.75},
                                            {"Geminate", 65.98, 111.01, 85.69, 25.32, 1.84}};
  return e;
}

inline gemstop::Token make(const std::string& speaker, int sentence, gemstop::GemType type, const GroupMeans& g,
                           double vd) {
  using namespace gemstop;
  const auto rec = make_record(vd, g.closures, g.bursts);
  std::vector<double> powers(g.bursts.size(), 1e-3);
  if (powers.size() == 2) powers[1] = 4e-3;
  const std::string cons = type == GemType::None ? "t" : "tt";
  return build_token(rec, powers, classify_gemination(rec),
                     {speaker, std::to_string(sentence), "1", "a" + cons + "o", cons, type});
}

inline std::vector<gemstop::Token> tokens() {
  using gemstop::GemType;
  std::vector<gemstop::Token> out;
  for (const auto& c : counts()) {
    int sentence = 1;
    auto add = [&](int n, GemType type, const GroupMeans& g) {
      for (int i = 0; i < n; ++i) out.push_back(make(c.speaker, sentence++, type, g, g.Vd));
    };
    add(c.lexical_sb, GemType::Lexical, kLexicalSB);
    add(c.lexical_db, GemType::Lexical, kLexicalDB);
    add(c.syntactic_sb, GemType::Syntactic, kSyntacticSB);
    add(c.syntactic_db, GemType::Syntactic, kSyntacticDB);
    const GroupMeans single{kSingletonVd, {kSingletonCld}, {kSingletonBd}};
    for (int i = 0; i < kSingletonsPerSpeaker; ++i) {
      const double vd = kSingletonVd + (i % 2 ? kSingletonVdSwing : -kSingletonVdSwing);
      out.push_back(make(c.speaker, sentence++, GemType::None, single, vd));
    }
  }
  return out;
}

}  // namespace fixture
