#pragma once

// Durational parameters, Cd/Vd classification and the token CSV row format.

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gemstop/acoustics.hpp"
#include "gemstop/annotation.hpp"
#include "gemstop/error.hpp"
#include "gemstop/text.hpp"

namespace gemstop {

/// First/second consonant split of a double-burst geminate, in ms.
struct DoubleBurstSplit {
  double C1d = 0, C2d = 0, Cl1d = 0, Cl2d = 0, B1d = 0, B2d = 0;
  friend bool operator==(const DoubleBurstSplit&, const DoubleBurstSplit&) = default;
};

/// All durations in ms. Sums are formed from rounded parts so the additivity
/// identities hold exactly in the written CSV.
struct DurationRecord {
  std::optional<double> Vd;
  double Cd = 0, Cld = 0, Bd = 0;
  std::optional<DoubleBurstSplit> split;

  std::optional<double> ratio() const {
    if (!Vd || *Vd <= 0.0) return std::nullopt;
    return Cd / *Vd;
  }
  friend bool operator==(const DurationRecord&, const DurationRecord&) = default;
};

inline double round_ms(double ms) { return std::round(ms * 100.0) / 100.0; }

/// Builds a record from closure/burst lengths; `closures` and `bursts` hold one
/// or two entries each, already in ms.
inline DurationRecord make_record(std::optional<double> vowel_ms, std::span<const double> closures,
                                  std::span<const double> bursts) {
  if (closures.size() != bursts.size() || closures.empty() || closures.size() > 2)
    throw Error(ErrorCode::InconsistentEvents, "expected one or two closure/burst pairs");
  DurationRecord r;
  if (vowel_ms) r.Vd = round_ms(*vowel_ms);
  if (closures.size() == 1) {
    r.Cld = round_ms(closures[0]);
    r.Bd = round_ms(bursts[0]);
  } else {
    DoubleBurstSplit s;
    s.Cl1d = round_ms(closures[0]);
    s.Cl2d = round_ms(closures[1]);
    s.B1d = round_ms(bursts[0]);
    s.B2d = round_ms(bursts[1]);
    // Re-rounding a sum of two-decimal parts only strips binary noise.
    s.C1d = round_ms(s.Cl1d + s.B1d);
    s.C2d = round_ms(s.Cl2d + s.B2d);
    r.Cld = round_ms(s.Cl1d + s.Cl2d);
    r.Bd = round_ms(s.B1d + s.B2d);
    r.split = s;
  }
  r.Cd = round_ms(r.Cld + r.Bd);
  return r;
}

inline DurationRecord extract_durations(const EventSequence& seq, std::optional<Interval> vowel) {
  check_event_sequence(seq);
  std::vector<double> closures, bursts;
  for (const auto& e : seq.events) (e.kind == EventKind::Closure ? closures : bursts).push_back(e.duration_s() * 1e3);
  std::optional<double> vowel_ms;
  if (vowel) vowel_ms = vowel->duration_s() * 1e3;
  return make_record(vowel_ms, closures, bursts);
}

inline DurationRecord extract_durations(const EventSequence& seq, const Segment* vowel) {
  return extract_durations(seq, vowel ? std::optional<Interval>(Interval{vowel->start_s, vowel->end_s}) : std::nullopt);
}

/// Largest violation of the additivity identities, in ms.
inline double additivity_error(const DurationRecord& r) {
  double worst = std::abs(r.Cd - (r.Cld + r.Bd));
  if (r.split) {
    const auto& s = *r.split;
    worst = std::max({worst, std::abs(s.C1d - (s.Cl1d + s.B1d)), std::abs(s.C2d - (s.Cl2d + s.B2d)),
                      std::abs(r.Cd - (s.C1d + s.C2d)), std::abs(r.Cld - (s.Cl1d + s.Cl2d)),
                      std::abs(r.Bd - (s.B1d + s.B2d))});
  }
  return worst;
}

enum class Verdict { Singleton, Geminate, Indeterminate };

constexpr std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Singleton: return "singleton";
    case Verdict::Geminate: return "geminate";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

struct GeminationCall {
  Verdict verdict = Verdict::Indeterminate;
  std::optional<double> ratio_used;
  double threshold = 1.0;
};

/// A ratio equal to the threshold counts as geminate.
inline GeminationCall classify_ratio(std::optional<double> ratio, double threshold = 1.0) {
  if (!ratio) return {Verdict::Indeterminate, std::nullopt, threshold};
  return {*ratio >= threshold ? Verdict::Geminate : Verdict::Singleton, ratio, threshold};
}

inline GeminationCall classify_gemination(const DurationRecord& record, double threshold = 1.0) {
  return classify_ratio(record.ratio(), threshold);
}

struct TokenMetadata {
  std::string speaker;
  std::string sentence_id;
  std::string repetition;
  std::string word;
  std::string consonant;
  GemType gem_type = GemType::None;
};

/// One measured consonant. A token whose analysis failed keeps its metadata
/// and carries the failure in `error`, with the measurement fields unset.
struct Token {
  TokenMetadata meta;
  DurationRecord record;
  std::vector<double> burst_powers;
  std::optional<double> ratio;
  BurstCount burst_count = BurstCount::Single;
  GeminationCall call;
  std::string error;
  std::string source;    // recording the token came from, for ordering only
  double onset_s = 0.0;  // consonant start in that recording

  bool ok() const noexcept { return error.empty(); }
};

inline Token build_token(const DurationRecord& record, std::vector<double> powers, const GeminationCall& call,
                         TokenMetadata meta) {
  if (meta.speaker.empty()) throw Error(ErrorCode::MissingMetadata, "speaker is missing");
  if (meta.sentence_id.empty()) throw Error(ErrorCode::MissingMetadata, "sentence_id is missing");
  const std::size_t bursts = record.split ? 2 : 1;
  if (powers.size() != bursts)
    throw Error(ErrorCode::InconsistentEvents,
                std::to_string(powers.size()) + " burst powers for " + std::to_string(bursts) + " bursts");
  Token t;
  t.meta = std::move(meta);
  t.record = record;
  t.burst_powers = std::move(powers);
  t.ratio = record.ratio();
  t.burst_count = record.split ? BurstCount::Double : BurstCount::Single;
  t.call = call;
  return t;
}

// ---------------------------------------------------------------------------
// Token CSV

inline const std::vector<std::string>& token_columns() {
  static const std::vector<std::string> cols{
      "speaker", "sentence_id", "repetition", "word",     "consonant", "gem_type", "burst_count",
      "Vd_ms",   "Cd_ms",       "Cld_ms",     "Bd_ms",    "C1d_ms",    "C2d_ms",   "Cl1d_ms",
      "Cl2d_ms", "B1d_ms",      "B2d_ms",     "P_burst1", "P_burst2",  "ratio"};
  return cols;
}

namespace csv {

inline std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  return out;
}

/// Splits one CSV record; quoted fields may not span lines.
inline std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      if (!cur.empty() || was_quoted)
        throw ParseError(ErrorCode::SyntaxError, "stray quote", line_no, i + 1);
      quoted = was_quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw ParseError(ErrorCode::SyntaxError, "text after closing quote", line_no, i + 1);
      cur += c;
    }
  }
  if (quoted) throw ParseError(ErrorCode::SyntaxError, "unterminated quote", line_no, line.size());
  out.push_back(std::move(cur));
  return out;
}

}  // namespace csv

inline std::string fmt_ms(std::optional<double> v) { return v ? text::fixed(*v, 2) : std::string(); }
inline std::string fmt_power(std::optional<double> v) { return v ? text::scientific(*v, 6) : std::string(); }

inline std::vector<std::string> token_fields(const Token& t) {
  std::vector<std::string> f{t.meta.speaker, t.meta.sentence_id, t.meta.repetition,          t.meta.word,
                             t.meta.consonant, std::string(to_string(t.meta.gem_type))};
  if (!t.ok()) {
    f.resize(token_columns().size());
    return f;
  }
  const auto& r = t.record;
  f.emplace_back(to_string(t.burst_count));
  f.push_back(fmt_ms(r.Vd));
  f.push_back(fmt_ms(r.Cd));
  f.push_back(fmt_ms(r.Cld));
  f.push_back(fmt_ms(r.Bd));
  for (auto member : {&DoubleBurstSplit::C1d, &DoubleBurstSplit::C2d, &DoubleBurstSplit::Cl1d,
                      &DoubleBurstSplit::Cl2d, &DoubleBurstSplit::B1d, &DoubleBurstSplit::B2d}) {
    f.push_back(r.split ? fmt_ms((*r.split).*member) : std::string());
  }
  f.push_back(t.burst_powers.size() > 0 ? fmt_power(t.burst_powers[0]) : std::string());
  f.push_back(t.burst_powers.size() > 1 ? fmt_power(t.burst_powers[1]) : std::string());
  f.push_back(t.ratio ? text::fixed(*t.ratio, 6) : std::string());
  return f;
}

/// Header plus one row per token; the trailing `error` column is empty for
/// successfully measured tokens.
inline void write_tokens_csv(std::ostream& out, const std::vector<Token>& tokens) {
  auto header = token_columns();
  header.emplace_back("error");
  out << csv::join(header) << '\n';
  for (const auto& t : tokens) {
    auto f = token_fields(t);
    f.push_back(t.error);
    out << csv::join(f) << '\n';
  }
}

inline std::string tokens_csv(const std::vector<Token>& tokens) {
  std::ostringstream out;
  write_tokens_csv(out, tokens);
  return out.str();
}

inline std::vector<Token> read_tokens_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> index;  // canonical column -> position in file
  std::optional<std::size_t> error_col;
  std::vector<Token> tokens;
  const auto& cols = token_columns();

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = csv::split_record(line, line_no);
    if (index.empty()) {
      for (const auto& c : cols) {
        const auto it = std::find(fields.begin(), fields.end(), c);
        if (it == fields.end()) throw ParseError(ErrorCode::SyntaxError, "header lacks column '" + c + "'", line_no);
        index.push_back(static_cast<std::size_t>(it - fields.begin()));
      }
      if (const auto it = std::find(fields.begin(), fields.end(), "error"); it != fields.end())
        error_col = static_cast<std::size_t>(it - fields.begin());
      continue;
    }

    auto get = [&](std::size_t c) -> const std::string& {
      if (index[c] >= fields.size())
        throw ParseError(ErrorCode::SyntaxError, "row has " + std::to_string(fields.size()) + " fields", line_no);
      return fields[index[c]];
    };
    auto number = [&](std::size_t c) -> std::optional<double> {
      const auto& s = get(c);
      if (s.empty()) return std::nullopt;
      const auto v = text::parse_double(s);
      if (!v) throw ParseError(ErrorCode::SyntaxError, "column " + cols[c] + ": '" + s + "' is not a number", line_no);
      return v;
    };
    auto required = [&](std::size_t c) {
      const auto v = number(c);
      if (!v) throw ParseError(ErrorCode::SyntaxError, "column " + cols[c] + " is empty", line_no);
      return *v;
    };

    Token t;
    t.meta = {get(0), get(1), get(2), get(3), get(4), GemType::None};
    const auto gem = parse_gem_type(get(5));
    if (!gem) throw ParseError(ErrorCode::SyntaxError, "bad gem_type '" + get(5) + "'", line_no);
    t.meta.gem_type = *gem;
    if (error_col && *error_col < fields.size()) t.error = fields[*error_col];
    if (!t.ok()) {
      tokens.push_back(std::move(t));
      continue;
    }
    if (get(6) == "single") {
      t.burst_count = BurstCount::Single;
    } else if (get(6) == "double") {
      t.burst_count = BurstCount::Double;
    } else {
      throw ParseError(ErrorCode::SyntaxError, "bad burst_count '" + get(6) + "'", line_no);
    }
    t.record.Vd = number(7);
    t.record.Cd = required(8);
    t.record.Cld = required(9);
    t.record.Bd = required(10);
    if (t.burst_count == BurstCount::Double) {
      t.record.split = DoubleBurstSplit{required(11), required(12), required(13),
                                        required(14), required(15), required(16)};
    }
    if (const auto p = number(17)) t.burst_powers.push_back(*p);
    if (const auto p = number(18)) t.burst_powers.push_back(*p);
    t.ratio = number(19);
    tokens.push_back(std::move(t));
  }
  if (index.empty()) throw ParseError(ErrorCode::SyntaxError, "missing header row", line_no ? line_no : 1);
  return tokens;
}

}  // namespace gemstop
