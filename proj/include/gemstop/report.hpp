#pragma once

// Corpus summary: burst-count contingency, duration means, singleton vs
// geminate comparison and the ANOVA battery, rendered as text, JSON and
// plot-ready CSV series.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "gemstop/analysis.hpp"
#include "gemstop/gemination.hpp"
#include "gemstop/stats.hpp"
#include "gemstop/text.hpp"

namespace gemstop::report {

struct ReportOptions {
  double p_star = 0.05;
  bool paper_df = false;  // also print N - 1 next to the standard df
};

enum class CellState { Value, NotApplicable, InsufficientData };

struct MeanCell {
  CellState state = CellState::NotApplicable;
  stats::Descriptives d;
  std::string reason;
};

struct BurstCountRow {
  std::string speaker;
  std::size_t lexical_single = 0, lexical_double = 0;
  std::size_t syntactic_single = 0, syntactic_double = 0;
  std::size_t lexical_total() const { return lexical_single + lexical_double; }
  std::size_t syntactic_total() const { return syntactic_single + syntactic_double; }
};

inline const std::vector<std::string>& duration_columns() {
  static const std::vector<std::string> c{"Vd", "Cd", "C1d", "C2d", "Cld", "Cl1d", "Cl2d", "Bd", "B1d", "B2d"};
  return c;
}

struct DurationRow {
  std::string type;   // Lexical, Syntactic
  std::string group;  // SB, DB, Combined
  std::vector<MeanCell> cells;  // parallel to duration_columns()
};

struct ClassRow {
  std::string label;  // Singleton, Geminate
  MeanCell Vd, Cd, Cld, Bd;
  MeanCell mean_of_ratios;
  std::optional<double> ratio_of_means;
};

struct AnovaGroupSummary {
  std::string label;
  std::size_t n = 0;
  std::optional<double> mean;
};

struct AnovaCell {
  std::string type;
  std::string parameter;
  std::vector<AnovaGroupSummary> groups;
  std::optional<stats::AnovaResult> result;
  std::string reason;  // set when result is absent
};

struct AnovaSection {
  std::string name;
  std::string title;
  std::vector<AnovaCell> cells;
};

struct Report {
  ReportOptions options;
  std::size_t tokens = 0;
  std::size_t failed = 0;
  std::vector<BurstCountRow> burst_counts;  // per speaker, then "Total"
  std::vector<DurationRow> durations;
  std::vector<ClassRow> classes;
  std::vector<AnovaSection> anova;
};

namespace detail {

using Pick = std::function<std::optional<double>(const Token&)>;

inline MeanCell mean_cell(const std::vector<const Token*>& tokens, const Pick& pick) {
  std::vector<double> v;
  for (const auto* t : tokens) {
    if (const auto x = pick(*t)) v.push_back(*x);
  }
  MeanCell c;
  if (v.empty()) {
    c.state = CellState::InsufficientData;
    c.reason = "no tokens";
    return c;
  }
  c.state = CellState::Value;
  c.d = stats::descriptive(v);
  return c;
}

inline std::vector<const Token*> filter(const std::vector<const Token*>& tokens,
                                        const std::function<bool(const Token&)>& keep) {
  std::vector<const Token*> out;
  for (const auto* t : tokens) {
    if (keep(*t)) out.push_back(t);
  }
  return out;
}

inline bool is_db(const Token& t) { return t.record.split.has_value(); }

inline Pick split_field(double DoubleBurstSplit::*m) {
  return [m](const Token& t) -> std::optional<double> {
    if (!t.record.split) return std::nullopt;
    return (*t.record.split).*m;
  };
}

inline Pick duration_field(const std::string& name) {
  if (name == "Vd") return [](const Token& t) { return t.record.Vd; };
  if (name == "Cd") return [](const Token& t) -> std::optional<double> { return t.record.Cd; };
  if (name == "Cld") return [](const Token& t) -> std::optional<double> { return t.record.Cld; };
  if (name == "Bd") return [](const Token& t) -> std::optional<double> { return t.record.Bd; };
  if (name == "C1d") return split_field(&DoubleBurstSplit::C1d);
  if (name == "C2d") return split_field(&DoubleBurstSplit::C2d);
  if (name == "Cl1d") return split_field(&DoubleBurstSplit::Cl1d);
  if (name == "Cl2d") return split_field(&DoubleBurstSplit::Cl2d);
  if (name == "B1d") return split_field(&DoubleBurstSplit::B1d);
  return split_field(&DoubleBurstSplit::B2d);
}

inline Pick burst_power(std::size_t i) {
  return [i](const Token& t) -> std::optional<double> {
    if (!t.record.split || t.burst_powers.size() <= i) return std::nullopt;
    return t.burst_powers[i];
  };
}

inline Pick ratio_field() {
  return [](const Token& t) { return t.record.ratio(); };
}

/// Runs one ANOVA over labelled (tokens, field) groups; failures become gaps.
inline AnovaCell anova_cell(std::string type, std::string parameter,
                            const std::vector<std::pair<std::string, std::vector<double>>>& groups) {
  AnovaCell cell{std::move(type), std::move(parameter), {}, std::nullopt, {}};
  stats::GroupedSample sample;
  for (const auto& [label, values] : groups) {
    AnovaGroupSummary s{label, values.size(), std::nullopt};
    if (!values.empty()) s.mean = stats::descriptive(values).mean;
    cell.groups.push_back(s);
    sample.push_back({label, values});
  }
  try {
    cell.result = stats::one_way_anova(sample);
  } catch (const Error& e) {
    cell.reason = e.what();
  }
  return cell;
}

inline std::vector<double> values(const std::vector<const Token*>& tokens, const Pick& pick) {
  std::vector<double> v;
  for (const auto* t : tokens) {
    if (const auto x = pick(*t)) v.push_back(*x);
  }
  return v;
}

}  // namespace detail

inline Report build_report(std::vector<Token> tokens, const ReportOptions& options = {}) {
  using namespace detail;
  sort_tokens(tokens);
  Report r;
  r.options = options;
  r.tokens = tokens.size();

  std::vector<const Token*> ok;
  for (const auto& t : tokens) {
    if (t.ok()) {
      ok.push_back(&t);
    } else {
      ++r.failed;
    }
  }
  auto of_type = [&](GemType g) { return filter(ok, [g](const Token& t) { return t.meta.gem_type == g; }); };
  const auto lexical = of_type(GemType::Lexical);
  const auto syntactic = of_type(GemType::Syntactic);
  const auto singleton = of_type(GemType::None);
  const auto geminate = filter(ok, [](const Token& t) { return t.meta.gem_type != GemType::None; });

  // Burst counts per speaker.
  std::vector<std::string> speakers;
  for (const auto* t : geminate) speakers.push_back(t->meta.speaker);
  std::sort(speakers.begin(), speakers.end());
  speakers.erase(std::unique(speakers.begin(), speakers.end()), speakers.end());
  BurstCountRow total{"Total"};
  for (const auto& s : speakers) {
    BurstCountRow row{s};
    for (const auto* t : geminate) {
      if (t->meta.speaker != s) continue;
      const bool db = is_db(*t);
      if (t->meta.gem_type == GemType::Lexical) {
        ++(db ? row.lexical_double : row.lexical_single);
      } else {
        ++(db ? row.syntactic_double : row.syntactic_single);
      }
    }
    total.lexical_single += row.lexical_single;
    total.lexical_double += row.lexical_double;
    total.syntactic_single += row.syntactic_single;
    total.syntactic_double += row.syntactic_double;
    r.burst_counts.push_back(row);
  }
  r.burst_counts.push_back(total);

  // Duration matrix.
  const std::vector<std::pair<std::string, const std::vector<const Token*>*>> types{{"Lexical", &lexical},
                                                                                    {"Syntactic", &syntactic}};
  for (const auto& [type, group] : types) {
    const auto sb = filter(*group, [](const Token& t) { return !is_db(t); });
    const auto db = filter(*group, is_db);
    for (const auto& [label, set] : {std::pair{std::string("SB"), &sb}, std::pair{std::string("DB"), &db},
                                     std::pair{std::string("Combined"), group}}) {
      DurationRow row{type, label, {}};
      for (const auto& col : duration_columns()) {
        const bool split_col = col != "Vd" && col != "Cd" && col != "Cld" && col != "Bd";
        if (split_col && label != "DB") {
          row.cells.push_back({});
          continue;
        }
        row.cells.push_back(mean_cell(*set, duration_field(col)));
      }
      r.durations.push_back(std::move(row));
    }
  }

  // Singleton vs geminate.
  for (const auto& [label, set] :
       {std::pair{std::string("Singleton"), &singleton}, std::pair{std::string("Geminate"), &geminate}}) {
    ClassRow row;
    row.label = label;
    row.Vd = mean_cell(*set, duration_field("Vd"));
    row.Cd = mean_cell(*set, duration_field("Cd"));
    row.Cld = mean_cell(*set, duration_field("Cld"));
    row.Bd = mean_cell(*set, duration_field("Bd"));
    row.mean_of_ratios = mean_cell(*set, ratio_field());
    // Both means over the tokens that have a vowel.
    const auto with_vowel = filter(*set, [](const Token& t) { return t.record.Vd.has_value(); });
    if (!with_vowel.empty()) {
      const auto cd = stats::descriptive(values(with_vowel, duration_field("Cd"))).mean;
      const auto vd = stats::descriptive(values(with_vowel, duration_field("Vd"))).mean;
      if (vd > 0.0) row.ratio_of_means = cd / vd;
    }
    r.classes.push_back(std::move(row));
  }

  // ANOVA battery.
  const auto all_types = std::vector<std::pair<std::string, const std::vector<const Token*>*>>{
      {"Lexical", &lexical}, {"Syntactic", &syntactic}, {"Combined", &geminate}};

  AnovaSection power{"burst_power", "Burst power, first vs second burst (double-burst geminates)", {}};
  for (const auto& [type, set] : all_types) {
    const auto db = filter(*set, is_db);
    power.cells.push_back(anova_cell(type, "P_burst",
                                     {{"first", values(db, burst_power(0))}, {"second", values(db, burst_power(1))}}));
  }
  r.anova.push_back(std::move(power));

  AnovaSection c1c2{"c1_vs_c2_durations", "Durations of C1 vs C2 (double-burst geminates)", {}};
  for (const auto& [type, set] : types) {
    const auto db = filter(*set, is_db);
    for (const auto& [param, a, b] : {std::tuple{"Consonant duration", "C1d", "C2d"},
                                      std::tuple{"Closure duration", "Cl1d", "Cl2d"},
                                      std::tuple{"Burst duration", "B1d", "B2d"}}) {
      c1c2.cells.push_back(anova_cell(type, param,
                                      {{a, values(db, duration_field(a))}, {b, values(db, duration_field(b))}}));
    }
  }
  r.anova.push_back(std::move(c1c2));

  AnovaSection sbdb{"sb_vs_db", "Single-burst vs double-burst geminates", {}};
  const Pick average_bd = [](const Token& t) -> std::optional<double> {
    if (t.record.split) return (t.record.split->B1d + t.record.split->B2d) / 2.0;
    return t.record.Bd;
  };
  for (const auto& [type, set] : all_types) {
    const auto sb = filter(*set, [](const Token& t) { return !is_db(t); });
    const auto db = filter(*set, is_db);
    for (const auto& [param, pick] : {std::pair{std::string("Cd"), duration_field("Cd")},
                                      std::pair{std::string("Cld"), duration_field("Cld")},
                                      std::pair{std::string("Bd vs average Bd"), average_bd}}) {
      sbdb.cells.push_back(anova_cell(type, param, {{"SB", values(sb, pick)}, {"DB", values(db, pick)}}));
    }
  }
  r.anova.push_back(std::move(sbdb));

  AnovaSection lexsyn{"lexical_vs_syntactic", "Lexical vs syntactic geminates", {}};
  for (const auto& [param, pick] : {std::pair{std::string("Vd"), duration_field("Vd")},
                                    std::pair{std::string("Cd"), duration_field("Cd")},
                                    std::pair{std::string("Cd/Vd"), ratio_field()}}) {
    lexsyn.cells.push_back(
        anova_cell("Combined", param, {{"lexical", values(lexical, pick)}, {"syntactic", values(syntactic, pick)}}));
  }
  r.anova.push_back(std::move(lexsyn));

  AnovaSection ratio{"ratio_sb_vs_db", "Cd/Vd, single-burst vs double-burst", {}};
  for (const auto& [type, set] : types) {
    const auto sb = filter(*set, [](const Token& t) { return !is_db(t); });
    const auto db = filter(*set, is_db);
    ratio.cells.push_back(
        anova_cell(type, "Cd/Vd", {{"SB", values(sb, ratio_field())}, {"DB", values(db, ratio_field())}}));
  }
  r.anova.push_back(std::move(ratio));
  return r;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += row[i];
      if (i + 1 < row.size()) line.append(width[i] - row[i].size(), ' ');
    }
    out += line + '\n';
  }
  return out;
}

inline std::string cell_text(const MeanCell& c, int decimals = 2) {
  switch (c.state) {
    case CellState::Value: return text::fixed(c.d.mean, decimals);
    case CellState::NotApplicable: return "-";
    case CellState::InsufficientData: return "n/a";
  }
  return "-";
}

inline std::string df_text(const stats::AnovaResult& a) {
  return "(" + std::to_string(a.df_between) + ", " + std::to_string(a.df_within) + ")";
}

inline nlohmann::ordered_json cell_json(const MeanCell& c) {
  nlohmann::ordered_json j;
  switch (c.state) {
    case CellState::Value:
      j["mean"] = c.d.mean;
      j["se"] = c.d.standard_error;
      j["n"] = c.d.n;
      break;
    case CellState::NotApplicable: return nullptr;
    case CellState::InsufficientData:
      j["status"] = "InsufficientData";
      j["reason"] = c.reason;
      break;
  }
  return j;
}

}  // namespace detail

inline std::vector<std::string> notes(const Report& r) {
  std::vector<std::string> n{
      "ANOVA df are (k - 1, N - k).",
      "Cd/Vd is given both as the mean of per-token ratios and as mean Cd over mean Vd; the two differ in general.",
      "DB rows: Cld = Cl1d + Cl2d and Bd = B1d + B2d.",
  };
  if (r.options.paper_df) n.emplace_back("df_total is N - 1, printed for side-by-side comparison.");
  return n;
}

inline std::string render_text(const Report& r) {
  using namespace detail;
  std::ostringstream out;
  out << "tokens: " << r.tokens << " (" << r.failed << " failed, excluded)\n\n";

  out << "== Burst counts ==\n";
  std::vector<std::vector<std::string>> rows{
      {"speaker", "lex.single", "lex.double", "lex.total", "syn.single", "syn.double", "syn.total"}};
  for (const auto& b : r.burst_counts) {
    rows.push_back({b.speaker, std::to_string(b.lexical_single), std::to_string(b.lexical_double),
                    std::to_string(b.lexical_total()), std::to_string(b.syntactic_single),
                    std::to_string(b.syntactic_double), std::to_string(b.syntactic_total())});
  }
  out << table(rows) << '\n';

  out << "== Mean durations (ms) ==\n";
  rows = {{"type", "group"}};
  for (const auto& c : duration_columns()) rows[0].push_back(c);
  rows[0].push_back("n");
  for (const auto& d : r.durations) {
    std::vector<std::string> row{d.type, d.group};
    std::size_t n = 0;
    for (const auto& c : d.cells) {
      row.push_back(cell_text(c));
      if (c.state == CellState::Value) n = std::max(n, c.d.n);
    }
    row.push_back(std::to_string(n));
    rows.push_back(std::move(row));
  }
  out << table(rows) << '\n';

  out << "== Singleton vs geminate (ms) ==\n";
  rows = {{"class", "Vd", "Cd", "Cld", "Bd", "mean(Cd/Vd)", "mean(Cd)/mean(Vd)", "n"}};
  for (const auto& c : r.classes) {
    rows.push_back({c.label, cell_text(c.Vd), cell_text(c.Cd), cell_text(c.Cld), cell_text(c.Bd),
                    cell_text(c.mean_of_ratios, 3), c.ratio_of_means ? text::fixed(*c.ratio_of_means, 3) : "n/a",
                    std::to_string(c.Cd.state == CellState::Value ? c.Cd.d.n : 0)});
  }
  out << table(rows) << '\n';

  for (const auto& s : r.anova) {
    out << "== ANOVA: " << s.title << " ==\n";
    rows = {{"type", "parameter", "df"}};
    if (r.options.paper_df) rows[0].push_back("df(N-1)");
    for (const char* h : {"F", "p", "eta2", "effect", "groups"}) rows[0].emplace_back(h);
    for (const auto& c : s.cells) {
      std::string groups;
      for (const auto& g : c.groups) {
        if (!groups.empty()) groups += "; ";
        groups += g.label + " n=" + std::to_string(g.n);
        if (g.mean) groups += " mean=" + text::scientific(*g.mean, 4);
      }
      std::vector<std::string> row{c.type, c.parameter};
      if (c.result) {
        const auto& a = *c.result;
        row.push_back(df_text(a));
        if (r.options.paper_df) row.push_back("(" + std::to_string(a.df_between) + ", " + std::to_string(a.df_total()) + ")");
        row.push_back(text::fixed(a.F, 3));
        row.push_back(stats::format_p(a.p) + (a.p < r.options.p_star ? " *" : ""));
        row.push_back(a.eta_sq < 0.001 ? "<0.001" : text::fixed(a.eta_sq, 3));
        row.emplace_back(stats::to_string(a.effect_label));
      } else {
        row.push_back("InsufficientData");
        if (r.options.paper_df) row.push_back("-");
        for (int i = 0; i < 4; ++i) row.push_back("-");
        groups += " [" + c.reason + "]";
      }
      row.push_back(groups);
      rows.push_back(std::move(row));
    }
    out << table(rows) << '\n';
  }
  out << "* p < " << text::shortest(r.options.p_star) << '\n';
  for (const auto& n : notes(r)) out << "note: " << n << '\n';
  return out.str();
}

inline nlohmann::ordered_json to_json(const Report& r) {
  using namespace detail;
  using J = nlohmann::ordered_json;
  J j;
  j["tokens"] = {{"total", r.tokens}, {"failed", r.failed}};
  j["options"] = {{"p_star", r.options.p_star}, {"paper_df", r.options.paper_df}};

  J counts = J::array();
  for (const auto& b : r.burst_counts) {
    counts.push_back(J{{"speaker", b.speaker},
                       {"lexical", {{"single", b.lexical_single}, {"double", b.lexical_double}, {"total", b.lexical_total()}}},
                       {"syntactic",
                        {{"single", b.syntactic_single}, {"double", b.syntactic_double}, {"total", b.syntactic_total()}}}});
  }
  j["burst_counts"] = counts;

  J durations = J::object();
  for (const auto& d : r.durations) {
    J row = J::object();
    for (std::size_t i = 0; i < d.cells.size(); ++i) row[duration_columns()[i]] = cell_json(d.cells[i]);
    durations[d.type][d.group] = row;
  }
  j["duration_means"] = durations;

  J classes = J::object();
  for (const auto& c : r.classes) {
    classes[c.label] = J{{"Vd", cell_json(c.Vd)},
                         {"Cd", cell_json(c.Cd)},
                         {"Cld", cell_json(c.Cld)},
                         {"Bd", cell_json(c.Bd)},
                         {"mean_of_ratios", cell_json(c.mean_of_ratios)},
                         {"ratio_of_means", c.ratio_of_means ? J(*c.ratio_of_means) : J(nullptr)}};
  }
  j["singleton_vs_geminate"] = classes;

  J anova = J::object();
  for (const auto& s : r.anova) {
    J cells = J::array();
    for (const auto& c : s.cells) {
      J cell{{"type", c.type}, {"parameter", c.parameter}};
      J groups = J::array();
      for (const auto& g : c.groups) {
        groups.push_back(J{{"label", g.label}, {"n", g.n}, {"mean", g.mean ? J(*g.mean) : J(nullptr)}});
      }
      cell["groups"] = groups;
      if (c.result) {
        const auto& a = *c.result;
        cell["df"] = {a.df_between, a.df_within};
        if (r.options.paper_df) cell["df_total"] = a.df_total();
        cell["F"] = a.F;
        cell["p"] = a.p;
        cell["p_text"] = stats::format_p(a.p);
        cell["significant"] = a.p < r.options.p_star;
        cell["eta_sq"] = a.eta_sq;
        cell["effect"] = stats::to_string(a.effect_label);
        cell["ss"] = {{"between", a.ss_between}, {"within", a.ss_within}, {"total", a.ss_total}};
      } else {
        cell["status"] = "InsufficientData";
        cell["reason"] = c.reason;
      }
      cells.push_back(cell);
    }
    anova[s.name] = J{{"title", s.title}, {"cells", cells}};
  }
  j["anova"] = anova;
  j["notes"] = notes(r);
  return j;
}

inline std::string render_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Plot series

namespace detail {

inline std::string series_row(const std::vector<std::string>& keys, const MeanCell& c, int digits) {
  std::vector<std::string> f = keys;
  if (c.state == CellState::Value) {
    f.push_back(text::scientific(c.d.mean, digits));
    f.push_back(text::scientific(c.d.standard_error, digits));
    f.push_back(std::to_string(c.d.n));
    f.emplace_back("ok");
  } else {
    f.insert(f.end(), {"", "", "0", "InsufficientData"});
  }
  return csv::join(f) + "\n";
}

}  // namespace detail

/// Returns (file name, contents) pairs: burst power by burst, C1/C2 durations,
/// and vowel/consonant durations by type and burst group.
inline std::vector<std::pair<std::string, std::string>> plot_series(const std::vector<Token>& tokens) {
  using namespace detail;
  std::vector<Token> sorted = tokens;
  sort_tokens(sorted);
  std::vector<const Token*> ok;
  for (const auto& t : sorted) {
    if (t.ok() && t.meta.gem_type != GemType::None) ok.push_back(&t);
  }
  auto of = [&](const std::string& type) {
    if (type == "Combined") return ok;
    const auto g = type == "Lexical" ? GemType::Lexical : GemType::Syntactic;
    return filter(ok, [g](const Token& t) { return t.meta.gem_type == g; });
  };

  std::string power = "type,burst,mean,se,n,status\n";
  for (const std::string type : {"Lexical", "Syntactic", "Combined"}) {
    const auto db = filter(of(type), is_db);
    power += series_row({type, "first"}, mean_cell(db, burst_power(0)), 6);
    power += series_row({type, "second"}, mean_cell(db, burst_power(1)), 6);
  }

  std::string c1c2 = "type,parameter,consonant,mean,se,n,status\n";
  for (const std::string type : {"Lexical", "Syntactic"}) {
    const auto db = filter(of(type), is_db);
    for (const auto& [param, a, b] : {std::tuple{"Cd", "C1d", "C2d"}, std::tuple{"Cld", "Cl1d", "Cl2d"},
                                      std::tuple{"Bd", "B1d", "B2d"}}) {
      c1c2 += series_row({type, param, "C1"}, mean_cell(db, duration_field(a)), 6);
      c1c2 += series_row({type, param, "C2"}, mean_cell(db, duration_field(b)), 6);
    }
  }

  std::string vc = "type,group,parameter,mean,se,n,status\n";
  for (const std::string type : {"Lexical", "Syntactic"}) {
    const auto all = of(type);
    const auto sb = filter(all, [](const Token& t) { return !is_db(t); });
    const auto db = filter(all, is_db);
    for (const auto& [group, set] : {std::pair{"SB", &sb}, std::pair{"DB", &db}}) {
      for (const std::string param : {"Vd", "Cd", "Cld", "Bd"}) {
        vc += series_row({type, group, param}, mean_cell(*set, duration_field(param)), 6);
      }
    }
  }
  return {{"plot_burst_power.csv", power}, {"plot_c1_c2_durations.csv", c1c2}, {"plot_vowel_consonant.csv", vc}};
}

}  // namespace gemstop::report
