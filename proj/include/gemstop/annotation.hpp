#pragma once

// Tab-separated annotation tiers:
//
//   # comment
//   phone<TAB>tt<TAB>1.530<TAB>1.632<TAB>gem_type=lexical;word=filetto
//
// Fields are tier (word|phone), label, start_s, end_s, attrs. The attrs field
// is a semicolon-separated key=value list and may be empty or omitted.
// A comment of the form "# audio: <name>" records the paired audio file.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gemstop/error.hpp"
#include "gemstop/text.hpp"

namespace gemstop {

enum class Tier { Word, Phone };

constexpr std::string_view to_string(Tier tier) noexcept { return tier == Tier::Word ? "word" : "phone"; }

enum class GemType { Lexical, Syntactic, None };

constexpr std::string_view to_string(GemType g) noexcept {
  switch (g) {
    case GemType::Lexical: return "lexical";
    case GemType::Syntactic: return "syntactic";
    case GemType::None: return "none";
  }
  return "none";
}

inline std::optional<GemType> parse_gem_type(std::string_view s) {
  if (s == "lexical") return GemType::Lexical;
  if (s == "syntactic") return GemType::Syntactic;
  if (s == "none") return GemType::None;
  return std::nullopt;
}

using Attrs = std::vector<std::pair<std::string, std::string>>;

struct Segment {
  Tier tier = Tier::Phone;
  std::string label;
  double start_s = 0.0;
  double end_s = 0.0;
  Attrs attrs;
  std::size_t line = 0;  // source line, 0 when built in memory

  double duration_s() const noexcept { return end_s - start_s; }

  std::optional<std::string_view> attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return std::string_view(v);
    }
    return std::nullopt;
  }

  /// Unset when the key is missing; throws nothing on unknown values.
  std::optional<GemType> gem_type() const {
    const auto v = attr("gem_type");
    return v ? parse_gem_type(*v) : std::nullopt;
  }

  bool utterance_initial() const {
    const auto v = attr("utterance_initial");
    return v && (*v == "1" || *v == "true" || *v == "yes");
  }

  friend bool operator==(const Segment& a, const Segment& b) {
    return a.tier == b.tier && a.label == b.label && a.start_s == b.start_s && a.end_s == b.end_s &&
           a.attrs == b.attrs;
  }
};

struct AnnotationSet {
  std::vector<Segment> segments;
  std::string audio_ref;

  std::vector<const Segment*> tier(Tier t) const {
    std::vector<const Segment*> out;
    for (const auto& s : segments) {
      if (s.tier == t) out.push_back(&s);
    }
    return out;
  }

  friend bool operator==(const AnnotationSet& a, const AnnotationSet& b) {
    return a.audio_ref == b.audio_ref && a.segments == b.segments;
  }
};

namespace detail {

inline Attrs parse_attrs(std::string_view field, std::size_t line, std::size_t column) {
  Attrs attrs;
  std::size_t offset = 0;
  for (auto item : text::split(field, ';')) {
    const std::size_t item_col = column + offset;
    offset += item.size() + 1;
    if (text::trim(item).empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ParseError(ErrorCode::SyntaxError, "attribute '" + std::string(item) + "' is not key=value", line,
                       item_col);
    attrs.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
  }
  return attrs;
}

}  // namespace detail

inline AnnotationSet parse_annotations_text(std::string_view content) {
  AnnotationSet out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      const auto body = text::trim(trimmed.substr(1));
      if (text::starts_with(body, "audio:")) out.audio_ref = std::string(text::trim(body.substr(6)));
      continue;
    }

    const auto fields = text::split(line, '\t');
    std::vector<std::size_t> columns(fields.size(), 1);
    for (std::size_t i = 1; i < fields.size(); ++i) columns[i] = columns[i - 1] + fields[i - 1].size() + 1;
    if (fields.size() < 4 || fields.size() > 5)
      throw ParseError(ErrorCode::SyntaxError,
                       "expected 5 tab-separated fields, found " + std::to_string(fields.size()), line_no, 1);

    Segment seg;
    seg.line = line_no;
    if (fields[0] == "word") {
      seg.tier = Tier::Word;
    } else if (fields[0] == "phone") {
      seg.tier = Tier::Phone;
    } else {
      throw ParseError(ErrorCode::SyntaxError, "unknown tier '" + std::string(fields[0]) + "'", line_no, 1);
    }
    seg.label = std::string(fields[1]);
    if (seg.label.empty()) throw ParseError(ErrorCode::SyntaxError, "empty label", line_no, columns[1]);
    const auto start = text::parse_double(fields[2]);
    if (!start || *start < 0.0)
      throw ParseError(ErrorCode::SyntaxError, "bad start time '" + std::string(fields[2]) + "'", line_no, columns[2]);
    const auto end = text::parse_double(fields[3]);
    if (!end) throw ParseError(ErrorCode::SyntaxError, "bad end time '" + std::string(fields[3]) + "'", line_no, columns[3]);
    seg.start_s = *start;
    seg.end_s = *end;
    if (seg.end_s <= seg.start_s)
      throw ParseError(ErrorCode::NonMonotonic, "end " + std::string(fields[3]) + " is not after start " +
                                                    std::string(fields[2]),
                       line_no, columns[3]);
    if (fields.size() == 5) seg.attrs = detail::parse_attrs(fields[4], line_no, columns[4]);

    out.segments.push_back(std::move(seg));
  }

  std::map<Tier, const Segment*> prev;
  for (const auto& seg : out.segments) {
    const auto it = prev.find(seg.tier);
    if (it != prev.end() && seg.start_s < it->second->end_s) {
      throw ParseError(ErrorCode::OverlapError,
                       std::string(to_string(seg.tier)) + " segment '" + seg.label + "' starts at " +
                           text::shortest(seg.start_s) + " before '" + it->second->label + "' (line " +
                           std::to_string(it->second->line) + ") ends at " + text::shortest(it->second->end_s),
                       seg.line, 1);
    }
    prev[seg.tier] = &seg;
  }
  return out;
}

inline AnnotationSet parse_annotations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_annotations_text(buf.str());
}

inline std::string serialize_annotations(const AnnotationSet& set) {
  std::string out = "# tier\tlabel\tstart_s\tend_s\tattrs\n";
  if (!set.audio_ref.empty()) out += "# audio: " + set.audio_ref + "\n";
  for (const auto& s : set.segments) {
    out += to_string(s.tier);
    out += '\t' + s.label + '\t' + text::shortest(s.start_s) + '\t' + text::shortest(s.end_s) + '\t';
    for (std::size_t i = 0; i < s.attrs.size(); ++i) {
      if (i) out += ';';
      out += s.attrs[i].first + '=' + s.attrs[i].second;
    }
    out += '\n';
  }
  return out;
}

inline void write_annotations(const std::filesystem::path& path, const AnnotationSet& set) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << serialize_annotations(set);
  if (!out) throw Error(ErrorCode::IoError, "short write to '" + path.string() + "'");
}

}  // namespace gemstop
