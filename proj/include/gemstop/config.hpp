#pragma once

// Flat key=value configuration files: one pair per line, '#' starts a
// comment line, surrounding whitespace is ignored.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "gemstop/acoustics.hpp"
#include "gemstop/error.hpp"
#include "gemstop/text.hpp"

namespace gemstop {

class KeyValues {
 public:
  static KeyValues parse(std::string_view content) {
    KeyValues kv;
    std::size_t line_no = 0;
    for (auto line : text::split(content, '\n')) {
      ++line_no;
      line = text::trim(line);
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ParseError(ErrorCode::SyntaxError, "expected key=value", line_no, 1);
      const auto key = std::string(text::trim(line.substr(0, eq)));
      if (key.empty()) throw ParseError(ErrorCode::SyntaxError, "empty key", line_no, 1);
      kv.values_[key] = {std::string(text::trim(line.substr(eq + 1))), line_no};
    }
    return kv;
  }

  static KeyValues load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  void set(const std::string& key, std::string value) { values_[key] = {std::move(value), 0}; }
  bool contains(const std::string& key) const { return values_.count(key) != 0; }

  std::optional<std::string> get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(key);
    return it->second.value;
  }

  double number(const std::string& key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    const auto d = text::parse_double(*v);
    if (!d) throw ParseError(ErrorCode::SyntaxError, key + ": '" + *v + "' is not a number", line_of(key));
    return *d;
  }

  long long integer(const std::string& key, long long fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    const auto d = text::parse_int(*v);
    if (!d) throw ParseError(ErrorCode::SyntaxError, key + ": '" + *v + "' is not an integer", line_of(key));
    return *d;
  }

  bool flag(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "1" || *v == "true" || *v == "yes" || *v == "on") return true;
    if (*v == "0" || *v == "false" || *v == "no" || *v == "off") return false;
    throw ParseError(ErrorCode::SyntaxError, key + ": '" + *v + "' is not a boolean", line_of(key));
  }

  /// Throws on the first key never read, so misspelled keys do not pass silently.
  void reject_unused() const {
    for (const auto& [k, v] : values_) {
      if (!used_.count(k)) throw ParseError(ErrorCode::SyntaxError, "unknown key '" + k + "'", v.line);
    }
  }

 private:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  std::size_t line_of(const std::string& key) const {
    const auto it = values_.find(key);
    return it == values_.end() ? 0 : it->second.line;
  }

  std::map<std::string, Entry> values_;
  mutable std::set<std::string> used_;
};

/// Settings shared by every subcommand.
struct RunConfig {
  DetectorConfig detector;
  double ratio_threshold = 1.0;
  double p_star = 0.05;
  bool paper_df = false;
  bool stop_only = true;
  unsigned jobs = 1;
  unsigned long long seed = 1;
};

inline RunConfig run_config_from(const KeyValues& kv) {
  RunConfig c;
  auto& d = c.detector;
  d.window_s = kv.number("window_s", d.window_s);
  d.hop_s = kv.number("hop_s", d.hop_s);
  d.rise_factor = kv.number("rise_factor", d.rise_factor);
  d.rel_floor = kv.number("rel_floor", d.rel_floor);
  d.min_gap_s = kv.number("min_gap_s", d.min_gap_s);
  d.min_offset_s = kv.number("min_offset_s", d.min_offset_s);
  d.closure_run_s = kv.number("closure_run_s", d.closure_run_s);
  d.abs_floor = kv.number("abs_floor", d.abs_floor);
  d.edge_fraction = kv.number("edge_fraction", d.edge_fraction);
  c.ratio_threshold = kv.number("ratio_threshold", c.ratio_threshold);
  c.p_star = kv.number("p_star", c.p_star);
  c.paper_df = kv.flag("paper_df", c.paper_df);
  c.stop_only = kv.flag("stop_only", c.stop_only);
  const auto jobs = kv.integer("jobs", c.jobs);
  const auto seed = kv.integer("seed", static_cast<long long>(c.seed));
  kv.reject_unused();

  for (double v : {d.window_s, d.hop_s, d.rise_factor, d.rel_floor, d.min_gap_s, d.min_offset_s, d.closure_run_s,
                   d.edge_fraction, c.ratio_threshold, c.p_star}) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "thresholds must be positive");
  }
  if (d.abs_floor < 0.0) throw Error(ErrorCode::InvalidArgument, "abs_floor must be non-negative");
  if (jobs < 1) throw Error(ErrorCode::InvalidArgument, "jobs must be at least 1");
  if (seed < 0) throw Error(ErrorCode::InvalidArgument, "seed must be non-negative");
  c.jobs = static_cast<unsigned>(jobs);
  c.seed = static_cast<unsigned long long>(seed);
  return c;
}

}  // namespace gemstop
