#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "gemstop/annotation.hpp"
#include "gemstop/phonemes.hpp"
#include "gemstop/text.hpp"
#include "gemstop/wav.hpp"

namespace gemstop {

struct Issue {
  std::string code;
  std::string message;
  std::string location;

  friend bool operator==(const Issue&, const Issue&) = default;
};

struct ValidationReport {
  std::vector<Issue> errors;
  std::vector<Issue> warnings;

  bool ok() const noexcept { return errors.empty(); }

  std::string to_text() const {
    std::string out;
    for (const auto& e : errors) out += "error\t" + e.code + "\t" + e.location + "\t" + e.message + "\n";
    for (const auto& w : warnings) out += "warning\t" + w.code + "\t" + w.location + "\t" + w.message + "\n";
    if (out.empty()) out = "ok\n";
    return out;
  }
};

struct ValidationOptions {
  bool stop_only = true;
  double adjacency_tolerance_s = 0.001;
};

inline std::string describe_location(const Segment& s) {
  if (s.line) return "line " + std::to_string(s.line);
  return std::string(to_string(s.tier)) + " '" + s.label + "' @ " + text::shortest(s.start_s);
}

/// Phone segment ending where `seg` starts (within tolerance), or null.
inline const Segment* preceding_phone(const AnnotationSet& ann, const Segment& seg, double tolerance_s) {
  const Segment* best = nullptr;
  for (const auto& s : ann.segments) {
    if (&s == &seg || s.tier != Tier::Phone || s.end_s > seg.start_s + tolerance_s) continue;
    if (!best || s.end_s > best->end_s) best = &s;
  }
  if (best && seg.start_s - best->end_s <= tolerance_s) return best;
  return nullptr;
}

/// Checks an annotation set against its audio. Never throws on bad data:
/// every problem becomes an entry in the report.
inline ValidationReport validate_annotations(const AnnotationSet& ann, const Waveform& wave,
                                             const ValidationOptions& opt = {}) {
  ValidationReport report;
  auto error = [&](const char* code, std::string msg, const Segment& s) {
    report.errors.push_back({code, std::move(msg), describe_location(s)});
  };
  const double half_sample = 0.5 / wave.sample_rate_hz();

  // Every overlapping pair on a tier, so adding segments can only add errors.
  for (Tier t : {Tier::Word, Tier::Phone}) {
    auto segs = ann.tier(t);
    std::stable_sort(segs.begin(), segs.end(), [](auto* a, auto* b) { return a->start_s < b->start_s; });
    for (std::size_t i = 0; i < segs.size(); ++i) {
      for (std::size_t j = i + 1; j < segs.size() && segs[j]->start_s < segs[i]->end_s; ++j) {
        error("OVERLAP", "overlaps " + describe_location(*segs[i]), *segs[j]);
      }
    }
  }

  for (const auto& s : ann.segments) {
    if (!(s.end_s > s.start_s) || s.start_s < 0.0) error("NON_MONOTONIC", "end is not after start", s);
    if (s.end_s > wave.duration_s() + half_sample)
      error("SEGMENT_PAST_EOF",
            "ends at " + text::shortest(s.end_s) + " s, audio lasts " + text::shortest(wave.duration_s()) + " s", s);
    if (s.tier != Tier::Phone) continue;

    const auto raw_gem = s.attr("gem_type");
    const auto gem = s.gem_type();
    if (raw_gem && !gem) {
      error("BAD_GEM_TYPE", "gem_type '" + std::string(*raw_gem) + "' is not lexical, syntactic or none", s);
    }
    const bool geminate = gem && *gem != GemType::None;

    if (const auto c = find_consonant(s.label); c && c->behavior == GeminationBehavior::NeverGeminate) {
      const bool doubled_label = s.label.size() == 2 * c->ipa.size();
      if (geminate || doubled_label)
        error("ILLEGAL_GEMINATE", "/" + std::string(c->ipa) + "/ never occurs in geminated form", s);
    }
    if (opt.stop_only && geminate && !is_stop(s.label))
      error("NON_STOP_GEMINATE", "gem_type set on non-stop phone '" + s.label + "'", s);

    if (gem && is_stop(s.label)) {
      for (const char* key : {"speaker", "sentence_id"}) {
        if (!s.attr(key)) error("MISSING_METADATA", std::string("attribute '") + key + "' is required", s);
      }
    }
    if (geminate && !s.utterance_initial() && !preceding_phone(ann, s, opt.adjacency_tolerance_s)) {
      report.warnings.push_back(
          {"MISSING_VOWEL", "no phone segment ends at the consonant onset", describe_location(s)});
    }
  }
  return report;
}

}  // namespace gemstop
