#pragma once

// Per-recording measurement: every annotated stop consonant becomes a Token.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "gemstop/acoustics.hpp"
#include "gemstop/annotation.hpp"
#include "gemstop/gemination.hpp"
#include "gemstop/phonemes.hpp"
#include "gemstop/text.hpp"
#include "gemstop/validation.hpp"
#include "gemstop/wav.hpp"

namespace gemstop {

struct AnalysisOptions {
  DetectorConfig detector;
  double ratio_threshold = 1.0;
  double adjacency_tolerance_s = 0.001;
};

inline TokenMetadata token_metadata(const AnnotationSet& ann, const Segment& seg) {
  TokenMetadata m;
  auto attr = [&](const char* key) { return std::string(seg.attr(key).value_or("")); };
  m.speaker = attr("speaker");
  m.sentence_id = attr("sentence_id");
  m.repetition = attr("repetition");
  m.word = attr("word");
  m.consonant = seg.label;
  m.gem_type = seg.gem_type().value_or(GemType::None);
  if (m.word.empty()) {
    for (const auto* w : ann.tier(Tier::Word)) {
      if (w->start_s <= seg.start_s && seg.start_s < w->end_s) m.word = w->label;
    }
  }
  return m;
}

/// Measures one consonant segment. Detection failures are recorded on the
/// returned token rather than thrown.
inline Token analyze_segment(const AnnotationSet& ann, const Segment& seg, const Waveform& wave,
                             const AnalysisOptions& opt = {}) {
  TokenMetadata meta = token_metadata(ann, seg);
  const Segment* vowel = seg.utterance_initial() ? nullptr : preceding_phone(ann, seg, opt.adjacency_tolerance_s);
  std::optional<Interval> vowel_iv;
  if (vowel) vowel_iv = Interval{vowel->start_s, vowel->end_s};
  try {
    const auto events = detect_acoustic_events(wave, {seg.start_s, seg.end_s}, vowel_iv, opt.detector);
    const auto record = extract_durations(events, vowel_iv);
    std::vector<double> powers;
    for (const auto& e : events.events) {
      if (e.kind == EventKind::Burst) powers.push_back(e.peak_power);
    }
    Token t = build_token(record, std::move(powers), classify_gemination(record, opt.ratio_threshold), meta);
    t.source = wave.source_path();
    t.onset_s = seg.start_s;
    return t;
  } catch (const Error& e) {
    Token t;
    t.meta = std::move(meta);
    t.error = e.what();
    t.source = wave.source_path();
    t.onset_s = seg.start_s;
    return t;
  }
}

/// Phone segments that carry a gem_type attribute and a stop label.
inline std::vector<const Segment*> measurable_consonants(const AnnotationSet& ann) {
  std::vector<const Segment*> out;
  for (const auto* s : ann.tier(Tier::Phone)) {
    if (s->attr("gem_type") && is_stop(s->label)) out.push_back(s);
  }
  return out;
}

inline std::vector<Token> analyze_recording(const AnnotationSet& ann, const Waveform& wave,
                                            const AnalysisOptions& opt = {}) {
  std::vector<Token> tokens;
  for (const auto* seg : measurable_consonants(ann)) tokens.push_back(analyze_segment(ann, *seg, wave, opt));
  return tokens;
}

/// Speaker, sentence, repetition, then position in the recording; numeric ids
/// sort numerically.
inline bool token_order(const Token& a, const Token& b) {
  if (const int c = a.meta.speaker.compare(b.meta.speaker)) return c < 0;
  if (const int c = text::natural_compare(a.meta.sentence_id, b.meta.sentence_id)) return c < 0;
  if (const int c = text::natural_compare(a.meta.repetition, b.meta.repetition)) return c < 0;
  if (const int c = a.source.compare(b.source)) return c < 0;
  return a.onset_s < b.onset_s;
}

inline void sort_tokens(std::vector<Token>& tokens) { std::stable_sort(tokens.begin(), tokens.end(), token_order); }

}  // namespace gemstop
