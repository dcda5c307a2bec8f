#pragma once

// Schematic VCV / VCCV stop stimuli with exact ground truth.
//
// Layout: lead silence, vowel, closure, burst [, closure, burst], vowel,
// trailing silence. Vowels are band-limited pulse trains with raised-cosine
// ramps; closures are silent or carry a weak 120 Hz murmur; bursts are seeded
// uniform noise under an exponential decay.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "gemstop/acoustics.hpp"
#include "gemstop/annotation.hpp"
#include "gemstop/config.hpp"
#include "gemstop/error.hpp"
#include "gemstop/gemination.hpp"
#include "gemstop/phonemes.hpp"
#include "gemstop/text.hpp"
#include "gemstop/wav.hpp"

namespace gemstop {

/// SplitMix64 (Steele, Lea & Flood 2014). Fixed algorithm so corpora are
/// reproducible across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes two draws per call.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Normal(mean, sd) redrawn until >= floor; falls back to floor after 64 tries.
  double truncated_normal(double mean, double sd, double floor) {
    for (int i = 0; i < 64; ++i) {
      const double v = mean + sd * normal();
      if (v >= floor) return v;
    }
    return floor;
  }

 private:
  std::uint64_t state_;
};

/// Independent stream for item `index` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  mix.next();
  return mix.next();
}

struct StimulusSpec {
  double Vd_ms = 70.0;
  std::vector<double> closure_ms{80.0};  // one entry, or Cl1d and Cl2d
  std::vector<double> burst_ms{20.0};    // one entry, or B1d and B2d
  std::vector<double> burst_amplitudes{0.3};
  double vowel_amplitude = 0.5;
  double f0_hz = 120.0;
  double post_vowel_ms = 80.0;
  double lead_ms = 40.0;
  double tail_ms = 20.0;
  double ramp_ms = 10.0;
  bool voiced_closure = false;
  int sample_rate_hz = 44100;
  std::uint64_t seed = 1;

  static StimulusSpec single_burst(double Vd, double Cld, double Bd, double amplitude = 0.3) {
    StimulusSpec s;
    s.Vd_ms = Vd;
    s.closure_ms = {Cld};
    s.burst_ms = {Bd};
    s.burst_amplitudes = {amplitude};
    return s;
  }

  static StimulusSpec double_burst(double Vd, double Cl1d, double B1d, double Cl2d, double B2d, double amp1 = 0.2,
                                   double amp2 = 0.4) {
    StimulusSpec s;
    s.Vd_ms = Vd;
    s.closure_ms = {Cl1d, Cl2d};
    s.burst_ms = {B1d, B2d};
    s.burst_amplitudes = {amp1, amp2};
    return s;
  }
};

struct GroundTruth {
  AnnotationSet annotations;
  EventSequence events;
  Interval vowel;
  DurationRecord record;
  std::vector<double> burst_powers;  // measured on the quantized samples
};

struct Stimulus {
  Waveform wave;
  GroundTruth truth;
};

/// Expected mean squared amplitude of a burst of `n` samples at `amplitude`:
/// uniform noise contributes a^2 / 3, scaled by the mean squared envelope.
inline double expected_burst_power(double amplitude, std::size_t n) {
  double env = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(-static_cast<double>(i) / static_cast<double>(n));
    env += e * e;
  }
  return amplitude * amplitude / 3.0 * env / static_cast<double>(n);
}

namespace detail {

inline void check_spec(const StimulusSpec& s) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::SpecInfeasible, why); };
  if (s.sample_rate_hz <= 0) fail("sample rate must be positive");
  const std::size_t pairs = s.closure_ms.size();
  if ((pairs != 1 && pairs != 2) || s.burst_ms.size() != pairs || s.burst_amplitudes.size() != pairs)
    fail("closure, burst and amplitude lists must all hold one or all hold two entries");
  for (double d : {s.Vd_ms, s.post_vowel_ms}) {
    if (!(d > 0.0)) fail("durations must be positive");
  }
  for (std::size_t i = 0; i < pairs; ++i) {
    if (!(s.closure_ms[i] > 0.0) || !(s.burst_ms[i] > 0.0)) fail("durations must be positive");
    if (!(s.burst_amplitudes[i] > 0.0 && s.burst_amplitudes[i] <= 1.0)) fail("burst amplitude outside (0, 1]");
  }
  if (!(s.vowel_amplitude > 0.0 && s.vowel_amplitude <= 1.0)) fail("vowel amplitude outside (0, 1]");
  if (!(s.f0_hz > 0.0) || s.f0_hz >= s.sample_rate_hz / 2.0) fail("f0 outside (0, Nyquist)");
  if (s.lead_ms < 0.0 || s.tail_ms < 0.0 || s.ramp_ms < 0.0) fail("negative padding");
  if (2.0 * s.ramp_ms > s.Vd_ms) fail("vowel shorter than its two ramps");
  if (2.0 * s.ramp_ms > s.post_vowel_ms) fail("following vowel shorter than its two ramps");
}

inline std::size_t ms_to_samples(double ms, int fs) {
  return static_cast<std::size_t>(std::llround(ms * fs / 1000.0));
}

/// Pulse train with 1/k harmonics up to 4 kHz, peak-normalized, ramped on and off.
inline void write_vowel(std::vector<double>& x, std::size_t from, std::size_t n, const StimulusSpec& s) {
  const int fs = s.sample_rate_hz;
  const int harmonics = std::max(1, static_cast<int>(std::min(4000.0, 0.45 * fs) / s.f0_hz));
  double norm = 0.0;
  for (int k = 1; k <= harmonics; ++k) norm += 1.0 / k;
  const auto ramp = std::min(ms_to_samples(s.ramp_ms, fs), n / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    double v = 0.0;
    for (int k = 1; k <= harmonics; ++k) v += std::cos(2.0 * std::numbers::pi * k * s.f0_hz * t) / k;
    double env = 1.0;
    if (ramp > 0 && i < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) / ramp);
    if (ramp > 0 && n - 1 - i < ramp)
      env = std::min(env, 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(n - 1 - i) / ramp));
    x[from + i] = s.vowel_amplitude * env * v / norm;
  }
}

}  // namespace detail

inline Stimulus synthesize_vcv(const StimulusSpec& spec, const TokenMetadata& meta = {}) {
  detail::check_spec(spec);
  const int fs = spec.sample_rate_hz;
  using detail::ms_to_samples;

  const std::size_t lead = ms_to_samples(spec.lead_ms, fs);
  const std::size_t vowel = ms_to_samples(spec.Vd_ms, fs);
  const std::size_t post = ms_to_samples(spec.post_vowel_ms, fs);
  const std::size_t tail = ms_to_samples(spec.tail_ms, fs);
  std::vector<std::size_t> closures, bursts;
  for (std::size_t i = 0; i < spec.closure_ms.size(); ++i) {
    closures.push_back(ms_to_samples(spec.closure_ms[i], fs));
    bursts.push_back(ms_to_samples(spec.burst_ms[i], fs));
    if (closures.back() == 0 || bursts.back() == 0) throw Error(ErrorCode::SpecInfeasible, "segment under one sample");
  }
  if (vowel == 0 || post == 0) throw Error(ErrorCode::SpecInfeasible, "vowel under one sample");

  std::size_t total = lead + vowel + post + tail;
  for (std::size_t i = 0; i < closures.size(); ++i) total += closures[i] + bursts[i];
  std::vector<double> x(total, 0.0);
  SplitMix64 rng(spec.seed);

  std::size_t pos = lead;
  detail::write_vowel(x, pos, vowel, spec);
  const std::size_t consonant_start = pos + vowel;
  pos = consonant_start;

  struct Span {
    std::size_t from, n;
  };
  std::vector<Span> closure_spans, burst_spans;
  for (std::size_t b = 0; b < closures.size(); ++b) {
    closure_spans.push_back({pos, closures[b]});
    if (spec.voiced_closure) {
      for (std::size_t i = 0; i < closures[b]; ++i) {
        const double t = static_cast<double>(pos + i) / fs;
        x[pos + i] = 0.02 * spec.vowel_amplitude * std::sin(2.0 * std::numbers::pi * 120.0 * t);
      }
    }
    pos += closures[b];

    const std::size_t n = bursts[b];
    const double a = spec.burst_amplitudes[b];
    double raw_power = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double env = std::exp(-static_cast<double>(i) / static_cast<double>(n));
      x[pos + i] = a * rng.uniform(-1.0, 1.0) * env;
      raw_power += x[pos + i] * x[pos + i];
    }
    raw_power /= static_cast<double>(n);
    const double gain = std::sqrt(expected_burst_power(a, n) / raw_power);
    for (std::size_t i = 0; i < n; ++i) x[pos + i] = std::clamp(x[pos + i] * gain, -1.0, 1.0);
    burst_spans.push_back({pos, n});
    pos += n;
  }
  const std::size_t consonant_end = pos;
  detail::write_vowel(x, pos, post, spec);
  for (double& v : x) v = quantize16(v);

  Waveform wave(std::move(x), fs);
  const auto t = [fs](std::size_t tick) { return static_cast<double>(tick) / fs; };

  GroundTruth gt;
  gt.vowel = {t(lead), t(consonant_start)};
  gt.events.consonant_interval = {t(consonant_start), t(consonant_end)};
  std::vector<double> closure_ms, burst_ms;
  for (std::size_t b = 0; b < burst_spans.size(); ++b) {
    const auto& c = closure_spans[b];
    const auto& u = burst_spans[b];
    const double power = burst_power(wave.samples().subspan(u.from, u.n));
    gt.events.events.push_back({EventKind::Closure, t(c.from), t(c.from + c.n), 0.0});
    gt.events.events.push_back({EventKind::Burst, t(u.from), t(u.from + u.n), power});
    gt.burst_powers.push_back(power);
    closure_ms.push_back(1e3 * static_cast<double>(c.n) / fs);
    burst_ms.push_back(1e3 * static_cast<double>(u.n) / fs);
  }
  gt.record = make_record(1e3 * static_cast<double>(vowel) / fs, closure_ms, burst_ms);

  Attrs attrs{{"gem_type", std::string(to_string(meta.gem_type))}};
  if (!meta.speaker.empty()) attrs.emplace_back("speaker", meta.speaker);
  if (!meta.sentence_id.empty()) attrs.emplace_back("sentence_id", meta.sentence_id);
  if (!meta.repetition.empty()) attrs.emplace_back("repetition", meta.repetition);
  if (!meta.word.empty()) attrs.emplace_back("word", meta.word);
  const std::string label = meta.consonant.empty() ? std::string("t") : meta.consonant;
  const std::string word = meta.word.empty() ? "a" + label + "o" : meta.word;
  auto& segs = gt.annotations.segments;
  segs.push_back({Tier::Word, word, t(lead), t(consonant_end + post), {}, 0});
  segs.push_back({Tier::Phone, "a", t(lead), t(consonant_start), {}, 0});
  segs.push_back({Tier::Phone, label, t(consonant_start), t(consonant_end), std::move(attrs), 0});
  segs.push_back({Tier::Phone, "o", t(consonant_end), t(consonant_end + post), {}, 0});
  return {std::move(wave), std::move(gt)};
}

// ---------------------------------------------------------------------------
// Corpus generation

/// One stimulus class: gemination type, burst count, mean durations (ms),
/// mean burst amplitudes and its share of the corpus.
struct StimulusClass {
  std::string name;
  GemType gem_type = GemType::Lexical;
  bool double_burst = false;
  double weight = 0.0;
  double Vd = 70.0;
  std::vector<double> closures;
  std::vector<double> bursts;
  std::vector<double> amplitudes;
  std::optional<double> ratio;  // when set, Cd = ratio * Vd, split in proportion to the means
};

struct CorpusSpec {
  std::size_t tokens = 0;
  int sample_rate_hz = 44100;
  double spread = 0.15;  // relative sd of every drawn quantity
  std::vector<std::string> speakers{"FS", "MS"};
  double vowel_amplitude = 0.5;
  double f0_hz = 120.0;
  double post_vowel_ms = 80.0;
  bool voiced_closure = true;  // murmur in closures of b, d, g
  std::vector<StimulusClass> classes;

  /// Geminate classes at the lexical/syntactic SB/DB mean durations and
  /// shares observed for two speakers; a singleton class with weight 0.
  static CorpusSpec defaults() {
    CorpusSpec c;
    c.classes = {
        {"lexical.sb", GemType::Lexical, false, 210, 70.9, {89.1}, {25.7}, {0.3}, std::nullopt},
        {"lexical.db", GemType::Lexical, true, 30, 78.8, {48.9, 39.0}, {12.5, 28.7}, {0.2, 0.4}, std::nullopt},
        {"syntactic.sb", GemType::Syntactic, false, 137, 56.3, {83.0}, {19.8}, {0.3}, std::nullopt},
        {"syntactic.db", GemType::Syntactic, true, 15, 59.7, {35.3, 22.4}, {10.9, 28.6}, {0.2, 0.4}, std::nullopt},
        {"singleton", GemType::None, false, 0, 85.07, {35.9}, {19.58}, {0.3}, std::nullopt},
    };
    return c;
  }

  static CorpusSpec from(const KeyValues& kv) {
    CorpusSpec c = defaults();
    c.tokens = static_cast<std::size_t>(std::max(0LL, kv.integer("tokens", 200)));
    c.sample_rate_hz = static_cast<int>(kv.integer("sample_rate_hz", c.sample_rate_hz));
    c.spread = kv.number("spread", c.spread);
    if (const auto s = kv.get("speakers")) {
      c.speakers.clear();
      for (auto name : text::split(*s, ',')) {
        if (!text::trim(name).empty()) c.speakers.emplace_back(text::trim(name));
      }
    }
    c.vowel_amplitude = kv.number("vowel_amplitude", c.vowel_amplitude);
    c.f0_hz = kv.number("f0_hz", c.f0_hz);
    c.post_vowel_ms = kv.number("post_vowel_ms", c.post_vowel_ms);
    c.voiced_closure = kv.flag("voiced_closure", c.voiced_closure);
    for (auto& k : c.classes) {
      const std::string p = k.name + ".";
      k.weight = kv.number(p + "weight", k.weight);
      k.Vd = kv.number(p + "Vd", k.Vd);
      if (k.double_burst) {
        k.closures = {kv.number(p + "Cl1d", k.closures[0]), kv.number(p + "Cl2d", k.closures[1])};
        k.bursts = {kv.number(p + "B1d", k.bursts[0]), kv.number(p + "B2d", k.bursts[1])};
        k.amplitudes = {kv.number(p + "amp1", k.amplitudes[0]), kv.number(p + "amp2", k.amplitudes[1])};
      } else {
        k.closures = {kv.number(p + "Cld", k.closures[0])};
        k.bursts = {kv.number(p + "Bd", k.bursts[0])};
        k.amplitudes = {kv.number(p + "amp", k.amplitudes[0])};
      }
      if (kv.contains(p + "ratio")) k.ratio = kv.number(p + "ratio", 1.0);
    }
    kv.reject_unused();
    if (c.speakers.empty()) throw Error(ErrorCode::InvalidArgument, "no speakers");
    if (!(c.spread >= 0.0)) throw Error(ErrorCode::InvalidArgument, "spread must be non-negative");
    for (const auto& k : c.classes) {
      if (!(k.weight >= 0.0)) throw Error(ErrorCode::InvalidArgument, k.name + ".weight must be non-negative");
    }
    return c;
  }

  /// Exact per-class counts by largest remainder; ties go to the earlier class.
  std::vector<std::size_t> class_counts() const {
    double total = 0.0;
    for (const auto& k : classes) total += k.weight;
    std::vector<std::size_t> counts(classes.size(), 0);
    if (tokens == 0 || total <= 0.0) return counts;
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const double quota = static_cast<double>(tokens) * classes[i].weight / total;
      counts[i] = static_cast<std::size_t>(std::floor(quota));
      assigned += counts[i];
      remainders.emplace_back(quota - std::floor(quota), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; assigned < tokens; ++r, ++assigned) ++counts[remainders[r % remainders.size()].second];
    return counts;
  }
};

struct CorpusToken {
  std::string stem;
  std::string class_name;
  TokenMetadata meta;
  StimulusSpec spec;
  Stimulus stimulus;
};

namespace detail {

/// Class index for every corpus position: exact counts, seeded shuffle.
inline std::vector<std::size_t> class_schedule(const CorpusSpec& spec, std::uint64_t seed) {
  std::vector<std::size_t> order;
  const auto counts = spec.class_counts();
  for (std::size_t i = 0; i < counts.size(); ++i) order.insert(order.end(), counts[i], i);
  SplitMix64 rng(derive_seed(seed, 0xC1A55ULL));
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

}  // namespace detail

/// Draws and synthesizes token `index`; depends only on (spec, seed, index).
inline CorpusToken make_corpus_token(const CorpusSpec& spec, std::uint64_t seed, std::size_t index,
                                     std::size_t class_index) {
  const auto& k = spec.classes.at(class_index);
  SplitMix64 rng(derive_seed(seed, index));
  const double sp = spec.spread;
  auto draw = [&](double mean, double floor) { return rng.truncated_normal(mean, sp * mean, std::max(0.2 * mean, floor)); };

  static constexpr std::string_view kStops[] = {"p", "t", "k", "b", "d", "g"};
  const std::string base(kStops[rng.next() % 6]);
  const bool geminate = k.gem_type != GemType::None;

  struct Draft {
    std::string stem, class_name;
    TokenMetadata meta;
  } tok;
  char stem[32];
  std::snprintf(stem, sizeof stem, "tok%04zu", index);
  tok.stem = stem;
  tok.class_name = k.name;
  tok.meta.speaker = spec.speakers[index % spec.speakers.size()];
  tok.meta.sentence_id = std::to_string(index / spec.speakers.size() % 100 + 1);
  tok.meta.repetition = std::to_string(index / (spec.speakers.size() * 100) % 2 + 1);
  tok.meta.consonant = geminate ? base + base : base;
  tok.meta.word = "a" + tok.meta.consonant + "o";
  tok.meta.gem_type = k.gem_type;

  StimulusSpec s;
  s.sample_rate_hz = spec.sample_rate_hz;
  s.vowel_amplitude = spec.vowel_amplitude;
  s.f0_hz = spec.f0_hz;
  s.post_vowel_ms = spec.post_vowel_ms;
  s.voiced_closure = spec.voiced_closure && is_voiced_stop(base);
  s.Vd_ms = draw(k.Vd, 2.0 * s.ramp_ms + 1.0);
  if (k.ratio) {
    const double ratio = draw(*k.ratio, 0.0);
    double mean_total = 0.0;
    for (std::size_t i = 0; i < k.closures.size(); ++i) mean_total += k.closures[i] + k.bursts[i];
    const double scale = ratio * s.Vd_ms / mean_total;
    s.closure_ms.clear();
    s.burst_ms.clear();
    for (std::size_t i = 0; i < k.closures.size(); ++i) {
      s.closure_ms.push_back(k.closures[i] * scale);
      s.burst_ms.push_back(k.bursts[i] * scale);
    }
  } else {
    s.closure_ms.clear();
    s.burst_ms.clear();
    for (std::size_t i = 0; i < k.closures.size(); ++i) {
      s.closure_ms.push_back(draw(k.closures[i], 0.0));
      s.burst_ms.push_back(draw(k.bursts[i], 0.0));
    }
  }
  s.burst_amplitudes.clear();
  for (double a : k.amplitudes) s.burst_amplitudes.push_back(std::min(1.0, draw(a, 0.0)));
  s.seed = rng.next();

  auto stimulus = synthesize_vcv(s, tok.meta);
  stimulus.truth.annotations.audio_ref = tok.stem + ".wav";
  return CorpusToken{std::move(tok.stem), std::move(tok.class_name), std::move(tok.meta), s, std::move(stimulus)};
}

inline std::vector<std::string> manifest_columns() {
  std::vector<std::string> cols{"file"};
  const auto& tc = token_columns();
  for (std::size_t i = 0; i < tc.size(); ++i) cols.push_back(i < 7 ? tc[i] : "gt_" + tc[i]);
  cols.emplace_back("gt_consonant_start_s");
  cols.emplace_back("gt_consonant_end_s");
  return cols;
}

inline std::string manifest_row(const CorpusToken& tok) {
  const auto& gt = tok.stimulus.truth;
  Token t = build_token(gt.record, gt.burst_powers, classify_gemination(gt.record), tok.meta);
  std::vector<std::string> row{tok.stem};
  for (auto& f : token_fields(t)) row.push_back(std::move(f));
  row.push_back(text::fixed(gt.events.consonant_interval.start_s, 6));
  row.push_back(text::fixed(gt.events.consonant_interval.end_s, 6));
  return csv::join(row);
}

struct CorpusSummary {
  std::size_t tokens = 0;
  std::vector<std::size_t> class_counts;
};

/// Writes audio/<stem>.wav, annotations/<stem>.ann and manifest.csv under
/// `out_dir`. Tokens are synthesized on up to `jobs` threads; output bytes do
/// not depend on `jobs`.
inline CorpusSummary generate_corpus(const CorpusSpec& spec, std::uint64_t seed, const std::filesystem::path& out_dir,
                                     unsigned jobs = 1) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir / "audio", ec);
  if (!ec) fs::create_directories(out_dir / "annotations", ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir.string() + "': " + ec.message());

  const auto schedule = detail::class_schedule(spec, seed);
  std::vector<std::string> rows(schedule.size());
  std::vector<std::string> failures(schedule.size());
  auto work = [&](std::size_t worker, std::size_t stride) {
    for (std::size_t i = worker; i < schedule.size(); i += stride) {
      try {
        const auto tok = make_corpus_token(spec, seed, i, schedule[i]);
        write_waveform(out_dir / "audio" / (tok.stem + ".wav"), tok.stimulus.wave);
        write_annotations(out_dir / "annotations" / (tok.stem + ".ann"), tok.stimulus.truth.annotations);
        rows[i] = manifest_row(tok);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(schedule.size())));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
  }
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i].empty()) throw Error(ErrorCode::IoError, "token " + std::to_string(i) + ": " + failures[i]);
  }

  std::ofstream manifest(out_dir / "manifest.csv", std::ios::binary | std::ios::trunc);
  if (!manifest) throw Error(ErrorCode::IoError, "cannot write manifest in '" + out_dir.string() + "'");
  manifest << csv::join(manifest_columns()) << '\n';
  for (const auto& r : rows) manifest << r << '\n';
  if (!manifest) throw Error(ErrorCode::IoError, "short write to manifest");
  return {schedule.size(), spec.class_counts()};
}

}  // namespace gemstop
