#pragma once

// Short-time energy, burst power and closure/burst landmark detection inside
// an annotated stop-consonant interval.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gemstop/error.hpp"
#include "gemstop/text.hpp"
#include "gemstop/wav.hpp"

namespace gemstop {

struct Interval {
  double start_s = 0.0;
  double end_s = 0.0;

  double duration_s() const noexcept { return end_s - start_s; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct EnergyContour {
  std::vector<double> frame_energies;
  double frame_hop_s = 0.0;
  double frame_len_s = 0.0;
  double origin_s = 0.0;  // center of frame 0

  double time(std::size_t i) const noexcept { return origin_s + static_cast<double>(i) * frame_hop_s; }
  std::size_t size() const noexcept { return frame_energies.size(); }
};

enum class EventKind { Closure, Burst };

constexpr std::string_view to_string(EventKind k) noexcept { return k == EventKind::Closure ? "closure" : "burst"; }

struct AcousticEvent {
  EventKind kind = EventKind::Closure;
  double start_s = 0.0;
  double end_s = 0.0;
  double peak_power = 0.0;  // mean squared amplitude; bursts only

  double duration_s() const noexcept { return end_s - start_s; }
  friend bool operator==(const AcousticEvent&, const AcousticEvent&) = default;
};

struct EventSequence {
  std::vector<AcousticEvent> events;
  Interval consonant_interval;

  std::size_t burst_count() const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [](const auto& e) { return e.kind == EventKind::Burst; }));
  }
  friend bool operator==(const EventSequence&, const EventSequence&) = default;
};

/// Detection thresholds. Defaults were tuned against the synthetic stimuli;
/// real recordings may need other values.
struct DetectorConfig {
  double window_s = 0.005;
  double hop_s = 0.001;
  double rise_factor = 10.0;     // over the closure-floor energy
  double rel_floor = 0.001;      // fraction of the preceding vowel's peak energy
  double min_gap_s = 0.015;      // shortest inter-burst closure reported as a second burst
  double min_offset_s = 0.003;   // sub-threshold time needed to end a burst
  double closure_run_s = 0.020;  // length of the quietest run used for the closure floor
  double abs_floor = 1e-9;       // about one 16-bit LSB squared
  double edge_fraction = 0.5;    // boundary = crossing of this fraction of the local burst level
};

namespace detail {

inline void check_interval(const Waveform& wave, Interval iv) {
  const double slack = 0.5 / wave.sample_rate_hz();
  if (!(iv.start_s >= 0.0) || !(iv.end_s <= wave.duration_s() + slack) || !(iv.start_s < iv.end_s)) {
    throw Error(ErrorCode::IntervalOutOfRange, "interval [" + text::shortest(iv.start_s) + ", " +
                                                   text::shortest(iv.end_s) + "] not inside waveform of " +
                                                   text::shortest(wave.duration_s()) + " s");
  }
}

}  // namespace detail

/// Raised-cosine weighted mean of squared samples, one frame per hop with frame
/// centers from interval start up to interval end. Samples beyond the waveform
/// count as zero.
inline EnergyContour short_time_energy(const Waveform& wave, double window_s, double hop_s, Interval interval) {
  const int fs = wave.sample_rate_hz();
  const auto n = static_cast<long long>(std::llround(window_s * fs));
  if (!(window_s > 0.0) || !(hop_s > 0.0) || n < 2)
    throw Error(ErrorCode::DegenerateWindow, "window of " + std::to_string(n) + " samples");
  detail::check_interval(wave, interval);

  std::vector<double> w(static_cast<std::size_t>(n));
  for (long long k = 0; k < n; ++k) {
    w[static_cast<std::size_t>(k)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (k + 0.5) / n);
  }
  const double w_sum = std::accumulate(w.begin(), w.end(), 0.0);

  EnergyContour c;
  c.frame_hop_s = hop_s;
  c.frame_len_s = static_cast<double>(n) / fs;
  c.origin_s = interval.start_s;
  const auto frames = static_cast<std::size_t>(std::floor(interval.duration_s() / hop_s + 1e-9)) + 1;
  c.frame_energies.reserve(frames);
  const auto x = wave.samples();
  const auto total = static_cast<long long>(x.size());
  for (std::size_t i = 0; i < frames; ++i) {
    const long long first = wave.tick(c.time(i)) - n / 2;
    double acc = 0.0;
    for (long long k = 0; k < n; ++k) {
      const long long idx = first + k;
      if (idx < 0 || idx >= total) continue;
      const double s = x[static_cast<std::size_t>(idx)];
      acc += w[static_cast<std::size_t>(k)] * s * s;
    }
    c.frame_energies.push_back(acc / w_sum);
  }
  return c;
}

/// Mean squared amplitude, (1/N) * sum of x_i^2.
inline double burst_power(std::span<const double> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInterval, "no samples in burst");
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return acc / static_cast<double>(samples.size());
}

/// Mean squared amplitude over the samples whose ticks fall in [start, end).
inline double burst_power(const Waveform& wave, Interval interval) {
  if (!(interval.end_s > interval.start_s))
    throw Error(ErrorCode::EmptyInterval, "interval end is not after start");
  detail::check_interval(wave, interval);
  const auto first = static_cast<std::size_t>(std::max(0LL, wave.tick(interval.start_s)));
  const auto last = static_cast<std::size_t>(std::min<long long>(static_cast<long long>(wave.size()),
                                                                 wave.tick(interval.end_s)));
  if (last <= first) throw Error(ErrorCode::EmptyInterval, "interval shorter than one sample");
  return burst_power(wave.samples().subspan(first, last - first));
}

/// Median energy of the quietest run of `run_frames` consecutive frames.
inline double closure_floor(std::span<const double> energies, std::size_t run_frames) {
  if (energies.empty()) return 0.0;
  run_frames = std::clamp<std::size_t>(run_frames, 1, energies.size());
  std::size_t best = 0;
  double window = std::accumulate(energies.begin(), energies.begin() + static_cast<std::ptrdiff_t>(run_frames), 0.0);
  double best_sum = window;
  for (std::size_t i = 1; i + run_frames <= energies.size(); ++i) {
    window += energies[i + run_frames - 1] - energies[i - 1];
    if (window < best_sum) {
      best_sum = window;
      best = i;
    }
  }
  std::vector<double> run(energies.begin() + static_cast<std::ptrdiff_t>(best),
                          energies.begin() + static_cast<std::ptrdiff_t>(best + run_frames));
  std::sort(run.begin(), run.end());
  const std::size_t m = run.size();
  return m % 2 ? run[m / 2] : 0.5 * (run[m / 2 - 1] + run[m / 2]);
}

/// Threshold-based burst landmarks.
///
/// Frames above max(floor * rise_factor, vowel_peak * rel_floor, abs_floor)
/// form burst candidates; a candidate ends after min_offset_s below threshold.
/// Candidates separated by less than min_gap_s merge. Supra-threshold frames
/// touching the interval start are vowel leakage and belong to the closure.
/// Each burst edge is then moved to the frame nearest the crossing of
/// edge_fraction of the burst's local level, which sits on the true edge of an
/// energy step regardless of how far the burst rises above the threshold.
inline EventSequence detect_acoustic_events(const Waveform& wave, Interval consonant,
                                            std::optional<Interval> vowel_ref, const DetectorConfig& cfg = {}) {
  const EnergyContour contour = short_time_energy(wave, cfg.window_s, cfg.hop_s, consonant);
  const auto& e = contour.frame_energies;
  const std::size_t n = e.size();

  double vowel_peak = 0.0;
  if (vowel_ref) {
    const auto vc = short_time_energy(wave, cfg.window_s, cfg.hop_s, *vowel_ref);
    vowel_peak = *std::max_element(vc.frame_energies.begin(), vc.frame_energies.end());
  }
  const auto run = static_cast<std::size_t>(std::max(1L, std::lround(cfg.closure_run_s / cfg.hop_s)));
  const double floor = closure_floor(e, run);
  const double threshold = std::max({floor * cfg.rise_factor, vowel_peak * cfg.rel_floor, cfg.abs_floor});

  std::size_t i = 0;
  while (i < n && e[i] > threshold) ++i;
  if (i == n) throw Error(ErrorCode::NoBurstFound, "no closure: energy never falls below threshold");
  const std::size_t closure_from = i;

  const auto min_off = static_cast<std::size_t>(std::max(1L, std::lround(std::ceil(cfg.min_offset_s / cfg.hop_s - 1e-9))));
  struct Region {
    std::size_t on, off;  // frames [on, off); off == n means "runs to interval end"
  };
  std::vector<Region> regions;
  while (i < n) {
    while (i < n && e[i] <= threshold) ++i;
    if (i == n) break;
    Region r{i, n};
    std::size_t below = 0;
    for (std::size_t k = i + 1; k < n; ++k) {
      if (e[k] > threshold) {
        below = 0;
        continue;
      }
      if (++below >= min_off) {
        r.off = k + 1 - below;
        break;
      }
    }
    regions.push_back(r);
    i = r.off;
  }

  std::vector<Region> bursts;
  for (const auto& r : regions) {
    if (!bursts.empty() && static_cast<double>(r.on - bursts.back().off) * cfg.hop_s < cfg.min_gap_s - 1e-9) {
      bursts.back().off = r.off;
    } else {
      bursts.push_back(r);
    }
  }
  if (bursts.empty()) throw Error(ErrorCode::NoBurstFound, "no supra-threshold onset in consonant interval");
  if (bursts.size() > 2) {
    std::string times;
    for (const auto& b : bursts) times += (times.empty() ? "" : ", ") + text::fixed(contour.time(b.on), 4);
    throw Error(ErrorCode::MoreThanTwoBursts, std::to_string(bursts.size()) + " burst candidates at " + times + " s");
  }

  const auto window_frames = static_cast<std::size_t>(std::max(1L, std::lround(cfg.window_s / cfg.hop_s)));
  auto local_level = [&](std::size_t lo, std::size_t hi) {
    return *std::max_element(e.begin() + static_cast<std::ptrdiff_t>(lo), e.begin() + static_cast<std::ptrdiff_t>(hi));
  };
  auto nearer = [&](std::size_t below_idx, std::size_t above_idx, double level) {
    return std::abs(e[below_idx] - level) < std::abs(e[above_idx] - level) ? below_idx : above_idx;
  };

  EventSequence seq;
  seq.consonant_interval = consonant;
  double cursor = consonant.start_s;
  std::size_t lower_limit = closure_from;
  for (std::size_t b = 0; b < bursts.size(); ++b) {
    const auto [on, off] = bursts[b];
    const std::size_t upper_limit = b + 1 < bursts.size() ? bursts[b + 1].on : n;

    const double on_level = cfg.edge_fraction * local_level(on, std::min(off, on + window_frames + 1));
    std::size_t k = on;
    while (k < off && e[k] < on_level) ++k;
    while (k > lower_limit + 1 && e[k - 1] >= on_level) --k;
    if (k > lower_limit) k = nearer(k - 1, k, on_level);
    const double onset = contour.time(k);

    double offset = consonant.end_s;
    std::size_t next_lower = n;
    if (off < n) {
      const double off_level =
          cfg.edge_fraction * local_level(off > on + window_frames ? off - window_frames - 1 : on, off);
      std::size_t j = off - 1;
      while (j > k && e[j] < off_level) --j;
      while (j + 1 < upper_limit && e[j + 1] >= off_level) ++j;
      const std::size_t edge = j + 1 < n ? nearer(j + 1, j, off_level) : j;
      offset = contour.time(edge == j ? j : j + 1);
      next_lower = edge;
    }

    if (!(onset > cursor) || !(offset > onset)) {
      throw Error(ErrorCode::InconsistentEvents, "degenerate event boundaries near " + text::fixed(onset, 4) + " s");
    }
    seq.events.push_back({EventKind::Closure, cursor, onset, 0.0});
    seq.events.push_back({EventKind::Burst, onset, offset, burst_power(wave, {onset, offset})});
    cursor = offset;
    lower_limit = next_lower;
  }
  return seq;
}

enum class BurstCount { Single, Double };

constexpr std::string_view to_string(BurstCount b) noexcept { return b == BurstCount::Single ? "single" : "double"; }

inline BurstCount classify_burst_count(const EventSequence& seq) {
  return seq.burst_count() == 2 ? BurstCount::Double : BurstCount::Single;
}

/// Throws InconsistentEvents unless the sequence is closure, burst
/// [, closure, burst], contiguous and inside its consonant interval.
inline void check_event_sequence(const EventSequence& seq) {
  const auto& ev = seq.events;
  if (ev.size() != 2 && ev.size() != 4)
    throw Error(ErrorCode::InconsistentEvents, std::to_string(ev.size()) + " events, expected 2 or 4");
  const double tol = 1e-9;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const auto want = i % 2 == 0 ? EventKind::Closure : EventKind::Burst;
    if (ev[i].kind != want)
      throw Error(ErrorCode::InconsistentEvents, "event " + std::to_string(i) + " is a " +
                                                     std::string(to_string(ev[i].kind)) + ", expected " +
                                                     std::string(to_string(want)));
    if (!(ev[i].end_s > ev[i].start_s))
      throw Error(ErrorCode::InconsistentEvents, "event " + std::to_string(i) + " has non-positive duration");
    if (i > 0 && std::abs(ev[i].start_s - ev[i - 1].end_s) > tol)
      throw Error(ErrorCode::InconsistentEvents, "gap between events " + std::to_string(i - 1) + " and " +
                                                     std::to_string(i));
  }
  if (ev.front().start_s < seq.consonant_interval.start_s - tol || ev.back().end_s > seq.consonant_interval.end_s + tol)
    throw Error(ErrorCode::InconsistentEvents, "events extend outside the consonant interval");
}

}  // namespace gemstop
