#pragma once

// Descriptive statistics, one-way ANOVA with F-distribution p-values, and
// eta-squared effect sizes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gemstop/error.hpp"
#include "gemstop/text.hpp"

namespace gemstop::stats {

struct Descriptives {
  double mean = 0.0;
  double standard_error = 0.0;  // sample sd / sqrt(n); 0 when n == 1
  std::size_t n = 0;
  bool single_value = false;    // se undefined, reported as 0
};

inline Descriptives descriptive(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "no values");
  const auto n = values.size();
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  if (n == 1) return {mean, 0.0, 1, true};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {mean, sd / std::sqrt(static_cast<double>(n)), n, false};
}

// ---------------------------------------------------------------------------
// F distribution

/// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x, int max_iter) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw Error(ErrorCode::NonConvergence, "incomplete beta continued fraction did not converge for a=" +
                                             text::shortest(a) + ", b=" + text::shortest(b));
}

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x, int max_iter = 100000) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x, max_iter) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x, max_iter) / b;
}

/// P(X <= f) for X ~ F(df1, df2).
inline double f_cdf(double f, double df1, double df2) {
  if (!(df1 >= 1.0) || !(df2 >= 1.0)) throw Error(ErrorCode::InvalidArgument, "degrees of freedom must be >= 1");
  if (std::isnan(f)) throw Error(ErrorCode::InvalidArgument, "F is NaN");
  if (f <= 0.0) return 0.0;
  if (std::isinf(f)) return 1.0;
  const double x = df1 * f / (df1 * f + df2);
  return incomplete_beta(df1 / 2.0, df2 / 2.0, x);
}

/// Upper tail 1 - F_cdf, computed directly so small p-values keep precision.
inline double f_sf(double f, double df1, double df2) {
  if (!(df1 >= 1.0) || !(df2 >= 1.0)) throw Error(ErrorCode::InvalidArgument, "degrees of freedom must be >= 1");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double x = df2 / (df2 + df1 * f);
  return incomplete_beta(df2 / 2.0, df1 / 2.0, x);
}

// ---------------------------------------------------------------------------
// ANOVA

enum class EffectSize { Negligible, Small, Medium, Large };

constexpr std::string_view to_string(EffectSize e) noexcept {
  switch (e) {
    case EffectSize::Negligible: return "negligible";
    case EffectSize::Small: return "small";
    case EffectSize::Medium: return "medium";
    case EffectSize::Large: return "large";
  }
  return "negligible";
}

/// Cohen's bands for eta squared, each closed below: [0.0099, 0.0588) small,
/// [0.0588, 0.1379) medium, >= 0.1379 large.
constexpr EffectSize classify_effect_size(double eta_sq) noexcept {
  if (eta_sq >= 0.1379) return EffectSize::Large;
  if (eta_sq >= 0.0588) return EffectSize::Medium;
  if (eta_sq >= 0.0099) return EffectSize::Small;
  return EffectSize::Negligible;
}

/// Eta squared from F and its degrees of freedom.
constexpr double eta_squared(double F, double df1, double df2) noexcept { return F * df1 / (F * df1 + df2); }

struct Group {
  std::string label;
  std::vector<double> values;
};

using GroupedSample = std::vector<Group>;

struct AnovaResult {
  double F = 0.0;
  int df_between = 0;
  int df_within = 0;
  double p = 1.0;
  double eta_sq = 0.0;
  EffectSize effect_label = EffectSize::Negligible;
  double ss_between = 0.0;
  double ss_within = 0.0;
  double ss_total = 0.0;
  std::size_t n = 0;

  int df_total() const noexcept { return df_between + df_within; }
};

inline AnovaResult one_way_anova(const GroupedSample& sample) {
  if (sample.size() < 2) throw Error(ErrorCode::TooFewGroups, std::to_string(sample.size()) + " group(s)");
  std::size_t n = 0;
  double grand_sum = 0.0;
  for (const auto& g : sample) {
    if (g.values.empty()) throw Error(ErrorCode::EmptyInput, "group '" + g.label + "' is empty");
    n += g.values.size();
    grand_sum += std::accumulate(g.values.begin(), g.values.end(), 0.0);
  }
  const std::size_t k = sample.size();
  if (n < k + 1) throw Error(ErrorCode::TooFewGroups, "need at least k + 1 observations");
  const double grand_mean = grand_sum / static_cast<double>(n);

  AnovaResult r;
  r.n = n;
  for (const auto& g : sample) {
    const double m = std::accumulate(g.values.begin(), g.values.end(), 0.0) / static_cast<double>(g.values.size());
    r.ss_between += static_cast<double>(g.values.size()) * (m - grand_mean) * (m - grand_mean);
    for (double v : g.values) {
      r.ss_within += (v - m) * (v - m);
      r.ss_total += (v - grand_mean) * (v - grand_mean);
    }
  }
  // Relative to the data scale, not to zero, so constant groups are caught
  // despite rounding residue.
  const double scale = std::max(r.ss_total, grand_mean * grand_mean * static_cast<double>(n));
  if (!(r.ss_within > 1e-24 * scale))
    throw Error(ErrorCode::ZeroWithinVariance, "all groups are internally constant");

  r.df_between = static_cast<int>(k - 1);
  r.df_within = static_cast<int>(n - k);
  r.F = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
  r.p = f_sf(r.F, r.df_between, r.df_within);
  r.eta_sq = eta_squared(r.F, r.df_between, r.df_within);
  r.effect_label = classify_effect_size(r.eta_sq);
  return r;
}

/// Three decimals with a "<0.001" floor.
inline std::string format_p(double p) { return p < 0.001 ? std::string("<0.001") : text::fixed(p, 3); }

}  // namespace gemstop::stats
