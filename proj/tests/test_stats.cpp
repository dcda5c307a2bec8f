#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "gemstop/stats.hpp"

using namespace gemstop;
using namespace gemstop::stats;
using Catch::Approx;

namespace {

double f_density(double x, double d1, double d2) {
  const double lg = std::lgamma((d1 + d2) / 2) - std::lgamma(d1 / 2) - std::lgamma(d2 / 2);
  return std::exp(lg + (d1 / 2) * std::log(d1 / d2) + (d1 / 2 - 1) * std::log(x) -
                  ((d1 + d2) / 2) * std::log1p(d1 * x / d2));
}

// Upper tail by composite Simpson after the substitution x = t / (1 - t),
// which maps [f, inf) to a finite interval.
double f_sf_simpson(double f, double d1, double d2) {
  const double a = f / (1 + f);
  const int n = 20000;
  const double h = (1.0 - a) / n;
  auto g = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double x = t / (1 - t);
    return f_density(x, d1, d2) / ((1 - t) * (1 - t));
  };
  double s = g(a) + g(1.0);
  for (int i = 1; i < n; ++i) s += g(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

struct SS {
  long double between = 0, within = 0, total = 0;
};

SS brute_ss(const GroupedSample& g) {
  long double sum = 0;
  std::size_t n = 0;
  for (const auto& grp : g)
    for (double v : grp.values) sum += v, ++n;
  const long double grand = sum / n;
  SS ss;
  for (const auto& grp : g) {
    long double gs = 0;
    for (double v : grp.values) gs += v;
    const long double m = gs / grp.values.size();
    for (double v : grp.values) {
      ss.within += (v - m) * (v - m);
      ss.total += (v - grand) * (v - grand);
      ss.between += (m - grand) * (m - grand);
    }
  }
  return ss;
}

GroupedSample random_sample(std::mt19937& gen, std::size_t k) {
  std::uniform_int_distribution<int> size(2, 40);
  std::normal_distribution<double> d(0.0, 1.0);
  std::uniform_real_distribution<double> shift(-3, 3);
  std::uniform_real_distribution<double> scale(0.1, 100);
  const double sc = scale(gen);
  GroupedSample g;
  for (std::size_t i = 0; i < k; ++i) {
    Group grp{"g" + std::to_string(i), {}};
    const double mu = shift(gen);
    for (int j = size(gen); j > 0; --j) grp.values.push_back(sc * (mu + d(gen)) + 50);
    g.push_back(grp);
  }
  return g;
}

}  // namespace

TEST_CASE("descriptives", "[stats]") {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  const auto d = descriptive(v);
  CHECK(d.mean == 5.0);
  CHECK(d.n == 8);
  CHECK(d.standard_error == Approx(std::sqrt(32.0 / 7.0) / std::sqrt(8.0)));
  const std::vector<double> one{3.5};
  CHECK(descriptive(one).single_value);
  CHECK(descriptive(one).standard_error == 0.0);
  CHECK_THROWS_AS(descriptive(std::span<const double>{}), Error);
}

TEST_CASE("incomplete beta agrees with boost", "[stats]") {
  for (double a : {0.5, 1.0, 2.5, 20.0, 195.0}) {
    for (double b : {0.5, 1.0, 3.0, 60.0}) {
      for (double x : {0.001, 0.1, 0.5, 0.9, 0.999}) {
        CHECK(incomplete_beta(a, b, x) == Approx(boost::math::ibeta(a, b, x)).epsilon(1e-10).margin(1e-300));
      }
    }
  }
  CHECK(incomplete_beta(2, 3, 0.0) == 0.0);
  CHECK(incomplete_beta(2, 3, 1.0) == 1.0);
  CHECK_THROWS_AS(incomplete_beta(0, 3, 0.5), Error);
}

TEST_CASE("F distribution agrees with boost and with numerical integration", "[stats]") {
  for (double d1 : {1.0, 2.0, 5.0}) {
    for (double d2 : {4.0, 29.0, 58.0, 390.0}) {
      const boost::math::fisher_f_distribution<double> dist(d1, d2);
      for (double f : {0.05, 0.5, 1.5, 4.0, 8.521, 30.0}) {
        CHECK(f_cdf(f, d1, d2) == Approx(boost::math::cdf(dist, f)).epsilon(1e-10));
        CHECK(f_sf(f, d1, d2) == Approx(boost::math::cdf(boost::math::complement(dist, f))).epsilon(1e-9));
      }
    }
  }
  for (auto [f, d1, d2] : {std::tuple{1.5, 2.0, 4.0}, std::tuple{8.521, 2.0, 390.0}, std::tuple{0.7, 3.0, 10.0}}) {
    CHECK(f_sf(f, d1, d2) == Approx(f_sf_simpson(f, d1, d2)).epsilon(1e-6));
  }
}

TEST_CASE("F tail values", "[stats]") {
  CHECK(1.0 - f_cdf(1.5, 1, 4) == Approx(0.288).margin(0.0005));
  const double p = 1.0 - f_cdf(8.521, 1, 390);
  CHECK(p >= 0.0035);
  CHECK(p <= 0.0045);
  CHECK(f_sf(8.521, 1, 390) == Approx(p).epsilon(1e-9));
  CHECK(f_cdf(0.0, 1, 5) == 0.0);
  CHECK(f_cdf(INFINITY, 1, 5) == 1.0);
  CHECK_THROWS_AS(f_cdf(1.0, 0.5, 5), Error);
}

TEST_CASE("F cdf is monotone and bounded", "[stats]") {
  for (double d2 : {1.0, 7.0, 391.0}) {
    double prev = 0.0;
    for (double f = 0.0; f < 50.0; f += 0.05) {
      const double c = f_cdf(f, 1, d2);
      CHECK(c >= prev);
      CHECK(c <= 1.0);
      prev = c;
    }
  }
}

TEST_CASE("eta squared identity", "[stats]") {
  CHECK(eta_squared(1.5, 1, 4) == Approx(1.5 / 5.5));
  CHECK(eta_squared(30.562, 1, 58) == Approx(0.3451).margin(5e-5));
  CHECK(eta_squared(30.562, 1, 59) == Approx(0.341).margin(5e-4));
}

TEST_CASE("ANOVA sums of squares match brute force", "[stats]") {
  std::mt19937 gen(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_sample(gen, 2 + trial % 4);
    const auto r = one_way_anova(g);
    const auto ss = brute_ss(g);
    CHECK(r.ss_between == Approx(static_cast<double>(ss.between)).epsilon(1e-9));
    CHECK(r.ss_within == Approx(static_cast<double>(ss.within)).epsilon(1e-9));
    CHECK(r.ss_total == Approx(static_cast<double>(ss.total)).epsilon(1e-9));
    CHECK(r.ss_total == Approx(r.ss_between + r.ss_within).epsilon(1e-9));
    CHECK(std::abs(r.eta_sq - r.F * r.df_between / (r.F * r.df_between + r.df_within)) <= 1e-12);
    CHECK(r.df_between == static_cast<int>(g.size()) - 1);
    CHECK(r.df_within == static_cast<int>(r.n - g.size()));
  }
}

TEST_CASE("two-group ANOVA on a worked example", "[stats]") {
  // Means 2 and 4, within SS 4, between SS 6: F = 6 / (4 / 4) = 6.
  const GroupedSample g{{"a", {1, 2, 3}}, {"b", {3, 4, 5}}};
  const auto r = one_way_anova(g);
  CHECK(r.ss_between == Approx(6));
  CHECK(r.ss_within == Approx(4));
  CHECK(r.F == Approx(6));
  CHECK(r.df_within == 4);
  CHECK(r.df_total() == 5);
  CHECK(r.eta_sq == Approx(0.6));
  CHECK(r.effect_label == EffectSize::Large);
  CHECK(r.p == Approx(f_sf(6, 1, 4)));
}

TEST_CASE("ANOVA is invariant to relabeling and permutation", "[stats]") {
  std::mt19937 gen(29);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = random_sample(gen, 3);
    const auto a = one_way_anova(g);
    std::reverse(g.begin(), g.end());
    for (auto& grp : g) {
      grp.label += "x";
      std::shuffle(grp.values.begin(), grp.values.end(), gen);
    }
    const auto b = one_way_anova(g);
    CHECK(b.F == Approx(a.F).epsilon(1e-9));
    CHECK(b.p == Approx(a.p).epsilon(1e-8).margin(1e-300));
    CHECK(b.eta_sq == Approx(a.eta_sq).epsilon(1e-9));
  }
}

TEST_CASE("ANOVA input errors", "[stats]") {
  auto code = [](const GroupedSample& g) {
    try {
      one_way_anova(g);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code({{"a", {1, 2}}}) == ErrorCode::TooFewGroups);
  CHECK(code({{"a", {1}}, {"b", {2}}}) == ErrorCode::TooFewGroups);
  CHECK(code({{"a", {1, 2}}, {"b", {}}}) == ErrorCode::EmptyInput);
  CHECK(code({{"a", {1, 1}}, {"b", {2, 2, 2}}}) == ErrorCode::ZeroWithinVariance);
  CHECK(code({{"a", {0.1 + 0.2, 0.3}}, {"b", {5, 5}}}) == ErrorCode::ZeroWithinVariance);
}

TEST_CASE("effect size labels", "[stats]") {
  CHECK(classify_effect_size(0.227) == EffectSize::Large);
  CHECK(classify_effect_size(0.104) == EffectSize::Medium);
  CHECK(classify_effect_size(0.013) == EffectSize::Small);
  CHECK(classify_effect_size(0.004) == EffectSize::Negligible);
  CHECK(classify_effect_size(0.0099) == EffectSize::Small);
  CHECK(classify_effect_size(0.0588) == EffectSize::Medium);
  CHECK(classify_effect_size(0.1379) == EffectSize::Large);
  CHECK(classify_effect_size(0.00989) == EffectSize::Negligible);
  CHECK(to_string(EffectSize::Medium) == "medium");
}

TEST_CASE("p-value formatting", "[stats]") {
  CHECK(format_p(0.0004) == "<0.001");
  CHECK(format_p(0.001) == "0.001");
  CHECK(format_p(0.0037) == "0.004");
  CHECK(format_p(0.81) == "0.810");
}
