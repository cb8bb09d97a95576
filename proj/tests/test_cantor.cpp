#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dirlab/cantor.hpp"

using namespace dirlab;

namespace {

// Straight recursive construction, independent of CantorLevel's indexing.
std::vector<Arc> brute_arcs(const CantorSpec& spec, int n) {
  auto a = spec.lengths();
  std::vector<std::pair<double, double>> cur{{-a[0] / 2, a[0]}};
  for (int k = 1; k <= n; ++k) {
    std::vector<std::pair<double, double>> next;
    for (auto [lo, len] : cur) {
      next.push_back({lo, a[k]});
      next.push_back({lo + len - a[k], a[k]});
    }
    cur = next;
  }
  std::vector<Arc> out;
  for (auto [lo, len] : cur) out.emplace_back(lo, len);
  return out;
}

double brute_distance(const std::vector<Arc>& arcs, double theta) {
  double d = INFINITY;
  for (const Arc& a : arcs) d = std::min(d, a.distance(theta));
  return d;
}

}  // namespace

TEST_CASE("spec validation and lambda/mu") {
  auto mt = CantorSpec::middle_thirds(10);
  auto lm = lambda_and_mu(mt);
  CHECK(lm.lambda == doctest::Approx(1.0 / 3.0));
  CHECK(lm.mu == doctest::Approx(0.36907).epsilon(1e-4));
  CHECK(lambda_and_mu(CantorSpec::geometric(kPi, 0.25, 5)).mu == doctest::Approx(0.5));
  CHECK_THROWS_AS(CantorSpec::geometric(kPi, 0.5, 3), InvalidArgument);
  CHECK_THROWS_AS(CantorSpec::geometric(7.0, 0.3, 3), InvalidArgument);
  CHECK_THROWS_AS(CantorSpec::from_lengths({3.0, 1.0, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(build_level(mt, 11), OutOfRange);
  auto s = CantorSpec::from_lengths({3.0, 1.0, 0.4});
  CHECK(s.depth() == 2);
  CHECK(s.length(2) == doctest::Approx(0.4));
}

TEST_CASE("level construction") {
  auto spec = CantorSpec::middle_thirds(6);
  CHECK(build_level(spec, 0).arcs().size() == 1);
  CHECK(build_level(spec, 0).arc_length() == doctest::Approx(kPi));

  auto l1 = build_level(spec, 1).arcs();
  REQUIRE(l1.size() == 2);
  CHECK(l1[0].length() == doctest::Approx(kPi / 3));
  CHECK(circle_distance(l1[0].end(), l1[1].start()) == doctest::Approx(kPi / 3));

  auto l2 = build_level(spec, 2).arcs();
  REQUIRE(l2.size() == 4);
  CHECK(circle_distance(l2[0].end(), l2[1].start()) == doctest::Approx(kPi / 9));

  for (int n = 0; n <= 6; ++n) {
    auto got = build_level(spec, n).arcs();
    auto want = brute_arcs(spec, n);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(circle_distance(got[i].start(), want[i].start()) < 1e-14);
      CHECK(got[i].length() == doctest::Approx(want[i].length()));
    }
    // Nesting: every level-n arc lies inside its parent.
    if (n > 0) {
      auto parent = build_level(spec, n - 1).arcs();
      for (std::size_t i = 0; i < got.size(); ++i) {
        const Arc& p = parent[i / 2];
        CHECK(p.distance(got[i].start()) == 0.0);
        CHECK(p.distance(got[i].end()) < 1e-14);
      }
    }
  }
}

TEST_CASE("distance to set") {
  auto spec = CantorSpec::middle_thirds(8);
  auto l1 = build_level(spec, 1);
  CHECK(l1.distance(0.0) == doctest::Approx(kPi / 6));
  CHECK(l1.distance(kPi) == doctest::Approx(kPi / 2));
  CHECK(l1.distance(-kPi / 2 + 0.01) == 0.0);

  auto lvl = build_level(spec, 8);
  auto arcs = lvl.arcs();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int i = 0; i < 3000; ++i) {
    double th = u(rng);
    CHECK(std::fabs(lvl.distance(th) - brute_distance(arcs, th)) < 1e-13);
  }
  // Deeper levels differ from coarser ones by at most a_N.
  auto l5 = build_level(spec, 5);
  for (int i = 0; i < 1000; ++i) {
    double th = u(rng);
    CHECK(lvl.distance(th) - l5.distance(th) >= -1e-14);
    CHECK(lvl.distance(th) - l5.distance(th) <= l5.arc_length() + 1e-14);
  }
}

TEST_CASE("neighbourhood measure") {
  auto spec = CantorSpec::middle_thirds(9);
  auto l1 = build_level(spec, 1);
  CHECK(l1.neighborhood_measure(0.0) == doctest::Approx(2 * kPi / 3));
  CHECK(l1.neighborhood_measure(kPi / 12) == doctest::Approx(kPi));
  CHECK(l1.neighborhood_measure(kPi) == doctest::Approx(kTwoPi));

  for (int n : {0, 3, 7}) {
    auto lvl = build_level(spec, n);
    auto arcs = lvl.arcs();
    auto prof = lvl.profile();
    double prev = -1.0;
    for (double t = 0.0; t < 3.5; t += 0.0137) {
      double m = lvl.neighborhood_measure(t);
      CHECK(m == doctest::Approx(inflated_measure(arcs, t)).epsilon(1e-12));
      CHECK(prof.value(t) == doctest::Approx(m).epsilon(1e-12));
      CHECK(m >= prev);
      CHECK(m <= kTwoPi);
      prev = m;
    }
  }

  // Monte Carlo via the distance function: |E_t| = 2 pi P(d <= t).
  auto lvl = build_level(spec, 9);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (double t : {0.01, 0.05, 0.3}) {
    int hits = 0, trials = 200000;
    for (int i = 0; i < trials; ++i) hits += lvl.distance(u(rng)) <= t;
    double p = static_cast<double>(hits) / trials;
    double est = kTwoPi * p, sigma = kTwoPi * std::sqrt(p * (1 - p) / trials);
    CHECK(std::fabs(est - lvl.neighborhood_measure(t)) <= 3 * sigma);
  }
}

TEST_CASE("counting function") {
  auto spec = CantorSpec::middle_thirds(6);
  auto lvl = build_level(spec, 6);
  CHECK(lvl.counting_function(kPi / 7) == 4);
  CHECK(lvl.counting_function(kPi) == 0);
  auto arcs = lvl.arcs();
  auto gaps = complement(arcs);
  double min_gap = INFINITY;
  for (const Arc& g : gaps) min_gap = std::min(min_gap, g.length());
  CHECK(lvl.counting_function(0.49 * min_gap) == 2 * gaps.size());
  CHECK(gaps.size() == 64);  // 63 inner gaps plus the outer one
  std::uint64_t prev = ~std::uint64_t{0};
  for (double t = 1e-4; t <= kPi; t *= 1.1) {
    std::uint64_t brute = 0;
    for (const Arc& g : gaps) brute += g.length() > 2 * t ? 2 : 0;
    CHECK(lvl.counting_function(t) == brute);
    CHECK(lvl.counting_function(t) <= prev);
    prev = lvl.counting_function(t);
  }
}

TEST_CASE("scaling law and measure bound") {
  auto spec = CantorSpec::middle_thirds(16);
  auto lvl = build_level(spec, 16);
  auto lm = lambda_and_mu(spec);
  double slope = measure_exponent_fit(lvl, lvl.arc_length(), spec.length(1));
  CHECK(std::fabs(slope - lm.mu) < 0.05);
  double C = measure_growth_constant(spec);
  for (double t = lvl.arc_length(); t <= kPi; t *= 1.05) {
    CHECK(lvl.neighborhood_measure(t) <= C * std::pow(t, lm.mu));
  }
}

TEST_CASE("exact distance-power integrals") {
  auto spec = CantorSpec::geometric(2.0, 0.3, 6);
  auto lvl = build_level(spec, 6);
  std::vector<Arc> arcs{Arc::full_circle(), Arc(-1.2, 0.7), Arc(5.5, 2.0), Arc(0.95, 0.1),
                        lvl.arc(17)};
  for (double alpha : {0.0, 0.3, 0.7}) {
    for (const Arc& I : arcs) {
      // Midpoint rule as the oracle; at alpha = 0 the integrand is an
      // indicator, so use |I| minus the overlap with E_N instead.
      double s = 0.0;
      if (alpha == 0.0) {
        s = I.length();
        for (const Arc& a : lvl.arcs()) {
          int m = 2000;
          for (int i = 0; i < m; ++i) s -= I.contains(a.start() + (i + 0.5) * a.length() / m) * a.length() / m;
        }
      } else {
        int m = 400000;
        double h = I.length() / m;
        for (int i = 0; i < m; ++i) s += std::pow(lvl.distance(I.start() + (i + 0.5) * h), alpha);
        s *= h;
      }
      CHECK(lvl.integrate_distance_power(I, alpha) == doctest::Approx(s).epsilon(1e-5));
    }
  }
}

TEST_CASE("arc lower bound audit") {
  auto spec = CantorSpec::middle_thirds(12);
  auto lvl = build_level(spec, 12);
  for (double alpha : {0.0, 0.3, 0.5, 0.7}) {
    auto audit = kset_lower_bound_audit(lvl, alpha, 2000, 3);
    CHECK(audit.bound == doctest::Approx(std::pow(1.0 / 6.0, alpha + 1) / (alpha + 1)));
    CHECK(audit.passed());
    CHECK(audit.arcs_checked > 2000);
  }
  // Full circle at alpha = 0: |T \ E_N| / 2 pi, well above 1/6.
  double r = lvl.integrate_distance_power(Arc::full_circle(), 0.0) / kTwoPi;
  CHECK(r == doctest::Approx(1.0 - lvl.measure() / kTwoPi));
  CHECK(r >= 1.0 / 6.0);
}

TEST_CASE("Carleson integral") {
  // Single arc: |E_t| = a0 + 2t until 2t covers the outer gap.
  auto one = CantorSpec{2.0, {}};
  auto l0 = build_level(one, 0);
  double g = kTwoPi - 2.0;
  double lo = 1.0, hi = g / 2;
  double expect = 2.0 * std::log(hi / lo) + 2.0 * (hi - lo) + kTwoPi * std::log(kPi / hi);
  CHECK(carleson_integral(l0) == doctest::Approx(expect).epsilon(1e-12));

  // Middle thirds: successive depths converge geometrically.
  std::vector<double> v;
  for (int n = 4; n <= 14; ++n) v.push_back(carleson_integral(build_level(CantorSpec::middle_thirds(n), n)));
  // The truncated tail is of order a_N^mu, so differences shrink like 2 lambda.
  for (std::size_t i = 2; i < v.size(); ++i) {
    double ratio = (v[i] - v[i - 1]) / (v[i - 1] - v[i - 2]);
    CHECK(ratio > 0.0);
    CHECK(ratio < 0.7);
  }
  double deep = carleson_integral(build_level(CantorSpec::middle_thirds(60), 60));
  CHECK(std::isfinite(deep));
  CHECK(deep - v.back() < 3.0 * (v.back() - v[v.size() - 2]));
}
