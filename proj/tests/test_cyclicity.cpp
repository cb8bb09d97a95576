#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "dirlab/cyclicity.hpp"

using namespace dirlab;

namespace {

std::shared_ptr<const RegularizedWeight> middle_thirds_envelope(double alpha, int depth = 20) {
  auto spec = CantorSpec::middle_thirds(depth);
  CantorLevel lvl = build_level(spec, depth);
  auto p = select_params(alpha, lambda_and_mu(spec).mu);
  return std::make_shared<const RegularizedWeight>(phi_from_set(lvl, alpha, p.sigma), p.rho, p.sigma, alpha,
                                                   EnvelopeOptions{0.5 * lvl.arc_length(), 400});
}

}  // namespace

TEST_CASE("parameter window") {
  auto p = select_params(0.7, 0.369);
  CHECK(p.rho == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(p.sigma == doctest::Approx(0.25).epsilon(1e-12));
  p = select_params(0.0, 0.5);
  CHECK(p.rho == doctest::Approx(0.5 + 0.25 / 3).epsilon(1e-12));
  CHECK(p.sigma == doctest::Approx(0.5 + 0.5 / 3).epsilon(1e-12));
  CHECK_THROWS_AS(select_params(0.7, 0.0), InvalidArgument);
  CHECK_THROWS_AS(select_params(1.0, 0.3), InvalidArgument);
}

TEST_CASE("phi regimes") {
  const double alpha = 0.7, sigma = 0.25;
  // A fat set: |E_t| >= |E_3| > pi^sigma, so the min picks t^sigma, which beats t^{1-alpha} on (0, 1].
  auto fat = build_level(CantorSpec::geometric(kPi, 0.49, 3), 3);
  auto phi = phi_from_set(fat, alpha, sigma);
  for (double t = 1e-6; t <= 1.0; t *= 1.5) CHECK(phi(t) == doctest::Approx(std::pow(t, sigma)).epsilon(1e-14));

  auto lvl = build_level(CantorSpec::middle_thirds(20), 20);
  auto phi3 = phi_from_set(lvl, alpha, sigma);
  int set_regime = 0, floor_regime = 0, power_regime = 0;
  for (double t = 1e-9; t <= kPi; t *= 1.01) {
    double e = lvl.neighborhood_measure(t);
    double want = std::max(std::min(e, std::pow(t, sigma)), std::pow(t, 1.0 - alpha));
    CHECK(phi3(t) == doctest::Approx(want).epsilon(1e-14));
    if (want == e) ++set_regime;
    if (want == std::pow(t, 1.0 - alpha)) ++floor_regime;
    if (want == std::pow(t, sigma)) ++power_regime;
  }
  CHECK(set_regime > 0);
  CHECK(floor_regime > 0);
  CHECK(power_regime > 0);
  CHECK_THROWS_AS(phi_from_set(lvl, alpha, 0.35), InvalidArgument);
  CHECK_THROWS_AS(phi_from_set(lvl, alpha, 0.0), InvalidArgument);
}

TEST_CASE("envelope fixed points and hypothesis checks") {
  const double alpha = 0.7, rho = 0.2, sigma = 0.25;
  EnvelopeOptions opt{1e-8, 200};
  RegularizedWeight a([&](double t) { return std::pow(t, sigma); }, rho, sigma, alpha, opt);
  RegularizedWeight b([&](double t) { return std::pow(t, 1.0 - alpha); }, rho, sigma, alpha, opt);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(std::log(1e-8), std::log(kPi));
  for (int i = 0; i < 200; ++i) {
    double t = std::exp(u(rng));
    CHECK(a.psi(t) == doctest::Approx(std::pow(t, sigma)).epsilon(1e-12));
    CHECK(b.psi(t) == doctest::Approx(std::pow(t, 1.0 - alpha)).epsilon(1e-12));
    double e = 1.0 - alpha - sigma;
    CHECK(a.tail_integral(t) == doctest::Approx((std::pow(kPi, e) - std::pow(t, e)) / e).epsilon(1e-10));
  }
  CHECK(check_envelope(a).passed());
  CHECK(check_envelope(b).passed());

  CHECK_THROWS_AS(RegularizedWeight([](double t) { return t * t; }, rho, sigma, alpha, opt), InvalidArgument);
  CHECK_THROWS_AS(RegularizedWeight([&](double t) { return 2.0 * std::pow(t, sigma); }, rho, sigma, alpha, opt),
                  InvalidArgument);
  CHECK_THROWS_AS(RegularizedWeight([](double) { return 0.0; }, rho, sigma, alpha, opt), InvalidArgument);
  CHECK_THROWS_AS(RegularizedWeight([&](double t) { return std::pow(t, sigma); }, 0.3, sigma, alpha, opt),
                  InvalidArgument);
  CHECK_THROWS_AS(a.psi(1e-9), OutOfRange);
}

TEST_CASE("envelope of the middle-thirds phi") {
  for (double alpha : {0.65, 0.7, 0.8}) {
    auto psi = middle_thirds_envelope(alpha);
    auto check = check_envelope(*psi);
    CHECK(check.ratio_nondecreasing);
    CHECK(check.dominates_phi);
    CHECK(check.below_t_sigma);
    // Between nodes psi/t^rho stays monotone.
    double prev = 0.0;
    for (double t = psi->t_min(); t < kPi; t *= 1.003) {
      double r = psi->psi(t) / std::pow(t, psi->rho());
      CHECK(r >= prev * (1.0 - 1e-12));
      prev = r;
    }
    auto lvl = build_level(CantorSpec::middle_thirds(20), 20);
    CHECK(divergence_ladder(*psi, lvl).verdict == LadderVerdict::divergent);
    CHECK(cantor_capacity_zero_test(CantorSpec::middle_thirds(20), alpha).verdict == CapacityVerdict::zero);

    // The phi integral dominates a multiple of the log of the set integral.
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : claim_chain(*psi, lvl)) {
      if (r.log_set_integral < 0.5) continue;
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    }
    CHECK(lo > 1.0);
    CHECK(hi / lo < 5.0);
  }
}

TEST_CASE("w_delta family") {
  auto psi = middle_thirds_envelope(0.7);
  const double exponent = 1.0 - 0.7 - psi->rho();
  double prevA = -INFINITY, prevEta = INFINITY;
  for (int k = 3; k <= 12; ++k) {
    WDelta w(psi, std::ldexp(kPi, -k));
    CHECK(w.eta() > w.delta());
    CHECK(w.eta() <= kPi);
    CHECK(w.continuity_defect() < 1e-9);
    CHECK(w.value(w.eta()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(w.value(0.5 * (w.eta() + kPi)) == 1.0);
    CHECK(w.value(0.0) == 0.0);
    CHECK(w.A() >= prevA);
    CHECK(w.eta() < prevEta);
    prevA = w.A();
    prevEta = w.eta();

    double prev = 0.0, bound = w.value(w.delta()) / std::pow(w.delta(), exponent);
    for (double t = 1e-9; t <= kPi; t *= 1.02) {
      double v = w.value(t);
      CHECK(v >= prev);
      prev = v;
      if (t <= w.delta()) CHECK(v / std::pow(t, exponent) == doctest::Approx(bound).epsilon(1e-12));
    }
    for (double t : {0.5 * w.delta(), std::sqrt(w.delta() * w.eta())}) {
      double h = 1e-6 * t;
      CHECK(w.derivative(t) == doctest::Approx((w.value(t + h) - w.value(t - h)) / (2 * h)).epsilon(1e-5));
    }
    auto prof = w.profile();
    CHECK(prof.breakpoints.size() == 2);
    CHECK(prof(0.3 * w.delta()) == w.value(0.3 * w.delta()));
  }
  CHECK_THROWS_AS(WDelta(psi, 2.0), InvalidArgument);
  CHECK_THROWS_AS(WDelta(psi, 1e-12), InvalidArgument);
}

TEST_CASE("cyclicity campaign") {
  auto spec = CantorSpec::middle_thirds(20);
  CampaignOptions opt;
  opt.n = 4096;
  for (int k = 3; k <= 10; ++k) opt.deltas.push_back(std::ldexp(kPi, -k));
  auto rep = cyclicity_run(spec, opt);
  CHECK(rep.passed());
  REQUIRE(rep.records.size() == 8);
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    CHECK(rep.records[i].f0 > rep.records[i - 1].f0);
    CHECK(rep.records[i].A_delta > rep.records[i - 1].A_delta);
  }
  CHECK(rep.params.rho == doctest::Approx(0.2).epsilon(1e-2));

  auto lvl = build_level(spec, 20);
  auto ladder = default_delta_ladder(lvl);
  CHECK(ladder.size() == 10);
  CHECK(ladder.front() == doctest::Approx(kPi / 8));

  opt.alpha = 0.5;
  CHECK_THROWS_AS(cyclicity_run(spec, opt), AuditRefused);
}

TEST_CASE("zero-set capacity diagnostic") {
  auto m = BoundaryModulus::sample(1024, [](double t) { return std::log(1.5 + std::cos(t)); });
  CHECK(necessary_condition_check(m, 0.7, 0.1).verdict == NecessaryVerdict::trivially_passes);

  auto arc = BoundaryModulus::sample(1024, [](double t) { return std::abs(t - 1.0) < 0.2 ? -INFINITY : 0.0; });
  CHECK(necessary_condition_check(arc, 0.7, 0.1).verdict == NecessaryVerdict::not_cyclic);

  // Tiny but nonzero on a fixed arc: the sublevel sets stop shrinking.
  auto flat = BoundaryModulus::sample(
      1024, [](double t) { return std::abs(t - 1.0) < 0.2 ? -70.0 : std::log(1.0 + std::abs(t - 1.0)); });
  CHECK(necessary_condition_check(flat, 0.7, 0.1).verdict == NecessaryVerdict::saturating);

  auto lvl = build_level(CantorSpec::middle_thirds(8), 8);
  auto g = BoundaryModulus::sample(4096, [&](double t) {
    double d = lvl.distance(t);
    return d > 0.0 ? 4.0 * std::log(d) : -INFINITY;
  });
  auto rep = necessary_condition_check(g, 0.7, 0.1);
  CHECK(rep.verdict == NecessaryVerdict::growing);
  REQUIRE(rep.rungs.size() >= 4);
  for (std::size_t i = 1; i < rep.rungs.size(); ++i) {
    CHECK(rep.rungs[i].measure < rep.rungs[i - 1].measure);
    CHECK(rep.rungs[i].energy > rep.rungs[i - 1].energy);
  }
}
