// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dirlab/capacity.hpp"
#include "dirlab/cyclicity.hpp"
#include "dirlab/dirichlet.hpp"
#include "dirlab/outer.hpp"

using namespace dirlab;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_seconds > 0 && secs > budget_seconds) {
    o.passed = false;
    o.detail += "; over time budget";
  }
  if (!o.passed) ++failures;
  std::printf("[%s] C%d %s: %s (%.1f s)\n", o.passed ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

OuterFunction one_minus_z(std::size_t n) {
  return OuterFunction(BoundaryModulus::sample(n, [](double t) { return std::log(std::abs(1.0 - std::polar(1.0, t))); }),
                       {Arc::full_circle()});
}

std::vector<std::pair<std::string, OuterFunction>> corpus(const CantorLevel& lvl, std::size_t n) {
  std::vector<std::pair<std::string, OuterFunction>> c;
  c.emplace_back("1-z", one_minus_z(n));
  for (double beta : {1.0, 2.0, 4.0}) c.emplace_back("d^" + std::to_string(int(beta)), outer_from_weight(WeightProfile::power(beta), lvl, n));
  return c;
}

Outcome exact_oracle_quadrature() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> deg(1, 32);
  DiskGrid grid;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    TaylorPoly p;
    int d = deg(rng);
    for (int k = 0; k <= d; ++k) p.a.emplace_back(nd(rng), nd(rng));
    for (double alpha : {0.0, 0.3, 0.5, 0.7, 1.0}) {
      double exact = dirichlet_coeff_exact(p, alpha);
      worst = std::max(worst, std::fabs(dirichlet_area(DerivativeSource::from(p), alpha, grid) - exact) / exact);
    }
  }
  return {worst <= 1e-6, fmt("max relative error %.2e over 100 cases", worst)};
}

Outcome local_identity() {
  auto lvl = build_level(CantorSpec::middle_thirds(8), 8);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  double worst = 0.0;
  int cases = 0;
  for (const auto& [name, f] : corpus(lvl, 4096)) {
    std::vector<double> zetas;
    while (zetas.size() < 8) {
      double z = u(rng);
      try {
        local_dirichlet(f, z, LocalMethod::boundary);
        zetas.push_back(z);
      } catch (const InvalidArgument&) {
      }
    }
    auto area = local_dirichlet(f, zetas, LocalMethod::area);
    auto bnd = local_dirichlet(f, zetas, LocalMethod::boundary);
    for (std::size_t i = 0; i < zetas.size(); ++i, ++cases) worst = std::max(worst, std::fabs(area[i] - bnd[i]) / area[i]);
  }
  return {worst <= 1e-3, fmt("max relative gap %.2e over %g points", worst, cases)};
}

Outcome carleson_substitute() {
  auto spec = CantorSpec::middle_thirds(8);
  auto lvl = build_level(spec, 8);
  double lambda = lambda_and_mu(spec).lambda, worst = 0.0;
  int violations = 0, gates_failed = 0, audits = 0;
  auto fs = corpus(lvl, 4096);
  for (double alpha : {0.3, 0.5, 0.7}) {
    auto h = distance_power_weight(lvl, alpha, 1.0 / kset_constant(alpha, lambda));
    for (const auto& [name, f] : fs) {
      auto a = carleson_substitute_audit(f, h, alpha);
      ++audits;
      if (!a.gate.passed()) ++gates_failed;
      if (!a.passed()) ++violations;
      if (a.rhs > 0) worst = std::max(worst, a.lhs / a.rhs);
    }
  }
  return {violations == 0 && gates_failed == 0,
          fmt("%g violations, %g gate failures, max lhs/rhs %.3g", violations, gates_failed, worst) + " over " +
              std::to_string(audits) + " audits"};
}

Outcome derivative_bound() {
  auto lvl = build_level(CantorSpec::middle_thirds(8), 8);
  DiskGrid disk(disk_params_for(2048));
  std::vector<std::vector<Arc>> sets{{Arc::full_circle()}, {Arc(0.0, kPi)}, {}};
  double worst = 0.0;
  bool ok = true;
  for (double beta : {0.5, 2.0, 4.0}) {
    OuterFunction f = outer_from_weight(WeightProfile::power(beta), lvl, 2048);
    OuterFunction g(normalized(BoundaryModulus(f.grid(), f.logmod())), {Arc::full_circle()});
    for (const auto& gamma : sets) {
      auto a = korenblum_audit(g, gamma, disk);
      ok = ok && a.passed(1e-2) && a.points > 0;
      worst = std::max(worst, a.max_ratio);
    }
  }
  return {ok, fmt("max ratio %.4f (limit 1.01)", worst)};
}

Outcome capacity_threshold() {
  auto spec = CantorSpec::middle_thirds(20);
  std::string detail;
  bool ok = true;
  for (double alpha : {0.0, 0.3, 0.5, 0.58, 0.68, 0.75, 0.9}) {
    auto v = cantor_capacity_zero_test(spec, alpha).verdict;
    auto want = alpha <= 0.58 ? CapacityVerdict::positive : CapacityVerdict::zero;
    ok = ok && v == want;
    detail += fmt("%.2f:", alpha) + to_string(v) + " ";
  }
  detail.pop_back();
  return {ok, detail};
}

Outcome equilibrium_solver() {
  const int n = 256;
  const double start = 0.4, length = 2.0;
  std::vector<double> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = start + length * (i + 0.5) / n;
  double worst_gap = 0.0, worst_sym = 0.0, worst_rise = 0.0;
  bool converged = true;
  for (double alpha : {0.0, 0.5}) {
    auto eq = equilibrium_measure(pts, alpha);
    converged = converged && eq.solver.converged;
    worst_gap = std::max(worst_gap, eq.solver.duality_gap);
    const auto& w = eq.measure.weights;
    for (int i = 0; i < n; ++i) worst_sym = std::max(worst_sym, std::fabs(w[i] - w[n - 1 - i]));
    const auto& tr = eq.solver.energy_trace;
    for (std::size_t i = 1; i < tr.size(); ++i) worst_rise = std::max(worst_rise, (tr[i] - tr[i - 1]) / std::fabs(tr[i - 1]));
  }
  bool ok = converged && worst_gap <= 1e-4 && worst_sym <= 1e-6 && worst_rise <= 1e-13;
  return {ok, fmt("gap %.1e, reflection defect %.1e, max relative energy rise %.1e", worst_gap, worst_sym, worst_rise)};
}

// Random 64-atom measures whose atoms are at least 2 pi / 1024 apart, so the
// nearest-neighbour smear is resolved by the mode count.
Outcome energy_equivalence() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int atoms = 64, modes = 2048;
  const double min_gap = kTwoPi / 1024;
  bool ok = true;
  std::string detail;
  for (double alpha : {0.3, 0.5, 0.7}) {
    double lo1 = INFINITY, hi1 = 0, lo2 = INFINITY, hi2 = 0;
    for (int trial = 0; trial < 50; ++trial) {
      DiscreteMeasure mu;
      while (mu.angles.size() < atoms) {
        double th = kTwoPi * u(rng);
        if (std::all_of(mu.angles.begin(), mu.angles.end(), [&](double a) { return circle_distance(a, th) >= min_gap; })) {
          mu.angles.push_back(th);
        }
      }
      double total = 0.0;
      for (int i = 0; i < atoms; ++i) {
        mu.weights.push_back(u(rng));
        total += mu.weights.back();
      }
      for (double& w : mu.weights) w /= total;
      mu.smear = nearest_neighbor_smear(mu.angles);
      double r1 = energy_report(mu, alpha, modes).ratio();
      double r2 = energy_report(mu.refined(), alpha, 2 * modes).ratio();
      lo1 = std::min(lo1, r1), hi1 = std::max(hi1, r1);
      lo2 = std::min(lo2, r2), hi2 = std::max(hi2, r2);
    }
    double move = std::max(std::fabs(lo2 / lo1 - 1), std::fabs(hi2 / hi1 - 1));
    ok = ok && std::isfinite(lo1) && lo1 > 0 && move < 0.1;
    detail += fmt("alpha %.1f [%.3f, %.3f]", alpha, lo1, hi1) + fmt(" moves %.1f%%; ", 100 * move);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome cyclicity_campaign() {
  auto spec = CantorSpec::middle_thirds(20);
  CampaignOptions opt;
  opt.alpha = 0.7;
  opt.n = 16384;
  for (int k = 3; k <= 10; ++k) opt.deltas.push_back(std::ldexp(kPi, -k));
  auto rep = cyclicity_run(spec, opt);
  const auto& r = rep.records;
  bool monotone = true;
  double nmin = INFINITY, nmax = 0, fmin = INFINITY, fmax = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i && r[i].f0 < r[i - 1].f0) monotone = false;
    nmin = std::min(nmin, r[i].norm_alpha), nmax = std::max(nmax, r[i].norm_alpha);
    fmin = std::min(fmin, r[i].fw_ratio), fmax = std::max(fmax, r[i].fw_ratio);
  }
  double shrink = r.front().offset_fraction / r.back().offset_fraction;
  bool ok = rep.passed() && monotone && r.back().f0 >= 0.9 && nmax / nmin <= 10 && shrink >= 2 && fmax / fmin <= 10;
  std::string detail = fmt("f(0) %.3f -> %.3f", r.front().f0, r.back().f0) + (monotone ? " nondecreasing" : " NOT monotone") +
                       fmt(", norm spread %.2f, offset shrink %.2fx", nmax / nmin, shrink) +
                       fmt(", fw ratio spread %.2f", fmax / fmin);
  for (const auto& v : rep.verdicts) {
    if (!v.passed) detail += "; failed " + v.name;
  }
  return {ok, detail};
}

Outcome envelope_construction() {
  bool ok = true;
  std::string detail;
  for (double alpha : {0.65, 0.7, 0.8}) {
    auto spec = CantorSpec::middle_thirds(20);
    auto lvl = build_level(spec, 20);
    bool divergent_criterion = cantor_capacity_zero_test(spec, alpha).verdict == CapacityVerdict::zero;
    auto p = select_params(alpha, lambda_and_mu(spec).mu);
    RegularizedWeight psi(phi_from_set(lvl, alpha, p.sigma), p.rho, p.sigma, alpha,
                          EnvelopeOptions{0.5 * lvl.arc_length(), 400});
    auto check = check_envelope(psi);
    auto ladder = divergence_ladder(psi, lvl);
    ok = ok && divergent_criterion && check.passed() && ladder.verdict == LadderVerdict::divergent;
    detail += fmt("alpha %.2f: ", alpha) + (check.passed() ? "monotone" : "NOT monotone") + ", " + to_string(ladder.verdict) +
              "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

}  // namespace

int main() {
  criterion(1, "exact-oracle quadrature", 60, exact_oracle_quadrature);
  criterion(2, "local Dirichlet area vs boundary form", 300, local_identity);
  criterion(3, "Carleson-set bound with distance-power weight", 0, carleson_substitute);
  criterion(4, "derivative bound on normalized outer functions", 0, derivative_bound);
  criterion(5, "middle-thirds capacity threshold", 120, capacity_threshold);
  criterion(6, "equilibrium solver on an arc", 0, equilibrium_solver);
  criterion(7, "kernel vs Fourier energy equivalence", 0, energy_equivalence);
  criterion(8, "cyclicity campaign", 900, cyclicity_campaign);
  criterion(9, "regularized envelope construction", 0, envelope_construction);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures ? 1 : 0;
}
