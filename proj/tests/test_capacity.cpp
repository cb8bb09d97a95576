#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "dirlab/capacity.hpp"

using namespace dirlab;

namespace {

// (2/L^2) int_0^L (L-u) k(u) du with the substitution u = L v^10, which
// removes the endpoint singularity for every alpha in [0,1).
double self_energy_oracle(double alpha, double h) {
  double L = 2 * h;
  GaussRule g = gauss_legendre(60, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    double v = g.nodes[i], u = L * std::pow(v, 10), du = 10 * L * std::pow(v, 9);
    s += g.weights[i] * (L - u) * kernel(alpha, u) * du;
  }
  return 2 * s / (L * L);
}

// Solves K_AA x = 1 by Gaussian elimination with partial pivoting.
std::vector<double> kkt_oracle(const std::vector<double>& K, std::size_t n) {
  std::vector<double> A = K, b(n, 1.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(A[r * n + c]) > std::fabs(A[p * n + c])) p = r;
    }
    for (std::size_t k = 0; k < n; ++k) std::swap(A[c * n + k], A[p * n + k]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = A[r * n + c] / A[c * n + c];
      for (std::size_t k = c; k < n; ++k) A[r * n + k] -= f * A[c * n + k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= A[r * n + k] * x[k];
    x[r] = s / A[r * n + r];
  }
  double t = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& v : x) v /= t;
  return x;
}

std::vector<double> arc_support(double start, double length, int n) {
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = start + length * (i + 0.5) / n;
  return s;
}

}  // namespace

TEST_CASE("kernel values") {
  CHECK(kernel(0.5, 0.25) == doctest::Approx(2.0));
  CHECK(kernel(0.0, 1.0) == 0.0);
  CHECK(kernel(0.3, 0.1) == doctest::Approx(1.99526).epsilon(1e-5));
  CHECK(std::isinf(kernel(0.4, 0.0)));
  CHECK_THROWS_AS(kernel(1.2, 0.5), InvalidArgument);
  CHECK_THROWS_AS(kernel(0.5, -1.0), InvalidArgument);
  for (double a : {0.0, 0.3, 0.9}) CHECK(kernel(a, 0.2) > kernel(a, 0.3));
}

TEST_CASE("self energy closed forms") {
  for (double a : {0.0, 0.2, 0.5, 0.8}) {
    for (double h : {1e-3, 0.05, 0.4}) {
      CHECK(self_energy(a, h) == doctest::Approx(self_energy_oracle(a, h)).epsilon(1e-9));
    }
  }
  CHECK(std::isinf(self_energy(0.5, 0.0)));
}

TEST_CASE("kernel energy") {
  DiscreteMeasure two{{0.0, kPi}, {0.5, 0.5}, {0.0, 0.0}};
  CHECK(energy_kernel(two, 0.5, false) == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))));
  DiscreteMeasure one{{1.0}, {1.0}, {0.0}};
  CHECK(std::isinf(energy_kernel(one, 0.3)));
  CHECK(std::fabs(energy_kernel(DiscreteMeasure::uniform(256), 0.0)) < 2e-3);
  DiscreteMeasure bad{{0.0, 1.0}, {0.7, 0.7}, {0.1, 0.1}};
  CHECK_THROWS_AS(energy_kernel(bad, 0.5), InvalidArgument);
}

TEST_CASE("Fourier energy") {
  CHECK(energy_fourier(DiscreteMeasure::uniform(256), 0.3, 2048) == doctest::Approx(1.0).epsilon(1e-12));
  DiscreteMeasure point{{0.7}, {1.0}, {0.0}};
  for (double a : {0.0, 0.5}) {
    double want = 0.0;
    for (int n = 0; n <= 100; ++n) want += std::pow(1.0 + n, a - 1.0);
    CHECK(energy_fourier(point, a, 100) == doctest::Approx(want).epsilon(1e-12));
  }
  DiscreteMeasure two{{0.0, kPi}, {0.5, 0.5}, {0.0, 0.0}};
  double even = 0.0;
  for (int n = 0; n <= 64; n += 2) even += std::pow(1.0 + n, -0.5);
  CHECK(energy_fourier(two, 0.5, 64) == doctest::Approx(even).epsilon(1e-12));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  DiscreteMeasure mu;
  for (int i = 0; i < 40; ++i) {
    mu.angles.push_back(u(rng));
    mu.weights.push_back(1.0 / 40);
    mu.smear.push_back(0.01);
  }
  double prev = 0.0;
  for (int N : {1, 4, 16, 64, 256}) {
    double e = energy_fourier(mu, 0.4, N);
    CHECK(e >= prev);
    prev = e;
  }
  // Splitting atoms leaves the smeared Fourier coefficients unchanged.
  auto c1 = fourier_coefficients(mu, 300), c2 = fourier_coefficients(mu.refined(), 300);
  for (int n = 0; n <= 300; ++n) CHECK(std::abs(c1[n] - c2[n]) < 1e-12);
}

TEST_CASE("Frank-Wolfe on small problems") {
  // Two antipodal smeared atoms: symmetry forces equal weights.
  auto r = equilibrium_measure({0.0, kPi}, 0.0);
  CHECK(r.measure.weights[0] == doctest::Approx(0.5).epsilon(1e-9));

  // Dense full circle, log kernel: weights near uniform, energy near 0.
  auto circ = equilibrium_measure(arc_support(0.0, kTwoPi, 128), 0.0);
  CHECK(circ.solver.converged);
  CHECK(std::fabs(circ.energy()) < 1e-2);
  for (double w : circ.measure.weights) CHECK(w == doctest::Approx(1.0 / 128).epsilon(1e-6));

  // Arc support: U-shaped weights agreeing with a direct KKT solve.
  for (double alpha : {0.0, 0.5}) {
    auto pts = arc_support(0.3, 1.5, 60);
    auto eq = equilibrium_measure(pts, alpha);
    CHECK(eq.solver.converged);
    auto K = kernel_matrix(eq.measure.angles, eq.measure.smear, alpha);
    auto oracle = kkt_oracle(K, pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(eq.measure.weights[i] == doctest::Approx(oracle[i]).epsilon(1e-6));
    const auto& w = eq.measure.weights;
    for (std::size_t i = 1; i < 30; ++i) CHECK(w[i] < w[i - 1]);
    CHECK(w.front() > 2 * w[30]);
    for (std::size_t i = 1; i < eq.solver.energy_trace.size(); ++i) {
      CHECK(eq.solver.energy_trace[i] <= eq.solver.energy_trace[i - 1] + 1e-13 * std::fabs(eq.solver.energy_trace[i - 1]));
    }
  }
}

TEST_CASE("Frank-Wolfe without polishing still certifies its gap") {
  auto pts = arc_support(1.0, 2.0, 40);
  SolverParams p;
  p.polish = false;
  p.gap_tolerance = 1e-6;
  auto eq = equilibrium_measure(pts, 0.5, p);
  CHECK(eq.solver.converged);
  CHECK(eq.solver.duality_gap <= 1e-6);
  CHECK(eq.solver.fw_gap <= eq.solver.duality_gap + 1e-15);
  auto K = kernel_matrix(eq.measure.angles, eq.measure.smear, 0.5);
  auto oracle = kkt_oracle(K, pts.size());
  double e_opt = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) e_opt += oracle[i] * K[i * pts.size() + j] * oracle[j];
  }
  CHECK(eq.energy() - e_opt >= -1e-12);
  CHECK(eq.energy() - e_opt <= eq.solver.duality_gap);
}

TEST_CASE("argmin invariance and monotonicity on nested supports") {
  auto pts = arc_support(2.0, 1.0, 50);
  auto smear = nearest_neighbor_smear(pts);
  auto K = kernel_matrix(pts, smear, 0.3);
  auto a = minimize_on_simplex(K, 50);
  auto K2 = K;
  for (double& v : K2) v *= 3.7;
  auto b = minimize_on_simplex(K2, 50);
  for (int i = 0; i < 50; ++i) CHECK(a.weights[i] == doctest::Approx(b.weights[i]).epsilon(1e-8));
  CHECK(b.energy == doctest::Approx(3.7 * a.energy).epsilon(1e-10));

  // The first 25 points are a subset; their minimum energy cannot be lower.
  std::vector<double> sub(25 * 25);
  for (int i = 0; i < 25; ++i) {
    for (int j = 0; j < 25; ++j) sub[i * 25 + j] = K[i * 50 + j];
  }
  CHECK(minimize_on_simplex(sub, 25).energy >= a.energy);
}

TEST_CASE("ladder classification") {
  std::vector<double> eps, logj, conv, flat;
  for (int k = 1; k <= 10; ++k) {
    double e = std::pow(0.5, k);
    eps.push_back(e);
    logj.push_back(0.5 * std::log(1 / e));
    conv.push_back(1.0 - std::sqrt(e));
    flat.push_back(k % 2 ? 0.0 : 0.2);
  }
  CHECK(classify_ladder(eps, logj).verdict == LadderVerdict::divergent);
  CHECK(classify_ladder(eps, conv).verdict == LadderVerdict::convergent);
  CHECK(classify_ladder(eps, flat).verdict == LadderVerdict::inconclusive);
  CHECK(classify_ladder({1.0, 0.5}, {0.0, 1.0}).verdict == LadderVerdict::inconclusive);
}

TEST_CASE("capacity integral matches direct quadrature") {
  auto lvl = build_level(CantorSpec::middle_thirds(10), 10);
  auto prof = lvl.profile();
  double eps = lvl.arc_length();
  for (double alpha : {0.0, 0.6}) {
    // Composite midpoint in log t with the measure evaluated directly.
    int m = 400000;
    double lo = std::log(eps), hi = std::log(kPi), h = (hi - lo) / m, s = 0.0;
    for (int i = 0; i < m; ++i) {
      double t = std::exp(lo + (i + 0.5) * h);
      s += h * std::pow(t, 1 - alpha) / lvl.neighborhood_measure(t);
    }
    CHECK(capacity_integral(prof, alpha, eps) == doctest::Approx(s).epsilon(1e-6));
  }
}

TEST_CASE("capacity zero test on Cantor sets") {
  auto mt = CantorSpec::middle_thirds(20);
  CHECK(cantor_capacity_zero_test(mt, 0.7).verdict == CapacityVerdict::zero);
  CHECK(cantor_capacity_zero_test(mt, 0.5).verdict == CapacityVerdict::positive);
  auto thick = CantorSpec::geometric(kPi, 0.49, 30);
  auto rep = cantor_capacity_zero_test(thick, 0.0);
  CHECK(rep.verdict == CapacityVerdict::positive);
  CHECK(rep.ladder.rungs.size() == 30);
  CHECK_THROWS_AS(cantor_capacity_zero_test(mt, 1.0), InvalidArgument);
}
