#include "dirlab/capacity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dirlab/parallel.hpp"

namespace dirlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0,1)");
}

}  // namespace

double kernel(double alpha, double t) {
  check_alpha(alpha);
  if (!(t >= 0.0)) throw InvalidArgument("kernel separation must be nonnegative");
  if (t == 0.0) return kInf;
  return alpha == 0.0 ? -std::log(t) : std::pow(t, -alpha);
}

double self_energy(double alpha, double h) {
  check_alpha(alpha);
  if (!(h > 0.0)) return kInf;
  double L = 2.0 * h;
  if (alpha == 0.0) return 1.5 - std::log(L);
  return 2.0 * std::pow(L, -alpha) / ((1.0 - alpha) * (2.0 - alpha));
}

void DiscreteMeasure::validate() const {
  if (angles.empty()) throw InvalidArgument("measure has no atoms");
  if (weights.size() != angles.size() || smear.size() != angles.size()) {
    throw InvalidArgument("measure arrays differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(weights[i] >= 0.0)) throw InvalidArgument("measure weights must be nonnegative");
    if (!(smear[i] >= 0.0)) throw InvalidArgument("smear widths must be nonnegative");
    total += weights[i];
  }
  if (std::fabs(total - 1.0) > 1e-12) throw InvalidArgument("measure weights must sum to 1");
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t n) {
  if (n == 0) throw InvalidArgument("uniform measure needs atoms");
  DiscreteMeasure mu;
  for (std::size_t k = 0; k < n; ++k) {
    mu.angles.push_back(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    mu.weights.push_back(1.0 / static_cast<double>(n));
    mu.smear.push_back(kPi / static_cast<double>(n));
  }
  return mu;
}

DiscreteMeasure DiscreteMeasure::refined() const {
  DiscreteMeasure out;
  for (std::size_t i = 0; i < size(); ++i) {
    double h = smear[i];
    if (h == 0.0) {
      out.angles.push_back(angles[i]);
      out.weights.push_back(weights[i]);
      out.smear.push_back(0.0);
      continue;
    }
    for (double sign : {-1.0, 1.0}) {
      out.angles.push_back(wrap_angle(angles[i] + sign * 0.5 * h));
      out.weights.push_back(0.5 * weights[i]);
      out.smear.push_back(0.5 * h);
    }
  }
  return out;
}

std::vector<double> nearest_neighbor_smear(const std::vector<double>& angles) {
  std::size_t n = angles.size();
  if (n < 2) throw InvalidArgument("need at least two support points");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = wrap_angle(angles[i]);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });
  std::vector<double> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    double prev = a[order[k]] - a[order[(k + n - 1) % n]];
    double next = a[order[(k + 1) % n]] - a[order[k]];
    if (k == 0) prev += kTwoPi;
    if (k + 1 == n) next += kTwoPi;
    h[order[k]] = 0.5 * std::min(prev, next);
  }
  return h;
}

std::vector<double> kernel_matrix(const std::vector<double>& angles,
                                  const std::vector<double>& smear, double alpha) {
  check_alpha(alpha);
  std::size_t n = angles.size();
  std::vector<double> K(n * n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      K[i * n + j] = i == j ? self_energy(alpha, smear[i])
                            : kernel(alpha, chordal_distance(angles[i], angles[j]));
    }
  });
  return K;
}

double energy_kernel(const DiscreteMeasure& mu, double alpha, bool include_self) {
  mu.validate();
  check_alpha(alpha);
  std::size_t n = mu.size();
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    if (mu.weights[i] == 0.0) return;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || mu.weights[j] == 0.0) continue;
      s += mu.weights[j] * kernel(alpha, chordal_distance(mu.angles[i], mu.angles[j]));
    }
    if (include_self) s += mu.weights[i] * self_energy(alpha, mu.smear[i]);
    rows[i] = mu.weights[i] * s;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

std::vector<Complex> fourier_coefficients(const DiscreteMeasure& mu, int modes) {
  if (modes < 0) throw InvalidArgument("mode count must be nonnegative");
  std::vector<Complex> c(modes + 1, Complex(0.0));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Complex step = std::polar(1.0, -mu.angles[i]);
    Complex z(1.0);
    for (int n = 0; n <= modes; ++n) {
      if (n % 256 == 0) z = std::polar(1.0, -n * mu.angles[i]);
      double x = n * mu.smear[i];
      double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
      c[n] += mu.weights[i] * sinc * z;
      z *= step;
    }
  }
  return c;
}

double energy_fourier(const DiscreteMeasure& mu, double alpha, int modes) {
  mu.validate();
  check_alpha(alpha);
  if (modes < 1) throw InvalidArgument("need at least one Fourier mode");
  auto c = fourier_coefficients(mu, modes);
  double s = 0.0;
  for (int n = 0; n <= modes; ++n) s += std::norm(c[n]) * std::pow(1.0 + n, alpha - 1.0);
  return s;
}

EnergyReport energy_report(const DiscreteMeasure& mu, double alpha, int modes) {
  return {alpha, energy_kernel(mu, alpha), energy_fourier(mu, alpha, modes), modes};
}

namespace {

// Exact minimiser of w^T K w on the face spanned by `active`, if it lies in
// the relative interior.
bool polish_face(const std::vector<double>& K, std::size_t n, const std::vector<std::size_t>& active,
                 std::vector<double>& w) {
  std::size_t m = active.size();
  Eigen::MatrixXd A(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) A(a, b) = K[active[a] * n + active[b]];
  }
  Eigen::VectorXd x = A.partialPivLu().solve(Eigen::VectorXd::Ones(m));
  double total = x.sum();
  if (!std::isfinite(total) || total == 0.0) return false;
  std::vector<double> cand(n, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    double v = x(a) / total;
    if (!(v > 0.0)) return false;
    cand[active[a]] = v;
  }
  w = std::move(cand);
  return true;
}

void full_gradient(const std::vector<double>& K, std::size_t n, const std::vector<double>& w,
                   std::vector<double>& g) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (w[j] != 0.0) s += K[i * n + j] * w[j];
    }
    g[i] = s;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SolverResult minimize_on_simplex(const std::vector<double>& K, std::size_t n,
                                 const SolverParams& params) {
  if (n == 0 || K.size() != n * n) throw InvalidArgument("kernel matrix has the wrong size");
  for (double v : K) {
    if (!std::isfinite(v)) throw NumericalError("kernel matrix has infinite entries");
  }
  SolverResult res;
  std::vector<double> w(n, 1.0 / static_cast<double>(n)), g(n);
  full_gradient(K, n, w, g);
  double f = dot(w, g);
  if (params.record_trace) res.energy_trace.push_back(f);

  auto certificate = [&](double& fw_gap) {
    double gmin = kInf, gmax = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
      gmin = std::min(gmin, g[i]);
      if (w[i] > 0.0) gmax = std::max(gmax, g[i]);
    }
    fw_gap = f - gmin;
    return gmax - gmin;
  };

  int since_polish = 0;
  for (int it = 0; it < params.max_iterations; ++it) {
    double fw_gap = 0.0;
    double gap = certificate(fw_gap);
    res.duality_gap = gap;
    res.fw_gap = fw_gap;
    res.iterations = it;
    if (gap <= params.gap_tolerance) {
      res.converged = true;
      break;
    }

    if (params.polish && ++since_polish >= 32) {
      since_polish = 0;
      std::vector<std::size_t> active;
      for (std::size_t i = 0; i < n; ++i) {
        if (w[i] > 0.0) active.push_back(i);
      }
      std::vector<double> cand = w;
      if (active.size() <= 4096 && polish_face(K, n, active, cand)) {
        std::vector<double> gc(n);
        full_gradient(K, n, cand, gc);
        double fc = dot(cand, gc);
        if (fc <= f) {
          w = std::move(cand);
          g = std::move(gc);
          f = fc;
          if (params.record_trace) res.energy_trace.push_back(f);
          continue;
        }
      }
    }

    std::size_t s = 0, v = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (g[i] < g[s]) s = i;
      if (w[i] > 0.0 && (v == n || g[i] > g[v])) v = i;
    }
    bool away = (g[v] - f) > (f - g[s]) && w[v] < 1.0;
    if (!away) {
      double dg = g[s] - f;
      double dKd = K[s * n + s] - 2.0 * g[s] + f;
      double gamma = dKd > 0.0 ? std::min(1.0, -dg / dKd) : 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        w[i] *= 1.0 - gamma;
        g[i] = (1.0 - gamma) * g[i] + gamma * K[i * n + s];
      }
      w[s] += gamma;
      f += 2.0 * gamma * dg + gamma * gamma * dKd;
    } else {
      double dg = f - g[v];
      double dKd = f - 2.0 * g[v] + K[v * n + v];
      double gmax = w[v] / (1.0 - w[v]);
      double gamma = dKd > 0.0 ? std::min(gmax, -dg / dKd) : gmax;
      for (std::size_t i = 0; i < n; ++i) {
        w[i] *= 1.0 + gamma;
        g[i] = (1.0 + gamma) * g[i] - gamma * K[i * n + v];
      }
      w[v] -= gamma;
      if (gamma == gmax || w[v] < 0.0) w[v] = 0.0;
      f += 2.0 * gamma * dg + gamma * gamma * dKd;
    }
    if (params.refresh_every > 0 && (it + 1) % params.refresh_every == 0) {
      double total = std::accumulate(w.begin(), w.end(), 0.0);
      for (double& x : w) x /= total;
      full_gradient(K, n, w, g);
      f = dot(w, g);
    }
    if (params.record_trace) res.energy_trace.push_back(f);
    res.iterations = it + 1;
  }
  if (!res.converged) {
    double fw_gap = 0.0;
    res.duality_gap = certificate(fw_gap);
    res.fw_gap = fw_gap;
    res.converged = res.duality_gap <= params.gap_tolerance;
  }
  res.weights = std::move(w);
  res.energy = f;
  return res;
}

EquilibriumResult equilibrium_measure(const std::vector<double>& support, double alpha,
                                      const SolverParams& params) {
  check_alpha(alpha);
  if (support.size() < 2) throw InvalidArgument("equilibrium needs at least two support points");
  std::vector<double> angles(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) angles[i] = wrap_angle(support[i]);
  std::vector<double> smear = nearest_neighbor_smear(angles);
  for (double h : smear) {
    if (h == 0.0) throw InvalidArgument("support points must be distinct");
  }
  auto K = kernel_matrix(angles, smear, alpha);
  EquilibriumResult out;
  out.solver = minimize_on_simplex(K, angles.size(), params);
  out.measure.angles = angles;
  out.measure.weights = out.solver.weights;
  out.measure.smear = smear;
  return out;
}

const char* to_string(LadderVerdict v) {
  switch (v) {
    case LadderVerdict::divergent: return "divergent";
    case LadderVerdict::convergent: return "convergent";
    default: return "inconclusive";
  }
}

const char* to_string(CapacityVerdict v) {
  switch (v) {
    case CapacityVerdict::zero: return "zero";
    case CapacityVerdict::positive: return "positive";
    default: return "inconclusive";
  }
}

LadderClassification classify_ladder(const std::vector<double>& epsilons,
                                      const std::vector<double>& integrals, double threshold,
                                      int window) {
  if (epsilons.size() != integrals.size()) throw InvalidArgument("ladder arrays differ in length");
  LadderClassification out{LadderVerdict::inconclusive, {}, ""};
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    double slope = std::numeric_limits<double>::quiet_NaN();
    if (k > 0) slope = (integrals[k] - integrals[k - 1]) / std::log(epsilons[k - 1] / epsilons[k]);
    out.rungs.push_back({epsilons[k], integrals[k], slope});
  }
  if (window < 1 || out.rungs.size() < static_cast<std::size_t>(window) + 1) {
    out.reason = "ladder too short for the slope window";
    return out;
  }
  bool all_above = true, all_below = true, nonincreasing = true;
  for (std::size_t k = out.rungs.size() - window; k < out.rungs.size(); ++k) {
    double s = out.rungs[k].slope;
    if (!std::isfinite(s)) {
      out.reason = "non-finite integral on the ladder";
      return out;
    }
    all_above = all_above && s >= threshold;
    all_below = all_below && s < threshold;
    if (k > out.rungs.size() - window) nonincreasing = nonincreasing && s <= out.rungs[k - 1].slope;
  }
  if (all_above) {
    out.verdict = LadderVerdict::divergent;
    out.reason = "last slopes all at or above threshold";
  } else if (all_below && nonincreasing) {
    out.verdict = LadderVerdict::convergent;
    out.reason = "last slopes below threshold and decaying";
  } else {
    out.reason = all_below ? "slopes below threshold but not decaying" : "slopes straddle threshold";
  }
  return out;
}

double capacity_integral(const NeighborhoodProfile& profile, double alpha, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("epsilon must be positive");
  static const GaussRule unit = gauss_legendre(12, 0.0, 1.0);
  double total = 0.0;
  for (std::size_t j = 0; j < profile.breaks.size(); ++j) {
    double a = std::max(eps, profile.breaks[j]);
    double b = j + 1 < profile.breaks.size() ? std::min(kPi, profile.breaks[j + 1]) : kPi;
    if (b <= a) continue;
    double A = profile.intercept[j], B = profile.slope[j];
    double la = std::log(a), lb = std::log(b);
    int pieces = std::max(1, static_cast<int>(std::ceil((lb - la) / 0.5)));
    double h = (lb - la) / pieces;
    for (int p = 0; p < pieces; ++p) {
      for (std::size_t q = 0; q < unit.nodes.size(); ++q) {
        double t = std::exp(la + h * (p + unit.nodes[q]));
        total += h * unit.weights[q] * std::pow(t, 1.0 - alpha) / (A + B * t);
      }
    }
  }
  return total;
}

CapacityZeroReport cantor_capacity_zero_test(const CantorSpec& spec, double alpha,
                                             const CapacityTestParams& params) {
  check_alpha(alpha);
  spec.validate();
  int depth = params.depth < 0 ? spec.depth() : params.depth;
  if (depth > spec.depth()) throw OutOfRange("capacity test depth exceeds spec depth");
  CantorLevel level(spec, depth);
  NeighborhoodProfile profile = level.profile();
  auto a = spec.lengths();
  std::vector<double> eps, J;
  for (int k = 1; k <= depth; ++k) {
    eps.push_back(a[k]);
    J.push_back(capacity_integral(profile, alpha, a[k]));
  }
  CapacityZeroReport rep{CapacityVerdict::inconclusive, alpha, depth,
                         classify_ladder(eps, J, params.slope_threshold, params.window)};
  if (rep.ladder.verdict == LadderVerdict::divergent) rep.verdict = CapacityVerdict::zero;
  if (rep.ladder.verdict == LadderVerdict::convergent) rep.verdict = CapacityVerdict::positive;
  return rep;
}

}  // namespace dirlab
