#include "dirlab/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dirlab/fft.hpp"
#include "dirlab/parallel.hpp"

namespace dirlab {
namespace {

void check_alpha(double alpha, double hi = 1.0) {
  if (!(alpha >= 0.0 && alpha <= hi)) throw InvalidArgument("alpha out of range");
}

// e^x - 1 - x without cancellation.
double expm1_minus_x(double x) {
  if (std::fabs(x) < 1e-3) return x * x * (0.5 + x * (1.0 / 6.0 + x / 24.0));
  return std::expm1(x) - x;
}

// S(s), s = 1, 2, 3, is a periodic trapezoid sum with the band |d| <= s
// removed around the diagonal. The band's share of the integral is
// 2 x F(0) + O(x^3) with x = (s + 1/2) h, so fit S0 + c1 x + c3 x^3.
double band_extrapolate(const double S[3], double h) {
  double x[3], A[3][4];
  for (int i = 0; i < 3; ++i) {
    x[i] = (i + 1.5) * h;
    A[i][0] = 1.0;
    A[i][1] = x[i];
    A[i][2] = x[i] * x[i] * x[i];
    A[i][3] = S[i];
  }
  for (int c = 0; c < 3; ++c) {
    for (int r = c + 1; r < 3; ++r) {
      double f = A[r][c] / A[c][c];
      for (int k = c; k < 4; ++k) A[r][k] -= f * A[c][k];
    }
  }
  double sol[3];
  for (int r = 2; r >= 0; --r) {
    double s = A[r][3];
    for (int k = r + 1; k < 3; ++k) s -= A[r][k] * sol[k];
    sol[r] = s / A[r][r];
  }
  return sol[0];
}

// Discrete Fourier coefficients G_k = mean_j g_j e^{-i k phi_j} of |F'|^2 on
// each ring, handed to `visit(ring, G)`.
template <class Visit>
void ring_spectra(const OuterFunction& f, const DiskGrid& grid, Visit&& visit) {
  const auto& rings = grid.rings();
  std::vector<std::vector<Complex>> spectra(rings.size());
  parallel_for(rings.size(), [&](std::size_t i) {
    std::vector<Complex> d;
    f.ring(rings[i].radius, rings[i].angular, nullptr, &d);
    for (Complex& v : d) v = std::norm(v) / static_cast<double>(d.size());
    fft_forward(d);
    spectra[i] = std::move(d);
  });
  for (std::size_t i = 0; i < rings.size(); ++i) visit(rings[i], spectra[i]);
}

DiskGridParams local_params(const OuterFunction& f, const LocalDirichletOptions& opt) {
  return opt.disk ? *opt.disk : disk_params_for(f.grid().size(), 4);
}

}  // namespace

Complex TaylorPoly::eval(Complex z) const {
  Complex s(0.0);
  for (std::size_t k = a.size(); k-- > 0;) s = s * z + a[k];
  return s;
}

Complex TaylorPoly::deriv(Complex z) const {
  Complex s(0.0);
  for (std::size_t k = a.size(); k-- > 1;) s = s * z + static_cast<double>(k) * a[k];
  return s;
}

DerivativeSource DerivativeSource::from(const TaylorPoly& p) {
  std::vector<Complex> d;
  for (std::size_t k = 1; k < p.a.size(); ++k) d.push_back(static_cast<double>(k) * p.a[k]);
  if (d.empty()) d.push_back(0.0);
  DerivativeSource s;
  s.ring_derivative = [d](double r, int M, std::vector<Complex>& out) { out = evaluate_on_ring(d, r, M); };
  s.value_at_zero = p.a.empty() ? Complex(0.0) : p.a[0];
  return s;
}

DerivativeSource DerivativeSource::from(const OuterFunction& f) {
  DerivativeSource s;
  s.ring_derivative = [f](double r, int M, std::vector<Complex>& out) { f.ring(r, M, nullptr, &out); };
  s.value_at_zero = f.value_at_zero();
  return s;
}

DerivativeSource DerivativeSource::from(std::function<Complex(Complex)> derivative, Complex f0) {
  DerivativeSource s;
  s.ring_derivative = [derivative](double r, int M, std::vector<Complex>& out) {
    out.resize(M);
    for (int j = 0; j < M; ++j) out[j] = derivative(std::polar(r, kTwoPi * j / M));
  };
  s.value_at_zero = f0;
  return s;
}

DiskGridParams disk_params_for(std::size_t n, int angular_factor) {
  DiskGridParams p;
  // Smallest L with grading^{L+1} <= 2/n.
  int layers = static_cast<int>(std::ceil(std::log(0.5 * n) / std::log(1.0 / p.grading))) - 1;
  p.boundary_layers = std::max(layers, 1);
  p.max_angular = std::max(p.min_angular, angular_factor * static_cast<int>(n));
  return p;
}

namespace {

// (1/pi) * ring weight * mean |f'|^2 (1 - s)^alpha, ring by ring.
std::vector<double> ring_contributions(const DerivativeSource& f, double alpha, const DiskGrid& grid) {
  check_alpha(alpha);
  const auto& rings = grid.rings();
  std::vector<double> part(rings.size());
  parallel_for(rings.size(), [&](std::size_t i) {
    const DiskRing& ring = rings[i];
    std::vector<Complex> d;
    f.ring_derivative(ring.radius, ring.angular, d);
    double mean = 0.0;
    for (Complex v : d) mean += std::norm(v);
    mean /= ring.angular;
    part[i] = ring.weight * mean * std::pow(1.0 - ring.s, alpha) / kPi;
  });
  return part;
}

}  // namespace

double dirichlet_area(const DerivativeSource& f, double alpha, const DiskGrid& grid) {
  double total = 0.0;
  for (double v : ring_contributions(f, alpha, grid)) total += v;
  return total;
}

double dirichlet_coeff_exact(const TaylorPoly& p, double alpha) {
  check_alpha(alpha);
  double s = 0.0;
  for (std::size_t n = 1; n < p.a.size(); ++n) {
    double dn = static_cast<double>(n);
    s += dn * dn * std::beta(dn, alpha + 1.0) * std::norm(p.a[n]);
  }
  return s;
}

double coefficient_norm(const TaylorPoly& p, double alpha) {
  check_alpha(alpha);
  double s = 0.0;
  for (std::size_t n = 0; n < p.a.size(); ++n) s += std::pow(n + 1.0, 1.0 - alpha) * std::norm(p.a[n]);
  return s;
}

DirichletReport dirichlet_report(const TaylorPoly& p, double alpha, const DiskGrid& grid) {
  DirichletReport r;
  r.alpha = alpha;
  r.area_value = dirichlet_area(DerivativeSource::from(p), alpha, grid);
  r.coeff_value = dirichlet_coeff_exact(p, alpha);
  double a0 = p.a.empty() ? 0.0 : std::norm(p.a[0]);
  r.norm_alpha = a0 + r.area_value;
  double cn = coefficient_norm(p, alpha);
  if (cn > 0.0) r.equivalence_ratio = (a0 + *r.coeff_value) / cn;
  r.method = "area quadrature; Beta-function coefficient form";
  r.grid_points = grid.size();
  r.boundary_layers = grid.params().boundary_layers;
  r.max_angular = grid.params().max_angular;
  return r;
}

DirichletReport dirichlet_report(const OuterFunction& f, double alpha, const DiskGrid& grid) {
  DirichletReport r;
  r.alpha = alpha;
  r.area_value = dirichlet_area(DerivativeSource::from(f), alpha, grid);
  r.norm_alpha = std::norm(f.value_at_zero()) + r.area_value;
  r.method = "area quadrature on an " + std::to_string(f.grid().size()) + "-point outer function";
  r.grid_points = grid.size();
  r.boundary_layers = grid.params().boundary_layers;
  r.max_angular = grid.params().max_angular;
  return r;
}

RefinementStudy dirichlet_refinement(const DerivativeSource& f, double alpha, const DiskGridParams& base,
                                     int extra, double contraction) {
  if (extra < 3) throw InvalidArgument("refinement study needs at least 3 extra layers");
  DiskGridParams p = base;
  p.boundary_layers = base.boundary_layers + extra;
  // Every panel below the last must be resolved: 1 - |z|^2 >= grading^{L+1}.
  double finest = std::pow(base.grading, p.boundary_layers + 1);
  p.max_angular = std::max(base.max_angular, static_cast<int>(std::min(8.0 / finest, 1048576.0)));
  DiskGrid grid(p);
  auto part = ring_contributions(f, alpha, grid);
  RefinementStudy st;
  for (int k = 0; k <= extra; ++k) {
    int layers = base.boundary_layers + k;
    double cut = 1.0 - std::pow(base.grading, layers + 1);
    double v = 0.0;
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (grid.rings()[i].s < cut) v += part[i];
    }
    st.boundary_layers.push_back(layers);
    st.values.push_back(v);
  }
  const auto& v = st.values;
  std::size_t m = v.size();
  double d1 = v[m - 3] - v[m - 4], d2 = v[m - 2] - v[m - 3], d3 = v[m - 1] - v[m - 2];
  st.growth_per_layer = 0.5 * (d2 + d3);
  double scale = std::max(std::fabs(v.back()), 1e-300);
  auto shrinks = [&](double prev, double next) {
    return std::fabs(next) <= contraction * std::fabs(prev) || std::fabs(next) <= 1e-10 * scale;
  };
  st.bounded = shrinks(d1, d2) && shrinks(d2, d3);
  return st;
}

std::vector<double> local_dirichlet(const OuterFunction& f, const std::vector<double>& zetas,
                                    LocalMethod method, const LocalDirichletOptions& opt) {
  std::vector<double> out(zetas.size(), 0.0);
  if (method == LocalMethod::area) {
    DiskGrid grid(local_params(f, opt));
    ring_spectra(f, grid, [&](const DiskRing& ring, const std::vector<Complex>& G) {
      const int M = ring.angular;
      for (std::size_t q = 0; q < zetas.size(); ++q) {
        double H = G[0].real();
        Complex step = ring.radius * std::polar(1.0, zetas[q]), pw = step;
        for (int k = 1; k < M / 2; ++k, pw *= step) H += 2.0 * (G[k] * pw).real();
        H += G[M / 2].real() * std::pow(ring.radius, M / 2) * std::cos(0.5 * M * zetas[q]);
        out[q] += ring.weight * H / kPi;
      }
    });
    return out;
  }

  const std::size_t n = f.grid().size();
  const int N = static_cast<int>(n) * std::max(1, opt.boundary_oversample);
  const double h = kTwoPi / N;
  std::vector<double> inv_chord2(N / 2 + 1);
  for (int d = 1; d <= N / 2; ++d) inv_chord2[d] = 1.0 / (4.0 * std::pow(std::sin(0.5 * d * h), 2));
  parallel_for(zetas.size(), [&](std::size_t q) {
    double zeta = zetas[q];
    for (std::size_t k : f.zero_nodes()) {
      if (circle_distance(zeta, f.grid().angle(k)) < 0.5 * f.grid().spacing()) {
        throw InvalidArgument("boundary form undefined at a zero of |f*|");
      }
    }
    auto b = f.boundary_logmod_on(zeta, N);
    double a = b[0];
    double band[4] = {0, 0, 0, 0}, rest = 0.0;
    for (int j = 1; j < N; ++j) {
      int d = std::min(j, N - j);
      double v = std::exp(2.0 * a) * expm1_minus_x(2.0 * (b[j] - a)) * inv_chord2[d];
      if (d <= 3) {
        band[d] += v;
      } else {
        rest += v;
      }
    }
    double S[3] = {rest + band[2] + band[3], rest + band[3], rest};
    for (double& s : S) s *= h / kTwoPi;
    out[q] = band_extrapolate(S, h);
  });
  return out;
}

double local_dirichlet(const OuterFunction& f, double zeta, LocalMethod method, const LocalDirichletOptions& opt) {
  return local_dirichlet(f, std::vector<double>{zeta}, method, opt)[0];
}

BoundaryWeight distance_power_weight(const CantorLevel& level, double alpha, double C) {
  if (!(C > 0.0)) throw InvalidArgument("weight constant must be positive");
  check_alpha(alpha);
  BoundaryWeight h;
  h.value = [level, alpha, C](double theta) {
    double d = level.distance(theta);
    return d > 0.0 ? C * std::pow(d, alpha) : 0.0;
  };
  h.arc_mean = [level, alpha, C](const Arc& I) { return C * level.integrate_distance_power(I, alpha) / I.length(); };
  std::ostringstream name;
  name << C << " d(., E)^" << alpha;
  h.name = name.str();
  return h;
}

BoundaryWeight constant_weight(double c) {
  if (!(c > 0.0)) throw InvalidArgument("weight constant must be positive");
  return BoundaryWeight{[c](double) { return c; }, [c](const Arc&) { return c; }, "constant " + std::to_string(c)};
}

HjensenGate hjensen_gate(const BoundaryWeight& h, double alpha, int max_level) {
  if (max_level < 0 || max_level > 24) throw InvalidArgument("dyadic level out of range");
  HjensenGate g;
  g.max_level = max_level;
  g.worst_ratio = INFINITY;
  for (int k = 0; k <= max_level; ++k) {
    std::uint64_t count = std::uint64_t{1} << k;
    double len = kTwoPi / static_cast<double>(count);
    for (std::uint64_t j = 0; j < count; ++j) {
      Arc I(len * static_cast<double>(j), len);
      double r = h.arc_mean(I) / std::pow(len, alpha);
      ++g.arcs_checked;
      if (r < g.worst_ratio) {
        g.worst_ratio = r;
        g.worst_arc = I;
      }
    }
  }
  return g;
}

CarlesonAudit carleson_substitute_audit(const OuterFunction& f, const BoundaryWeight& h, double alpha,
                                        const CarlesonOptions& opt) {
  check_alpha(alpha, 1.0 - 1e-15);
  const std::size_t n = f.grid().size();
  CarlesonAudit audit;
  audit.tolerance = opt.tolerance;
  int level = opt.gate_level >= 0 ? opt.gate_level : static_cast<int>(std::lround(std::log2(n)));
  audit.gate = hjensen_gate(h, alpha, level);
  if (!audit.gate.passed()) {
    std::ostringstream msg;
    msg << "weight " << h.name << " fails mean_I h >= |I|^alpha: ratio " << audit.gate.worst_ratio
        << " on arc [" << audit.gate.worst_arc.start() << ", " << audit.gate.worst_arc.end() << ")";
    throw AuditRefused(msg.str());
  }

  DiskGrid grid(disk_params_for(n, opt.angular_factor));
  audit.disk_points = grid.size();
  audit.lhs = dirichlet_area(DerivativeSource::from(f), alpha, grid);

  const int M = static_cast<int>(n) * std::max(1, opt.boundary_oversample);
  audit.boundary_samples = M;
  const double step = kTwoPi / M;
  auto u = f.boundary_logmod_on(0.0, M);
  std::vector<double> e2u(M), hv(M), inv_chord2(M);
  for (int j = 0; j < M; ++j) {
    e2u[j] = std::exp(2.0 * u[j]);
    hv[j] = h.value(step * j);
  }
  for (int d = 1; d < M; ++d) inv_chord2[d] = 1.0 / (4.0 * std::pow(std::sin(0.5 * d * step), 2));
  std::vector<double> rest(M), band(M * 4, 0.0);
  parallel_for(M, [&](std::size_t j) {
    double r = 0.0;
    for (int k = 0; k < M; ++k) {
      int d = std::abs(static_cast<int>(j) - k);
      if (d == 0) continue;
      int cd = std::min(d, M - d);
      double v = (e2u[j] - e2u[k]) * (u[j] - u[k]) * inv_chord2[d] * (hv[j] + hv[k]);
      if (cd <= 3) {
        band[j * 4 + cd] += v;
      } else {
        r += v;
      }
    }
    rest[j] = r;
  });
  double all = 0.0, b2 = 0.0, b3 = 0.0;
  for (int j = 0; j < M; ++j) {
    all += rest[j];
    b2 += band[j * 4 + 2];
    b3 += band[j * 4 + 3];
  }
  // Inner integral by band extrapolation, outer by the trapezoid rule.
  double S[3] = {all + b2 + b3, all + b3, all};
  for (double& s : S) s *= step * step / kPi;
  audit.rhs = band_extrapolate(S, step);
  audit.ratio = audit.rhs > 0.0 ? audit.lhs / audit.rhs : (audit.lhs > 0.0 ? INFINITY : 0.0);
  return audit;
}

double fubini_bound(const OuterFunction& f, const BoundaryWeight& h, const LocalDirichletOptions& opt) {
  const int N = static_cast<int>(f.grid().size());
  DiskGrid grid(local_params(f, opt));
  std::vector<double> D(N, 0.0);
  ring_spectra(f, grid, [&](const DiskRing& ring, const std::vector<Complex>& G) {
    const int M = ring.angular;
    std::vector<Complex> folded(N, Complex(0.0));
    auto slot = [N](long k) { return static_cast<std::size_t>(((k % N) + N) % N); };
    for (int k = 0; k < M; ++k) {
      long kk = k <= M / 2 ? k : k - M;
      Complex c = G[k] * std::pow(ring.radius, std::labs(kk));
      if (k == M / 2) {
        folded[slot(kk)] += 0.5 * c;
        folded[slot(-kk)] += 0.5 * c;
      } else {
        folded[slot(kk)] += c;
      }
    }
    fft_inverse(folded);
    for (int l = 0; l < N; ++l) D[l] += ring.weight * folded[l].real() / kPi;
  });
  double s = 0.0;
  for (int l = 0; l < N; ++l) s += D[l] * h.value(f.grid().angle(l));
  return 2.0 * s * f.grid().spacing();
}

ConcavityScan concavity_scan(const WeightProfile& w, double alpha, double t_min, int samples, double tolerance) {
  check_alpha(alpha, 1.0 - 1e-15);
  if (!(t_min > 0.0 && t_min < kPi) || samples < 3) throw InvalidArgument("bad concavity scan range");
  ConcavityScan scan;
  const double lo = 2.0 / (1.0 - alpha), hi = 20.0;
  const int K = 200;
  for (int i = 1; i <= K && lo < hi; ++i) {
    double gamma = lo + (hi - lo) * i / K;
    double x0 = std::log(t_min) / gamma, x1 = std::log(kPi) / gamma;
    std::vector<double> x(samples), g(samples);
    for (int k = 0; k < samples; ++k) {
      x[k] = std::exp(x0 + (x1 - x0) * k / (samples - 1));
      g[k] = w(std::min(std::pow(x[k], gamma), kPi));
    }
    double worst = 0.0, prev = (g[1] - g[0]) / (x[1] - x[0]);
    for (int k = 1; k + 1 < samples; ++k) {
      double slope = (g[k + 1] - g[k]) / (x[k + 1] - x[k]);
      double scale = std::max(std::fabs(prev), 1e-300);
      worst = std::max(worst, (slope - prev) / scale);
      prev = slope;
    }
    scan.gammas.push_back(gamma);
    scan.worst_violation.push_back(worst);
    if (!scan.gamma && worst <= tolerance) scan.gamma = gamma;
  }
  return scan;
}

double fw_bound_integral(const WeightProfile& w, const CantorLevel& level, double alpha) {
  if (!w.derivative) throw InvalidArgument("weight has no derivative");
  const double lo = 0.5 * level.arc_length();
  std::vector<double> cuts{lo, kPi};
  for (double b : level.profile().breaks) {
    if (b > lo && b < kPi) cuts.push_back(b);
  }
  for (double b : w.breakpoints) {
    if (b > lo && b < kPi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const GaussRule g = gauss_legendre(16, 0.0, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = std::log(cuts[i]), b = std::log(cuts[i + 1]);
    double N = static_cast<double>(level.counting_function(std::sqrt(cuts[i] * cuts[i + 1])));
    if (N == 0.0) continue;
    int parts = std::max(1, static_cast<int>(std::ceil((b - a) / 0.5)));
    for (int p = 0; p < parts; ++p) {
      double u0 = a + (b - a) * p / parts, du = (b - a) / parts;
      for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        double t = std::exp(u0 + du * g.nodes[q]);
        double wp = w.derivative(t);
        total += g.weights[q] * du * wp * wp * std::pow(t, 2.0 + alpha) * N;
      }
    }
  }
  return total;
}

FwAudit fw_estimate_audit(const WeightProfile& w, const CantorLevel& level, double alpha, const FwOptions& opt) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  FwAudit audit;
  audit.n = opt.n;
  audit.depth = level.level();
  audit.concavity = concavity_scan(w, alpha, 0.5 * level.arc_length());
  if (!audit.concavity.ok() && opt.enforce_concavity) {
    std::ostringstream msg;
    msg << "t -> w(t^gamma) is not concave for any scanned gamma in (" << 2.0 / (1.0 - alpha) << ", 20]:";
    for (std::size_t i = 0; i < audit.concavity.gammas.size(); ++i) {
      msg << " gamma=" << audit.concavity.gammas[i] << " violation=" << audit.concavity.worst_violation[i] << ";";
    }
    throw AuditRefused(msg.str());
  }
  OuterFunction fw = outer_from_weight(w, level, opt.n);
  audit.lhs = dirichlet_area(DerivativeSource::from(fw), alpha, DiskGrid(disk_params_for(opt.n, opt.angular_factor)));
  audit.rhs = fw_bound_integral(w, level, alpha);
  audit.ratio = audit.rhs > 0.0 ? audit.lhs / audit.rhs : (audit.lhs > 1e-14 ? INFINITY : 0.0);
  return audit;
}

double product_norm_ratio(const OuterFunction& f, const std::vector<Arc>& gamma, const TaylorPoly& g,
                          double alpha, const DiskGrid& grid) {
  check_alpha(alpha);
  OuterFunction fg = f.restricted(gamma);
  std::vector<Complex> gd;
  for (std::size_t k = 1; k < g.a.size(); ++k) gd.push_back(static_cast<double>(k) * g.a[k]);
  if (gd.empty()) gd.push_back(0.0);
  double area = 0.0;
  for (const DiskRing& ring : grid.rings()) {
    std::vector<Complex> v, dv;
    fg.ring(ring.radius, ring.angular, &v, &dv);
    auto gv = evaluate_on_ring(g.a, ring.radius, ring.angular);
    auto gdv = evaluate_on_ring(gd, ring.radius, ring.angular);
    double mean = 0.0;
    for (int j = 0; j < ring.angular; ++j) mean += std::norm(dv[j] * gv[j] + v[j] * gdv[j]);
    area += ring.weight * mean / ring.angular * std::pow(1.0 - ring.s, alpha);
  }
  double g0 = std::norm(g.a.empty() ? Complex(0.0) : g.a[0]);
  double prod = std::sqrt(std::norm(fg.value_at_zero()) * g0 + area / kPi);
  double gnorm = std::sqrt(g0 + dirichlet_coeff_exact(g, alpha));
  return prod / (1.0 + gnorm);
}

}  // namespace dirlab
