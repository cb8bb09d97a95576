#include "dirlab/outer.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>

#include "dirlab/fft.hpp"

namespace dirlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_gamma(const std::vector<Arc>& gamma, double theta) {
  for (const Arc& a : gamma) {
    if (a.contains(theta)) return true;
  }
  return false;
}

}  // namespace

BoundaryModulus::BoundaryModulus(CircleGrid grid, std::vector<double> logmod)
    : grid_(grid), logmod_(std::move(logmod)) {
  if (logmod_.size() != grid_.size()) throw InvalidArgument("log-modulus length does not match grid");
  for (double v : logmod_) {
    if (std::isnan(v) || v == kInf) throw InvalidArgument("log-modulus samples must be finite or -infinity");
  }
}

OuterFunction::OuterFunction(const BoundaryModulus& modulus, std::vector<Arc> gamma,
                             const ClipPolicy& policy)
    : grid_(modulus.grid()), gamma_(std::move(gamma)), logmod_(modulus.logmod()) {
  const std::size_t n = logmod_.size();
  double min_finite = kInf;
  std::size_t infinite = 0;
  for (double v : logmod_) {
    if (std::isfinite(v)) {
      min_finite = std::min(min_finite, v);
    } else {
      ++infinite;
    }
  }
  if (infinite == n) throw InvalidArgument("log-modulus is -infinity everywhere");
  if (infinite > 0) {
    // Longest circular run of zeros.
    std::size_t start = 0;
    while (!std::isfinite(logmod_[start])) ++start;
    int run = 0, longest = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      run = std::isfinite(logmod_[(start + i) % n]) ? 0 : run + 1;
      longest = std::max(longest, run);
    }
    if (longest >= policy.max_zero_run) {
      throw InvalidArgument("log-modulus vanishes on " + std::to_string(longest) +
                            " consecutive samples: zero set of positive measure");
    }
  }
  if (policy.floor) {
    clip_.floor = *policy.floor;
    clip_.policy = "floor";
  } else {
    // With the neighbouring sample log(2 sin(pi/n)) of a simple zero, this makes
    // the trapezoid mean of log|1 - e^{it}| exact: prod_{k<n} 2 sin(pi k/n) = n.
    clip_.floor = min_finite - std::log(kTwoPi);
    clip_.policy = "simple zero";
  }
  if (!std::isfinite(clip_.floor)) throw InvalidArgument("clipping floor must be finite");
  double bias = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double& v = logmod_[k];
    if (!std::isfinite(v)) {
      zeros_.push_back(k);
      v = clip_.floor;
      ++clip_.infinite;
    } else if (v < clip_.floor) {
      bias += clip_.floor - v;
      v = clip_.floor;
      ++clip_.raised;
    }
  }
  clip_.bias = bias / static_cast<double>(n);
  build();
}

void OuterFunction::build() {
  const std::size_t n = logmod_.size();
  masked_.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (in_gamma(gamma_, grid_.angle(k))) masked_[k] = logmod_[k];
  }
  std::vector<Complex> U(masked_.begin(), masked_.end());
  fft_forward(U);
  coeffs_.assign(n / 2 + 1, Complex(0.0));
  for (std::size_t m = 0; m <= n / 2; ++m) {
    Complex u = U[m] / static_cast<double>(n);
    coeffs_[m] = (m == 0 || m == n / 2) ? u : 2.0 * u;
  }
  coeffs_[0] = coeffs_[0].real();
  coeffs_[n / 2] = coeffs_[n / 2].real();
}

OuterFunction OuterFunction::restricted(std::vector<Arc> gamma) const {
  OuterFunction out;
  out.grid_ = grid_;
  out.gamma_ = std::move(gamma);
  out.clip_ = clip_;
  out.logmod_ = logmod_;
  out.zeros_ = zeros_;
  out.build();
  return out;
}

double OuterFunction::max_logmod() const { return *std::max_element(logmod_.begin(), logmod_.end()); }

void OuterFunction::check_margin(Complex z) const {
  if (std::abs(z) > 1.0 - margin()) {
    throw PrecisionError("point too close to the circle for an " + std::to_string(grid_.size()) +
                             "-point boundary grid",
                         margin());
  }
}

Complex OuterFunction::eval(Complex z) const {
  check_margin(z);
  Complex p(0.0);
  for (std::size_t m = coeffs_.size(); m-- > 0;) p = p * z + coeffs_[m];
  return std::exp(p);
}

Complex OuterFunction::eval_deriv(Complex z) const {
  check_margin(z);
  Complex p(0.0), dp(0.0);
  for (std::size_t m = coeffs_.size(); m-- > 0;) {
    dp = dp * z + p;
    p = p * z + coeffs_[m];
  }
  return std::exp(p) * dp;
}

std::pair<Complex, Complex> OuterFunction::eval_trapezoid(Complex z) const {
  check_margin(z);
  Complex h(0.0), dh(0.0);
  for (std::size_t k = 0; k < masked_.size(); ++k) {
    if (masked_[k] == 0.0) continue;
    Complex zeta = std::polar(1.0, grid_.angle(k));
    Complex d = zeta - z;
    h += (zeta + z) / d * masked_[k];
    dh += 2.0 * zeta / (d * d) * masked_[k];
  }
  double n = static_cast<double>(masked_.size());
  Complex f = std::exp(h / n);
  return {f, f * dh / n};
}

void OuterFunction::ring(double r, int M, std::vector<Complex>* values,
                         std::vector<Complex>* derivs) const {
  auto p = evaluate_on_ring(coeffs_, r, M);
  if (values) {
    values->resize(M);
    for (int j = 0; j < M; ++j) (*values)[j] = std::exp(p[j]);
  }
  if (derivs) {
    std::vector<Complex> d(coeffs_.size());
    for (std::size_t m = 0; m < coeffs_.size(); ++m) d[m] = static_cast<double>(m) * coeffs_[m];
    auto zdp = evaluate_on_ring(d, r, M);
    derivs->resize(M);
    for (int j = 0; j < M; ++j) {
      Complex dp = r == 0.0 ? (coeffs_.size() > 1 ? coeffs_[1] : Complex(0.0))
                            : zdp[j] / std::polar(r, kTwoPi * j / M);
      (*derivs)[j] = std::exp(p[j]) * dp;
    }
  }
}

std::vector<double> OuterFunction::boundary_logmod_on(double shift, int M) const {
  std::vector<Complex> c(coeffs_.size());
  for (std::size_t m = 0; m < c.size(); ++m) c[m] = coeffs_[m] * std::polar(1.0, m * shift);
  auto p = evaluate_on_ring(c, 1.0, M);
  std::vector<double> out(M);
  for (int j = 0; j < M; ++j) out[j] = p[j].real();
  return out;
}

std::vector<Complex> OuterFunction::taylor_coefficients(int count, int M) const {
  if (count < 1 || M < 2 * count) throw InvalidArgument("need M >= 2 count samples");
  std::vector<Complex> v;
  ring(1.0, M, &v, nullptr);
  fft_forward(v);
  v.resize(count);
  for (Complex& c : v) c /= static_cast<double>(M);
  return v;
}

OuterFunction synthesize(const BoundaryModulus& modulus, std::vector<Arc> gamma,
                         const ClipPolicy& policy) {
  return OuterFunction(modulus, std::move(gamma), policy);
}

OuterFunction outer_from_weight(const WeightProfile& w, const CantorLevel& level, std::size_t n) {
  validate_weight(w);
  double floor_value = w(0.5 * level.arc_length());
  if (!(floor_value > 0.0)) throw InvalidArgument("weight vanishes at the resolution floor");
  auto modulus = BoundaryModulus::sample(n, [&](double theta) {
    double v = w(level.distance(theta));
    return v > 0.0 ? std::log(v) : -kInf;
  });
  // Zeros on E_N are expected; E_N stands in for a null set.
  ClipPolicy policy{std::log(floor_value), INT_MAX};
  return OuterFunction(modulus, {Arc::full_circle()}, policy);
}

BoundaryModulus normalized(const BoundaryModulus& m) {
  double top = -kInf;
  for (double v : m.logmod()) top = std::max(top, v);
  std::vector<double> out(m.logmod());
  for (double& v : out) v -= top;
  return BoundaryModulus(m.grid(), std::move(out));
}

KorenblumAudit korenblum_audit(const OuterFunction& f, const std::vector<Arc>& gamma,
                               const DiskGrid& grid) {
  if (f.max_logmod() > 1e-12) throw InvalidArgument("normalise f first: max log|f*| must be <= 0");
  OuterFunction full = f.restricted({Arc::full_circle()});
  OuterFunction part = f.restricted(gamma);
  KorenblumAudit audit;
  audit.log_inv_f0 = -full.log_coefficients()[0].real();
  if (!(std::exp(-audit.log_inv_f0) > 0.0)) throw InvalidArgument("f(0) = 0: bound is degenerate");
  auto edges = boundary_points(gamma);
  const double limit = 1.0 - f.margin();
  std::vector<Complex> df, dpart;
  for (const DiskRing& ring : grid.rings()) {
    if (ring.radius > limit) {
      audit.outside_margin += ring.angular;
      continue;
    }
    full.ring(ring.radius, ring.angular, nullptr, &df);
    part.ring(ring.radius, ring.angular, nullptr, &dpart);
    for (int j = 0; j < ring.angular; ++j) {
      Complex z = std::polar(ring.radius, kTwoPi * j / ring.angular);
      double g = std::abs(dpart[j]);
      ++audit.points;
      if (!gamma.empty() && audit.log_inv_f0 > 0.0) {
        double d = euclidean_distance(z, gamma);
        double ratio = g * d * d / (2.0 * audit.log_inv_f0);
        if (ratio > audit.max_ratio) {
          audit.max_ratio = ratio;
          audit.worst_point = z;
        }
      }
      double de = kInf;
      for (double e : edges) de = std::min(de, std::abs(z - std::polar(1.0, e)));
      double denom = std::abs(df[j]) + (std::isinf(de) ? 0.0 : std::pow(de, -4.0));
      if (denom > 0.0) audit.lemma_constant = std::max(audit.lemma_constant, g / denom);
    }
  }
  return audit;
}

}  // namespace dirlab
