#pragma once

// Outer functions synthesised from sampled boundary log-moduli.
//
// Given samples u_k = log|f*(theta_k)| on an n-point grid, the outer function
// is F = exp(P) with P(z) = U_0 + 2 sum_{0<m<n/2} U_m z^m + U_{n/2} z^{n/2},
// U_m the discrete Fourier coefficients of u. Re P interpolates u at the
// nodes, F is analytic on the closed disk, and inside the evaluation margin it
// agrees with the trapezoid Herglotz integral up to the aliased tail
// O(|z|^{n/2}).

#include <optional>
#include <string>
#include <vector>

#include "dirlab/cantor.hpp"
#include "dirlab/core.hpp"
#include "dirlab/weight.hpp"

namespace dirlab {

// log|f*| on a uniform grid. -infinity marks zeros of |f*|.
class BoundaryModulus {
 public:
  BoundaryModulus(CircleGrid grid, std::vector<double> logmod);

  template <class F>
  static BoundaryModulus sample(std::size_t n, F&& logmod_of_theta) {
    CircleGrid g(n);
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = logmod_of_theta(g.angle(k));
    return BoundaryModulus(g, std::move(v));
  }

  const CircleGrid& grid() const { return grid_; }
  const std::vector<double>& logmod() const { return logmod_; }
  std::size_t size() const { return logmod_.size(); }

 private:
  CircleGrid grid_;
  std::vector<double> logmod_;
};

struct ClipPolicy {
  // Samples below the floor are raised to it. Without a floor only -infinity
  // samples are replaced, by (smallest finite sample) - log 2 pi.
  std::optional<double> floor;
  // This many consecutive -infinity samples mean a zero set of positive
  // measure, which no outer modulus has.
  int max_zero_run = 3;
};

struct ClipReport {
  std::size_t infinite = 0;  // -infinity samples replaced
  std::size_t raised = 0;    // finite samples raised to the floor
  double floor = 0.0;
  double bias = 0.0;  // (1/2pi) int (clipped - raw) over the finite samples
  std::string policy;
};

class OuterFunction {
 public:
  OuterFunction(const BoundaryModulus& modulus, std::vector<Arc> gamma, const ClipPolicy& policy = {});

  const CircleGrid& grid() const { return grid_; }
  const std::vector<Arc>& gamma() const { return gamma_; }
  const ClipReport& clip_report() const { return clip_; }
  // Clipped log-modulus on the whole circle (before restriction to gamma).
  const std::vector<double>& logmod() const { return logmod_; }
  // Boundary data of this function: logmod on gamma, 0 elsewhere.
  const std::vector<double>& boundary_logmod() const { return masked_; }
  // Taylor coefficients of log F, degree 0..n/2.
  const std::vector<Complex>& log_coefficients() const { return coeffs_; }
  // Nodes whose input sample was -infinity.
  const std::vector<std::size_t>& zero_nodes() const { return zeros_; }

  // |z| may not exceed 1 - margin() in eval/eval_deriv.
  double margin() const { return 4.0 * grid_.spacing(); }
  Complex eval(Complex z) const;
  Complex eval_deriv(Complex z) const;
  Complex value_at_zero() const { return std::exp(coeffs_[0]); }

  // Direct trapezoid Herglotz integral (1/n) sum (zeta_k+z)/(zeta_k-z) u_k and
  // its z-derivative; returns {f, f'}.
  std::pair<Complex, Complex> eval_trapezoid(Complex z) const;

  // F and F' at r e^{2 pi i j/M}, j = 0..M-1, by one transform each. Valid up
  // to and including r = 1 (no margin check).
  void ring(double r, int M, std::vector<Complex>* values, std::vector<Complex>* derivs) const;
  // Re P at theta = shift + 2 pi j / M on the unit circle.
  std::vector<double> boundary_logmod_on(double shift, int M) const;
  // First `count` Taylor coefficients of F, from M >= 2 count samples on T.
  std::vector<Complex> taylor_coefficients(int count, int M) const;

  // Same modulus, different set.
  OuterFunction restricted(std::vector<Arc> gamma) const;
  double max_logmod() const;

 private:
  OuterFunction() : grid_(8) {}
  void build();
  void check_margin(Complex z) const;

  CircleGrid grid_;
  std::vector<Arc> gamma_;
  ClipReport clip_;
  std::vector<double> logmod_;
  std::vector<double> masked_;
  std::vector<Complex> coeffs_;
  std::vector<std::size_t> zeros_;
};

OuterFunction synthesize(const BoundaryModulus& modulus, std::vector<Arc> gamma,
                         const ClipPolicy& policy = {});

// |f_w*| = w(d(., E_N)) on an n-point grid, floored at log w(a_N / 2).
OuterFunction outer_from_weight(const WeightProfile& w, const CantorLevel& level, std::size_t n);

// The modulus shifted so that max log|f*| = 0, i.e. ||f||_inf = 1.
BoundaryModulus normalized(const BoundaryModulus& m);

struct KorenblumAudit {
  double max_ratio = 0.0;  // sup |f_G'| dist(z,G)^2 / (2 log(1/|f(0)|))
  Complex worst_point{0.0};
  double lemma_constant = 0.0;  // sup |f_G'| / (|f'| + dist(z, dG)^{-4})
  double log_inv_f0 = 0.0;
  std::size_t points = 0;
  std::size_t outside_margin = 0;
  bool passed(double tol) const { return max_ratio <= 1.0 + tol; }
};

// Audits |f_G'(z)| <= 2 log(1/|f(0)|) / dist(z,G)^2 over the disk grid
// points inside the evaluation margin. f must be normalised (max logmod <= 0).
KorenblumAudit korenblum_audit(const OuterFunction& f, const std::vector<Arc>& gamma,
                               const DiskGrid& grid);

}  // namespace dirlab
