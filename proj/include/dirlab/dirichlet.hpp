#pragma once

// Weighted Dirichlet integrals
//   D_alpha(f) = (1/pi) int_D |f'(z)|^2 (1 - |z|^2)^alpha dA(z)
// in area, coefficient and boundary forms, the local Dirichlet integral and
// the two inequality audits built on it.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dirlab/cantor.hpp"
#include "dirlab/core.hpp"
#include "dirlab/outer.hpp"
#include "dirlab/weight.hpp"

namespace dirlab {

struct TaylorPoly {
  std::vector<Complex> a;  // a_0 .. a_d

  int degree() const { return static_cast<int>(a.size()) - 1; }
  Complex eval(Complex z) const;
  Complex deriv(Complex z) const;
};

// f(0) and f' sampled on rings r e^{2 pi i j / M}.
struct DerivativeSource {
  std::function<void(double r, int M, std::vector<Complex>& out)> ring_derivative;
  Complex value_at_zero{0.0};

  static DerivativeSource from(const TaylorPoly& p);
  static DerivativeSource from(const OuterFunction& f);
  // Pointwise f'; one call per grid node.
  static DerivativeSource from(std::function<Complex(Complex)> derivative, Complex f0);
};

// Disk grid resolving an outer function on an n-point boundary grid: the
// boundary layers reach 1 - |z| ~ 1/n and rings carry up to angular_factor * n
// angles.
DiskGridParams disk_params_for(std::size_t n, int angular_factor = 2);

double dirichlet_area(const DerivativeSource& f, double alpha, const DiskGrid& grid);

// sum_n n^2 B(n, alpha + 1) |a_n|^2.
double dirichlet_coeff_exact(const TaylorPoly& p, double alpha);
// sum_n (n + 1)^{1 - alpha} |a_n|^2, the coefficient form of ||p||_alpha^2.
double coefficient_norm(const TaylorPoly& p, double alpha);

struct DirichletReport {
  double alpha = 0.0;
  double area_value = 0.0;
  std::optional<double> coeff_value;
  double norm_alpha = 0.0;  // |f(0)|^2 + area_value
  std::optional<double> equivalence_ratio;  // ||p||_alpha^2 / coefficient_norm
  std::string method;
  std::size_t grid_points = 0;
  int boundary_layers = 0;
  int max_angular = 0;
};

DirichletReport dirichlet_report(const TaylorPoly& p, double alpha, const DiskGrid& grid);
DirichletReport dirichlet_report(const OuterFunction& f, double alpha, const DiskGrid& grid);

struct RefinementStudy {
  std::vector<int> boundary_layers;
  std::vector<double> values;  // D_alpha over |z|^2 < 1 - grading^{layers+1}
  bool bounded = true;
  double growth_per_layer = 0.0;  // mean of the last two increments
};

// Truncated-disk integrals for layers = base.boundary_layers + 0..extra, all
// from one grid whose rings resolve 1 - |z|^2 down to grading^{layers+1}.
// They increase to D_alpha(f); increments that fail to shrink by
// `contraction` per layer over the last two steps mark f as outside D_alpha.
RefinementStudy dirichlet_refinement(const DerivativeSource& f, double alpha, const DiskGridParams& base,
                                     int extra = 6, double contraction = 0.9);

enum class LocalMethod { area, boundary };

struct LocalDirichletOptions {
  std::optional<DiskGridParams> disk;  // area form; default disk_params_for(n, 4)
  int boundary_oversample = 4;  // boundary form samples Re log F on oversample * n points
};

// D_zeta(f) = (1/pi) int_D |f'|^2 P(z, zeta) dA, or its Richter-Sundberg
// boundary form. The area form evaluates all requested angles in one pass.
std::vector<double> local_dirichlet(const OuterFunction& f, const std::vector<double>& zetas,
                                    LocalMethod method, const LocalDirichletOptions& opt = {});
double local_dirichlet(const OuterFunction& f, double zeta, LocalMethod method,
                       const LocalDirichletOptions& opt = {});

// Positive boundary function with exact arc means.
struct BoundaryWeight {
  std::function<double(double)> value;
  std::function<double(const Arc&)> arc_mean;
  std::string name;
};

// C d(., E_level)^alpha.
BoundaryWeight distance_power_weight(const CantorLevel& level, double alpha, double C);
BoundaryWeight constant_weight(double c);

struct HjensenGate {
  double worst_ratio = 0.0;  // min over arcs of mean_I h / |I|^alpha
  Arc worst_arc = Arc::full_circle();
  int arcs_checked = 0;
  int max_level = 0;
  bool passed() const { return worst_ratio >= 1.0; }
};

// Checks mean_I h >= |I|^alpha on the dyadic arcs [2 pi j 2^-k, 2 pi (j+1) 2^-k),
// k = 0..max_level.
HjensenGate hjensen_gate(const BoundaryWeight& h, double alpha, int max_level);

struct CarlesonAudit {
  double lhs = 0.0;  // D_alpha(f)
  double rhs = 0.0;
  double ratio = 0.0;
  double tolerance = 0.0;
  HjensenGate gate;
  int boundary_samples = 0;
  std::size_t disk_points = 0;
  bool passed() const { return lhs <= rhs * (1.0 + tolerance); }
};

struct CarlesonOptions {
  double tolerance = 1e-3;
  int boundary_oversample = 1;
  int gate_level = -1;  // default: log2 n
  int angular_factor = 2;
};

// D_alpha(f) <= (1/pi) iint (|f*|^2(z) - |f*|^2(z'))(log|f*(z)| - log|f*(z')|)
//               / |z - z'|^2 (h(z) + h(z')) |dz||dz'|.
// Throws AuditRefused if h fails the dyadic gate.
CarlesonAudit carleson_substitute_audit(const OuterFunction& f, const BoundaryWeight& h, double alpha,
                                        const CarlesonOptions& opt = {});

// 2 int_T D_zeta(f) h(zeta) |dzeta| by the area form on the boundary grid.
double fubini_bound(const OuterFunction& f, const BoundaryWeight& h, const LocalDirichletOptions& opt = {});

struct ConcavityScan {
  std::vector<double> gammas;
  std::vector<double> worst_violation;  // largest relative increase of secant slope
  std::optional<double> gamma;           // first admissible gamma
  bool ok() const { return gamma.has_value(); }
};

// Concavity of x -> w(x^gamma) for gamma in (2/(1-alpha), 20], by secant
// slopes on a log grid of x covering t in [t_min, pi].
ConcavityScan concavity_scan(const WeightProfile& w, double alpha, double t_min, int samples = 400,
                             double tolerance = 1e-9);

struct FwAudit {
  double lhs = 0.0;  // D_alpha(f_w)
  double rhs = 0.0;  // int w'(t)^2 t^{1+alpha} N_E(t) dt over [a_N/2, pi]
  double ratio = 0.0;
  ConcavityScan concavity;
  std::size_t n = 0;
  int depth = 0;
};

struct FwOptions {
  std::size_t n = 4096;
  int angular_factor = 2;
  bool enforce_concavity = true;
};

// Throws AuditRefused (with the scan in the message) if concavity fails and
// enforce_concavity is set.
FwAudit fw_estimate_audit(const WeightProfile& w, const CantorLevel& level, double alpha,
                          const FwOptions& opt = {});
// rhs alone.
double fw_bound_integral(const WeightProfile& w, const CantorLevel& level, double alpha);

// ||f_G g||_alpha / (1 + ||g||_alpha) for a polynomial g.
double product_norm_ratio(const OuterFunction& f, const std::vector<Arc>& gamma, const TaylorPoly& g,
                          double alpha, const DiskGrid& grid);

}  // namespace dirlab
