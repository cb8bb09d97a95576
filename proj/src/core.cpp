#include "dirlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace dirlab {

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("angle is not finite");
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double circle_distance(double theta1, double theta2) {
  double d = std::fabs(wrap_angle(theta1) - wrap_angle(theta2));
  return d > kPi ? kTwoPi - d : d;
}

double chordal_distance(double theta1, double theta2) {
  return 2.0 * std::sin(0.5 * circle_distance(theta1, theta2));
}

Arc::Arc(double start, double length) : start_(wrap_angle(start)), length_(length) {
  if (!(length > 0.0) || length > kTwoPi * (1.0 + 1e-14)) {
    throw InvalidArgument("arc length must lie in (0, 2pi], got " + std::to_string(length));
  }
  length_ = std::min(length, kTwoPi);
}

Arc Arc::between(double a, double b) {
  double len = wrap_angle(b - a);
  if (len == 0.0) len = kTwoPi;
  return Arc(a, len);
}

bool Arc::contains(double theta) const {
  if (is_full()) return true;
  return wrap_angle(theta - start_) < length_;
}

double Arc::distance(double theta) const {
  if (is_full()) return 0.0;
  double offset = wrap_angle(theta - start_);
  if (offset <= length_) return 0.0;
  return std::min(offset - length_, kTwoPi - offset);
}

double Arc::euclidean_distance(Complex z) const {
  double r = std::abs(z);
  if (r == 0.0) return 1.0;
  if (distance(std::arg(z)) == 0.0) return std::fabs(1.0 - r);
  double d1 = std::abs(z - std::polar(1.0, start_));
  double d2 = std::abs(z - std::polar(1.0, end()));
  return std::min(d1, d2);
}

double total_length(std::span<const Arc> arcs) {
  double s = 0.0;
  for (const Arc& a : arcs) s += a.length();
  return s;
}

namespace {

// Union of arcs as sorted disjoint intervals inside [0, 2pi].
std::vector<std::pair<double, double>> merged_intervals(std::span<const Arc> arcs) {
  std::vector<std::pair<double, double>> iv;
  iv.reserve(arcs.size() + 1);
  for (const Arc& a : arcs) {
    if (a.is_full()) return {{0.0, kTwoPi}};
    double lo = a.start(), hi = a.end();
    if (hi <= kTwoPi) {
      iv.emplace_back(lo, hi);
    } else {
      iv.emplace_back(lo, kTwoPi);
      iv.emplace_back(0.0, hi - kTwoPi);
    }
  }
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& [lo, hi] : iv) {
    if (!out.empty() && lo <= out.back().second) {
      out.back().second = std::max(out.back().second, hi);
    } else {
      out.emplace_back(lo, hi);
    }
  }
  return out;
}

}  // namespace

std::vector<Arc> complement(std::span<const Arc> arcs) {
  auto iv = merged_intervals(arcs);
  if (iv.empty()) return {Arc::full_circle()};
  std::vector<Arc> gaps;
  for (std::size_t i = 0; i + 1 < iv.size(); ++i) {
    double len = iv[i + 1].first - iv[i].second;
    if (len > 0.0) gaps.emplace_back(iv[i].second, len);
  }
  double wrap_len = (kTwoPi - iv.back().second) + iv.front().first;
  if (wrap_len > 0.0 && wrap_len < kTwoPi) gaps.emplace_back(iv.back().second, wrap_len);
  std::sort(gaps.begin(), gaps.end(),
            [](const Arc& a, const Arc& b) { return a.start() < b.start(); });
  return gaps;
}

std::vector<double> boundary_points(std::span<const Arc> arcs) {
  std::vector<double> pts;
  for (const Arc& gap : complement(arcs)) {
    if (gap.is_full()) return {};
    pts.push_back(gap.start());
    pts.push_back(wrap_angle(gap.end()));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double euclidean_distance(Complex z, std::span<const Arc> arcs) {
  double best = std::numeric_limits<double>::infinity();
  for (const Arc& a : arcs) best = std::min(best, a.euclidean_distance(z));
  return best;
}

double inflated_measure(std::span<const Arc> arcs, double t) {
  if (t < 0.0) throw InvalidArgument("inflation radius must be nonnegative");
  if (arcs.empty()) return 0.0;
  std::vector<Arc> fat;
  fat.reserve(arcs.size());
  for (const Arc& a : arcs) {
    double len = a.length() + 2.0 * t;
    if (len >= kTwoPi) return kTwoPi;
    fat.emplace_back(a.start() - t, len);
  }
  double covered = 0.0;
  for (const auto& [lo, hi] : merged_intervals(fat)) covered += hi - lo;
  return std::min(covered, kTwoPi);
}

CircleGrid::CircleGrid(std::size_t n) : n_(n) {
  if (n < 8 || n % 2 != 0) {
    throw InvalidArgument("circle grid needs an even sample count >= 8, got " + std::to_string(n));
  }
}

std::vector<double> CircleGrid::angles() const {
  std::vector<double> out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = angle(k);
  return out;
}

double integrate_circle(const CircleGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) {
    throw InvalidArgument("sample count does not match circle grid");
  }
  double s = 0.0;
  for (double v : samples) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite sample in circle integral");
    s += v;
  }
  return s * grid.weight();
}

GaussRule gauss_legendre(int m, double a, double b) {
  if (m < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[m - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[m - 1 - i] = half * w;
  }
  return rule;
}

DiskGrid::DiskGrid(const DiskGridParams& p) : params_(p) {
  if (p.points_per_panel < 1 || p.boundary_layers < 0 || !(p.grading > 0.0 && p.grading < 1.0) ||
      p.min_angular < 2 || p.max_angular < p.min_angular) {
    throw InvalidArgument("invalid disk grid parameters");
  }
  std::vector<double> cuts{0.0};
  for (int l = 1; l <= p.boundary_layers + 1; ++l) cuts.push_back(1.0 - std::pow(p.grading, l));
  cuts.push_back(1.0);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    GaussRule g = gauss_legendre(p.points_per_panel, cuts[k], cuts[k + 1]);
    for (int i = 0; i < p.points_per_panel; ++i) {
      double s = g.nodes[i];
      double r = std::sqrt(s);
      int m = static_cast<int>(std::ceil(p.max_angular * r));
      m += m % 2;
      m = std::clamp(m, p.min_angular + p.min_angular % 2, p.max_angular + p.max_angular % 2);
      rings_.push_back({s, r, kPi * g.weights[i], m});
      size_ += static_cast<std::size_t>(m);
    }
  }
}

std::vector<Complex> DiskGrid::points() const {
  std::vector<Complex> out;
  out.reserve(size_);
  for (const DiskRing& ring : rings_) {
    for (int j = 0; j < ring.angular; ++j) {
      out.push_back(std::polar(ring.radius, kTwoPi * j / ring.angular));
    }
  }
  return out;
}

std::vector<double> DiskGrid::weights() const {
  std::vector<double> out;
  out.reserve(size_);
  for (const DiskRing& ring : rings_) out.insert(out.end(), ring.angular, ring.weight / ring.angular);
  return out;
}

double integrate_disk(const DiskGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw InvalidArgument("value count does not match disk grid");
  double total = 0.0;
  std::size_t k = 0;
  for (const DiskRing& ring : grid.rings()) {
    double s = 0.0;
    for (int j = 0; j < ring.angular; ++j, ++k) {
      if (!std::isfinite(values[k])) throw InvalidArgument("non-finite value in disk integral");
      s += values[k];
    }
    total += ring.weight * s / ring.angular;
  }
  return total;
}

double integrate_disk(const DiskGrid& grid, const std::function<double(Complex)>& f) {
  std::vector<double> values;
  values.reserve(grid.size());
  for (Complex z : grid.points()) values.push_back(f(z));
  return integrate_disk(grid, values);
}

}  // namespace dirlab
