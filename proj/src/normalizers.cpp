#include "loglin/normalizers.hpp"

#include "loglin/error.hpp"
#include "loglin/numeric.hpp"
#include "loglin/polytope.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace loglin {

double log_gamma(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    std::ostringstream msg;
    msg << "gamma argument " << z << " is not positive";
    fail(ErrorCode::BoundaryOrOutside, msg.str());
  }
  if (z < 1e-12) return boost::math::lgamma(1.0 + z) - std::log(z);
  return boost::math::lgamma(z);
}

const char* normalizer_method_name(NormalizerMethod m) {
  switch (m) {
    case NormalizerMethod::DecomposableClosedForm: return "decomposable_closed_form";
    case NormalizerMethod::Quadrature: return "quadrature";
  }
  return "unknown";
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
}

void check_structure(const Model& model, const DecomposableStructure& ds) {
  std::vector<VarSet> cliques = ds.cliques;
  std::sort(cliques.begin(), cliques.end(), canonical_less);
  if (cliques != model.gc().generators()) {
    fail(ErrorCode::NotDecomposable, "junction structure does not match the model");
  }
}

// Gamma-product closed form. `argument` maps a form to its gamma argument
// and `alpha` is the total concentration.
template <typename Argument>
LogNormalizer closed_form(const Model& model, const DecomposableStructure& ds, double alpha,
                          Argument argument) {
  LogNormalizer out;
  out.alpha = alpha;
  out.method = NormalizerMethod::DecomposableClosedForm;
  double log_value = 0.0;
  auto add = [&](const AffineForm& g, int power) {
    const double z = argument(g);
    if (!(z > 0.0)) {
      fail(ErrorCode::BoundaryOrOutside, "gamma argument of " + g.label + " is not positive");
    }
    log_value += power * log_gamma(z);
    out.gamma_factors.push_back(GammaFactor{g.label, z, power});
  };
  for (VarSet c : ds.cliques) {
    for (const auto& g : set_forms(model, c)) add(g, 1);
  }
  log_value -= log_gamma(alpha);
  out.gamma_factors.push_back(GammaFactor{"alpha", alpha, -1});
  for (const auto& sep : ds.separators) {
    for (const auto& g : set_forms(model, sep.set)) add(g, -sep.multiplicity);
  }
  out.log_value = log_value;
  return out;
}

}  // namespace

LogNormalizer log_I_decomposable(const Model& model, const DecomposableStructure& ds,
                                 std::span<const Rational> m, double alpha) {
  check_alpha(alpha);
  check_structure(model, ds);
  if (m.size() != model.dim()) fail(ErrorCode::InvalidArgument, "m has the wrong length");
  LogNormalizer out = closed_form(model, ds, alpha, [&](const AffineForm& g) {
    const Rational v = g(m);
    if (v <= 0) fail(ErrorCode::BoundaryOrOutside, "m is not interior at " + g.label);
    return alpha * to_double(v);
  });
  out.m = to_double(m);
  return out;
}

LogNormalizer log_I_posterior(const Model& model, const DecomposableStructure& ds,
                              std::span<const Rational> m, double alpha,
                              const ContingencyTable& table) {
  check_alpha(alpha);
  check_structure(model, ds);
  if (m.size() != model.dim()) fail(ErrorCode::InvalidArgument, "m has the wrong length");
  const std::vector<std::int64_t> t = marginal_counts(model, table);
  const std::int64_t total = table.total();
  const double post_alpha = alpha + static_cast<double>(total);
  LogNormalizer out = closed_form(model, ds, post_alpha, [&](const AffineForm& g) {
    const Rational v = g(m);
    if (v <= 0) fail(ErrorCode::BoundaryOrOutside, "m is not interior at " + g.label);
    return alpha * to_double(v) + to_double(g.on_counts(t, total));
  });
  for (std::size_t k = 0; k < m.size(); ++k) {
    out.m.push_back((alpha * to_double(m[k]) + static_cast<double>(t[k])) / post_alpha);
  }
  return out;
}

namespace {

constexpr std::size_t kMaxQuadratureDim = 2;

// Integrand of α^n I(m, α) in y = αθ:
// φ(y) = <y, m> - α log Σ_i exp(<y, f_i> / α).
class QuadratureProblem {
 public:
  QuadratureProblem(const Model& model, std::span<const double> m, double alpha)
      : m_(m.begin(), m.end()), alpha_(alpha) {
    for (std::size_t k = 0; k < model.num_cells(); ++k) {
      const auto f = f_vector(model, model.cell(k));
      points_.emplace_back(f.begin(), f.end());
    }
  }

  std::size_t dim() const { return m_.size(); }

  double phi(std::span<const double> y) const {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& f : points_) top = std::max(top, dot(f, y));
    double sum = 0.0;
    for (const auto& f : points_) sum += std::exp((dot(f, y) - top) / alpha_);
    return dot(m_, y) - top - alpha_ * std::log(sum);
  }

  // Maximizer of φ over the coordinates in `free`, the others held at y.
  // φ is concave; Newton with backtracking in θ = y/α.
  std::vector<double> peak(std::vector<double> y, const std::vector<std::size_t>& free) const {
    const std::size_t r = free.size();
    for (int iter = 0; iter < 200; ++iter) {
      std::vector<double> z;
      for (const auto& f : points_) z.push_back(dot(f, y) / alpha_);
      const double lse = log_sum_exp(z);
      std::vector<double> mean(r, 0.0);
      std::vector<std::vector<double>> second(r, std::vector<double>(r, 0.0));
      for (std::size_t i = 0; i < points_.size(); ++i) {
        const double p = std::exp(z[i] - lse);
        for (std::size_t a = 0; a < r; ++a) {
          mean[a] += p * points_[i][free[a]];
          for (std::size_t b = 0; b < r; ++b) second[a][b] += p * points_[i][free[a]] * points_[i][free[b]];
        }
      }
      std::vector<double> grad(r);
      double gnorm = 0.0;
      for (std::size_t a = 0; a < r; ++a) {
        grad[a] = m_[free[a]] - mean[a];
        gnorm = std::max(gnorm, std::abs(grad[a]));
      }
      if (gnorm < 1e-14) break;
      // Step in θ solves Cov · s = grad; r <= 2.
      std::vector<double> step(r);
      if (r == 1) {
        const double var = second[0][0] - mean[0] * mean[0];
        step[0] = grad[0] / std::max(var, 1e-300);
      } else {
        const double c00 = second[0][0] - mean[0] * mean[0];
        const double c01 = second[0][1] - mean[0] * mean[1];
        const double c11 = second[1][1] - mean[1] * mean[1];
        const double det = std::max(c00 * c11 - c01 * c01, 1e-300);
        step[0] = (c11 * grad[0] - c01 * grad[1]) / det;
        step[1] = (c00 * grad[1] - c01 * grad[0]) / det;
      }
      const double current = phi(y);
      double t = 1.0;
      bool moved = false;
      for (int half = 0; half < 60; ++half, t *= 0.5) {
        std::vector<double> trial = y;
        for (std::size_t a = 0; a < r; ++a) trial[free[a]] += t * alpha_ * step[a];
        if (phi(trial) >= current) {
          moved = trial != y;
          y = std::move(trial);
          break;
        }
      }
      if (!moved) break;
    }
    return y;
  }

  // -d²φ/dr² along the unit direction u: Var_p(<u, f>) / α.
  double curvature(std::span<const double> y, std::span<const double> u) const {
    std::vector<double> z;
    for (const auto& f : points_) z.push_back(dot(f, y) / alpha_);
    const double lse = log_sum_exp(z);
    double mean = 0.0, second = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double p = std::exp(z[i] - lse);
      const double v = dot(points_[i], u);
      mean += p * v;
      second += p * v * v;
    }
    return std::max(second - mean * mean, 0.0) / alpha_;
  }

  // Directions u with <u, f_i - f_k> = 0, as angles in [0, 2π).
  std::vector<double> kink_angles() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      for (std::size_t k = i + 1; k < points_.size(); ++k) {
        const double d0 = points_[i][0] - points_[k][0];
        const double d1 = points_[i][1] - points_[k][1];
        if (d0 == 0.0 && d1 == 0.0) continue;
        for (double sign : {1.0, -1.0}) {
          double a = std::atan2(sign * d0, -sign * d1);
          if (a < 0.0) a += 2.0 * std::numbers::pi;
          out.push_back(a);
        }
      }
    }
    return out;
  }

  double alpha() const { return alpha_; }

 private:
  static double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
  }

  std::vector<std::vector<double>> points_;
  std::vector<double> m_;
  double alpha_;
};

struct PiecewiseResult {
  double value = 0.0;
  double error = 0.0;
};

constexpr double kQuadratureTolerance = 1e-12;
constexpr unsigned kQuadratureDepth = 20;

constexpr double kOuterTolerance = 1e-10;
constexpr unsigned kOuterDepth = 12;

// ∫_0^∞ exp(φ(top + r u) - shift) r^power dr. Cuts run geometrically from
// the smallest feature width until φ has dropped by 60.
PiecewiseResult integrate_ray(const QuadratureProblem& problem, const std::vector<double>& top,
                              std::span<const double> u, double shift, int power) {
  using boost::math::quadrature::gauss_kronrod;
  std::vector<double> y(top.size());
  auto at = [&](double r) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = top[k] + r * u[k];
    return problem.phi(y) - shift;
  };
  auto g = [&](double r) { return std::exp(at(r)) * (power == 0 ? 1.0 : r); };
  // The smoothed kinks have width of order α; the peak has width 1/sqrt(curv).
  const double curv = problem.curvature(top, u);
  double r = 0.25 * std::min(problem.alpha(), curv > 0.0 ? 1.0 / std::sqrt(curv) : 1.0);
  std::vector<double> cuts{0.0, r};
  for (int step = 0; step < 400 && at(r) > -60.0; ++step) {
    r *= 2.0;
    cuts.push_back(r);
  }
  // Each piece is mapped onto [0, 1]: the error estimate has an absolute
  // floor proportional to |integrand|, which short pieces cannot meet.
  PiecewiseResult out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double width = cuts[k + 1] - lo;
    auto scaled = [&](double s) { return width * g(lo + width * s); };
    double err = 0.0;
    out.value += gauss_kronrod<double, 61>::integrate(scaled, 0.0, 1.0, kQuadratureDepth,
                                                      kQuadratureTolerance, &err);
    out.error += err;
  }
  // Beyond the last cut φ decays at least linearly; bound the tail by its slope there.
  const double last = cuts.back();
  const double slope = (at(last) - at(last / 2)) / (last / 2);
  if (slope < 0.0) out.error += std::exp(at(last)) * (power == 0 ? 1.0 : last) / -slope;
  return out;
}

// ∫_{R^2} exp(φ - shift) in polar coordinates about the peak, with angular
// cuts at the kink directions.
PiecewiseResult integrate_polar(const QuadratureProblem& problem, const std::vector<double>& top,
                                double shift) {
  using boost::math::quadrature::gauss_kronrod;
  const double two_pi = 2.0 * std::numbers::pi;
  double inner_error = 0.0;
  auto radial = [&](double angle) {
    const std::array<double, 2> u{std::cos(angle), std::sin(angle)};
    const PiecewiseResult r = integrate_ray(problem, top, u, shift, 1);
    inner_error = std::max(inner_error, r.error / std::max(r.value, 1e-300));
    return r.value;
  };
  std::vector<double> angles = problem.kink_angles();
  angles.push_back(0.0);
  angles.push_back(two_pi);
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  PiecewiseResult out;
  for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
    const double lo = angles[k];
    const double width = angles[k + 1] - lo;
    if (width < 1e-15) continue;
    auto scaled = [&](double s) { return width * radial(lo + width * s); };
    double err = 0.0;
    out.value += gauss_kronrod<double, 61>::integrate(scaled, 0.0, 1.0, kOuterDepth, kOuterTolerance, &err);
    out.error += err;
  }
  out.error += inner_error * out.value;
  return out;
}

}  // namespace

LogNormalizer log_I_quadrature(const Model& model, std::span<const double> m, double alpha) {
  check_alpha(alpha);
  const std::size_t n = model.dim();
  if (n > kMaxQuadratureDim) {
    fail(ErrorCode::DimensionTooLarge,
         "quadrature is limited to |J| <= 2 (got " + std::to_string(n) + ")");
  }
  if (m.size() != n) fail(ErrorCode::InvalidArgument, "m has the wrong length");
  {
    // Interior check on the complete facet list.
    const MarginalPolytope poly = complete_polytope(model);
    for (const auto& g : poly.facets) {
      if (!(g.eval(m) > 0.0)) fail(ErrorCode::BoundaryOrOutside, "m is not interior at " + g.label);
    }
  }
  QuadratureProblem problem(model, m, alpha);
  std::vector<std::size_t> all(n);
  for (std::size_t k = 0; k < n; ++k) all[k] = k;
  const std::vector<double> top = problem.peak(std::vector<double>(n, 0.0), all);
  const double shift = problem.phi(top);

  PiecewiseResult result;
  if (n == 1) {
    for (double dir : {1.0, -1.0}) {
      const std::array<double, 1> u{dir};
      const PiecewiseResult r = integrate_ray(problem, top, u, shift, 0);
      result.value += r.value;
      result.error += r.error;
    }
  } else {
    result = integrate_polar(problem, top, shift);
  }
  if (!(result.value > 0.0) || !std::isfinite(result.value)) {
    fail(ErrorCode::NonConvergence, "quadrature returned a non-positive integral");
  }
  const double rel_error = result.error / result.value;
  if (rel_error > 1e-8) {
    std::ostringstream msg;
    msg << "quadrature error estimate " << rel_error << " exceeds 1e-8 (alpha " << alpha << ")";
    fail(ErrorCode::NonConvergence, msg.str());
  }
  LogNormalizer out;
  out.log_value = std::log(result.value) + shift - static_cast<double>(n) * std::log(alpha);
  out.m.assign(m.begin(), m.end());
  out.alpha = alpha;
  out.method = NormalizerMethod::Quadrature;
  out.error_estimate = rel_error;
  return out;
}

LogNormalizer log_I_posterior_quadrature(const Model& model, std::span<const Rational> m,
                                         double alpha, const ContingencyTable& table) {
  check_alpha(alpha);
  if (m.size() != model.dim()) fail(ErrorCode::InvalidArgument, "m has the wrong length");
  const std::vector<std::int64_t> t = marginal_counts(model, table);
  const double post_alpha = alpha + static_cast<double>(table.total());
  std::vector<double> shifted;
  for (std::size_t k = 0; k < m.size(); ++k) {
    shifted.push_back((alpha * to_double(m[k]) + static_cast<double>(t[k])) / post_alpha);
  }
  return log_I_quadrature(model, shifted, post_alpha);
}

std::vector<double> default_alpha_grid() { return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7}; }

LimitReport limit_check_alpha_to_zero(const std::function<double(double)>& log_I, std::size_t n,
                                      double jc_value, const std::vector<double>& alphas) {
  if (!(jc_value > 0.0)) fail(ErrorCode::InvalidArgument, "J_C value must be positive");
  LimitReport report;
  report.expected_slope = -static_cast<int>(n);
  std::vector<double> xs;
  for (double a : alphas) {
    check_alpha(a);
    const double v = log_I(a);
    report.alphas.push_back(a);
    report.log_values.push_back(v);
    report.ratios.push_back(std::exp(v + static_cast<double>(n) * std::log(a) - std::log(jc_value)));
    xs.push_back(std::log(a));
  }
  report.slope = fit_slope(xs, report.log_values);
  return report;
}

}  // namespace loglin
