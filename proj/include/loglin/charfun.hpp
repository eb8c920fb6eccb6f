#ifndef LOGLIN_CHARFUN_HPP
#define LOGLIN_CHARFUN_HPP

#include "loglin/junction.hpp"
#include "loglin/polytope.hpp"
#include "loglin/rational.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace loglin {

// Characteristic function J_C(m) = ∫ exp(<θ,m> - h_C(θ)) dθ of the
// interior C of the marginal polytope.

double jc_segment(double m);
Rational jc_segment(const Rational& m);

/// Standard n-simplex conv{0, e_1, ..., e_n}.
double jc_simplex(std::span<const double> m);
Rational jc_simplex(std::span<const Rational> m);

enum class CharFunMethod { ClosedForm, PolarVolume };

struct FactorTerm {
  AffineForm form;
  int exponent = 1;
  Rational value;
};

struct CharFunValue {
  double value = 0.0;
  std::optional<Rational> exact;
  CharFunMethod method = CharFunMethod::ClosedForm;
  /// Closed form only: J_C = prod(numerator^exponent) / prod(denominator^exponent).
  std::vector<FactorTerm> numerator;
  std::vector<FactorTerm> denominator;

  /// Recomputes the value from the factor lists in floating point.
  double from_factors() const;
};

/// Separator forms over clique forms for a decomposable model. m must be
/// strictly interior; throws BoundaryOrOutside otherwise.
CharFunValue jc_decomposable(const Model& model, const DecomposableStructure& ds,
                             std::span<const Rational> m);

/// |J|! Vol((C - m)°) from a complete facet description, exactly.
Rational jc_polar_volume_exact(const MarginalPolytope& poly, std::span<const Rational> m,
                               HullLimits limits = {});

double jc_polar_volume_oracle(const MarginalPolytope& poly, std::span<const Rational> m,
                              HullLimits limits = {});

/// Polar-volume route on an arbitrary full-dimensional polytope given by
/// its complete facet list and vertex list.
Rational polar_volume_value(const std::vector<AffineForm>& facets, const RationalMatrix& vertices,
                            std::span<const Rational> m);

/// ∫_A exp(-<θ,x>) dθ over the simplicial cone A = {θ : <θ, x_k> > 0},
/// basis vectors given as rows. Evaluated exactly on the dyadic inputs.
/// Throws Singular for a dependent basis, WrongCone if x is not in -A°.
double simplicial_cone_integral(const std::vector<std::vector<double>>& basis,
                                std::span<const double> x);

struct ProbeOptions {
  int first_exponent = 5;   // largest λ = 2^-first_exponent
  int last_exponent = 20;   // smallest λ = 2^-last_exponent
  int fit_points = 8;       // slope fitted on the smallest-λ points
};

struct ProbeReport {
  std::vector<double> lambdas;
  std::vector<double> log_values;
  double slope = 0.0;
  std::optional<int> expected_slope;
  /// λ^{n-k} J_C at the smallest λ: an empirical estimate of the limit
  /// constant, not a closed form.
  double plateau_estimate = 0.0;
};

/// Fits the log-log slope of J_C(λm + (1-λ)y) as λ -> 0. `log_jc` returns
/// log J_C at an interior point. When `codim` (n - k) is given the expected
/// slope is -codim.
ProbeReport boundary_scaling_probe(const std::function<double(const RationalVector&)>& log_jc,
                                   std::span<const Rational> y, std::span<const Rational> m,
                                   std::optional<int> codim, ProbeOptions options = {});

}  // namespace loglin

#endif  // LOGLIN_CHARFUN_HPP
