#ifndef LOGLIN_NORMALIZERS_HPP
#define LOGLIN_NORMALIZERS_HPP

#include "loglin/junction.hpp"
#include "loglin/model.hpp"
#include "loglin/rational.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace loglin {

/// ln Γ(z) for z > 0; tiny arguments use ln Γ(1+z) - ln z.
/// Throws BoundaryOrOutside for z <= 0.
double log_gamma(double z);

enum class NormalizerMethod { DecomposableClosedForm, Quadrature };
const char* normalizer_method_name(NormalizerMethod m);

struct GammaFactor {
  std::string label;
  double argument = 0.0;
  int power = 1;
};

/// Natural log of the conjugate-prior normalizing constant
/// I(m, α) = ∫ exp(α<θ,m>) / L(θ)^α dθ.
struct LogNormalizer {
  double log_value = 0.0;
  std::vector<double> m;
  double alpha = 0.0;
  NormalizerMethod method = NormalizerMethod::DecomposableClosedForm;
  std::vector<GammaFactor> gamma_factors;
  /// Quadrature only: estimated absolute error of log_value.
  std::optional<double> error_estimate;
};

LogNormalizer log_I_decomposable(const Model& model, const DecomposableStructure& ds,
                                 std::span<const Rational> m, double alpha);

/// Adaptive quadrature for |J| <= 2. Throws DimensionTooLarge beyond that.
LogNormalizer log_I_quadrature(const Model& model, std::span<const double> m, double alpha);

/// Posterior constant I((αm + t)/(α+N), α+N). Gamma arguments are formed as
/// α g(m) + (integer count combination) so small α loses no digits.
LogNormalizer log_I_posterior(const Model& model, const DecomposableStructure& ds,
                              std::span<const Rational> m, double alpha,
                              const ContingencyTable& table);

LogNormalizer log_I_posterior_quadrature(const Model& model, std::span<const Rational> m,
                                         double alpha, const ContingencyTable& table);

struct LimitReport {
  std::vector<double> alphas;
  std::vector<double> log_values;
  /// α^n I(m, α) / J_C(m) per grid point.
  std::vector<double> ratios;
  double slope = 0.0;
  int expected_slope = 0;
};

std::vector<double> default_alpha_grid();

/// Tabulates α^n I(m, α) against J_C(m) and fits the slope of log I
/// against log α.
LimitReport limit_check_alpha_to_zero(const std::function<double(double)>& log_I, std::size_t n,
                                      double jc_value,
                                      const std::vector<double>& alphas = default_alpha_grid());

}  // namespace loglin

#endif  // LOGLIN_NORMALIZERS_HPP
