#ifndef LOGLIN_BAYES_HPP
#define LOGLIN_BAYES_HPP

#include "loglin/junction.hpp"
#include "loglin/model.hpp"
#include "loglin/normalizers.hpp"
#include "loglin/polytope.hpp"
#include "loglin/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace loglin {

/// m = H(u) for the fictive table u with every cell equal to 1/|I|, i.e.
/// m_j = 1/|I_{S(j)}|.
RationalVector default_hyperparameter(const Model& model);

/// log I(posterior) - log I(prior): the log marginal likelihood up to a
/// term shared by all models. Closed form for decomposable models,
/// quadrature for |J| <= 2, NonComputable otherwise.
struct ModelEvidence {
  double log_prior = 0.0;
  double log_posterior = 0.0;
  double score = 0.0;
  NormalizerMethod method = NormalizerMethod::DecomposableClosedForm;
};

ModelEvidence model_evidence(const Model& model, const ContingencyTable& table, double alpha,
                             const std::optional<RationalVector>& m = std::nullopt);

/// log B_{1,2}. Antisymmetric by construction.
double log_bayes_factor(const Model& model1, const Model& model2, const ContingencyTable& table,
                        double alpha, const std::optional<RationalVector>& m1 = std::nullopt,
                        const std::optional<RationalVector>& m2 = std::nullopt);

/// Dimension of the face of the closed marginal polytope holding t/N in its
/// relative interior.
int data_face_dimension(const Model& model, const ContingencyTable& table, HullLimits limits = {});

enum class Verdict { FavorsModel1, FavorsModel2, Indeterminate };
const char* verdict_name(Verdict v);

struct BayesReport {
  std::optional<double> alpha;
  std::optional<double> log_B;
  int k1 = 0;
  int k2 = 0;
  int exponent = 0;
  std::size_t dim1 = 0;
  std::size_t dim2 = 0;
  std::optional<int> d_edf;
  Verdict verdict = Verdict::Indeterminate;
};

/// k1 - k2 and the verdict as α -> 0: positive exponent favors model 2.
BayesReport asymptotic_exponent(const Model& model1, const Model& model2,
                                const ContingencyTable& table, HullLimits limits = {});

/// Full report: exponent and verdict, d_edf when both are decomposable, and
/// log B at `alpha` when given.
BayesReport bayes_report(const Model& model1, const Model& model2, const ContingencyTable& table,
                         std::optional<double> alpha, HullLimits limits = {});

/// Σ_C #{positive C-margins} - Σ_S ν(S) #{positive S-margins}. Equals k + 1.
long edf_index(const Model& model, const DecomposableStructure& ds, const ContingencyTable& table);

long d_edf(const Model& model1, const Model& model2, const ContingencyTable& table);

enum class RankMode { Asymptotic, AtAlpha };

struct RankEntry {
  std::string name;
  std::size_t dim = 0;
  std::optional<int> k;
  std::optional<double> score;
  /// log B_{i,ref} against the first listed model.
  std::optional<double> log_B_vs_reference;
  /// 1-based; tied models share a rank.
  int rank = 0;
  std::optional<std::string> error;
};

std::vector<RankEntry> rank_models(const std::vector<const Model*>& models,
                                   const std::vector<std::string>& names,
                                   const ContingencyTable& table, RankMode mode,
                                   double alpha = 1.0, HullLimits limits = {});

}  // namespace loglin

#endif  // LOGLIN_BAYES_HPP
