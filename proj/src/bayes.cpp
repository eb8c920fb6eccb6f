#include "loglin/bayes.hpp"

#include "loglin/error.hpp"

#include <algorithm>
#include <numeric>

namespace loglin {

RationalVector default_hyperparameter(const Model& model) {
  RationalVector m;
  m.reserve(model.dim());
  for (const auto& j : model.J()) {
    m.emplace_back(1, static_cast<long>(model.gc().cells_over(j.support)));
  }
  for (const auto& g : theorem_facets(model)) {
    if (g(m) <= 0) fail(ErrorCode::BoundaryOrOutside, "uniform hyperparameter not interior at " + g.label);
  }
  return m;
}

namespace {

void check_table(const Model& model, const ContingencyTable& table) {
  const auto& vars = model.gc().variables();
  if (table.cards().size() != vars.size()) {
    fail(ErrorCode::InvalidArgument, "table and model differ in the number of variables");
  }
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (table.cards()[v] != vars[v].card) {
      fail(ErrorCode::InvalidArgument, "table and model differ in the cardinality of " + vars[v].name);
    }
  }
}

void check_pair(const Model& a, const Model& b) {
  const auto& va = a.gc().variables();
  const auto& vb = b.gc().variables();
  bool same = va.size() == vb.size();
  for (std::size_t v = 0; same && v < va.size(); ++v) {
    same = va[v].name == vb[v].name && va[v].card == vb[v].card;
  }
  if (!same) fail(ErrorCode::InvalidArgument, "models are not on the same variables");
}

}  // namespace

ModelEvidence model_evidence(const Model& model, const ContingencyTable& table, double alpha,
                             const std::optional<RationalVector>& m) {
  check_table(model, table);
  const RationalVector hyper = m ? *m : default_hyperparameter(model);
  ModelEvidence out;
  if (is_decomposable(model.gc())) {
    const DecomposableStructure ds = junction_structure(model.gc());
    out.log_prior = log_I_decomposable(model, ds, hyper, alpha).log_value;
    out.log_posterior = log_I_posterior(model, ds, hyper, alpha, table).log_value;
    out.method = NormalizerMethod::DecomposableClosedForm;
  } else if (model.dim() <= 2) {
    out.log_prior = log_I_quadrature(model, to_double(hyper), alpha).log_value;
    out.log_posterior = log_I_posterior_quadrature(model, hyper, alpha, table).log_value;
    out.method = NormalizerMethod::Quadrature;
  } else {
    fail(ErrorCode::NonComputable,
         "no normalizer route for a non-decomposable model with |J| = " + std::to_string(model.dim()));
  }
  out.score = out.log_posterior - out.log_prior;
  return out;
}

double log_bayes_factor(const Model& model1, const Model& model2, const ContingencyTable& table,
                        double alpha, const std::optional<RationalVector>& m1,
                        const std::optional<RationalVector>& m2) {
  check_pair(model1, model2);
  return model_evidence(model1, table, alpha, m1).score - model_evidence(model2, table, alpha, m2).score;
}

int data_face_dimension(const Model& model, const ContingencyTable& table, HullLimits limits) {
  check_table(model, table);
  const MarginalPolytope poly = complete_polytope(model, limits);
  return face_of_point(poly, data_point(model, table)).dimension;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::FavorsModel1: return "favors_model1";
    case Verdict::FavorsModel2: return "favors_model2";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

BayesReport asymptotic_exponent(const Model& model1, const Model& model2,
                                const ContingencyTable& table, HullLimits limits) {
  check_pair(model1, model2);
  BayesReport r;
  r.k1 = data_face_dimension(model1, table, limits);
  r.k2 = data_face_dimension(model2, table, limits);
  r.exponent = r.k1 - r.k2;
  r.dim1 = model1.dim();
  r.dim2 = model2.dim();
  if (r.exponent > 0) r.verdict = Verdict::FavorsModel2;
  if (r.exponent < 0) r.verdict = Verdict::FavorsModel1;
  return r;
}

BayesReport bayes_report(const Model& model1, const Model& model2, const ContingencyTable& table,
                         std::optional<double> alpha, HullLimits limits) {
  BayesReport r = asymptotic_exponent(model1, model2, table, limits);
  if (is_decomposable(model1.gc()) && is_decomposable(model2.gc())) {
    r.d_edf = static_cast<int>(d_edf(model1, model2, table));
  }
  if (alpha) {
    r.alpha = alpha;
    r.log_B = log_bayes_factor(model1, model2, table, *alpha);
  }
  return r;
}

long edf_index(const Model& model, const DecomposableStructure& ds, const ContingencyTable& table) {
  check_table(model, table);
  long index = 0;
  for (VarSet c : ds.cliques) index += static_cast<long>(table.positive_margins(c));
  for (const auto& s : ds.separators) {
    index -= static_cast<long>(s.multiplicity) * static_cast<long>(table.positive_margins(s.set));
  }
  return index;
}

long d_edf(const Model& model1, const Model& model2, const ContingencyTable& table) {
  check_pair(model1, model2);
  return edf_index(model1, junction_structure(model1.gc()), table) -
         edf_index(model2, junction_structure(model2.gc()), table);
}

std::vector<RankEntry> rank_models(const std::vector<const Model*>& models,
                                   const std::vector<std::string>& names,
                                   const ContingencyTable& table, RankMode mode, double alpha,
                                   HullLimits limits) {
  if (models.size() != names.size()) fail(ErrorCode::InvalidArgument, "one name per model is required");
  if (models.empty()) return {};
  for (const Model* m : models) check_pair(*models.front(), *m);

  std::vector<RankEntry> entries(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    entries[i].name = names[i];
    entries[i].dim = models[i]->dim();
    auto note = [&](const Error& e) {
      std::string msg = std::string(error_code_name(e.code())) + ": " + e.what();
      entries[i].error = entries[i].error ? *entries[i].error + "; " + msg : msg;
    };
    try {
      entries[i].k = data_face_dimension(*models[i], table, limits);
    } catch (const Error& e) {
      note(e);
    }
    if (mode == RankMode::AtAlpha) {
      try {
        entries[i].score = model_evidence(*models[i], table, alpha).score;
      } catch (const Error& e) {
        note(e);
      }
    }
  }
  if (mode == RankMode::AtAlpha && entries.front().score) {
    for (auto& e : entries) {
      if (e.score) e.log_B_vs_reference = *e.score - *entries.front().score;
    }
  }

  // Stable order: by the mode's key, failures last, input order within ties.
  auto key_less = [&](const RankEntry& a, const RankEntry& b) {
    if (mode == RankMode::Asymptotic) return *a.k < *b.k;
    return *a.score > *b.score;
  };
  auto usable = [&](const RankEntry& e) {
    return mode == RankMode::Asymptotic ? e.k.has_value() : e.score.has_value();
  };
  std::stable_sort(entries.begin(), entries.end(), [&](const RankEntry& a, const RankEntry& b) {
    const bool ua = usable(a), ub = usable(b);
    if (ua != ub) return ua;
    if (!ua) return false;
    return key_less(a, b);
  });
  int rank = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!usable(entries[i])) break;
    if (i == 0 || key_less(entries[i - 1], entries[i])) rank = static_cast<int>(i) + 1;
    entries[i].rank = rank;
  }
  return entries;
}

}  // namespace loglin
