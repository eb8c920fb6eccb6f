#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loglin/bayes.hpp"
#include "loglin/error.hpp"
#include "loglin/junction.hpp"
#include "loglin/numeric.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace loglin;
using loglin::test::make_model;
using loglin::test::make_table;
using loglin::test::random_sparse_table;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

// Dirichlet-multinomial evidence of the counts aggregated over `set`, with
// α/|I_set| per margin cell.
double dirichlet_multinomial(const Model& model, const ContingencyTable& table, VarSet set, double alpha) {
  std::map<std::vector<int>, std::int64_t> margin;
  for (const auto& [cell, n] : table.counts()) {
    std::vector<int> key;
    for (int v = 0; v < model.gc().num_variables(); ++v) {
      if (set & (VarSet{1} << v)) key.push_back(cell.levels[v]);
    }
    margin[key] += n;
  }
  const double cells = static_cast<double>(model.gc().cells_over(set));
  const double a = alpha / cells;
  double out = std::lgamma(alpha) - std::lgamma(alpha + static_cast<double>(table.total()));
  for (const auto& [key, n] : margin) out += std::lgamma(a + static_cast<double>(n)) - std::lgamma(a);
  return out;
}

// Evidence of a decomposable model as clique terms over separator terms.
double hyper_dirichlet(const Model& model, const ContingencyTable& table, double alpha) {
  const auto ds = junction_structure(model.gc());
  double out = 0.0;
  for (VarSet c : ds.cliques) out += dirichlet_multinomial(model, table, c, alpha);
  for (const auto& s : ds.separators) out -= s.multiplicity * dirichlet_multinomial(model, table, s.set, alpha);
  return out;
}

double alpha_slope(const Model& m1, const Model& m2, const ContingencyTable& t) {
  std::vector<double> xs, ys;
  for (double a : {1e-4, 1e-5, 1e-6, 1e-7}) {
    xs.push_back(std::log(a));
    ys.push_back(log_bayes_factor(m1, m2, t, a));
  }
  return fit_slope(xs, ys);
}

// Cells are listed with a as the slowest variable: index 4a + 2b + c.
ContingencyTable positive_on(const Model& m, std::initializer_list<int> cells) {
  std::vector<std::int64_t> dense(8, 0);
  int n = 1;
  for (int c : cells) dense[c] = n++;
  return make_table(m, dense);
}

}  // namespace

TEST_CASE("default hyperparameter is the uniform table's margins") {
  const RationalVector a3 = default_hyperparameter(make_model("ab,bc"));
  CHECK(a3 == RationalVector{Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 4), Rational(1, 4)});
  const RationalVector three = default_hyperparameter(make_model("a", {3}));
  CHECK(three == RationalVector{Rational(1, 3), Rational(1, 3)});
  const RationalVector mixed = default_hyperparameter(make_model("ab", {3, 2}));
  CHECK(mixed.back() == Rational(1, 6));
}

TEST_CASE("model evidence equals the Dirichlet-multinomial form") {
  std::mt19937_64 rng(41);
  for (auto [gens, cards] : std::vector<std::pair<const char*, std::vector<int>>>{
           {"abc", {}}, {"ab,bc", {}}, {"ab,bc", {3, 2, 2}}, {"a,b,c", {}}, {"ab,ac,ad", {}}}) {
    CAPTURE(gens);
    const Model m = make_model(gens, cards);
    for (double alpha : {1e-3, 1.0, 12.0}) {
      const auto t = random_sparse_table(m, rng, 0.3);
      const ModelEvidence e = model_evidence(m, t, alpha);
      const double oracle = hyper_dirichlet(m, t, alpha);
      CHECK(std::abs(e.score - oracle) < 1e-9 * std::max(1.0, std::abs(oracle)));
      CHECK(e.score == doctest::Approx(e.log_posterior - e.log_prior));
    }
  }
}

TEST_CASE("evidence routes") {
  const Model sat = make_model("a", {3});
  const auto t3 = make_table(sat, {2, 5, 1});
  const ModelEvidence e = model_evidence(sat, t3, 0.7);
  CHECK(e.method == NormalizerMethod::DecomposableClosedForm);
  // The same score through the quadrature normalizers.
  const RationalVector m = default_hyperparameter(sat);
  const double prior = log_I_quadrature(sat, to_double(m), 0.7).log_value;
  const double post = log_I_posterior_quadrature(sat, m, 0.7, t3).log_value;
  CHECK(std::abs((post - prior) - e.score) < 1e-7);
  CHECK(std::abs(e.score - hyper_dirichlet(sat, t3, 0.7)) < 1e-10);

  const Model c4 = make_model("ab,bc,cd,ad");
  std::mt19937_64 rng(2);
  const auto t4 = random_sparse_table(c4, rng, 0.2);
  CHECK(code_of([&] { model_evidence(c4, t4, 1.0); }) == ErrorCode::NonComputable);
}

TEST_CASE("log Bayes factor is antisymmetric") {
  const Model sat = make_model("abc");
  const Model a3 = make_model("ab,bc");
  const Model indep = make_model("a,b,c");
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_sparse_table(sat, rng, 0.25);
    for (double alpha : {1e-5, 0.5, 3.0}) {
      CHECK(log_bayes_factor(sat, a3, t, alpha) == -log_bayes_factor(a3, sat, t, alpha));
      CHECK(log_bayes_factor(a3, a3, t, alpha) == 0.0);
      const double chain = log_bayes_factor(sat, a3, t, alpha) + log_bayes_factor(a3, indep, t, alpha);
      CHECK(std::abs(chain - log_bayes_factor(sat, indep, t, alpha)) < 1e-9);
    }
  }
  const Model other = make_model("ab");
  CHECK(code_of([&] { log_bayes_factor(sat, other, make_table(sat, {1, 1, 1, 1, 1, 1, 1, 1}), 1.0); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("saturated vs A3 exponents and alpha slopes") {
  const Model sat = make_model("abc");
  const Model a3 = make_model("ab,bc");
  struct Case {
    ContingencyTable table;
    int k1, k2;
  };
  const std::vector<Case> cases{
      {positive_on(sat, {0, 1, 2, 3, 4, 5, 6, 7}), 7, 5},
      {positive_on(sat, {1, 2, 3, 4, 5, 6, 7}), 6, 5},
      {positive_on(sat, {2, 3, 4, 5, 6}), 4, 4},
      {positive_on(sat, {0, 5, 2, 6}), 3, 4},
  };
  for (const auto& c : cases) {
    const BayesReport r = bayes_report(sat, a3, c.table, 1e-3);
    CHECK(r.k1 == c.k1);
    CHECK(r.k2 == c.k2);
    CHECK(r.exponent == c.k1 - c.k2);
    REQUIRE(r.d_edf);
    CHECK(*r.d_edf == r.exponent);
    CHECK(r.verdict == (r.exponent > 0   ? Verdict::FavorsModel2
                        : r.exponent < 0 ? Verdict::FavorsModel1
                                         : Verdict::Indeterminate));
    CHECK(std::abs(alpha_slope(sat, a3, c.table) - r.exponent) < 0.05);
  }
}

TEST_CASE("edf index equals k + 1 and d_edf equals the exponent") {
  std::mt19937_64 rng(47);
  const std::vector<const char*> gens{"abc", "ab,bc", "a,bc", "a,b,c", "ab,bc,cd", "ab,ac,ad", "abc,bcd"};
  for (const char* g : gens) {
    const Model m = make_model(g);
    const auto ds = junction_structure(m.gc());
    for (int trial = 0; trial < 8; ++trial) {
      const auto t = random_sparse_table(m, rng, 0.6);
      CHECK(edf_index(m, ds, t) == data_face_dimension(m, t) + 1);
    }
  }
  const Model m1 = make_model("abc,bcd");
  const Model m2 = make_model("ab,bc,cd");
  const Model m3 = make_model("a,b,c,d");
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_sparse_table(m1, rng, 0.7);
    const int e12 = asymptotic_exponent(m1, m2, t).exponent;
    const int e23 = asymptotic_exponent(m2, m3, t).exponent;
    CHECK(d_edf(m1, m2, t) == e12);
    CHECK(asymptotic_exponent(m1, m3, t).exponent == e12 + e23);
  }
}

TEST_CASE("ranking") {
  const Model sat = make_model("abc");
  const Model a3 = make_model("ab,bc");
  const Model a3b = make_model("bc,ab");
  const Model cyc = make_model("ab,bc,ca");
  const auto t = positive_on(sat, {0, 1, 2, 3, 4, 5, 6, 7});

  const auto asym = rank_models({&sat, &a3, &cyc}, {"sat", "a3", "cycle"}, t, RankMode::Asymptotic);
  REQUIRE(asym.size() == 3);
  CHECK(asym[0].name == "a3");
  CHECK(asym[0].rank == 1);
  CHECK(*asym[0].k == 5);
  CHECK(asym.back().name == "sat");

  const auto tied = rank_models({&a3, &a3b}, {"x", "y"}, t, RankMode::Asymptotic);
  CHECK(tied[0].rank == 1);
  CHECK(tied[1].rank == 1);

  const auto at = rank_models({&sat, &a3, &cyc}, {"sat", "a3", "cycle"}, t, RankMode::AtAlpha, 2.0);
  int scored = 0;
  for (std::size_t i = 0; i + 1 < at.size(); ++i) {
    if (at[i].score && at[i + 1].score) CHECK(*at[i].score >= *at[i + 1].score);
  }
  for (const auto& e : at) {
    if (e.name == "cycle") {
      CHECK(e.error);
      CHECK_FALSE(e.score);
    } else {
      CHECK(e.score);
      ++scored;
    }
    if (e.name == "sat") CHECK(*e.log_B_vs_reference == 0.0);
  }
  CHECK(scored == 2);
}
