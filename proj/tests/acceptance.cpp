// Acceptance suite: one PASS/FAIL/BLOCKED line per criterion. Exits nonzero
// if any criterion fails; a BLOCKED criterion has every checkable part
// passing and one part that no correct implementation can satisfy.

#include <json.hpp>

#include "cli_runner.hpp"
#include "loglin/bayes.hpp"
#include "loglin/charfun.hpp"
#include "loglin/error.hpp"
#include "loglin/junction.hpp"
#include "loglin/normalizers.hpp"
#include "loglin/numeric.hpp"
#include "loglin/polytope.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace loglin;
using loglin::test::form_from_labels;
using loglin::test::make_model;
using loglin::test::make_table;
using loglin::test::random_interior_point;
using loglin::test::random_sparse_table;
using loglin::test::run_cli;
using loglin::test::slurp;
using loglin::test::write_text;
using nlohmann::json;

namespace {

const std::string kCli = LOGLIN_CLI_PATH;
const fs::path kData = LOGLIN_TEST_DATA;

enum class Status { Pass, Fail, Blocked };

// Collects failed and blocked sub-checks of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void block(const std::string& what) { blocked_.push_back(what); }
  void note(const std::string& what) { notes_.push_back(what); }

  Status status() const {
    if (!failures_.empty()) return Status::Fail;
    return blocked_.empty() ? Status::Pass : Status::Blocked;
  }
  std::string detail() const {
    std::ostringstream out;
    const auto& list = !failures_.empty() ? failures_ : !blocked_.empty() ? blocked_ : notes_;
    for (std::size_t k = 0; k < list.size() && k < 4; ++k) out << (k ? "; " : "") << list[k];
    if (list.size() > 4) out << "; ... (" << list.size() << " total)";
    return out.str();
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> blocked_;
  std::vector<std::string> notes_;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

// Vertex subsets T ⊆ {a, b, c} written as in the listing: "0" for ∅.
std::string subset_name(const Cell& cell) {
  std::string s;
  for (std::size_t v = 0; v < cell.levels.size(); ++v) {
    if (cell.levels[v] == 1) s += static_cast<char>('a' + v);
  }
  return s.empty() ? "0" : s;
}

std::set<std::string> incidence(const MarginalPolytope& poly, const AffineForm& g) {
  std::set<std::string> out;
  for (const auto& v : poly.vertices) {
    if (g.at_vertex(v.coords) == 0) out.insert(subset_name(v.cell));
  }
  return out;
}

AffineForm form_from_cli(const Model& model, const json& f) {
  AffineForm g;
  g.constant = parse_rational(f["constant"].get<std::string>());
  g.coeffs.assign(model.dim(), Rational(0));
  for (const auto& [label, c] : f["coeffs"].items()) {
    g.coeffs[*model.J().find_label(label)] = parse_rational(c.get<std::string>());
  }
  return g;
}

bool contains(const std::vector<AffineForm>& list, const AffineForm& g) {
  for (const auto& h : list) {
    if (h.same_halfspace(g)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

void facet_catalogue(Check& c) {
  const Model a3 = make_model("ab,bc");
  const MarginalPolytope poly = build_polytope(a3);
  // Vertex-incidence sets of the eight facets as printed for A3.
  const std::set<std::set<std::string>> listing{
      {"a", "b", "ab", "bc", "ac", "abc"}, {"0", "b", "c", "ab", "bc", "abc"}, {"0", "a", "c", "ab", "ac", "abc"},
      {"0", "a", "b", "c", "bc", "ac"},    {"b", "c", "ab", "bc", "ac", "abc"}, {"0", "a", "b", "ab", "bc", "abc"},
      {"0", "a", "c", "bc", "ac", "abc"},  {"0", "a", "b", "c", "ab", "ac"}};
  auto normalize = [](std::set<std::string> s) {
    // "ac" and "ca" name the same subset; keep letters sorted.
    std::set<std::string> out;
    for (auto x : s) {
      std::sort(x.begin(), x.end());
      out.insert(x);
    }
    return out;
  };
  std::set<std::set<std::string>> expected;
  for (const auto& s : listing) expected.insert(normalize(s));

  const auto cli = run_cli(kCli, {"polytope", "facets", "--model", (kData / "a3.json").string(), "--route", "theorem"});
  c.expect(cli.exit_code == 0, "CLI theorem route exit " + std::to_string(cli.exit_code));
  if (cli.exit_code != 0) return;
  const json doc = json::parse(cli.out);
  std::set<std::set<std::string>> from_cli;
  for (const auto& f : doc["facets"]) from_cli.insert(incidence(poly, form_from_cli(a3, f)));
  c.expect(doc["facets"].size() == 8, "theorem route lists " + std::to_string(doc["facets"].size()) + " facets");
  c.expect(from_cli == expected, "theorem-route incidence sets differ from the listing");

  const auto hull = hull_facets_oracle(poly);
  std::set<std::set<std::string>> from_hull;
  for (const auto& g : hull) from_hull.insert(incidence(poly, g));
  c.expect(hull.size() == 8, "hull oracle gives " + std::to_string(hull.size()) + " facets");
  c.expect(from_hull == expected, "hull incidence sets differ from the listing");
  c.note("8 facets, incidence sets match (CLI theorem route and hull)");
}

void decomposable_completeness(Check& c) {
  for (auto [gens, cards, name] : std::vector<std::tuple<const char*, std::vector<int>, const char*>>{
           {"abc", {}, "clique abc"}, {"ab,bc", {}, "A3"}, {"ab,bc", {3, 2, 2}, "A3 |I_a|=3"}, {"ab,bc,cd", {}, "4-chain"}}) {
    const Model m = make_model(gens, cards);
    const auto dec = decomposable_facets(m, junction_structure(m.gc()));
    const auto hull = hull_facets_oracle(build_polytope(m));
    c.expect(dec.size() == hull.size() && same_facet_set(dec, hull), std::string(name) + ": facet sets differ");
    c.note(std::string(name) + " " + std::to_string(hull.size()));
  }
}

void cycle_facet_check(Check& c) {
  for (auto [gens, odd] : std::vector<std::pair<const char*, std::size_t>>{{"ab,bc,ca", 4}, {"ab,bc,cd,ad", 8}}) {
    const Model m = make_model(gens);
    const auto cyc = cycle_facets(m);
    const auto hull = hull_facets_oracle(build_polytope(m));
    c.expect(same_facet_set(cyc, hull), std::string(gens) + ": cycle facets differ from hull");
    std::size_t odd_count = 0;
    for (const auto& g : cyc) odd_count += g.label.starts_with("odd{") ? 1 : 0;
    c.expect(odd_count == odd, std::string(gens) + ": odd-subset family has " + std::to_string(odd_count));
  }

  const Model c3 = make_model("ab,bc,ca");
  const auto f3 = cycle_facets(c3);
  c.expect(contains(f3, form_from_labels(c3, 1, {{"a:1", -1}, {"b:1", -1}, {"c:1", -1}, {"a:1,b:1", 1},
                                                 {"b:1,c:1", 1}, {"a:1,c:1", 1}})),
           "n=3: 1 - m_a - m_b - m_c + m_ab + m_bc + m_ac missing");
  // m_xy + m_z - m_yz - m_xz for each edge xy and opposite vertex z.
  for (auto [xy, z, yz, xz] : std::vector<std::array<const char*, 4>>{
           {"a:1,b:1", "c:1", "b:1,c:1", "a:1,c:1"},
           {"b:1,c:1", "a:1", "a:1,c:1", "a:1,b:1"},
           {"a:1,c:1", "b:1", "a:1,b:1", "b:1,c:1"}}) {
    c.expect(contains(f3, form_from_labels(c3, 0, {{xy, 1}, {z, 1}, {yz, -1}, {xz, -1}})),
             std::string("n=3: edge form for ") + xy + " missing");
  }

  const Model c4 = make_model("ab,bc,cd,ad");
  const auto f4 = cycle_facets(c4);
  // m_c + m_d + m_ab - m_bc - m_cd - m_da and its rotations along the cycle a-b-c-d.
  const std::vector<std::string> v{"a:1", "b:1", "c:1", "d:1"};
  const std::vector<std::string> e{"a:1,b:1", "b:1,c:1", "c:1,d:1", "a:1,d:1"};
  for (int r = 0; r < 4; ++r) {
    const AffineForm g = form_from_labels(c4, 0, {{v[(2 + r) % 4], 1}, {v[(3 + r) % 4], 1}, {e[r], 1},
                                                  {e[(1 + r) % 4], -1}, {e[(2 + r) % 4], -1}, {e[(3 + r) % 4], -1}});
    c.expect(contains(f4, g), "n=4: edge form for " + e[r] + " missing");
  }
  const AffineForm all_edges = form_from_labels(c4, 1, {{"a:1", -1}, {"b:1", -1}, {"c:1", -1}, {"d:1", -1},
                                                        {"a:1,b:1", 1}, {"b:1,c:1", 1}, {"c:1,d:1", 1},
                                                        {"a:1,d:1", 1}});
  if (contains(f4, all_edges)) {
    c.note("n=4 all-edges form present");
  } else {
    const Rational at_ac = all_edges.at_vertex(f_vector(c4, Cell{{1, 0, 1, 0}}));
    c.block("n=4 display 1 - m_a - m_b - m_c - m_d + m_ab + m_bc + m_cd + m_da >= 0 is not valid on the polytope "
            "(value " + format_rational(at_ac) + " at vertex f_ac), so no facet list can contain it");
  }
}

void marginal_forms_zero_one(Check& c) {
  std::mt19937_64 rng(2024);
  const std::vector<const char*> shapes{"ab,bc", "abc", "ab,bc,ca", "ab,cd", "abc,cd", "ab,bc,cd"};
  std::uniform_int_distribution<std::size_t> pick_shape(0, shapes.size() - 1);
  std::uniform_int_distribution<int> pick_card(2, 4);
  int draws = 0;
  for (; draws < 200; ++draws) {
    const char* shape = shapes[pick_shape(rng)];
    std::vector<int> cards(make_model(shape).gc().num_variables());
    for (auto& k : cards) k = pick_card(rng);
    const Model m = make_model(shape, cards);
    const auto& gensets = m.gc().generators();
    const VarSet a = gensets[std::uniform_int_distribution<std::size_t>(0, gensets.size() - 1)(rng)];
    std::vector<std::optional<std::size_t>> heads{std::nullopt};
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (is_subset(m.J()[j].support, a)) heads.push_back(j);
    }
    const auto head = heads[std::uniform_int_distribution<std::size_t>(0, heads.size() - 1)(rng)];
    const AffineForm g = marginal_form(m, head, a);
    Cell target;
    target.levels.assign(m.gc().num_variables(), 0);
    if (head) target = m.J()[*head].cell;
    // Direct reading: 1 iff the cell agrees with the target on A.
    auto direct = [&](const Cell& i) {
      for (int v = 0; v < m.gc().num_variables(); ++v) {
        if ((a & (VarSet{1} << v)) && i.levels[v] != target.levels[v]) return 0;
      }
      return 1;
    };
    const Cell drawn = m.cell(std::uniform_int_distribution<std::size_t>(0, m.num_cells() - 1)(rng));
    const Rational x = g.at_vertex(f_vector(m, drawn));
    c.expect(x == 0 || x == 1, "value " + format_rational(x) + " outside {0,1}");
    c.expect(x == direct(drawn), "value differs from the direct reading");
    std::size_t ones = 0;
    for (std::size_t k = 0; k < m.num_cells(); ++k) ones += g.at_vertex(f_vector(m, m.cell(k))) == 1 ? 1 : 0;
    c.expect(ones == m.gc().num_cells() / m.gc().cells_over(a),
             "ones-count " + std::to_string(ones) + " for " + g.label);
  }
  c.note(std::to_string(draws) + " draws");
}

void jc_agreement(Check& c) {
  std::mt19937_64 rng(7);
  std::size_t points = 0;
  auto compare = [&](const char* name, const Model& m, const std::function<Rational(const RationalVector&)>& closed) {
    const MarginalPolytope poly = complete_polytope(m);
    MarginalPolytope hull = build_polytope(m);
    hull.facets = hull_facets_oracle(hull);
    hull.complete = true;
    for (int trial = 0; trial < 20; ++trial) {
      const RationalVector x = random_interior_point(m, rng);
      const Rational exact = closed(x);
      c.expect(jc_polar_volume_exact(hull, x) == exact, std::string(name) + ": exact polar volume differs");
      const double approx = jc_polar_volume_oracle(poly, x);
      c.expect(std::abs(approx / to_double(exact) - 1.0) < 1e-10, std::string(name) + ": float oracle off");
      ++points;
    }
  };
  const Model seg = make_model("a");
  compare("segment", seg, [](const RationalVector& x) { return jc_segment(x[0]); });
  for (int card : {3, 4}) {
    const Model s = make_model("a", {card});
    compare("simplex", s, [](const RationalVector& x) { return jc_simplex(std::span<const Rational>(x)); });
  }
  for (auto [gens, cards] : std::vector<std::pair<const char*, std::vector<int>>>{
           {"ab,bc", {}}, {"abc", {}}, {"a,b", {}}, {"ab", {3, 2}}, {"ab,bc", {3, 2, 2}}}) {
    const Model m = make_model(gens, cards);
    const auto ds = junction_structure(m.gc());
    compare(gens, m, [&](const RationalVector& x) { return *jc_decomposable(m, ds, x).exact; });
  }

  const Model a3 = make_model("ab,bc");
  const RationalVector u{Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 4), Rational(1, 4)};
  const Rational v = jc_polar_volume_exact(complete_polytope(a3), u);
  c.expect(v == 16384, "A3 uniform gives " + format_rational(v));
  c.expect(*jc_decomposable(a3, junction_structure(a3.gc()), u).exact == 16384, "A3 closed form at uniform");
  const Model tri = make_model("a", {3});
  const RationalVector third{Rational(1, 3), Rational(1, 3)};
  c.expect(jc_polar_volume_exact(complete_polytope(tri), third) == 27, "2-simplex at (1/3,1/3) is not 27");
  c.expect(jc_simplex(std::span<const Rational>(third)) == 27, "simplex closed form at (1/3,1/3)");
  c.note(std::to_string(points) + " points, 16384 and 27 exact");
}

void alpha_limit(Check& c) {
  const double alpha = 1e-5;
  const Model seg = make_model("a");
  for (const Rational& m : {Rational(1, 2), Rational(3, 10)}) {
    const std::vector<double> md{to_double(m)};
    const double scaled = std::exp(log_I_quadrature(seg, md, alpha).log_value + std::log(alpha));
    const double jc = to_double(jc_segment(m));
    const double err = std::abs(scaled / jc - 1.0);
    c.expect(err < 1e-3, "binary m=" + format_rational(m) + ": relative error " + fmt(err));
    c.note("binary rel err " + fmt(err));
  }
  const Model sat3 = make_model("a", {3});
  for (const RationalVector& x : {RationalVector{Rational(1, 3), Rational(1, 3)}, RationalVector{Rational(1, 5), Rational(1, 2)}}) {
    const double scaled = std::exp(log_I_quadrature(sat3, to_double(x), alpha).log_value + 2 * std::log(alpha));
    const double jc = to_double(jc_simplex(std::span<const Rational>(x)));
    const double err = std::abs(scaled / jc - 1.0);
    c.expect(err < 1e-3, "3-level: relative error " + fmt(err));
    c.note("3-level rel err " + fmt(err));
  }
  const Model a3 = make_model("ab,bc");
  const auto ds = junction_structure(a3.gc());
  const RationalVector u{Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 4), Rational(1, 4)};
  const LimitReport r = limit_check_alpha_to_zero(
      [&](double al) { return log_I_decomposable(a3, ds, u, al).log_value; }, 5, 16384.0);
  c.expect(r.alphas.front() == 1e-2 && r.alphas.back() == 1e-7, "alpha grid does not span [1e-7, 1e-2]");
  c.expect(std::abs(r.slope + 5.0) < 0.01, "A3 slope " + fmt(r.slope));
  c.note("A3 slope " + fmt(r.slope));
}

void boundary_scaling(Check& c) {
  const Model a3 = make_model("ab,bc");
  const auto ds = junction_structure(a3.gc());
  const MarginalPolytope poly = complete_polytope(a3);
  const RationalVector u{Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 4), Rational(1, 4)};
  auto log_jc = [&](const RationalVector& z) { return std::log(jc_decomposable(a3, ds, z).value); };

  // Barycenter of the vertices tight on every listed facet.
  auto face_point = [&](const std::vector<std::size_t>& facets) {
    RationalVector bary(a3.dim(), Rational(0));
    int count = 0;
    for (const auto& v : poly.vertices) {
      bool tight = true;
      for (std::size_t f : facets) tight = tight && poly.facets[f].at_vertex(v.coords) == 0;
      if (!tight) continue;
      for (std::size_t j = 0; j < bary.size(); ++j) bary[j] += v.coords[j];
      ++count;
    }
    for (auto& x : bary) x /= count;
    return bary;
  };
  // Smallest facet intersections reaching each target dimension.
  std::map<int, std::vector<std::size_t>> found;
  const std::size_t nf = poly.facets.size();
  for (std::size_t i = 0; i < nf; ++i) {
    found.try_emplace(face_of_point(poly, face_point({i})).dimension, std::vector<std::size_t>{i});
    for (std::size_t j = i + 1; j < nf; ++j) {
      found.try_emplace(face_of_point(poly, face_point({i, j})).dimension, std::vector<std::size_t>{i, j});
    }
  }
  {
    // The vertex f_0 is the intersection of the facets through it.
    std::vector<std::size_t> through;
    const RationalVector origin(a3.dim(), Rational(0));
    for (std::size_t i = 0; i < nf; ++i) {
      if (poly.facets[i](origin) == 0) through.push_back(i);
    }
    found[0] = through;
  }
  for (int k : {0, 3, 4}) {
    if (!found.count(k)) {
      c.expect(false, "no face of dimension " + std::to_string(k) + " from facet intersections");
      continue;
    }
    const RationalVector y = face_point(found[k]);
    const int confirmed = face_of_point(poly, y).dimension;
    c.expect(confirmed == k, "face_of_point gives " + std::to_string(confirmed) + " for k=" + std::to_string(k));
    const ProbeReport r = boundary_scaling_probe(log_jc, y, u, 5 - k);
    c.expect(std::abs(r.slope + (5 - k)) < 0.05, "k=" + std::to_string(k) + ": slope " + fmt(r.slope));
    c.note("k=" + std::to_string(k) + " slope " + fmt(r.slope));
  }
}

// Cells with a as the slowest variable: index 4a + 2b + c.
ContingencyTable positive_on(const Model& m, std::initializer_list<int> cells) {
  std::vector<std::int64_t> dense(8, 0);
  int n = 1;
  for (int k : cells) dense[k] = n++;
  return make_table(m, dense);
}

int hull_face_dimension(const Model& m, const ContingencyTable& t) {
  MarginalPolytope poly = build_polytope(m);
  poly.facets = hull_facets_oracle(poly);
  poly.complete = true;
  return face_of_point(poly, data_point(m, t)).dimension;
}

void pair_exponents(Check& c) {
  const Model sat = make_model("abc");
  const Model a3 = make_model("ab,bc");
  struct Case {
    const char* name;
    ContingencyTable table;
    int k1, k2;
  };
  const std::vector<Case> cases{
      {"all positive", positive_on(sat, {0, 1, 2, 3, 4, 5, 6, 7}), 7, 5},
      {"(6,5)", positive_on(sat, {1, 2, 3, 4, 5, 6, 7}), 6, 5},
      {"(4,4)", positive_on(sat, {2, 3, 4, 5, 6}), 4, 4},
      {"(3,4)", positive_on(sat, {0, 5, 2, 6}), 3, 4},
  };
  for (const auto& cs : cases) {
    const int h1 = hull_face_dimension(sat, cs.table);
    const int h2 = hull_face_dimension(a3, cs.table);
    c.expect(h1 == cs.k1 && h2 == cs.k2, std::string(cs.name) + ": hull face dims (" + std::to_string(h1) + "," +
                                             std::to_string(h2) + ")");
    const BayesReport r = asymptotic_exponent(sat, a3, cs.table);
    c.expect(r.k1 == h1 && r.k2 == h2, std::string(cs.name) + ": k differs from hull");
    std::vector<double> xs, ys;
    for (double al : default_alpha_grid()) {
      xs.push_back(std::log(al));
      ys.push_back(log_bayes_factor(sat, a3, cs.table, al));
    }
    const double slope = fit_slope(xs, ys);
    c.expect(std::abs(slope - (cs.k1 - cs.k2)) < 0.05, std::string(cs.name) + ": slope " + fmt(slope));
    if (cs.k1 < cs.k2) c.expect(r.verdict == Verdict::FavorsModel1, "(3,4): denser model not favored");
    c.note(std::string(cs.name) + " slope " + fmt(slope));
  }
}

void edf_equals_exponent(Check& c) {
  std::mt19937_64 rng(99);
  const std::vector<std::pair<const char*, const char*>> pairs{
      {"abc,bcd", "ab,bc,cd"}, {"ab,bc,cd", "a,b,c,d"}, {"abcd", "abc,bcd"}, {"ab,ac,ad", "a,b,c,d"},
      {"abc,cd", "ab,bc,cd"}};
  int checked = 0;
  for (auto [g1, g2] : pairs) {
    const Model m1 = make_model(g1);
    const Model m2 = make_model(g2);
    for (int trial = 0; trial < 100; ++trial) {
      const double zero = 0.2 + 0.7 * (trial % 10) / 10.0;
      const auto t = random_sparse_table(m1, rng, zero);
      const long d = d_edf(m1, m2, t);
      const int e = asymptotic_exponent(m1, m2, t).exponent;
      c.expect(d == e, std::string(g1) + " vs " + g2 + ": d_edf " + std::to_string(d) + " exponent " +
                           std::to_string(e));
      ++checked;
    }
  }
  c.note(std::to_string(checked) + " tables");
}

void mobius_round_trip(Check& c) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  double worst = 0.0;
  for (auto [gens, cards] : std::vector<std::pair<const char*, std::vector<int>>>{
           {"ab,bc", {}}, {"abc", {}}, {"ab,bc,ca", {}}, {"ab,bc", {3, 2, 4}}, {"ab,bc,cd", {}}, {"a,b,c", {3, 3, 2}}}) {
    const Model m = make_model(gens, cards);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> theta(m.dim());
      for (auto& v : theta) v = unif(rng);
      const auto back = theta_from_logp(m, logp_from_theta(m, theta));
      for (std::size_t j = 0; j < m.dim(); ++j) worst = std::max(worst, std::abs(back.theta[j] - theta[j]));
    }
    const std::vector<double> uniform(m.num_cells(), -std::log(static_cast<double>(m.num_cells())));
    for (double v : theta_from_logp(m, uniform).theta) c.expect(std::abs(v) < 1e-15, std::string(gens) + ": uniform θ");
  }
  c.expect(worst < 1e-12, "round-trip residual " + fmt(worst));
  c.note("max residual " + fmt(worst));
}

void cli_determinism(Check& c) {
  const fs::path dir = fs::temp_directory_path() / ("loglin_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir / "models");
  const std::string a3 = (kData / "a3.json").string();
  const std::string sat = (kData / "sat3.json").string();
  const std::string cyc = (kData / "cycle3.json").string();
  const std::string table = (kData / "a3_positive.csv").string();
  const std::string point = (dir / "m.json").string();
  const std::string vertex = (dir / "v.json").string();
  const std::string bin = (dir / "bin.json").string();
  write_text(point, R"({"a:1": "1/2", "b:1": "1/2", "c:1": "1/2", "a:1,b:1": "1/4", "b:1,c:1": "1/4"})");
  write_text(vertex, R"({"a:1": 0, "b:1": 0, "c:1": 0, "a:1,b:1": 0, "b:1,c:1": 0})");
  write_text(bin, R"({"variables": [{"name": "a", "card": 2}], "generators": [["a"]]})");
  fs::copy_file(a3, dir / "models" / "a3.json");
  fs::copy_file(sat, dir / "models" / "sat3.json");
  fs::copy_file(cyc, dir / "models" / "cycle3.json");
  const std::string models = (dir / "models").string();

  const std::vector<std::vector<std::string>> commands{
      {"model", "--model", a3},
      {"polytope", "facets", "--model", a3},
      {"polytope", "facets", "--model", cyc, "--oracle"},
      {"polytope", "facets", "--model", a3, "--route", "theorem", "--format", "table"},
      {"polytope", "face", "--model", a3, "--table", table},
      {"polytope", "face", "--model", a3, "--point", vertex},
      {"jc", "--model", a3, "--m", point},
      {"jc", "--model", a3, "--m", point, "--oracle"},
      {"jc", "--model", a3, "--m", point, "--probe-boundary", vertex},
      {"normalizer", "--model", a3, "--alpha", "0.5"},
      {"normalizer", "--model", a3, "--alpha", "0.5", "--table", table, "--posterior"},
      {"normalizer", "--model", bin, "--alpha", "0.001", "--method", "quadrature"},
      {"bf", "--model1", sat, "--model2", a3, "--table", table, "--alpha", "0.01"},
      {"bf", "--model1", sat, "--model2", a3, "--table", table, "--asymptotic"},
      {"edf", "--model1", sat, "--model2", a3, "--table", table},
      {"rank", "--models", models, "--table", table, "--mode", "asymptotic"},
      {"rank", "--models", models, "--table", table, "--mode", "at_alpha", "--alpha", "1"},
  };
  int idx = 0;
  for (const auto& cmd : commands) {
    std::string outputs[2], stdouts[2];
    int codes[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / ("run" + std::to_string(idx) + "_" + std::to_string(run));
      std::string line = loglin::test::shell_quote(kCli) + " --out " + loglin::test::shell_quote(out.string());
      for (const auto& a : cmd) line += " " + loglin::test::shell_quote(a);
      line += " 2>/dev/null";
      FILE* pipe = popen(line.c_str(), "r");
      char buf[4096];
      std::size_t n = 0;
      while (pipe && (n = fread(buf, 1, sizeof buf, pipe)) > 0) stdouts[run].append(buf, n);
      const int status = pipe ? pclose(pipe) : -1;
      codes[run] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      outputs[run] = slurp(out / "output.json");
    }
    std::string name = cmd[0];
    if (cmd[0] == "polytope") name += " " + cmd[1];
    c.expect(codes[0] == 0, name + " exited " + std::to_string(codes[0]));
    c.expect(codes[0] == codes[1] && stdouts[0] == stdouts[1], name + ": stdout differs between runs");
    c.expect(!outputs[0].empty() && outputs[0] == outputs[1], name + ": output.json differs between runs");
    ++idx;
  }
  c.note(std::to_string(idx) + " commands byte-identical");
  fs::remove_all(dir);
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_seconds;  // 0: no runtime bound
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "facet catalogue, A3 binary", 1.0, facet_catalogue},
      {2, "decomposable completeness", 30.0, decomposable_completeness},
      {3, "binary cycle facets n=3,4", 60.0, cycle_facet_check},
      {4, "marginal forms 0/1 with |I_{V\\A}| ones", 0.0, marginal_forms_zero_one},
      {5, "J_C polar volume vs closed forms", 0.0, jc_agreement},
      {6, "alpha -> 0 limit", 0.0, alpha_limit},
      {7, "boundary scaling on A3", 0.0, boundary_scaling},
      {8, "saturated vs A3 exponents and slopes", 0.0, pair_exponents},
      {9, "d_edf equals the exponent", 60.0, edf_equals_exponent},
      {10, "Mobius round trips", 0.0, mobius_round_trip},
      {11, "CLI determinism", 0.0, cli_determinism},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.budget_seconds > 0.0) {
      check.expect(seconds < cr.budget_seconds, "runtime " + fmt(seconds) + " s exceeds " + fmt(cr.budget_seconds) + " s");
    }
    const Status s = check.status();
    const char* tag = s == Status::Pass ? "PASS" : s == Status::Fail ? "FAIL" : "BLOCKED";
    std::printf("%-7s #%-2d %-40s %7.2fs  %s\n", tag, cr.id, cr.title, seconds, check.detail().c_str());
    std::fflush(stdout);
    if (s == Status::Fail) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
