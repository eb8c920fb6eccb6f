#include "loglin/polytope.hpp"

#include "loglin/error.hpp"

#include <algorithm>
#include <map>

namespace loglin {

Rational AffineForm::operator()(std::span<const Rational> m) const {
  return constant + dot(coeffs, m);
}

double AffineForm::eval(std::span<const double> m) const {
  double s = to_double(constant);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0) s += to_double(coeffs[k]) * m[k];
  }
  return s;
}

Rational AffineForm::at_vertex(std::span<const int> f) const {
  Rational s = constant;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (f[k] != 0) s += coeffs[k];
  }
  return s;
}

Rational AffineForm::on_counts(std::span<const std::int64_t> counts, std::int64_t total) const {
  Rational s = constant * total;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0 && counts[k] != 0) s += coeffs[k] * counts[k];
  }
  return s;
}

AffineForm AffineForm::normalized() const {
  Integer lcm = 1;
  auto take_den = [&](const Rational& r) {
    const Integer den = boost::multiprecision::denominator(r);
    lcm = boost::multiprecision::lcm(lcm, den);
  };
  take_den(constant);
  for (const auto& c : coeffs) take_den(c);
  Integer g = 0;
  auto take_num = [&](const Rational& r) {
    const Integer num = boost::multiprecision::numerator(r * Rational(lcm));
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(num));
  };
  take_num(constant);
  for (const auto& c : coeffs) take_num(c);
  AffineForm out = *this;
  if (g == 0) return out;
  const Rational scale = Rational(lcm) / Rational(g);
  out.constant *= scale;
  for (auto& c : out.coeffs) c *= scale;
  return out;
}

bool AffineForm::same_halfspace(const AffineForm& other) const {
  const AffineForm a = normalized();
  const AffineForm b = other.normalized();
  return a.constant == b.constant && a.coeffs == b.coeffs;
}

const char* facet_source_name(FacetSource s) {
  switch (s) {
    case FacetSource::Theorem: return "theorem";
    case FacetSource::Decomposable: return "decomposable";
    case FacetSource::Cycle: return "cycle";
    case FacetSource::Hull: return "hull";
  }
  return "unknown";
}

RationalMatrix MarginalPolytope::vertex_matrix() const {
  RationalMatrix out;
  out.reserve(vertices.size());
  for (const auto& v : vertices) {
    RationalVector row(v.coords.begin(), v.coords.end());
    out.push_back(std::move(row));
  }
  return out;
}

MarginalPolytope build_polytope(const Model& model, std::size_t max_vertices) {
  if (model.num_cells() > max_vertices) {
    fail(ErrorCode::DimensionTooLarge,
         "polytope has " + std::to_string(model.num_cells()) + " vertices (limit " +
             std::to_string(max_vertices) + ")");
  }
  MarginalPolytope poly;
  poly.dim = model.dim();
  poly.vertices.reserve(model.num_cells());
  for (std::size_t k = 0; k < model.num_cells(); ++k) {
    Vertex v;
    v.cell = model.cell(k);
    v.coords = f_vector(model, v.cell);
    poly.vertices.push_back(std::move(v));
  }
  return poly;
}

namespace {

std::string form_label(const Model& model, std::optional<std::size_t> j0, VarSet d) {
  const std::string head = j0 ? model.J().label(*j0) : std::string("0");
  return "g[" + head + "|" + model.gc().set_name(d) + "]";
}

}  // namespace

AffineForm marginal_form(const Model& model, std::optional<std::size_t> j0, VarSet d) {
  AffineForm g;
  g.coeffs.assign(model.dim(), Rational(0));
  g.label = form_label(model, j0, d);
  if (!j0) {
    g.constant = 1;
    for (std::size_t k = 0; k < model.dim(); ++k) {
      const VarSet s = model.J()[k].support;
      if (is_subset(s, d)) g.coeffs[k] = (set_size(s) % 2 == 0) ? 1 : -1;
    }
    return g;
  }
  const MarginalIndex& base = model.J()[*j0];
  if (!is_subset(base.support, d)) {
    fail(ErrorCode::InvalidArgument, "marginal form requires S(j0) ⊆ D");
  }
  g.constant = 0;
  const int base_size = set_size(base.support);
  for (std::size_t k = 0; k < model.dim(); ++k) {
    const MarginalIndex& j = model.J()[k];
    if (!is_subset(j.support, d) || !triangle(base, j.cell)) continue;
    g.coeffs[k] = ((set_size(j.support) - base_size) % 2 == 0) ? 1 : -1;
  }
  return g;
}

std::vector<AffineForm> set_forms(const Model& model, VarSet d) {
  std::vector<AffineForm> out{marginal_form(model, std::nullopt, d)};
  for (std::size_t k = 0; k < model.dim(); ++k) {
    if (is_subset(model.J()[k].support, d)) out.push_back(marginal_form(model, k, d));
  }
  return out;
}

std::vector<AffineForm> theorem_facets(const Model& model) {
  std::vector<AffineForm> out;
  for (VarSet a : model.gc().generators()) {
    for (auto& g : set_forms(model, a)) out.push_back(std::move(g));
  }
  return out;
}

std::vector<AffineForm> decomposable_facets(const Model& model, const DecomposableStructure& ds) {
  std::vector<VarSet> cliques = ds.cliques;
  std::sort(cliques.begin(), cliques.end(), canonical_less);
  if (cliques != model.gc().generators()) {
    fail(ErrorCode::NotDecomposable, "junction structure does not match the model's generators");
  }
  return theorem_facets(model);
}

namespace {

// Vertices of the cycle in walk order starting at variable 0, or empty if
// the model is not a binary cycle.
std::vector<int> cycle_walk(const GeneratingClass& gc) {
  const int n = gc.num_variables();
  if (n < 3) return {};
  for (int v = 0; v < n; ++v) {
    if (gc.card(v) != 2) return {};
  }
  if (static_cast<int>(gc.generators().size()) != n) return {};
  std::vector<VarSet> adj(n, 0);
  for (VarSet e : gc.generators()) {
    if (set_size(e) != 2) return {};
    const int a = std::countr_zero(e);
    const int b = std::countr_zero(e & (e - 1));
    adj[a] |= VarSet{1} << b;
    adj[b] |= VarSet{1} << a;
  }
  for (int v = 0; v < n; ++v) {
    if (set_size(adj[v]) != 2) return {};
  }
  std::vector<int> walk{0};
  int prev = -1;
  int cur = 0;
  while (true) {
    VarSet next_set = adj[cur];
    if (prev >= 0) next_set &= ~(VarSet{1} << prev);
    const int next = std::countr_zero(next_set);
    if (next == 0) break;
    walk.push_back(next);
    prev = cur;
    cur = next;
    if (static_cast<int>(walk.size()) > n) return {};
  }
  if (static_cast<int>(walk.size()) != n) return {};
  return walk;
}

}  // namespace

bool is_binary_cycle(const GeneratingClass& gc) { return !cycle_walk(gc).empty(); }

std::vector<AffineForm> cycle_facets(const Model& model) {
  const GeneratingClass& gc = model.gc();
  if (cycle_walk(gc).empty()) {
    fail(ErrorCode::NotACycle, "model is not the binary model of a cycle of length >= 3");
  }
  const int n = gc.num_variables();
  std::vector<AffineForm> out;
  // Edge forms coincide with the marginal-form family over edges.
  for (VarSet e : gc.generators()) {
    for (auto& g : set_forms(model, e)) out.push_back(std::move(g));
  }

  auto vertex_pos = [&](int v) {
    Cell c;
    c.levels.assign(n, 0);
    c.levels[v] = 1;
    return *model.J().find(c);
  };
  auto edge_pos = [&](VarSet e) {
    Cell c;
    c.levels.assign(n, 0);
    for (int v = 0; v < n; ++v) {
      if (e & (VarSet{1} << v)) c.levels[v] = 1;
    }
    return *model.J().find(c);
  };

  const std::vector<VarSet>& edges = gc.generators();
  const std::size_t num_edges = edges.size();
  for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << num_edges); ++subset) {
    const int size = std::popcount(subset);
    if (size % 2 == 0) continue;
    // (|F|-1)/2 - sum_{ab in F}(m_a + m_b - 2 m_ab) + sum_v m_v - sum_e m_e >= 0
    AffineForm g;
    g.coeffs.assign(model.dim(), Rational(0));
    g.constant = Rational(size - 1, 2);
    for (int v = 0; v < n; ++v) g.coeffs[vertex_pos(v)] += 1;
    for (VarSet e : edges) g.coeffs[edge_pos(e)] -= 1;
    std::string names;
    for (std::size_t k = 0; k < num_edges; ++k) {
      if (!(subset & (std::uint64_t{1} << k))) continue;
      const VarSet e = edges[k];
      const int a = std::countr_zero(e);
      const int b = std::countr_zero(e & (e - 1));
      g.coeffs[vertex_pos(a)] -= 1;
      g.coeffs[vertex_pos(b)] -= 1;
      g.coeffs[edge_pos(e)] += 2;
      if (!names.empty()) names += ";";
      names += gc.variables()[a].name + "-" + gc.variables()[b].name;
    }
    g.label = "odd{" + names + "}";
    out.push_back(std::move(g));
  }
  return out;
}

MarginalPolytope complete_polytope(const Model& model, HullLimits limits) {
  MarginalPolytope poly = build_polytope(model);
  if (is_decomposable(model.gc())) {
    poly.facets = decomposable_facets(model, junction_structure(model.gc()));
    poly.provenance = FacetSource::Decomposable;
  } else if (is_binary_cycle(model.gc())) {
    poly.facets = cycle_facets(model);
    poly.provenance = FacetSource::Cycle;
  } else if (poly.dim <= limits.max_dim && poly.vertices.size() <= limits.max_vertices) {
    poly.facets = hull_facets_oracle(poly, limits);
    poly.provenance = FacetSource::Hull;
  } else {
    fail(ErrorCode::IncompleteFacets,
         "no complete facet list: model is neither decomposable nor a binary cycle and exceeds "
         "the hull oracle bounds");
  }
  poly.complete = true;
  return poly;
}

FaceReport face_of_point(const MarginalPolytope& poly, std::span<const Rational> y) {
  if (!poly.complete) {
    fail(ErrorCode::IncompleteFacets, "face dimension requires a complete facet list");
  }
  if (y.size() != poly.dim) fail(ErrorCode::InvalidArgument, "point has the wrong dimension");
  FaceReport report;
  report.point.assign(y.begin(), y.end());
  std::vector<const AffineForm*> active;
  for (const auto& g : poly.facets) {
    const Rational v = g(y);
    if (v < 0) fail(ErrorCode::OutsidePolytope, "point violates facet " + g.label);
    if (v == 0) {
      active.push_back(&g);
      report.active_facets.push_back(g.label);
    }
  }
  RationalMatrix face_points;
  for (const auto& vert : poly.vertices) {
    const bool on_face = std::all_of(active.begin(), active.end(),
                                     [&](const AffineForm* g) { return g->at_vertex(vert.coords) == 0; });
    if (on_face) {
      report.face_vertices.push_back(vert.cell);
      face_points.emplace_back(vert.coords.begin(), vert.coords.end());
    }
  }
  report.dimension = active.empty() ? static_cast<int>(poly.dim) : affine_rank(face_points);
  return report;
}

bool same_facet_set(const std::vector<AffineForm>& a, const std::vector<AffineForm>& b) {
  auto keyed = [](const std::vector<AffineForm>& forms) {
    std::vector<RationalVector> keys;
    for (const auto& g : forms) {
      const AffineForm n = g.normalized();
      RationalVector key{n.constant};
      key.insert(key.end(), n.coeffs.begin(), n.coeffs.end());
      keys.push_back(std::move(key));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
  };
  return keyed(a) == keyed(b);
}

RationalVector data_point(const Model& model, const ContingencyTable& table) {
  const std::vector<std::int64_t> t = marginal_counts(model, table);
  RationalVector y;
  y.reserve(t.size());
  for (auto c : t) y.emplace_back(c, table.total());
  return y;
}

}  // namespace loglin
