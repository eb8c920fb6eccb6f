#include "loglin/charfun.hpp"

#include "loglin/error.hpp"
#include "loglin/numeric.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cmath>
#include <map>
#include <set>

namespace loglin {

namespace {

void require_positive(const Rational& v, const char* what) {
  if (v <= 0) fail(ErrorCode::BoundaryOrOutside, std::string(what) + " is not strictly interior");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) fail(ErrorCode::BoundaryOrOutside, std::string(what) + " is not strictly interior");
}

}  // namespace

double jc_segment(double m) {
  require_positive(m, "segment point");
  require_positive(1.0 - m, "segment point");
  return 1.0 / (m * (1.0 - m));
}

Rational jc_segment(const Rational& m) {
  require_positive(m, "segment point");
  require_positive(Rational(1) - m, "segment point");
  return Rational(1) / (m * (Rational(1) - m));
}

double jc_simplex(std::span<const double> m) {
  double prod = 1.0;
  double rest = 1.0;
  for (double x : m) {
    require_positive(x, "simplex point");
    prod *= x;
    rest -= x;
  }
  require_positive(rest, "simplex point");
  return 1.0 / (prod * rest);
}

Rational jc_simplex(std::span<const Rational> m) {
  Rational prod = 1;
  Rational rest = 1;
  for (const auto& x : m) {
    require_positive(x, "simplex point");
    prod *= x;
    rest -= x;
  }
  require_positive(rest, "simplex point");
  return Rational(1) / (prod * rest);
}

double CharFunValue::from_factors() const {
  double log_value = 0.0;
  for (const auto& f : numerator) log_value += f.exponent * std::log(to_double(f.value));
  for (const auto& f : denominator) log_value -= f.exponent * std::log(to_double(f.value));
  return std::exp(log_value);
}

namespace {

std::vector<FactorTerm> set_factors(const Model& model, VarSet s, int exponent,
                                    std::span<const Rational> m) {
  std::vector<FactorTerm> out;
  for (auto& form : set_forms(model, s)) {
    Rational v = form(m);
    out.push_back(FactorTerm{std::move(form), exponent, std::move(v)});
  }
  return out;
}

}  // namespace

CharFunValue jc_decomposable(const Model& model, const DecomposableStructure& ds,
                             std::span<const Rational> m) {
  if (m.size() != model.dim()) fail(ErrorCode::InvalidArgument, "m has the wrong length");
  std::vector<VarSet> cliques = ds.cliques;
  std::sort(cliques.begin(), cliques.end(), canonical_less);
  if (cliques != model.gc().generators()) {
    fail(ErrorCode::NotDecomposable, "junction structure does not match the model");
  }
  CharFunValue out;
  out.method = CharFunMethod::ClosedForm;
  Rational value = 1;
  for (VarSet c : ds.cliques) {
    for (auto& f : set_factors(model, c, 1, m)) {
      require_positive(f.value, ("clique factor " + f.form.label).c_str());
      value /= f.value;
      out.denominator.push_back(std::move(f));
    }
  }
  for (const auto& sep : ds.separators) {
    for (auto& f : set_factors(model, sep.set, sep.multiplicity, m)) {
      for (int e = 0; e < sep.multiplicity; ++e) value *= f.value;
      out.numerator.push_back(std::move(f));
    }
  }
  out.value = to_double(value);
  out.exact = std::move(value);
  return out;
}

namespace {

using Bits = boost::dynamic_bitset<>;
using Simplex = std::vector<int>;

// Pulling triangulation of a polytope given by its vertex coordinates and
// the vertex sets of its facets. A face S of dimension d is split into
// cones from its lowest vertex over the facets of S that miss that vertex.
class PullingTriangulation {
 public:
  PullingTriangulation(const RationalMatrix& points, std::vector<Bits> facet_sets)
      : points_(points), facet_sets_(std::move(facet_sets)) {}

  const std::vector<Simplex>& run(const Bits& face, int dim) {
    auto it = memo_.find(face);
    if (it != memo_.end()) return it->second;
    std::vector<Simplex> simplices;
    if (static_cast<int>(face.count()) == dim + 1) {
      Simplex s;
      for (auto v = face.find_first(); v != Bits::npos; v = face.find_next(v)) {
        s.push_back(static_cast<int>(v));
      }
      simplices.push_back(std::move(s));
    } else {
      const auto apex = face.find_first();
      std::set<Bits> seen;
      for (const auto& g : facet_sets_) {
        Bits sub = face & g;
        if (sub == face || sub.test(apex) || static_cast<int>(sub.count()) < dim) continue;
        if (!seen.insert(sub).second) continue;
        if (affine_dimension(sub) != dim - 1) continue;
        const auto& inner = run(sub, dim - 1);
        for (const auto& s : inner) {
          Simplex cone{static_cast<int>(apex)};
          cone.insert(cone.end(), s.begin(), s.end());
          simplices.push_back(std::move(cone));
        }
      }
    }
    return memo_.emplace(face, std::move(simplices)).first->second;
  }

 private:
  int affine_dimension(const Bits& set) const {
    RationalMatrix pts;
    for (auto v = set.find_first(); v != Bits::npos; v = set.find_next(v)) pts.push_back(points_[v]);
    return affine_rank(pts);
  }

  const RationalMatrix& points_;
  std::vector<Bits> facet_sets_;
  std::map<Bits, std::vector<Simplex>> memo_;
};

}  // namespace

Rational polar_volume_value(const std::vector<AffineForm>& facets, const RationalMatrix& vertices,
                            std::span<const Rational> m) {
  const std::size_t n = m.size();
  if (facets.size() < n + 1 || vertices.size() < n + 1) {
    fail(ErrorCode::InvalidArgument, "polytope is not full-dimensional");
  }
  // Vertices of (C - m)°: one per facet g = c + <a, .>, at -a / g(m).
  RationalMatrix polar;
  polar.reserve(facets.size());
  for (const auto& g : facets) {
    if (g.coeffs.size() != n) fail(ErrorCode::InvalidArgument, "facet has the wrong length");
    const Rational gm = g(m);
    require_positive(gm, "point");
    RationalVector p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = -g.coeffs[k] / gm;
    polar.push_back(std::move(p));
  }
  // Facets of the polar: one per vertex v, holding the facets tight at v.
  std::vector<Bits> polar_facets;
  for (const auto& v : vertices) {
    Bits tight(facets.size());
    for (std::size_t g = 0; g < facets.size(); ++g) {
      if (facets[g](v) == 0) tight.set(g);
    }
    polar_facets.push_back(std::move(tight));
  }
  Bits all(facets.size());
  all.set();
  PullingTriangulation tri(polar, std::move(polar_facets));
  Rational total = 0;
  for (const auto& s : tri.run(all, static_cast<int>(n))) {
    RationalMatrix edges;
    for (std::size_t k = 1; k < s.size(); ++k) {
      RationalVector e(n);
      for (std::size_t c = 0; c < n; ++c) e[c] = polar[s[k]][c] - polar[s[0]][c];
      edges.push_back(std::move(e));
    }
    total += abs(determinant(std::move(edges)));
  }
  return total;
}

Rational jc_polar_volume_exact(const MarginalPolytope& poly, std::span<const Rational> m,
                               HullLimits limits) {
  if (!poly.complete) fail(ErrorCode::IncompleteFacets, "polar volume needs the complete facet list");
  if (poly.dim > limits.max_dim) {
    fail(ErrorCode::DimensionTooLarge, "polar volume bound exceeded (dim " +
                                           std::to_string(poly.dim) + ")");
  }
  if (m.size() != poly.dim) fail(ErrorCode::InvalidArgument, "m has the wrong length");
  return polar_volume_value(poly.facets, poly.vertex_matrix(), m);
}

double jc_polar_volume_oracle(const MarginalPolytope& poly, std::span<const Rational> m,
                              HullLimits limits) {
  return to_double(jc_polar_volume_exact(poly, m, limits));
}

double simplicial_cone_integral(const std::vector<std::vector<double>>& basis,
                                std::span<const double> x) {
  const std::size_t n = x.size();
  if (basis.size() != n) fail(ErrorCode::InvalidArgument, "basis size differs from dimension");
  RationalMatrix cols(n, RationalVector(n));
  for (std::size_t k = 0; k < n; ++k) {
    if (basis[k].size() != n) fail(ErrorCode::InvalidArgument, "basis vector has the wrong length");
    for (std::size_t r = 0; r < n; ++r) cols[r][k] = from_double(basis[k][r]);
  }
  const Rational det = determinant(cols);
  if (det == 0) fail(ErrorCode::Singular, "cone basis is linearly dependent");
  RationalVector xr;
  for (double v : x) xr.push_back(from_double(v));
  // <ξ_i, x> are the coordinates of x in the basis.
  const RationalVector coords = solve(std::move(cols), std::move(xr));
  Rational value = 1 / abs(det);
  for (const auto& c : coords) {
    if (c <= 0) fail(ErrorCode::WrongCone, "point is not in the dual cone");
    value /= c;
  }
  return to_double(value);
}

ProbeReport boundary_scaling_probe(const std::function<double(const RationalVector&)>& log_jc,
                                   std::span<const Rational> y, std::span<const Rational> m,
                                   std::optional<int> codim, ProbeOptions options) {
  if (y.size() != m.size()) fail(ErrorCode::InvalidArgument, "y and m differ in length");
  if (options.first_exponent > options.last_exponent || options.fit_points < 2 ||
      options.last_exponent - options.first_exponent + 1 < options.fit_points) {
    fail(ErrorCode::InvalidArgument, "invalid probe grid");
  }
  ProbeReport report;
  for (int e = options.first_exponent; e <= options.last_exponent; ++e) {
    const Rational lambda = Rational(1) / Rational(Integer(1) << e);
    RationalVector z(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) z[k] = lambda * m[k] + (1 - lambda) * y[k];
    report.lambdas.push_back(to_double(lambda));
    report.log_values.push_back(log_jc(z));
  }
  const std::size_t total = report.lambdas.size();
  const std::size_t first = total - static_cast<std::size_t>(options.fit_points);
  std::vector<double> xs, ys;
  for (std::size_t k = first; k < total; ++k) {
    xs.push_back(std::log(report.lambdas[k]));
    ys.push_back(report.log_values[k]);
  }
  report.slope = fit_slope(xs, ys);
  if (codim) report.expected_slope = -*codim;
  const int power = codim ? *codim : static_cast<int>(std::lround(-report.slope));
  report.plateau_estimate = std::exp(report.log_values.back() + power * xs.back());
  return report;
}

}  // namespace loglin
