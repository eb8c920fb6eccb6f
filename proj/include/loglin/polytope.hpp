#ifndef LOGLIN_POLYTOPE_HPP
#define LOGLIN_POLYTOPE_HPP

#include "loglin/junction.hpp"
#include "loglin/model.hpp"
#include "loglin/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace loglin {

/// g(m) = constant + <coeffs, m>, with a provenance label.
struct AffineForm {
  Rational constant;
  RationalVector coeffs;
  std::string label;

  Rational operator()(std::span<const Rational> m) const;
  double eval(std::span<const double> m) const;
  Rational at_vertex(std::span<const int> f) const;
  /// constant * total + <coeffs, counts>: N g(t/N) for integer marginal counts.
  Rational on_counts(std::span<const std::int64_t> counts, std::int64_t total) const;

  /// Scaled to primitive integer coefficients by a positive factor.
  AffineForm normalized() const;
  /// Equality of normalized forms (labels ignored).
  bool same_halfspace(const AffineForm& other) const;
};

enum class FacetSource { Theorem, Decomposable, Cycle, Hull };
const char* facet_source_name(FacetSource s);

struct Vertex {
  Cell cell;
  std::vector<int> coords;
};

struct MarginalPolytope {
  std::vector<Vertex> vertices;
  std::size_t dim = 0;
  std::vector<AffineForm> facets;
  std::optional<FacetSource> provenance;
  /// True when `facets` is the full facet list of the polytope.
  bool complete = false;

  RationalMatrix vertex_matrix() const;
};

struct FaceReport {
  RationalVector point;
  std::vector<std::string> active_facets;
  std::vector<Cell> face_vertices;
  int dimension = 0;
};

struct HullLimits {
  std::size_t max_dim = 12;
  std::size_t max_vertices = 64;
};

inline constexpr std::size_t kDefaultVertexLimit = std::size_t{1} << 16;

/// Vertices f_i for every cell in canonical cell order.
MarginalPolytope build_polytope(const Model& model, std::size_t max_vertices = kDefaultVertexLimit);

/// g_{0,D} when j0 is empty, else g_{j0,D}; D need not be maximal but must
/// contain S(j0). Coordinates outside D's down-set are zero.
AffineForm marginal_form(const Model& model, std::optional<std::size_t> j0, VarSet d);

/// g_{0,D} followed by g_{j,D} for each S(j) ⊆ D in J order.
std::vector<AffineForm> set_forms(const Model& model, VarSet d);

/// g_{j0,A} for every maximal A and every j0 = 0 or S(j0) ⊆ A.
std::vector<AffineForm> theorem_facets(const Model& model);

/// The marginal-form family over cliques; this is every facet for decomposable
/// models. Throws NotDecomposable if `ds` does not describe the model.
std::vector<AffineForm> decomposable_facets(const Model& model, const DecomposableStructure& ds);

/// Facets of the binary n-cycle model: four forms per edge plus one per
/// odd-cardinality edge subset. Throws NotACycle.
std::vector<AffineForm> cycle_facets(const Model& model);

bool is_binary_cycle(const GeneratingClass& gc);

/// Exact facet enumeration of conv(vertices) by double description.
/// Throws DimensionTooLarge beyond `limits`.
std::vector<AffineForm> hull_facets_oracle(const MarginalPolytope& poly, HullLimits limits = {});

/// Polytope with a complete facet list: decomposable, then binary cycle,
/// then hull oracle within `limits`. Throws IncompleteFacets otherwise.
MarginalPolytope complete_polytope(const Model& model, HullLimits limits = {});

/// Face of the complete polytope containing y in its relative interior.
/// Throws OutsidePolytope if any facet value is negative and
/// IncompleteFacets if the facet list is not complete.
FaceReport face_of_point(const MarginalPolytope& poly, std::span<const Rational> y);

/// Set equality of two facet lists as halfspaces.
bool same_facet_set(const std::vector<AffineForm>& a, const std::vector<AffineForm>& b);

/// t/N as an exact rational vector over J.
RationalVector data_point(const Model& model, const ContingencyTable& table);

}  // namespace loglin

#endif  // LOGLIN_POLYTOPE_HPP
