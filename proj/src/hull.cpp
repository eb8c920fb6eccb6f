// Facet enumeration of a full-dimensional 0/1 polytope by the double
// description method. The facets of conv{p_i} are the extreme rays of the
// cone {(c, a) : c + <a, p_i> >= 0 for all i}, which is built one
// constraint at a time over exact integers.

#include "loglin/error.hpp"
#include "loglin/polytope.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>

namespace loglin {

namespace {

using Bits = boost::dynamic_bitset<>;
using IntVector = std::vector<Integer>;

struct Ray {
  IntVector coords;
  Bits zeros;  // processed constraints tight at this ray
};

void make_primitive(IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, boost::multiprecision::abs(x));
  if (g > 1) {
    for (auto& x : v) x /= g;
  }
}

// Row i of the constraint matrix is (1, f_i).
Integer evaluate(const std::vector<int>& coords, const IntVector& ray) {
  Integer s = ray[0];
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (coords[k] != 0) s += ray[k + 1];
  }
  return s;
}

RationalVector homogenized(const std::vector<int>& coords) {
  RationalVector row{Rational(1)};
  for (int c : coords) row.emplace_back(c);
  return row;
}

}  // namespace

std::vector<AffineForm> hull_facets_oracle(const MarginalPolytope& poly, HullLimits limits) {
  const std::size_t n = poly.dim;
  const std::size_t num_points = poly.vertices.size();
  if (n > limits.max_dim || num_points > limits.max_vertices) {
    fail(ErrorCode::DimensionTooLarge,
         "hull oracle bounds exceeded (dim " + std::to_string(n) + ", vertices " +
             std::to_string(num_points) + ")");
  }
  const std::size_t d = n + 1;

  // Greedy initial basis of d affinely independent points, canonical order.
  std::vector<std::size_t> basis;
  RationalMatrix basis_rows;
  for (std::size_t i = 0; i < num_points && basis.size() < d; ++i) {
    RationalMatrix trial = basis_rows;
    trial.push_back(homogenized(poly.vertices[i].coords));
    if (rank(trial) == trial.size()) {
      basis.push_back(i);
      basis_rows = std::move(trial);
    }
  }
  if (basis.size() < d) {
    fail(ErrorCode::InvalidArgument, "point set is not full-dimensional");
  }

  // Initial rays: columns of the inverse basis matrix, so that basis row l
  // is tight at every initial ray except ray l.
  const RationalMatrix inv = inverse(basis_rows);
  std::vector<Ray> rays;
  Bits processed(num_points);
  for (std::size_t i : basis) processed.set(i);
  for (std::size_t col = 0; col < d; ++col) {
    Integer lcm = 1;
    for (std::size_t r = 0; r < d; ++r) {
      lcm = boost::multiprecision::lcm(lcm, Integer(boost::multiprecision::denominator(inv[r][col])));
    }
    Ray ray;
    for (std::size_t r = 0; r < d; ++r) {
      ray.coords.push_back(boost::multiprecision::numerator(inv[r][col] * Rational(lcm)));
    }
    make_primitive(ray.coords);
    ray.zeros.resize(num_points);
    for (std::size_t l = 0; l < d; ++l) {
      if (l != col) ray.zeros.set(basis[l]);
    }
    rays.push_back(std::move(ray));
  }

  for (std::size_t i = 0; i < num_points; ++i) {
    if (processed.test(i)) continue;
    const auto& row = poly.vertices[i].coords;
    std::vector<Integer> values;
    values.reserve(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      values.push_back(evaluate(row, rays[r].coords));
      if (values.back() > 0) pos.push_back(r);
      if (values.back() < 0) neg.push_back(r);
    }
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (values[r] >= 0) {
        Ray kept = rays[r];
        if (values[r] == 0) kept.zeros.set(i);
        next.push_back(std::move(kept));
      }
    }
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        const Bits common = rays[p].zeros & rays[q].zeros;
        if (common.count() + 2 < d) continue;
        // Combinatorial adjacency: no third ray is tight on all of `common`.
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.is_subset_of(rays[r].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray fresh;
        fresh.coords.resize(d);
        const Integer& vp = values[p];
        const Integer vq = -values[q];
        for (std::size_t c = 0; c < d; ++c) {
          fresh.coords[c] = vp * rays[q].coords[c] + vq * rays[p].coords[c];
        }
        make_primitive(fresh.coords);
        fresh.zeros = common;
        fresh.zeros.set(i);
        next.push_back(std::move(fresh));
      }
    }
    rays = std::move(next);
    processed.set(i);
  }

  std::vector<AffineForm> facets;
  for (const auto& ray : rays) {
    // Exact rank check: the tight vertices must span a hyperplane.
    RationalMatrix tight;
    for (std::size_t i = 0; i < num_points; ++i) {
      if (ray.zeros.test(i)) tight.push_back(homogenized(poly.vertices[i].coords));
    }
    if (rank(tight) != d - 1) {
      fail(ErrorCode::NonConvergence, "hull oracle produced a non-facet ray");
    }
    AffineForm g;
    g.constant = Rational(ray.coords[0]);
    for (std::size_t c = 1; c < d; ++c) g.coeffs.emplace_back(ray.coords[c]);
    g.label = "hull";
    facets.push_back(std::move(g));
  }
  std::sort(facets.begin(), facets.end(), [](const AffineForm& a, const AffineForm& b) {
    if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
    return a.constant < b.constant;
  });
  return facets;
}

}  // namespace loglin
