#include "loglin/junction.hpp"

#include "loglin/error.hpp"

#include <algorithm>
#include <map>

namespace loglin {

namespace {

std::vector<VarSet> adjacency(const GeneratingClass& gc) {
  const int n = gc.num_variables();
  std::vector<VarSet> adj(n, 0);
  for (VarSet g : gc.generators()) {
    for (int v = 0; v < n; ++v) {
      if (g & (VarSet{1} << v)) adj[v] |= g & ~(VarSet{1} << v);
    }
  }
  return adj;
}

bool is_clique(const std::vector<VarSet>& adj, VarSet s) {
  for (int v = 0; v < static_cast<int>(adj.size()); ++v) {
    if ((s & (VarSet{1} << v)) && !is_subset(s & ~(VarSet{1} << v), adj[v])) return false;
  }
  return true;
}

}  // namespace

DecomposableStructure junction_structure(const GeneratingClass& gc) {
  const int n = gc.num_variables();
  const std::vector<VarSet> adj = adjacency(gc);

  // Maximum cardinality search; ties go to the lowest variable index.
  DecomposableStructure ds;
  std::vector<int> weight(n, 0);
  VarSet visited = 0;
  std::vector<VarSet> earlier(n, 0);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (visited & (VarSet{1} << v)) continue;
      if (best < 0 || weight[v] > weight[best]) best = v;
    }
    earlier[best] = adj[best] & visited;
    visited |= VarSet{1} << best;
    ds.visit_order.push_back(best);
    for (int w = 0; w < n; ++w) {
      if ((adj[best] & (VarSet{1} << w)) && !(visited & (VarSet{1} << w))) ++weight[w];
    }
  }

  // Chordal iff every vertex's earlier neighbours form a clique.
  for (int v : ds.visit_order) {
    if (!is_clique(adj, earlier[v])) {
      fail(ErrorCode::NotDecomposable,
           "interaction graph is not chordal (vertex '" + gc.variables()[v].name +
               "' has non-adjacent earlier neighbours)");
    }
  }

  // Candidate cliques {v} ∪ earlier(v) in visit order; keep maximal ones.
  std::vector<VarSet> candidates;
  for (int v : ds.visit_order) candidates.push_back(earlier[v] | (VarSet{1} << v));
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    bool maximal = true;
    for (std::size_t b = 0; b < candidates.size() && maximal; ++b) {
      if (a != b && is_subset(candidates[a], candidates[b]) && candidates[a] != candidates[b]) {
        maximal = false;
      }
    }
    if (maximal && std::find(ds.cliques.begin(), ds.cliques.end(), candidates[a]) == ds.cliques.end()) {
      ds.cliques.push_back(candidates[a]);
    }
  }

  // Graphical: the generators must be exactly the maximal cliques.
  std::vector<VarSet> sorted_cliques = ds.cliques;
  std::sort(sorted_cliques.begin(), sorted_cliques.end(), canonical_less);
  if (sorted_cliques != gc.generators()) {
    fail(ErrorCode::NotDecomposable,
         "model is not graphical: generators differ from the cliques of the interaction graph");
  }

  // Cliques in visit order satisfy running intersection.
  std::map<VarSet, int> seps;
  VarSet seen = 0;
  for (std::size_t k = 0; k < ds.cliques.size(); ++k) {
    if (k > 0) ++seps[ds.cliques[k] & seen];
    seen |= ds.cliques[k];
  }
  std::vector<VarSet> keys;
  for (const auto& [s, nu] : seps) keys.push_back(s);
  std::sort(keys.begin(), keys.end(), canonical_less);
  for (VarSet s : keys) ds.separators.push_back({s, seps[s]});
  return ds;
}

bool is_decomposable(const GeneratingClass& gc) {
  try {
    junction_structure(gc);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotDecomposable) return false;
    throw;
  }
}

}  // namespace loglin
