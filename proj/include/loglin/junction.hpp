#ifndef LOGLIN_JUNCTION_HPP
#define LOGLIN_JUNCTION_HPP

#include "loglin/model.hpp"

#include <vector>

namespace loglin {

struct Separator {
  VarSet set = 0;
  int multiplicity = 0;
};

/// Cliques in a running-intersection order and the separator multiset.
/// Disconnected graphs carry the empty separator with multiplicity
/// (#components - 1).
struct DecomposableStructure {
  std::vector<VarSet> cliques;
  std::vector<Separator> separators;
  /// Maximum cardinality search visit order (a perfect elimination order
  /// when reversed).
  std::vector<int> visit_order;
};

/// Junction tree of a graphical model on a chordal graph. Throws
/// NotDecomposable when the generators are not the cliques of their
/// 2-section graph or that graph is not chordal.
DecomposableStructure junction_structure(const GeneratingClass& gc);

bool is_decomposable(const GeneratingClass& gc);

}  // namespace loglin

#endif  // LOGLIN_JUNCTION_HPP
