#ifndef LOGLIN_MODEL_HPP
#define LOGLIN_MODEL_HPP

#include "loglin/rational.hpp"

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace loglin {

/// Subset of the variable set V, one bit per variable index.
using VarSet = std::uint32_t;
inline constexpr int kMaxVariables = 32;

inline int set_size(VarSet s) { return std::popcount(s); }
inline bool is_subset(VarSet a, VarSet b) { return (a & ~b) == 0; }

/// Canonical set order: by size, then lexicographically by the sorted list of
/// member indices.
bool canonical_less(VarSet a, VarSet b);

struct Variable {
  std::string name;
  int card = 2;
};

/// Hierarchical model family: the maximal generators plus their downward
/// closure D (all nonempty subsets of generators).
class GeneratingClass {
 public:
  /// Strict constructor: generators must be nonempty, distinct, pairwise
  /// non-nested, and cover every variable.
  GeneratingClass(std::vector<Variable> variables, std::vector<VarSet> generators);

  /// Lenient constructor used by file ingestion: duplicate and dominated
  /// generators are dropped, each drop is described in `warnings`.
  static GeneratingClass from_generators(std::vector<Variable> variables,
                                         std::vector<VarSet> generators,
                                         std::vector<std::string>* warnings);

  const std::vector<Variable>& variables() const { return variables_; }
  int num_variables() const { return static_cast<int>(variables_.size()); }
  int card(int v) const { return variables_[v].card; }
  VarSet all() const { return all_; }

  /// Maximal elements of D, canonical order.
  const std::vector<VarSet>& generators() const { return generators_; }
  /// All of D, canonical order.
  const std::vector<VarSet>& closure() const { return closure_; }
  bool contains(VarSet s) const;

  std::size_t num_cells() const { return num_cells_; }
  /// Product of cardinalities over s (|I_s|); 1 for the empty set.
  std::size_t cells_over(VarSet s) const;

  std::optional<int> find_variable(std::string_view name) const;
  /// "a,b" style name of a variable set; "" for the empty set.
  std::string set_name(VarSet s) const;

  bool operator==(const GeneratingClass& other) const;

 private:
  std::vector<Variable> variables_;
  std::vector<VarSet> generators_;
  std::vector<VarSet> closure_;
  VarSet all_ = 0;
  std::size_t num_cells_ = 1;
};

/// Full level assignment (i_v), each level in {0, ..., |I_v|-1}.
struct Cell {
  std::vector<int> levels;

  VarSet support() const;
  auto operator<=>(const Cell&) const = default;
};

/// An element j of J: a cell whose support lies in D.
struct MarginalIndex {
  Cell cell;
  VarSet support = 0;
};

/// j ◁ i: S(j) ⊆ S(i) and the levels agree on S(j).
bool triangle(const MarginalIndex& j, const Cell& i);

/// The ordered index set J, ordered by (support size, support, levels).
class IndexSet {
 public:
  explicit IndexSet(const GeneratingClass& gc);

  std::size_t size() const { return entries_.size(); }
  const MarginalIndex& operator[](std::size_t k) const { return entries_[k]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Position of the cell in J, if its support is in D.
  std::optional<std::size_t> find(const Cell& cell) const;
  std::optional<std::size_t> find_label(std::string_view label) const;
  const std::string& label(std::size_t k) const { return labels_[k]; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<MarginalIndex> entries_;
  std::vector<std::string> labels_;
  std::unordered_map<VarSet, std::size_t> offsets_;
  std::map<std::string, std::size_t, std::less<>> by_label_;
  std::vector<int> cards_;
};

IndexSet build_index_set(const GeneratingClass& gc);

/// Canonical label of a marginal cell: "a:1,b:2" (support variables in index
/// order). The baseline cell has label "0".
std::string cell_label(const GeneratingClass& gc, const Cell& cell);

/// Bundles a generating class with its index set and cell enumeration.
/// Cells are enumerated in mixed radix, first variable most significant.
class Model {
 public:
  explicit Model(GeneratingClass gc);

  const GeneratingClass& gc() const { return gc_; }
  const IndexSet& J() const { return J_; }
  std::size_t dim() const { return J_.size(); }
  std::size_t num_cells() const { return gc_.num_cells(); }

  Cell cell(std::size_t k) const;
  std::size_t cell_index(const Cell& cell) const;
  bool valid_cell(const Cell& cell) const;

  /// Positions in J of all j with j ◁ i.
  std::vector<std::size_t> below(const Cell& i) const;

 private:
  GeneratingClass gc_;
  IndexSet J_;
};

/// 0/1 vector over J with coordinate j equal to 1 iff j ◁ i.
std::vector<int> f_vector(const Model& model, const Cell& i);

/// Upper bound on |I| for dense cell enumeration.
inline constexpr std::size_t kDenseCellLimit = std::size_t{1} << 22;

/// H: R^I -> R^J, H(x)_j = sum over i with j ◁ i of x(i). x is dense over cells.
template <typename T>
std::vector<T> apply_H(const Model& model, std::span<const T> x) {
  std::vector<T> out(model.dim(), T(0));
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == T(0)) continue;
    for (std::size_t j : model.below(model.cell(k))) out[j] += x[k];
  }
  return out;
}

/// H*: R^J -> R^I, H*(θ)(i) = sum over j ◁ i of θ_j.
template <typename T>
std::vector<T> apply_H_star(const Model& model, std::span<const T> theta) {
  std::vector<T> out(model.num_cells(), T(0));
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (std::size_t j : model.below(model.cell(k))) out[k] += theta[j];
  }
  return out;
}

/// Nonnegative integer counts over cells; absent cells read as zero.
class ContingencyTable {
 public:
  ContingencyTable(std::vector<int> cards, std::map<Cell, std::int64_t> counts);

  const std::vector<int>& cards() const { return cards_; }
  /// Nonzero cells only.
  const std::map<Cell, std::int64_t>& counts() const { return counts_; }
  std::int64_t count(const Cell& cell) const;
  std::int64_t total() const { return total_; }

  /// Number of E-marginal cells with positive count.
  std::size_t positive_margins(VarSet e) const;

 private:
  std::vector<int> cards_;
  std::map<Cell, std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// t(j) = n(j_{S(j)}) for every j in J; equals H(n).
std::vector<std::int64_t> marginal_counts(const Model& model, const ContingencyTable& table);

struct LoglinearParam {
  std::vector<double> theta;
  double theta0 = 0.0;
};

/// log p(i) = θ₀ + sum over j ◁ i of θ_j. When theta0 is absent it is set to
/// -log L(θ), evaluated with log-sum-exp. Output is dense over cells.
std::vector<double> logp_from_theta(const Model& model, std::span<const double> theta,
                                    std::optional<double> theta0 = std::nullopt);

/// Möbius inversion of log p including the baseline term. Throws NotInModel
/// when the round trip misses the input by more than `tolerance` (∞-norm).
LoglinearParam theta_from_logp(const Model& model, std::span<const double> logp,
                               double tolerance = 1e-9);

}  // namespace loglin

#endif  // LOGLIN_MODEL_HPP
