#include "loglin/model.hpp"

#include "loglin/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace loglin {

bool canonical_less(VarSet a, VarSet b) {
  const int sa = set_size(a);
  const int sb = set_size(b);
  if (sa != sb) return sa < sb;
  // Same size: compare sorted member lists lexicographically. The first
  // differing member decides; the set holding the smaller index sorts first.
  const VarSet diff = a ^ b;
  if (diff == 0) return false;
  const VarSet lowest = diff & (~diff + 1);
  return (a & lowest) != 0;
}

namespace {

void check_variables(const std::vector<Variable>& variables) {
  if (variables.empty()) fail(ErrorCode::InvalidArgument, "model has no variables");
  if (variables.size() > static_cast<std::size_t>(kMaxVariables)) {
    fail(ErrorCode::DimensionTooLarge, "at most 32 variables are supported");
  }
  std::set<std::string> names;
  for (const auto& v : variables) {
    if (v.name.empty()) fail(ErrorCode::InvalidArgument, "variable with empty name");
    if (v.card < 2) {
      fail(ErrorCode::InvalidArgument, "variable '" + v.name + "' has cardinality < 2");
    }
    if (!names.insert(v.name).second) {
      fail(ErrorCode::InvalidArgument, "duplicate variable name '" + v.name + "'");
    }
  }
}

}  // namespace

GeneratingClass::GeneratingClass(std::vector<Variable> variables, std::vector<VarSet> generators)
    : variables_(std::move(variables)), generators_(std::move(generators)) {
  check_variables(variables_);
  const int n = num_variables();
  all_ = n == 32 ? ~VarSet{0} : ((VarSet{1} << n) - 1);
  VarSet covered = 0;
  for (VarSet g : generators_) {
    if (g == 0) fail(ErrorCode::InvalidArgument, "empty generator");
    if (!is_subset(g, all_)) fail(ErrorCode::InvalidArgument, "generator references unknown variable");
    covered |= g;
  }
  if (generators_.empty()) fail(ErrorCode::InvalidArgument, "model has no generators");
  if (covered != all_) fail(ErrorCode::InvalidArgument, "generators do not cover every variable");
  for (std::size_t a = 0; a < generators_.size(); ++a) {
    for (std::size_t b = 0; b < generators_.size(); ++b) {
      if (a != b && is_subset(generators_[a], generators_[b])) {
        fail(ErrorCode::InvalidArgument,
             "generator {" + set_name(generators_[a]) + "} is contained in {" +
                 set_name(generators_[b]) + "}");
      }
    }
  }
  std::sort(generators_.begin(), generators_.end(), canonical_less);

  std::set<VarSet> closure;
  for (VarSet g : generators_) {
    // Enumerate nonempty submasks of g.
    for (VarSet s = g; s != 0; s = (s - 1) & g) closure.insert(s);
  }
  closure_.assign(closure.begin(), closure.end());
  std::sort(closure_.begin(), closure_.end(), canonical_less);

  for (const auto& v : variables_) {
    if (num_cells_ > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(v.card)) {
      fail(ErrorCode::DimensionTooLarge, "cell count overflows");
    }
    num_cells_ *= static_cast<std::size_t>(v.card);
  }
}

GeneratingClass GeneratingClass::from_generators(std::vector<Variable> variables,
                                                 std::vector<VarSet> generators,
                                                 std::vector<std::string>* warnings) {
  check_variables(variables);
  std::vector<VarSet> kept;
  auto name_of = [&](VarSet s) {
    std::string out;
    for (int v = 0; v < static_cast<int>(variables.size()); ++v) {
      if (s & (VarSet{1} << v)) {
        if (!out.empty()) out += ",";
        out += variables[v].name;
      }
    }
    return out;
  };
  for (std::size_t a = 0; a < generators.size(); ++a) {
    const VarSet g = generators[a];
    if (g == 0) fail(ErrorCode::InvalidArgument, "empty generator");
    bool drop = false;
    for (std::size_t b = 0; b < generators.size() && !drop; ++b) {
      if (a == b) continue;
      const VarSet h = generators[b];
      if (g == h && b < a) {
        drop = true;
        if (warnings) warnings->push_back("duplicate generator {" + name_of(g) + "} removed");
      } else if (g != h && is_subset(g, h)) {
        drop = true;
        if (warnings) {
          warnings->push_back("generator {" + name_of(g) + "} is contained in {" + name_of(h) +
                              "} and was dropped");
        }
      }
    }
    if (!drop) kept.push_back(g);
  }
  return GeneratingClass(std::move(variables), std::move(kept));
}

bool GeneratingClass::contains(VarSet s) const {
  if (s == 0) return false;
  return std::any_of(generators_.begin(), generators_.end(),
                     [s](VarSet g) { return is_subset(s, g); });
}

std::size_t GeneratingClass::cells_over(VarSet s) const {
  std::size_t n = 1;
  for (int v = 0; v < num_variables(); ++v) {
    if (s & (VarSet{1} << v)) n *= static_cast<std::size_t>(variables_[v].card);
  }
  return n;
}

std::optional<int> GeneratingClass::find_variable(std::string_view name) const {
  for (int v = 0; v < num_variables(); ++v) {
    if (variables_[v].name == name) return v;
  }
  return std::nullopt;
}

std::string GeneratingClass::set_name(VarSet s) const {
  std::string out;
  for (int v = 0; v < num_variables(); ++v) {
    if (s & (VarSet{1} << v)) {
      if (!out.empty()) out += ",";
      out += variables_[v].name;
    }
  }
  return out;
}

bool GeneratingClass::operator==(const GeneratingClass& other) const {
  if (variables_.size() != other.variables_.size()) return false;
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    if (variables_[v].name != other.variables_[v].name ||
        variables_[v].card != other.variables_[v].card) {
      return false;
    }
  }
  return generators_ == other.generators_;
}

VarSet Cell::support() const {
  VarSet s = 0;
  for (std::size_t v = 0; v < levels.size(); ++v) {
    if (levels[v] != 0) s |= VarSet{1} << v;
  }
  return s;
}

bool triangle(const MarginalIndex& j, const Cell& i) {
  for (std::size_t v = 0; v < j.cell.levels.size(); ++v) {
    if ((j.support & (VarSet{1} << v)) && j.cell.levels[v] != i.levels[v]) return false;
  }
  return true;
}

std::string cell_label(const GeneratingClass& gc, const Cell& cell) {
  std::string out;
  for (int v = 0; v < gc.num_variables(); ++v) {
    if (cell.levels[v] == 0) continue;
    if (!out.empty()) out += ",";
    out += gc.variables()[v].name + ":" + std::to_string(cell.levels[v]);
  }
  return out.empty() ? "0" : out;
}

IndexSet::IndexSet(const GeneratingClass& gc) {
  const int n = gc.num_variables();
  for (int v = 0; v < n; ++v) cards_.push_back(gc.card(v));
  for (VarSet d : gc.closure()) {
    offsets_[d] = entries_.size();
    std::vector<int> members;
    for (int v = 0; v < n; ++v) {
      if (d & (VarSet{1} << v)) members.push_back(v);
    }
    // Odometer over nonzero levels, first member most significant.
    std::vector<int> levels(members.size(), 1);
    while (true) {
      MarginalIndex j;
      j.cell.levels.assign(n, 0);
      for (std::size_t k = 0; k < members.size(); ++k) j.cell.levels[members[k]] = levels[k];
      j.support = d;
      labels_.push_back(cell_label(gc, j.cell));
      by_label_.emplace(labels_.back(), entries_.size());
      entries_.push_back(std::move(j));
      int k = static_cast<int>(members.size()) - 1;
      while (k >= 0 && levels[k] == cards_[members[k]] - 1) {
        levels[k] = 1;
        --k;
      }
      if (k < 0) break;
      ++levels[k];
    }
  }
}

std::optional<std::size_t> IndexSet::find(const Cell& cell) const {
  const VarSet s = cell.support();
  const auto it = offsets_.find(s);
  if (it == offsets_.end()) return std::nullopt;
  std::size_t pos = 0;
  for (std::size_t v = 0; v < cell.levels.size(); ++v) {
    if (!(s & (VarSet{1} << v))) continue;
    pos = pos * static_cast<std::size_t>(cards_[v] - 1) + static_cast<std::size_t>(cell.levels[v] - 1);
  }
  return it->second + pos;
}

std::optional<std::size_t> IndexSet::find_label(std::string_view label) const {
  const auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

IndexSet build_index_set(const GeneratingClass& gc) { return IndexSet(gc); }

Model::Model(GeneratingClass gc) : gc_(std::move(gc)), J_(gc_) {}

Cell Model::cell(std::size_t k) const {
  const int n = gc_.num_variables();
  Cell c;
  c.levels.assign(n, 0);
  for (int v = n - 1; v >= 0; --v) {
    const auto card = static_cast<std::size_t>(gc_.card(v));
    c.levels[v] = static_cast<int>(k % card);
    k /= card;
  }
  return c;
}

std::size_t Model::cell_index(const Cell& cell) const {
  std::size_t k = 0;
  for (int v = 0; v < gc_.num_variables(); ++v) {
    k = k * static_cast<std::size_t>(gc_.card(v)) + static_cast<std::size_t>(cell.levels[v]);
  }
  return k;
}

bool Model::valid_cell(const Cell& cell) const {
  if (cell.levels.size() != static_cast<std::size_t>(gc_.num_variables())) return false;
  for (int v = 0; v < gc_.num_variables(); ++v) {
    if (cell.levels[v] < 0 || cell.levels[v] >= gc_.card(v)) return false;
  }
  return true;
}

std::vector<std::size_t> Model::below(const Cell& i) const {
  std::vector<std::size_t> out;
  const VarSet s = i.support();
  for (VarSet d : gc_.closure()) {
    if (!is_subset(d, s)) continue;
    Cell j;
    j.levels.assign(i.levels.size(), 0);
    for (std::size_t v = 0; v < i.levels.size(); ++v) {
      if (d & (VarSet{1} << v)) j.levels[v] = i.levels[v];
    }
    out.push_back(*J_.find(j));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> f_vector(const Model& model, const Cell& i) {
  std::vector<int> f(model.dim(), 0);
  for (std::size_t j : model.below(i)) f[j] = 1;
  return f;
}

ContingencyTable::ContingencyTable(std::vector<int> cards, std::map<Cell, std::int64_t> counts)
    : cards_(std::move(cards)) {
  for (auto& [cell, n] : counts) {
    if (cell.levels.size() != cards_.size()) {
      fail(ErrorCode::InvalidArgument, "table cell has the wrong number of variables");
    }
    for (std::size_t v = 0; v < cards_.size(); ++v) {
      if (cell.levels[v] < 0 || cell.levels[v] >= cards_[v]) {
        fail(ErrorCode::InvalidArgument, "table cell level out of range");
      }
    }
    if (n < 0) fail(ErrorCode::InvalidArgument, "negative cell count");
    if (n == 0) continue;
    total_ += n;
    counts_.emplace(cell, n);
  }
  if (total_ < 1) fail(ErrorCode::InvalidArgument, "table total N must be at least 1");
}

std::int64_t ContingencyTable::count(const Cell& cell) const {
  const auto it = counts_.find(cell);
  return it == counts_.end() ? 0 : it->second;
}

std::size_t ContingencyTable::positive_margins(VarSet e) const {
  std::set<std::vector<int>> seen;
  for (const auto& [cell, n] : counts_) {
    std::vector<int> proj;
    for (std::size_t v = 0; v < cell.levels.size(); ++v) {
      if (e & (VarSet{1} << v)) proj.push_back(cell.levels[v]);
    }
    seen.insert(std::move(proj));
  }
  return seen.size();
}

std::vector<std::int64_t> marginal_counts(const Model& model, const ContingencyTable& table) {
  std::vector<std::int64_t> t(model.dim(), 0);
  for (const auto& [cell, n] : table.counts()) {
    for (std::size_t j : model.below(cell)) t[j] += n;
  }
  return t;
}

std::vector<double> logp_from_theta(const Model& model, std::span<const double> theta,
                                    std::optional<double> theta0) {
  if (theta.size() != model.dim()) fail(ErrorCode::InvalidArgument, "theta has the wrong length");
  if (model.num_cells() > kDenseCellLimit) {
    fail(ErrorCode::DimensionTooLarge, "too many cells for dense enumeration");
  }
  std::vector<double> s = apply_H_star<double>(model, theta);
  if (!theta0) {
    const double mx = *std::max_element(s.begin(), s.end());
    double acc = 0.0;
    for (double x : s) acc += std::exp(x - mx);
    theta0 = -(mx + std::log(acc));
  }
  for (double& x : s) x += *theta0;
  return s;
}

LoglinearParam theta_from_logp(const Model& model, std::span<const double> logp, double tolerance) {
  if (logp.size() != model.num_cells()) {
    fail(ErrorCode::InvalidArgument, "log p must be given on every cell");
  }
  LoglinearParam out;
  out.theta0 = logp[0];
  out.theta.assign(model.dim(), 0.0);
  for (std::size_t k = 0; k < model.dim(); ++k) {
    const MarginalIndex& j = model.J()[k];
    const VarSet s = j.support;
    const int size = set_size(s);
    double acc = 0.0;
    // Every subset of S(j), the empty set included.
    for (VarSet sub = s;; sub = (sub - 1) & s) {
      Cell c;
      c.levels.assign(j.cell.levels.size(), 0);
      for (std::size_t v = 0; v < c.levels.size(); ++v) {
        if (sub & (VarSet{1} << v)) c.levels[v] = j.cell.levels[v];
      }
      const double term = logp[model.cell_index(c)];
      acc += ((size - set_size(sub)) % 2 == 0) ? term : -term;
      if (sub == 0) break;
    }
    out.theta[k] = acc;
  }
  const std::vector<double> back = logp_from_theta(model, out.theta, out.theta0);
  double residual = 0.0;
  for (std::size_t k = 0; k < back.size(); ++k) residual = std::max(residual, std::abs(back[k] - logp[k]));
  if (!(residual <= tolerance)) {
    fail(ErrorCode::NotInModel,
         "log p is not in the model (round-trip residual " + std::to_string(residual) + ")");
  }
  return out;
}

}  // namespace loglin
