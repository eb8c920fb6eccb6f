#include "loglin/io.hpp"

#include "loglin/error.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace loglin {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

Json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::Parse, std::string(what) + ": " + e.what());
  }
}

[[noreturn]] void schema(const std::string& field, const std::string& problem) {
  fail(ErrorCode::Parse, "model field " + field + ": " + problem);
}

}  // namespace

GeneratingClass parse_model_json(std::string_view text, std::vector<std::string>* warnings) {
  const Json doc = parse_json_text(text, "model");
  if (!doc.is_object()) schema("(root)", "expected an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "variables" && key != "generators") schema(key, "unknown field");
  }
  if (!doc.contains("variables")) schema("variables", "missing");
  if (!doc.contains("generators")) schema("generators", "missing");
  const Json& vars = doc["variables"];
  if (!vars.is_array() || vars.empty()) schema("variables", "expected a nonempty array");
  if (vars.size() > static_cast<std::size_t>(kMaxVariables)) {
    schema("variables", "at most " + std::to_string(kMaxVariables) + " variables are supported");
  }
  std::vector<Variable> variables;
  std::map<std::string, int, std::less<>> index;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const std::string field = "variables[" + std::to_string(v) + "]";
    const Json& e = vars[v];
    if (!e.is_object()) schema(field, "expected an object");
    for (const auto& [key, value] : e.items()) {
      if (key != "name" && key != "card") schema(field + "." + key, "unknown field");
    }
    if (!e.contains("name") || !e["name"].is_string()) schema(field + ".name", "expected a string");
    if (!e.contains("card") || !e["card"].is_number_integer()) schema(field + ".card", "expected an integer");
    Variable var{e["name"].get<std::string>(), 0};
    const auto card = e["card"].get<std::int64_t>();
    if (var.name.empty()) schema(field + ".name", "empty name");
    if (var.name.find_first_of(",:;|[]{} \t\"") != std::string::npos) {
      schema(field + ".name", "name contains a reserved character");
    }
    if (card < 2 || card > 1'000'000) schema(field + ".card", "cardinality must be at least 2");
    var.card = static_cast<int>(card);
    if (!index.emplace(var.name, static_cast<int>(v)).second) schema(field + ".name", "duplicate name");
    variables.push_back(std::move(var));
  }
  const Json& gens = doc["generators"];
  if (!gens.is_array() || gens.empty()) schema("generators", "expected a nonempty array");
  std::vector<VarSet> generators;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const std::string field = "generators[" + std::to_string(g) + "]";
    if (!gens[g].is_array()) schema(field, "expected an array of variable names");
    if (gens[g].empty()) schema(field, "empty generator");
    VarSet s = 0;
    for (std::size_t k = 0; k < gens[g].size(); ++k) {
      const Json& name = gens[g][k];
      const std::string sub = field + "[" + std::to_string(k) + "]";
      if (!name.is_string()) schema(sub, "expected a variable name");
      auto it = index.find(name.get<std::string>());
      if (it == index.end()) schema(sub, "unknown variable " + name.get<std::string>());
      const VarSet bit = VarSet{1} << it->second;
      if (s & bit) schema(sub, "variable repeated in generator");
      s |= bit;
    }
    generators.push_back(s);
  }
  try {
    return GeneratingClass::from_generators(std::move(variables), std::move(generators), warnings);
  } catch (const Error& e) {
    fail(ErrorCode::Parse, std::string("model: ") + e.what());
  }
}

GeneratingClass parse_model_file(const std::string& path, std::vector<std::string>* warnings) {
  return parse_model_json(read_file(path), warnings);
}

Json set_json(const GeneratingClass& gc, VarSet s) {
  Json out = Json::array();
  for (int v = 0; v < gc.num_variables(); ++v) {
    if (s & (VarSet{1} << v)) out.push_back(gc.variables()[v].name);
  }
  return out;
}

Json model_to_json(const GeneratingClass& gc) {
  Json vars = Json::array();
  for (const auto& v : gc.variables()) vars.push_back(Json{{"name", v.name}, {"card", v.card}});
  Json gens = Json::array();
  for (VarSet g : gc.generators()) gens.push_back(set_json(gc, g));
  return Json{{"variables", std::move(vars)}, {"generators", std::move(gens)}};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool parse_integer(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

ContingencyTable parse_table_csv(std::string_view text, const GeneratingClass& gc) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    const std::string_view line = trim(text.substr(start, nl - start));
    if (!line.empty() && line.front() != '#') lines.emplace_back(line_no, line);
    start = nl + 1;
  }
  if (lines.empty()) fail(ErrorCode::Parse, "table: missing header row");
  const auto header = split_fields(lines.front().second);
  const int nv = gc.num_variables();
  std::vector<int> column_of(nv, -1);
  int count_column = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(header[c]);
    if (name == "count") {
      if (count_column >= 0) fail(ErrorCode::Parse, "table: duplicate column count");
      count_column = static_cast<int>(c);
      continue;
    }
    const auto v = gc.find_variable(name);
    if (!v) fail(ErrorCode::Parse, "table: unknown column " + name);
    if (column_of[*v] >= 0) fail(ErrorCode::Parse, "table: duplicate column " + name);
    column_of[*v] = static_cast<int>(c);
  }
  for (int v = 0; v < nv; ++v) {
    if (column_of[v] < 0) fail(ErrorCode::Parse, "table: missing column " + gc.variables()[v].name);
  }
  if (count_column < 0) fail(ErrorCode::Parse, "table: missing column count");

  std::map<Cell, std::int64_t> counts;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto [number, line] = lines[r];
    const std::string where = "table line " + std::to_string(number) + ": ";
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      fail(ErrorCode::Parse, where + "expected " + std::to_string(header.size()) + " fields");
    }
    Cell cell;
    cell.levels.resize(nv);
    for (int v = 0; v < nv; ++v) {
      int level = 0;
      if (!parse_integer(fields[column_of[v]], level)) {
        fail(ErrorCode::Parse, where + "level of " + gc.variables()[v].name + " is not an integer");
      }
      if (level < 0 || level >= gc.card(v)) {
        fail(ErrorCode::InvalidArgument, where + "level " + std::to_string(level) + " of " +
                                             gc.variables()[v].name + " is out of range");
      }
      cell.levels[v] = level;
    }
    std::int64_t n = 0;
    if (!parse_integer(fields[count_column], n)) fail(ErrorCode::Parse, where + "count is not an integer");
    if (n < 0) fail(ErrorCode::InvalidArgument, where + "negative count " + std::to_string(n));
    if (n == 0) continue;
    auto& slot = counts[cell];
    if (slot > std::numeric_limits<std::int64_t>::max() - n) fail(ErrorCode::InvalidArgument, where + "count overflow");
    slot += n;
  }
  std::vector<int> cards;
  for (const auto& v : gc.variables()) cards.push_back(v.card);
  return ContingencyTable(std::move(cards), std::move(counts));
}

ContingencyTable parse_table_file(const std::string& path, const GeneratingClass& gc) {
  return parse_table_csv(read_file(path), gc);
}

std::string table_to_csv(const GeneratingClass& gc, const ContingencyTable& table) {
  std::string out;
  for (const auto& v : gc.variables()) out += v.name + ",";
  out += "count\n";
  for (const auto& [cell, n] : table.counts()) {
    for (int level : cell.levels) out += std::to_string(level) + ",";
    out += std::to_string(n) + "\n";
  }
  return out;
}

RationalVector parse_point_json(std::string_view text, const Model& model) {
  const Json doc = parse_json_text(text, "point");
  if (!doc.is_object()) fail(ErrorCode::Parse, "point: expected an object keyed by J labels");
  RationalVector out(model.dim());
  std::vector<bool> seen(model.dim(), false);
  for (const auto& [key, value] : doc.items()) {
    const auto k = model.J().find_label(key);
    if (!k) fail(ErrorCode::Parse, "point: unknown label " + key);
    try {
      if (value.is_string()) {
        out[*k] = parse_rational(value.get<std::string>());
      } else if (value.is_number_integer()) {
        out[*k] = Rational(value.get<std::int64_t>());
      } else if (value.is_number()) {
        out[*k] = parse_rational(value.dump());
      } else {
        fail(ErrorCode::Parse, "expected a number or \"p/q\" string");
      }
    } catch (const Error& e) {
      fail(ErrorCode::Parse, "point: label " + key + ": " + e.what());
    }
    seen[*k] = true;
  }
  for (std::size_t k = 0; k < model.dim(); ++k) {
    if (!seen[k]) fail(ErrorCode::Parse, "point: missing label " + model.J().label(k));
  }
  return out;
}

RationalVector parse_point_file(const std::string& path, const Model& model) {
  return parse_point_json(read_file(path), model);
}

Json rational_json(const Rational& r) { return format_rational(r); }

Json point_to_json(const Model& model, std::span<const Rational> point) {
  Json out = Json::object();
  for (std::size_t k = 0; k < point.size(); ++k) out[model.J().label(k)] = rational_json(point[k]);
  return out;
}

namespace {

Json real_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

template <typename T, typename F>
Json optional_json(const std::optional<T>& v, F convert) {
  if (!v) return nullptr;
  return convert(*v);
}

Json cell_json(const Cell& c) { return Json(c.levels); }

}  // namespace

Json describe_model(const Model& model) {
  const GeneratingClass& gc = model.gc();
  Json out = model_to_json(gc);
  Json closure = Json::array();
  for (VarSet s : gc.closure()) closure.push_back(set_json(gc, s));
  out["closure"] = std::move(closure);
  out["num_cells"] = gc.num_cells();
  out["dim"] = model.dim();
  out["J"] = model.J().labels();
  const bool decomposable = is_decomposable(gc);
  out["decomposable"] = decomposable;
  if (decomposable) {
    const DecomposableStructure ds = junction_structure(gc);
    Json cliques = Json::array();
    for (VarSet c : ds.cliques) cliques.push_back(set_json(gc, c));
    Json seps = Json::array();
    for (const auto& s : ds.separators) {
      seps.push_back(Json{{"set", set_json(gc, s.set)}, {"multiplicity", s.multiplicity}});
    }
    out["cliques"] = std::move(cliques);
    out["separators"] = std::move(seps);
  }
  out["binary_cycle"] = is_binary_cycle(gc);
  return out;
}

Json facet_to_json(const Model& model, const AffineForm& g) {
  Json coeffs = Json::object();
  for (std::size_t k = 0; k < g.coeffs.size(); ++k) {
    if (g.coeffs[k] != 0) coeffs[model.J().label(k)] = rational_json(g.coeffs[k]);
  }
  return Json{{"label", g.label}, {"constant", rational_json(g.constant)}, {"coeffs", std::move(coeffs)}};
}

Json facets_to_json(const Model& model, const std::vector<AffineForm>& facets,
                    std::optional<FacetSource> provenance, bool complete) {
  Json list = Json::array();
  for (const auto& g : facets) list.push_back(facet_to_json(model, g));
  Json out;
  out["provenance"] = provenance ? Json(facet_source_name(*provenance)) : Json(nullptr);
  out["complete"] = complete;
  out["count"] = facets.size();
  out["facets"] = std::move(list);
  return out;
}

std::string facets_to_table(const Model& model, const std::vector<AffineForm>& facets) {
  std::ostringstream out;
  for (const auto& g : facets) {
    out << g.label << ":";
    bool first = true;
    if (g.constant != 0) {
      out << " " << format_rational(g.constant);
      first = false;
    }
    for (std::size_t k = 0; k < g.coeffs.size(); ++k) {
      const Rational& c = g.coeffs[k];
      if (c == 0) continue;
      if (first) {
        out << (c > 0 ? " " : " -");
      } else {
        out << (c > 0 ? " + " : " - ");
      }
      first = false;
      const Rational mag = abs(c);
      if (mag != 1) out << format_rational(mag) << "*";
      out << "m[" << model.J().label(k) << "]";
    }
    out << " >= 0\n";
  }
  return out.str();
}

Json face_report_to_json(const Model& model, const FaceReport& report) {
  Json vertices = Json::array();
  for (const auto& c : report.face_vertices) vertices.push_back(cell_json(c));
  Json out;
  out["point"] = point_to_json(model, report.point);
  out["dimension"] = report.dimension;
  out["active_facets"] = report.active_facets;
  out["face_vertices"] = std::move(vertices);
  return out;
}

Json charfun_to_json(const Model& model, const CharFunValue& value) {
  (void)model;
  auto factors = [](const std::vector<FactorTerm>& list) {
    Json out = Json::array();
    for (const auto& f : list) {
      out.push_back(Json{{"label", f.form.label}, {"exponent", f.exponent}, {"value", rational_json(f.value)}});
    }
    return out;
  };
  Json out;
  out["value"] = real_json(value.value);
  out["exact"] = optional_json(value.exact, rational_json);
  out["method"] = value.method == CharFunMethod::ClosedForm ? "closed_form" : "polar_volume";
  if (value.method == CharFunMethod::ClosedForm) {
    out["numerator"] = factors(value.numerator);
    out["denominator"] = factors(value.denominator);
  }
  return out;
}

Json probe_to_json(const ProbeReport& report) {
  Json out;
  out["lambdas"] = report.lambdas;
  Json logs = Json::array();
  for (double v : report.log_values) logs.push_back(real_json(v));
  out["log_values"] = std::move(logs);
  out["slope"] = real_json(report.slope);
  out["expected_slope"] = optional_json(report.expected_slope, [](int v) { return Json(v); });
  out["plateau_estimate"] = real_json(report.plateau_estimate);
  out["plateau_kind"] = "empirical";
  return out;
}

Json normalizer_to_json(const LogNormalizer& value) {
  Json factors = Json::array();
  for (const auto& f : value.gamma_factors) {
    factors.push_back(Json{{"label", f.label}, {"argument", real_json(f.argument)}, {"power", f.power}});
  }
  Json m = Json::array();
  for (double x : value.m) m.push_back(real_json(x));
  Json out;
  out["log_value"] = real_json(value.log_value);
  out["method"] = normalizer_method_name(value.method);
  out["alpha"] = real_json(value.alpha);
  out["m"] = std::move(m);
  out["gamma_factors"] = std::move(factors);
  out["error_estimate"] = optional_json(value.error_estimate, real_json);
  return out;
}

Json bayes_report_to_json(const BayesReport& report) {
  Json out;
  out["alpha"] = optional_json(report.alpha, real_json);
  out["log_B"] = optional_json(report.log_B, real_json);
  out["k1"] = report.k1;
  out["k2"] = report.k2;
  out["exponent"] = report.exponent;
  out["dim1"] = report.dim1;
  out["dim2"] = report.dim2;
  out["d_edf"] = optional_json(report.d_edf, [](int v) { return Json(v); });
  out["verdict"] = verdict_name(report.verdict);
  return out;
}

Json rank_to_json(const std::vector<RankEntry>& entries) {
  Json out = Json::array();
  for (const auto& e : entries) {
    Json row;
    row["name"] = e.name;
    row["rank"] = e.rank == 0 ? Json(nullptr) : Json(e.rank);
    row["dim"] = e.dim;
    row["k"] = optional_json(e.k, [](int v) { return Json(v); });
    row["score"] = optional_json(e.score, real_json);
    row["log_B_vs_reference"] = optional_json(e.log_B_vs_reference, real_json);
    row["error"] = optional_json(e.error, [](const std::string& s) { return Json(s); });
    out.push_back(std::move(row));
  }
  return out;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace loglin
