#ifndef LOGLIN_IO_HPP
#define LOGLIN_IO_HPP

#include "loglin/bayes.hpp"
#include "loglin/charfun.hpp"
#include "loglin/junction.hpp"
#include "loglin/model.hpp"
#include "loglin/normalizers.hpp"
#include "loglin/polytope.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace loglin {

using Json = nlohmann::ordered_json;

/// Model file:
///   {"variables": [{"name": "a", "card": 2}, ...],
///    "generators": [["a", "b"], ["b", "c"]]}
/// Duplicate and dominated generators are dropped with a warning.
GeneratingClass parse_model_json(std::string_view text, std::vector<std::string>* warnings = nullptr);
GeneratingClass parse_model_file(const std::string& path, std::vector<std::string>* warnings = nullptr);
Json model_to_json(const GeneratingClass& gc);

/// CSV with one column per variable (integer levels) plus "count".
/// Duplicate rows are summed; absent cells are zero.
ContingencyTable parse_table_csv(std::string_view text, const GeneratingClass& gc);
ContingencyTable parse_table_file(const std::string& path, const GeneratingClass& gc);
std::string table_to_csv(const GeneratingClass& gc, const ContingencyTable& table);

/// Point over J: a JSON object keyed by J labels, values "p/q" strings or
/// numbers (read exactly from their decimal text). Every label is required.
RationalVector parse_point_json(std::string_view text, const Model& model);
RationalVector parse_point_file(const std::string& path, const Model& model);
Json point_to_json(const Model& model, std::span<const Rational> point);

std::string read_file(const std::string& path);

Json rational_json(const Rational& r);
Json set_json(const GeneratingClass& gc, VarSet s);

Json describe_model(const Model& model);
Json facet_to_json(const Model& model, const AffineForm& g);
Json facets_to_json(const Model& model, const std::vector<AffineForm>& facets,
                    std::optional<FacetSource> provenance, bool complete);
std::string facets_to_table(const Model& model, const std::vector<AffineForm>& facets);
Json face_report_to_json(const Model& model, const FaceReport& report);
Json charfun_to_json(const Model& model, const CharFunValue& value);
Json probe_to_json(const ProbeReport& report);
Json normalizer_to_json(const LogNormalizer& value);
Json bayes_report_to_json(const BayesReport& report);
Json rank_to_json(const std::vector<RankEntry>& entries);

/// Compact JSON text with a trailing newline; key order as inserted.
std::string dump_json(const Json& j);

}  // namespace loglin

#endif  // LOGLIN_IO_HPP
