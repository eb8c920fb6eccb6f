#include "loglin/loglin.h"

#include "loglin/bayes.hpp"
#include "loglin/charfun.hpp"
#include "loglin/error.hpp"
#include "loglin/io.hpp"
#include "loglin/junction.hpp"
#include "loglin/normalizers.hpp"
#include "loglin/polytope.hpp"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

struct loglin_model {
  loglin::Model model;
};

struct loglin_table {
  loglin::GeneratingClass gc;
  loglin::ContingencyTable table;
};

namespace {

thread_local std::string g_last_error;

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
loglin_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return LOGLIN_OK;
  } catch (const loglin::Error& e) {
    g_last_error = e.what();
    return static_cast<loglin_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
  } catch (...) {
    g_last_error = "internal error";
  }
  return LOGLIN_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) loglin::fail(loglin::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

void emit(char** out, const std::string& text) {
  require(out, "output pointer");
  *out = duplicate(text);
}

void emit(char** out, const loglin::Json& j) { emit(out, loglin::dump_json(j)); }

loglin_model* wrap(loglin::GeneratingClass gc) { return new loglin_model{loglin::Model(std::move(gc))}; }

void emit_warnings(char** warnings_json, const std::vector<std::string>& warnings) {
  if (warnings_json) *warnings_json = duplicate(loglin::dump_json(loglin::Json(warnings)));
}

void check_table_model(const loglin::Model& model, const loglin_table& t) {
  const auto& a = model.gc().variables();
  const auto& b = t.gc.variables();
  bool same = a.size() == b.size();
  for (std::size_t v = 0; same && v < a.size(); ++v) same = a[v].name == b[v].name && a[v].card == b[v].card;
  if (!same) loglin::fail(loglin::ErrorCode::InvalidArgument, "table variables do not match the model");
}

loglin::RationalVector point_or_default(const loglin::Model& model, const char* json) {
  if (json) return loglin::parse_point_json(json, model);
  return loglin::default_hyperparameter(model);
}

}  // namespace

extern "C" {

const char* loglin_version(void) { return "0.1.0"; }

const char* loglin_last_error(void) { return g_last_error.c_str(); }

const char* loglin_status_name(loglin_status status) {
  if (status == LOGLIN_OK) return "OK";
  if (status == LOGLIN_INTERNAL) return "Internal";
  return loglin::error_code_name(static_cast<loglin::ErrorCode>(static_cast<int>(status)));
}

void loglin_string_free(char* s) { std::free(s); }

loglin_status loglin_model_from_json(const char* text, loglin_model** out, char** warnings_json) {
  return guarded([&] {
    require(text, "model text");
    require(out, "output pointer");
    std::vector<std::string> warnings;
    auto gc = loglin::parse_model_json(text, &warnings);
    *out = wrap(std::move(gc));
    emit_warnings(warnings_json, warnings);
  });
}

loglin_status loglin_model_load(const char* path, loglin_model** out, char** warnings_json) {
  return guarded([&] {
    require(path, "path");
    require(out, "output pointer");
    std::vector<std::string> warnings;
    auto gc = loglin::parse_model_file(path, &warnings);
    *out = wrap(std::move(gc));
    emit_warnings(warnings_json, warnings);
  });
}

void loglin_model_free(loglin_model* model) { delete model; }

loglin_status loglin_model_dim(const loglin_model* model, size_t* dim) {
  return guarded([&] {
    require(model, "model");
    require(dim, "output pointer");
    *dim = model->model.dim();
  });
}

loglin_status loglin_model_describe(const loglin_model* model, char** json) {
  return guarded([&] {
    require(model, "model");
    emit(json, loglin::describe_model(model->model));
  });
}

loglin_status loglin_model_to_json(const loglin_model* model, char** json) {
  return guarded([&] {
    require(model, "model");
    emit(json, loglin::model_to_json(model->model.gc()));
  });
}

loglin_status loglin_default_hyperparameter(const loglin_model* model, char** json) {
  return guarded([&] {
    require(model, "model");
    const auto m = loglin::default_hyperparameter(model->model);
    emit(json, loglin::point_to_json(model->model, m));
  });
}

loglin_status loglin_table_from_csv(const loglin_model* model, const char* text, loglin_table** out) {
  return guarded([&] {
    require(model, "model");
    require(text, "table text");
    require(out, "output pointer");
    auto table = loglin::parse_table_csv(text, model->model.gc());
    *out = new loglin_table{model->model.gc(), std::move(table)};
  });
}

loglin_status loglin_table_load(const loglin_model* model, const char* path, loglin_table** out) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    require(out, "output pointer");
    auto table = loglin::parse_table_file(path, model->model.gc());
    *out = new loglin_table{model->model.gc(), std::move(table)};
  });
}

void loglin_table_free(loglin_table* table) { delete table; }

loglin_status loglin_table_to_csv(const loglin_table* table, char** csv) {
  return guarded([&] {
    require(table, "table");
    emit(csv, loglin::table_to_csv(table->gc, table->table));
  });
}

loglin_status loglin_polytope_facets(const loglin_model* model, loglin_facet_route route, int as_table,
                                     char** out) {
  return guarded([&] {
    require(model, "model");
    const loglin::Model& m = model->model;
    std::vector<loglin::AffineForm> facets;
    loglin::FacetSource source = loglin::FacetSource::Theorem;
    bool complete = false;
    if (route == LOGLIN_ROUTE_AUTO) {
      if (loglin::is_decomposable(m.gc())) {
        route = LOGLIN_ROUTE_DECOMPOSABLE;
      } else if (loglin::is_binary_cycle(m.gc())) {
        route = LOGLIN_ROUTE_CYCLE;
      } else {
        route = LOGLIN_ROUTE_THEOREM;
      }
    }
    switch (route) {
      case LOGLIN_ROUTE_THEOREM:
        facets = loglin::theorem_facets(m);
        source = loglin::FacetSource::Theorem;
        complete = loglin::is_decomposable(m.gc());
        break;
      case LOGLIN_ROUTE_DECOMPOSABLE:
        facets = loglin::decomposable_facets(m, loglin::junction_structure(m.gc()));
        source = loglin::FacetSource::Decomposable;
        complete = true;
        break;
      case LOGLIN_ROUTE_CYCLE:
        facets = loglin::cycle_facets(m);
        source = loglin::FacetSource::Cycle;
        complete = true;
        break;
      case LOGLIN_ROUTE_HULL:
        facets = loglin::hull_facets_oracle(loglin::build_polytope(m));
        source = loglin::FacetSource::Hull;
        complete = true;
        break;
      default:
        loglin::fail(loglin::ErrorCode::InvalidArgument, "unknown facet route");
    }
    if (as_table) {
      emit(out, loglin::facets_to_table(m, facets));
    } else {
      emit(out, loglin::facets_to_json(m, facets, source, complete));
    }
  });
}

loglin_status loglin_polytope_face(const loglin_model* model, const loglin_table* table,
                                   const char* point_json, char** json) {
  return guarded([&] {
    require(model, "model");
    const loglin::Model& m = model->model;
    if ((table == nullptr) == (point_json == nullptr)) {
      loglin::fail(loglin::ErrorCode::InvalidArgument, "give exactly one of a table or a point");
    }
    loglin::RationalVector y;
    if (table) {
      check_table_model(m, *table);
      y = loglin::data_point(m, table->table);
    } else {
      y = loglin::parse_point_json(point_json, m);
    }
    const loglin::MarginalPolytope poly = loglin::complete_polytope(m);
    emit(json, loglin::face_report_to_json(m, loglin::face_of_point(poly, y)));
  });
}

loglin_status loglin_jc(const loglin_model* model, const char* m_json, int oracle,
                        const char* boundary_json, char** json) {
  return guarded([&] {
    require(model, "model");
    require(m_json, "m");
    const loglin::Model& m = model->model;
    const loglin::RationalVector point = loglin::parse_point_json(m_json, m);
    const bool closed = !oracle && loglin::is_decomposable(m.gc());
    std::optional<loglin::DecomposableStructure> ds;
    std::optional<loglin::MarginalPolytope> poly;
    if (closed) {
      ds = loglin::junction_structure(m.gc());
    } else {
      poly = loglin::complete_polytope(m);
    }
    auto evaluate = [&](const loglin::RationalVector& z) {
      if (closed) return loglin::jc_decomposable(m, *ds, z);
      loglin::CharFunValue v;
      v.method = loglin::CharFunMethod::PolarVolume;
      v.exact = loglin::jc_polar_volume_exact(*poly, z);
      v.value = loglin::to_double(*v.exact);
      return v;
    };
    loglin::Json out;
    out["m"] = loglin::point_to_json(m, point);
    out["jc"] = loglin::charfun_to_json(m, evaluate(point));
    if (boundary_json) {
      const loglin::RationalVector y = loglin::parse_point_json(boundary_json, m);
      const loglin::MarginalPolytope face_poly = poly ? *poly : loglin::complete_polytope(m);
      const loglin::FaceReport face = loglin::face_of_point(face_poly, y);
      const int codim = static_cast<int>(m.dim()) - face.dimension;
      auto log_jc = [&](const loglin::RationalVector& z) { return std::log(evaluate(z).value); };
      const auto probe = loglin::boundary_scaling_probe(log_jc, y, point, codim);
      loglin::Json p = loglin::probe_to_json(probe);
      p["face"] = loglin::face_report_to_json(m, face);
      out["probe"] = std::move(p);
    }
    emit(json, out);
  });
}

loglin_status loglin_normalizer(const loglin_model* model, const char* m_json, double alpha,
                                const loglin_table* table, int posterior,
                                loglin_normalizer_method method, char** json) {
  return guarded([&] {
    require(model, "model");
    const loglin::Model& m = model->model;
    const loglin::RationalVector point = point_or_default(m, m_json);
    if (posterior) {
      require(table, "table");
      check_table_model(m, *table);
    }
    if (method == LOGLIN_METHOD_AUTO) {
      if (loglin::is_decomposable(m.gc())) {
        method = LOGLIN_METHOD_CLOSED_FORM;
      } else if (m.dim() <= 2) {
        method = LOGLIN_METHOD_QUADRATURE;
      } else {
        loglin::fail(loglin::ErrorCode::NonComputable,
                     "no normalizer route for a non-decomposable model with |J| > 2");
      }
    }
    loglin::LogNormalizer value;
    if (method == LOGLIN_METHOD_CLOSED_FORM) {
      const auto ds = loglin::junction_structure(m.gc());
      value = posterior ? loglin::log_I_posterior(m, ds, point, alpha, table->table)
                        : loglin::log_I_decomposable(m, ds, point, alpha);
    } else if (method == LOGLIN_METHOD_QUADRATURE) {
      value = posterior ? loglin::log_I_posterior_quadrature(m, point, alpha, table->table)
                        : loglin::log_I_quadrature(m, loglin::to_double(point), alpha);
    } else {
      loglin::fail(loglin::ErrorCode::InvalidArgument, "unknown normalizer method");
    }
    emit(json, loglin::normalizer_to_json(value));
  });
}

loglin_status loglin_bayes_factor(const loglin_model* model1, const loglin_model* model2,
                                  const loglin_table* table, double alpha, char** json) {
  return guarded([&] {
    require(model1, "model1");
    require(model2, "model2");
    require(table, "table");
    check_table_model(model1->model, *table);
    const std::optional<double> a = alpha > 0.0 ? std::optional<double>(alpha) : std::nullopt;
    emit(json, loglin::bayes_report_to_json(loglin::bayes_report(model1->model, model2->model, table->table, a)));
  });
}

loglin_status loglin_edf(const loglin_model* model1, const loglin_model* model2,
                         const loglin_table* table, char** json) {
  return guarded([&] {
    require(model1, "model1");
    require(model2, "model2");
    require(table, "table");
    check_table_model(model1->model, *table);
    const loglin::Model& a = model1->model;
    const loglin::Model& b = model2->model;
    const long e1 = loglin::edf_index(a, loglin::junction_structure(a.gc()), table->table);
    const long e2 = loglin::edf_index(b, loglin::junction_structure(b.gc()), table->table);
    const loglin::BayesReport r = loglin::asymptotic_exponent(a, b, table->table);
    loglin::Json out;
    out["edf_index1"] = e1;
    out["edf_index2"] = e2;
    out["d_edf"] = e1 - e2;
    out["k1"] = r.k1;
    out["k2"] = r.k2;
    out["exponent"] = r.exponent;
    emit(json, out);
  });
}

loglin_status loglin_rank(const loglin_model* const* models, const char* const* names, size_t count,
                          const loglin_table* table, loglin_rank_mode mode, double alpha, char** json) {
  return guarded([&] {
    require(table, "table");
    if (count > 0) {
      require(models, "models");
      require(names, "names");
    }
    std::vector<const loglin::Model*> list;
    std::vector<std::string> labels;
    for (size_t i = 0; i < count; ++i) {
      require(models[i], "model");
      require(names[i], "name");
      check_table_model(models[i]->model, *table);
      list.push_back(&models[i]->model);
      labels.emplace_back(names[i]);
    }
    const auto m = mode == LOGLIN_RANK_AT_ALPHA ? loglin::RankMode::AtAlpha : loglin::RankMode::Asymptotic;
    emit(json, loglin::rank_to_json(loglin::rank_models(list, labels, table->table, m, alpha)));
  });
}

}  // extern "C"
