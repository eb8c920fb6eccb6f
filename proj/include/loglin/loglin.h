/* C interface to the loglin library.
 *
 * Objects are opaque handles. Every call returns a loglin_status; on failure
 * loglin_last_error() describes the problem (per thread). Strings returned
 * through char** parameters are owned by the caller and released with
 * loglin_string_free. JSON outputs use canonical key order and render exact
 * rationals as "p/q" strings. */
#ifndef LOGLIN_LOGLIN_H
#define LOGLIN_LOGLIN_H

#include <stddef.h>

#if defined(LOGLIN_BUILDING)
#define LOGLIN_API __attribute__((visibility("default")))
#else
#define LOGLIN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum loglin_status {
  LOGLIN_OK = 0,
  /* input errors */
  LOGLIN_INVALID_ARGUMENT = 1,
  LOGLIN_PARSE = 2,
  LOGLIN_IO = 3,
  /* computational refusals */
  LOGLIN_NOT_DECOMPOSABLE = 10,
  LOGLIN_NOT_A_CYCLE = 11,
  LOGLIN_DIMENSION_TOO_LARGE = 12,
  LOGLIN_BOUNDARY_OR_OUTSIDE = 13,
  LOGLIN_OUTSIDE_POLYTOPE = 14,
  LOGLIN_INCOMPLETE_FACETS = 15,
  LOGLIN_NOT_IN_MODEL = 16,
  LOGLIN_NON_COMPUTABLE = 17,
  LOGLIN_NON_CONVERGENCE = 18,
  LOGLIN_SINGULAR = 19,
  LOGLIN_WRONG_CONE = 20,
  LOGLIN_INTERNAL = 99
} loglin_status;

typedef enum loglin_facet_route {
  LOGLIN_ROUTE_AUTO = 0, /* decomposable, else cycle, else marginal-form family */
  LOGLIN_ROUTE_THEOREM = 1,
  LOGLIN_ROUTE_DECOMPOSABLE = 2,
  LOGLIN_ROUTE_CYCLE = 3,
  LOGLIN_ROUTE_HULL = 4
} loglin_facet_route;

typedef enum loglin_normalizer_method {
  LOGLIN_METHOD_AUTO = 0,
  LOGLIN_METHOD_CLOSED_FORM = 1,
  LOGLIN_METHOD_QUADRATURE = 2
} loglin_normalizer_method;

typedef enum loglin_rank_mode {
  LOGLIN_RANK_ASYMPTOTIC = 0,
  LOGLIN_RANK_AT_ALPHA = 1
} loglin_rank_mode;

typedef struct loglin_model loglin_model;
typedef struct loglin_table loglin_table;

LOGLIN_API const char* loglin_version(void);
LOGLIN_API const char* loglin_last_error(void);
LOGLIN_API const char* loglin_status_name(loglin_status status);
LOGLIN_API void loglin_string_free(char* s);

/* warnings_json (nullable) receives a JSON array of strings. */
LOGLIN_API loglin_status loglin_model_from_json(const char* text, loglin_model** out, char** warnings_json);
LOGLIN_API loglin_status loglin_model_load(const char* path, loglin_model** out, char** warnings_json);
LOGLIN_API void loglin_model_free(loglin_model* model);
LOGLIN_API loglin_status loglin_model_dim(const loglin_model* model, size_t* dim);
LOGLIN_API loglin_status loglin_model_describe(const loglin_model* model, char** json);
LOGLIN_API loglin_status loglin_model_to_json(const loglin_model* model, char** json);
/* m = H(uniform table) as a point JSON keyed by J labels. */
LOGLIN_API loglin_status loglin_default_hyperparameter(const loglin_model* model, char** json);

LOGLIN_API loglin_status loglin_table_from_csv(const loglin_model* model, const char* text, loglin_table** out);
LOGLIN_API loglin_status loglin_table_load(const loglin_model* model, const char* path, loglin_table** out);
LOGLIN_API void loglin_table_free(loglin_table* table);
LOGLIN_API loglin_status loglin_table_to_csv(const loglin_table* table, char** csv);

/* as_table != 0 renders one inequality per line instead of JSON. */
LOGLIN_API loglin_status loglin_polytope_facets(const loglin_model* model, loglin_facet_route route,
                                                int as_table, char** out);
/* Face holding t/N (table) or an explicit point (point_json) in its
 * relative interior; exactly one of table / point_json is non-null. */
LOGLIN_API loglin_status loglin_polytope_face(const loglin_model* model, const loglin_table* table,
                                              const char* point_json, char** json);

/* J_C at m. oracle != 0 forces the polar-volume route. boundary_json
 * (nullable) adds a boundary scaling probe toward that point. */
LOGLIN_API loglin_status loglin_jc(const loglin_model* model, const char* m_json, int oracle,
                                   const char* boundary_json, char** json);

/* m_json null selects the default hyperparameter. With posterior != 0 the
 * table is required. */
LOGLIN_API loglin_status loglin_normalizer(const loglin_model* model, const char* m_json, double alpha,
                                           const loglin_table* table, int posterior,
                                           loglin_normalizer_method method, char** json);

/* alpha <= 0 gives the asymptotic report only. */
LOGLIN_API loglin_status loglin_bayes_factor(const loglin_model* model1, const loglin_model* model2,
                                             const loglin_table* table, double alpha, char** json);
LOGLIN_API loglin_status loglin_edf(const loglin_model* model1, const loglin_model* model2,
                                    const loglin_table* table, char** json);
LOGLIN_API loglin_status loglin_rank(const loglin_model* const* models, const char* const* names,
                                     size_t count, const loglin_table* table, loglin_rank_mode mode,
                                     double alpha, char** json);

#ifdef __cplusplus
}
#endif

#endif /* LOGLIN_LOGLIN_H */
