// Command-line front end. Talks to the library only through loglin.h.

#include "loglin/loglin.h"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitRefused = 3;

struct Failure {
  loglin_status status;
  std::string message;
};

int exit_code(loglin_status s) {
  if (s == LOGLIN_OK) return kExitOk;
  if (s == LOGLIN_INTERNAL) return kExitInternal;
  return static_cast<int>(s) < 10 ? kExitInput : kExitRefused;
}

void check(loglin_status s) {
  if (s != LOGLIN_OK) throw Failure{s, loglin_last_error()};
}

struct ModelDeleter {
  void operator()(loglin_model* m) const { loglin_model_free(m); }
};
struct TableDeleter {
  void operator()(loglin_table* t) const { loglin_table_free(t); }
};
using ModelPtr = std::unique_ptr<loglin_model, ModelDeleter>;
using TablePtr = std::unique_ptr<loglin_table, TableDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  loglin_string_free(s);
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{LOGLIN_IO, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Failure{LOGLIN_INTERNAL, "sha256 failed"};
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

// Inputs touched by the command, recorded in the manifest.
struct Session {
  std::vector<std::string> inputs;
  Json j_orders = Json::object();

  ModelPtr load_model(const std::string& path) {
    loglin_model* raw = nullptr;
    char* warnings = nullptr;
    check(loglin_model_load(path.c_str(), &raw, &warnings));
    ModelPtr model(raw);
    for (const auto& w : Json::parse(take(warnings))) {
      std::cerr << "warning: " << path << ": " << w.get<std::string>() << "\n";
    }
    inputs.push_back(path);
    char* desc = nullptr;
    check(loglin_model_describe(model.get(), &desc));
    j_orders[path] = Json::parse(take(desc))["J"];
    return model;
  }

  TablePtr load_table(const loglin_model* model, const std::string& path) {
    loglin_table* raw = nullptr;
    check(loglin_table_load(model, path.c_str(), &raw));
    inputs.push_back(path);
    return TablePtr(raw);
  }

  std::string load_text(const std::string& path) {
    inputs.push_back(path);
    return read_text(path);
  }
};

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void write_outputs(const std::string& dir, const std::string& output, const Session& session,
                   const std::vector<std::string>& argv, std::optional<std::uint64_t> seed) {
  fs::create_directories(dir);
  const fs::path out_path = fs::path(dir) / "output.json";
  {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Failure{LOGLIN_IO, "cannot write " + out_path.string()};
    out << output;
  }
  Json manifest;
  manifest["command"] = argv;
  manifest["version"] = loglin_version();
  Json inputs = Json::array();
  for (const auto& p : session.inputs) inputs.push_back(Json{{"path", p}, {"sha256", sha256_hex(read_text(p))}});
  manifest["inputs"] = std::move(inputs);
  manifest["J"] = session.j_orders;
  manifest["seed"] = seed ? Json(*seed) : Json(nullptr);
  manifest["timestamp"] = iso_timestamp();
  manifest["outputs"] = Json::array({Json{{"path", "output.json"}, {"sha256", sha256_hex(output)}}});
  std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary);
  if (!out) throw Failure{LOGLIN_IO, "cannot write manifest"};
  out << manifest.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical loglinear models: marginal polytopes, characteristic functions, "
               "conjugate-prior normalizers and Bayes factors"};
  app.require_subcommand(1);

  std::string out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("--out", out_dir, "Directory for output.json and manifest.json");
  app.add_option("--seed", seed, "Reserved; recorded in the manifest");

  std::string model_path, model1_path, model2_path, table_path, point_path, m_path, y_path, models_dir;
  std::string route = "auto", format = "json", method = "auto", mode = "asymptotic";
  bool oracle = false, posterior = false, asymptotic = false;
  std::optional<double> alpha;

  auto* cmd_model = app.add_subcommand("model", "Validate a model file and describe J");
  cmd_model->add_option("--model", model_path, "Model JSON")->required();

  auto* cmd_poly = app.add_subcommand("polytope", "Marginal polytope facets and faces");
  cmd_poly->require_subcommand(1);
  auto* cmd_facets = cmd_poly->add_subcommand("facets", "List facet inequalities");
  cmd_facets->add_option("--model", model_path, "Model JSON")->required();
  cmd_facets->add_flag("--oracle", oracle, "Use the exact convex-hull oracle");
  cmd_facets->add_option("--route", route, "auto | theorem | decomposable | cycle | hull")
      ->check(CLI::IsMember({"auto", "theorem", "decomposable", "cycle", "hull"}));
  cmd_facets->add_option("--format", format, "json | table")->check(CLI::IsMember({"json", "table"}));
  auto* cmd_face = cmd_poly->add_subcommand("face", "Face containing t/N or a point");
  cmd_face->add_option("--model", model_path, "Model JSON")->required();
  auto* face_table = cmd_face->add_option("--table", table_path, "Table CSV");
  auto* face_point = cmd_face->add_option("--point", point_path, "Point JSON keyed by J labels");
  face_table->excludes(face_point);

  auto* cmd_jc = app.add_subcommand("jc", "Characteristic function J_C(m)");
  cmd_jc->add_option("--model", model_path, "Model JSON")->required();
  cmd_jc->add_option("--m", m_path, "Point JSON keyed by J labels")->required();
  cmd_jc->add_flag("--oracle", oracle, "Use the polar-volume oracle");
  cmd_jc->add_option("--probe-boundary", y_path, "Boundary point JSON for the scaling probe");

  auto* cmd_norm = app.add_subcommand("normalizer", "Log normalizing constant log I(m, alpha)");
  cmd_norm->add_option("--model", model_path, "Model JSON")->required();
  cmd_norm->add_option("--m", m_path, "Point JSON (default: uniform hyperparameter)");
  cmd_norm->add_option("--alpha", alpha, "Concentration alpha > 0")->required();
  cmd_norm->add_option("--table", table_path, "Table CSV");
  cmd_norm->add_flag("--posterior", posterior, "Posterior constant (needs --table)");
  cmd_norm->add_option("--method", method, "auto | closed | quadrature")
      ->check(CLI::IsMember({"auto", "closed", "quadrature"}));

  auto* cmd_bf = app.add_subcommand("bf", "Bayes factor B_{1,2}");
  auto* cmd_edf = app.add_subcommand("edf", "Effective degrees of freedom difference");
  for (auto* c : {cmd_bf, cmd_edf}) {
    c->add_option("--model1", model1_path, "First model JSON")->required();
    c->add_option("--model2", model2_path, "Second model JSON")->required();
    c->add_option("--table", table_path, "Table CSV")->required();
  }
  auto* bf_alpha = cmd_bf->add_option("--alpha", alpha, "Concentration alpha > 0");
  auto* bf_asym = cmd_bf->add_flag("--asymptotic", asymptotic, "Exponent and verdict only");
  bf_alpha->excludes(bf_asym);

  auto* cmd_rank = app.add_subcommand("rank", "Rank the models in a directory");
  cmd_rank->add_option("--models", models_dir, "Directory of model JSON files")->required();
  cmd_rank->add_option("--table", table_path, "Table CSV")->required();
  cmd_rank->add_option("--mode", mode, "asymptotic | at_alpha")
      ->check(CLI::IsMember({"asymptotic", "at_alpha"}));
  cmd_rank->add_option("--alpha", alpha, "Concentration for at_alpha mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  Session session;
  std::string output;
  try {
    char* raw = nullptr;
    if (cmd_model->parsed()) {
      auto model = session.load_model(model_path);
      check(loglin_model_describe(model.get(), &raw));
    } else if (cmd_facets->parsed()) {
      auto model = session.load_model(model_path);
      loglin_facet_route r = LOGLIN_ROUTE_AUTO;
      if (oracle || route == "hull") r = LOGLIN_ROUTE_HULL;
      else if (route == "theorem") r = LOGLIN_ROUTE_THEOREM;
      else if (route == "decomposable") r = LOGLIN_ROUTE_DECOMPOSABLE;
      else if (route == "cycle") r = LOGLIN_ROUTE_CYCLE;
      check(loglin_polytope_facets(model.get(), r, format == "table", &raw));
    } else if (cmd_face->parsed()) {
      auto model = session.load_model(model_path);
      if (table_path.empty() == point_path.empty()) {
        throw Failure{LOGLIN_INVALID_ARGUMENT, "give exactly one of --table or --point"};
      }
      if (!table_path.empty()) {
        auto table = session.load_table(model.get(), table_path);
        check(loglin_polytope_face(model.get(), table.get(), nullptr, &raw));
      } else {
        const std::string point = session.load_text(point_path);
        check(loglin_polytope_face(model.get(), nullptr, point.c_str(), &raw));
      }
    } else if (cmd_jc->parsed()) {
      auto model = session.load_model(model_path);
      const std::string m = session.load_text(m_path);
      std::optional<std::string> y;
      if (!y_path.empty()) y = session.load_text(y_path);
      check(loglin_jc(model.get(), m.c_str(), oracle, y ? y->c_str() : nullptr, &raw));
    } else if (cmd_norm->parsed()) {
      auto model = session.load_model(model_path);
      std::optional<std::string> m;
      if (!m_path.empty()) m = session.load_text(m_path);
      TablePtr table;
      if (!table_path.empty()) table = session.load_table(model.get(), table_path);
      if (posterior && !table) throw Failure{LOGLIN_INVALID_ARGUMENT, "--posterior needs --table"};
      loglin_normalizer_method nm = LOGLIN_METHOD_AUTO;
      if (method == "closed") nm = LOGLIN_METHOD_CLOSED_FORM;
      if (method == "quadrature") nm = LOGLIN_METHOD_QUADRATURE;
      check(loglin_normalizer(model.get(), m ? m->c_str() : nullptr, *alpha, table.get(), posterior, nm, &raw));
    } else if (cmd_bf->parsed() || cmd_edf->parsed()) {
      auto m1 = session.load_model(model1_path);
      auto m2 = session.load_model(model2_path);
      auto table = session.load_table(m1.get(), table_path);
      if (cmd_edf->parsed()) {
        check(loglin_edf(m1.get(), m2.get(), table.get(), &raw));
      } else {
        if (!asymptotic && !alpha) throw Failure{LOGLIN_INVALID_ARGUMENT, "give --alpha or --asymptotic"};
        if (alpha && !(*alpha > 0.0)) throw Failure{LOGLIN_INVALID_ARGUMENT, "--alpha must be positive"};
        check(loglin_bayes_factor(m1.get(), m2.get(), table.get(), asymptotic ? 0.0 : *alpha, &raw));
      }
    } else if (cmd_rank->parsed()) {
      if (!fs::is_directory(models_dir)) throw Failure{LOGLIN_IO, "not a directory: " + models_dir};
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(models_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) throw Failure{LOGLIN_INVALID_ARGUMENT, "no model files in " + models_dir};
      std::vector<ModelPtr> models;
      std::vector<std::string> names;
      for (const auto& f : files) {
        models.push_back(session.load_model(f.string()));
        names.push_back(f.stem().string());
      }
      auto table = session.load_table(models.front().get(), table_path);
      std::vector<const loglin_model*> handles;
      std::vector<const char*> name_ptrs;
      for (std::size_t i = 0; i < models.size(); ++i) {
        handles.push_back(models[i].get());
        name_ptrs.push_back(names[i].c_str());
      }
      const bool at_alpha = mode == "at_alpha";
      if (at_alpha && !alpha) throw Failure{LOGLIN_INVALID_ARGUMENT, "at_alpha mode needs --alpha"};
      check(loglin_rank(handles.data(), name_ptrs.data(), handles.size(), table.get(),
                        at_alpha ? LOGLIN_RANK_AT_ALPHA : LOGLIN_RANK_ASYMPTOTIC, alpha.value_or(1.0), &raw));
    }
    output = take(raw);
  } catch (const Failure& f) {
    std::cerr << "error [" << loglin_status_name(f.status) << "]: " << f.message << "\n";
    return exit_code(f.status);
  }

  std::cout << output;
  std::cout.flush();
  if (!out_dir.empty()) {
    try {
      write_outputs(out_dir, output, session, std::vector<std::string>(argv, argv + argc), seed);
    } catch (const Failure& f) {
      std::cerr << "error [" << loglin_status_name(f.status) << "]: " << f.message << "\n";
      return exit_code(f.status);
    }
  }
  return kExitOk;
}
