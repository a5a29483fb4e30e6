#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rfpca/csv.hpp"
#include "rfpca/errors.hpp"
#include "rfpca/simulate.hpp"
#include "rfpca/types.hpp"

namespace rfpca {

namespace detail {

// Hand-rolled JSON emission: every real is written with 17 significant
// digits, which nlohmann's shortest-round-trip dump does not guarantee,
// and output bytes stay deterministic across runs.
struct JsonWriter {
  std::ostringstream out;
  bool first_in_scope = true;

  void sep() {
    if (!first_in_scope) out << ',';
    first_in_scope = false;
  }
  void begin_object() { out << '{'; first_in_scope = true; }
  void end_object() { out << '}'; first_in_scope = false; }
  void key(const std::string& k) {
    sep();
    out << '"' << k << "\":";
  }
  void string_value(const std::string& s) {
    out << '"';
    for (char ch : s) {
      if (ch == '"' || ch == '\\') out << '\\';
      out << ch;
    }
    out << '"';
  }
  void real_array(const std::vector<double>& v) {
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ',';
      out << fmt17(v[i]);
    }
    out << ']';
  }
  void real_matrix(const std::vector<Vec>& rows) {
    out << '[';
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) out << ',';
      real_array(rows[i]);
    }
    out << ']';
  }
};

inline ManifoldSpec spec_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int dim = j.at("intrinsic_dim").get<int>();
  if (kind == "sphere") return make_sphere(dim);
  if (kind == "so3") return make_so3();
  if (kind == "euclidean-ambient") return make_euclidean(dim);
  fail(ErrorKind::ParseError, "unknown manifold kind '" + kind + "'");
}

}  // namespace detail

inline void write_model_json(const std::string& path, const RfpcaModel& model) {
  detail::JsonWriter w;
  w.begin_object();
  w.key("manifold");
  w.begin_object();
  w.key("kind");
  w.string_value(to_string(model.spec.kind));
  w.key("intrinsic_dim");
  w.out << model.spec.intrinsic_dim;
  w.end_object();
  w.key("grid");
  w.real_array(model.grid);
  w.key("mean");
  {
    std::vector<Vec> rows;
    rows.reserve(model.mean_curve.size());
    for (const auto& p : model.mean_curve) rows.push_back(p.coords);
    w.real_matrix(rows);
  }
  w.key("eigenvalues");
  w.real_array(model.eigenvalues);
  w.key("eigenfunctions");
  w.out << '[';
  for (std::size_t k = 0; k < model.eigenfunctions.size(); ++k) {
    if (k) w.out << ',';
    w.real_matrix(model.eigenfunctions[k]);
  }
  w.out << ']';
  w.key("scores");
  w.real_matrix(model.scores);
  w.key("fve");
  w.real_array(model.fve);
  w.key("subject_ids");
  w.out << '[';
  for (std::size_t i = 0; i < model.subject_ids.size(); ++i) {
    if (i) w.out << ',';
    w.string_value(model.subject_ids[i]);
  }
  w.out << ']';
  if (model.compositional) {
    w.key("compositional");
    w.out << "true";
  }
  w.end_object();
  w.out << '\n';
  std::ofstream f(path);
  if (!f) fail(ErrorKind::IoError, "cannot write " + path);
  f << w.out.str();
  if (!f.good()) fail(ErrorKind::IoError, "write to " + path + " failed");
}

inline RfpcaModel read_model_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::IoError, "cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
  RfpcaModel model;
  try {
    model.spec = detail::spec_from_json(j.at("manifold"));
    model.grid = j.at("grid").get<std::vector<double>>();
    for (const auto& row : j.at("mean")) model.mean_curve.push_back({row.get<Vec>()});
    model.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    for (const auto& ef : j.at("eigenfunctions"))
      model.eigenfunctions.push_back(ef.get<std::vector<Vec>>());
    model.scores = j.at("scores").get<std::vector<std::vector<double>>>();
    model.fve = j.at("fve").get<std::vector<double>>();
    model.subject_ids = j.at("subject_ids").get<std::vector<std::string>>();
    model.compositional = j.value("compositional", false);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
  const std::size_t m = model.grid.size();
  const std::size_t d0 = static_cast<std::size_t>(model.spec.ambient_dim);
  if (model.mean_curve.size() != m)
    fail(ErrorKind::ParseError, path + ": mean length does not match the grid");
  for (const auto& p : model.mean_curve)
    if (p.coords.size() != d0) fail(ErrorKind::ParseError, path + ": bad mean dimension");
  for (const auto& ef : model.eigenfunctions) {
    if (ef.size() != m) fail(ErrorKind::ParseError, path + ": bad eigenfunction length");
    for (const auto& v : ef)
      if (v.size() != d0) fail(ErrorKind::ParseError, path + ": bad eigenfunction dimension");
  }
  if (model.eigenvalues.size() != model.eigenfunctions.size() ||
      model.fve.size() != model.eigenvalues.size())
    fail(ErrorKind::ParseError, path + ": eigenvalue/eigenfunction/fve sizes disagree");
  for (const auto& row : model.scores)
    if (row.size() != model.eigenvalues.size())
      fail(ErrorKind::ParseError, path + ": bad score row length");
  if (model.subject_ids.size() != model.scores.size())
    fail(ErrorKind::ParseError, path + ": subject id count does not match scores");
  return model;
}

/// Ground truth emitted next to simulated trajectories: the score law,
/// the drawn scores, and the tangent-space FVE implied by the law.
inline void write_truth_json(const std::string& path, const SimConfig& config,
                             const SimData& data) {
  detail::JsonWriter w;
  w.begin_object();
  w.key("manifold");
  w.begin_object();
  w.key("kind");
  w.string_value(to_string(config.manifold.kind));
  w.key("intrinsic_dim");
  w.out << config.manifold.intrinsic_dim;
  w.end_object();
  w.key("n");
  w.out << config.n;
  w.key("m");
  w.out << config.m;
  w.key("n_components");
  w.out << config.n_components;
  w.key("decay_base");
  w.out << detail::fmt17(config.decay_base);
  w.key("seed");
  w.out << config.seed;
  w.key("score_variances");
  {
    std::vector<double> v(config.n_components);
    for (int k = 1; k <= config.n_components; ++k) v[k - 1] = score_variance(config, k);
    w.real_array(v);
  }
  w.key("true_tangent_fve");
  w.real_array(theoretical_tangent_fve(config));
  w.key("subject_ids");
  w.out << '[';
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    if (i) w.out << ',';
    w.string_value(data.samples[i].subject_id);
  }
  w.out << ']';
  w.key("scores");
  w.real_matrix(data.scores);
  w.end_object();
  w.out << '\n';
  std::ofstream f(path);
  if (!f) fail(ErrorKind::IoError, "cannot write " + path);
  f << w.out.str();
  if (!f.good()) fail(ErrorKind::IoError, "write to " + path + " failed");
}

}  // namespace rfpca
