#include "compass/problem_io.hpp"

#include <fstream>

namespace compass {

namespace {

using nlohmann::json;

dvec vec_from_json(const json& j, const char* name) {
  if (!j.is_array()) throw precondition_error(std::string(name) + " must be an array");
  dvec v(j.size());
  Eigen::Index i = 0;
  for (const auto& e : j) {
    if (!e.is_number()) throw precondition_error(std::string(name) + " must hold numbers");
    v[i++] = e.get<double>();
  }
  ensure_finite(v, name);
  return v;
}

json vec_to_json(const dvec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

simple_term psi_from_json(const json& j) {
  if (!j.is_object() || !j.contains("variant"))
    throw precondition_error("psi must be an object with a variant");
  std::string variant = j.at("variant").get<std::string>();
  if (variant == "zero") return zero_term();
  if (variant == "ball") return ball_term(j.at("delta").get<double>());
  if (variant == "box")
    return box_term(vec_from_json(j.at("lower"), "psi.lower"),
                    vec_from_json(j.at("upper"), "psi.upper"));
  if (variant == "l1") return l1_term(j.at("weight").get<double>());
  throw precondition_error("unknown psi variant: " + variant);
}

json psi_to_json(const simple_term& t) {
  switch (t.kind) {
    case psi_kind::zero:
      return {{"variant", "zero"}};
    case psi_kind::ball:
      return {{"variant", "ball"}, {"delta", t.delta}};
    case psi_kind::box:
      return {{"variant", "box"},
              {"lower", vec_to_json(t.lower)},
              {"upper", vec_to_json(t.upper)}};
    case psi_kind::l1:
      return {{"variant", "l1"}, {"weight", t.weight}};
  }
  return {};
}

}  // namespace

loaded_problem problem_from_json(const json& j) {
  if (j.value("kind", "") != std::string("quadratic"))
    throw precondition_error("problem kind must be \"quadratic\"");
  const json& m = j.at("matrix");
  dvec b = vec_from_json(j.at("b"), "b");
  simple_term psi = psi_from_json(j.at("psi"));

  loaded_problem out;
  if (m.contains("diagonal")) {
    out.p = make_quadratic_diagonal(vec_from_json(m.at("diagonal"), "diagonal"), b, psi);
  } else if (m.contains("dense")) {
    const json& rows = m.at("dense");
    Eigen::Index n = rows.size();
    if (n == 0) throw precondition_error("dense matrix is empty");
    dmat A(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Eigen::Index>(row.size()) != n)
        throw precondition_error("dense matrix is not square");
      Eigen::Index k = 0;
      for (const auto& e : row) {
        double val = e.get<double>();
        if (!std::isfinite(val)) throw precondition_error("matrix has a non-finite entry");
        A(i, k++) = val;
      }
      ++i;
    }
    out.p = make_quadratic(std::move(A), b, psi);
  } else {
    throw precondition_error("matrix must hold \"dense\" or \"diagonal\"");
  }
  if (j.contains("generator")) out.generator = j.at("generator");
  return out;
}

json problem_to_json(const problem& p, const json& generator) {
  if (!p.quad) throw precondition_error("only quadratic problems can be serialized");
  json j;
  j["kind"] = "quadratic";
  if (p.quad->diagonal) {
    j["matrix"] = {{"diagonal", vec_to_json(p.quad->diag)}};
  } else {
    json rows = json::array();
    for (Eigen::Index i = 0; i < p.quad->A.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < p.quad->A.cols(); ++k) row.push_back(p.quad->A(i, k));
      rows.push_back(row);
    }
    j["matrix"] = {{"dense", rows}};
  }
  j["b"] = vec_to_json(p.quad->b);
  j["psi"] = psi_to_json(p.psi);
  if (!generator.is_null()) j["generator"] = generator;
  return j;
}

loaded_problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw precondition_error("cannot open problem file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw precondition_error("problem file is not valid JSON: " + std::string(e.what()));
  }
  return problem_from_json(j);
}

void save_problem(const problem& p, const std::string& path, const json& generator) {
  std::ofstream out(path);
  if (!out) throw precondition_error("cannot write problem file: " + path);
  out << problem_to_json(p, generator).dump(2) << "\n";
}

}  // namespace compass
