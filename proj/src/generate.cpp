#include "compass/generate.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace compass {

namespace {

std::vector<std::string> split_colons(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  return parts;
}

double parse_number(const std::string& text, const char* what) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw precondition_error(std::string("bad number in ") + what + ": " + text);
  }
}

dvec draw_spectrum(const std::string& law, int n, rng& r) {
  std::vector<std::string> parts = split_colons(law);
  if (parts.empty()) throw precondition_error("empty spectrum law");
  const std::string& name = parts[0];

  dvec lam(n);
  if (name == "identity") {
    if (parts.size() != 1) throw precondition_error("identity law takes no parameters");
    lam.setOnes();
    return lam;
  }
  if (name == "log-uniform") {
    if (parts.size() != 3) throw precondition_error("log-uniform needs two parameters");
    double a = parse_number(parts[1], "log-uniform");
    double b = parse_number(parts[2], "log-uniform");
    if (!(0.0 < a && a < b)) throw precondition_error("log-uniform needs 0 < a < b");
    if (n < 2) throw precondition_error("log-uniform needs n >= 2");
    lam(0) = a;
    lam(n - 1) = b;
    double la = std::log(a), lb = std::log(b);
    for (int i = 1; i + 1 < n; ++i) lam(i) = std::exp(r.uniform(la, lb));
    std::sort(lam.data(), lam.data() + n);
    return lam;
  }
  if (name == "clustered") {
    if (parts.size() != 4) throw precondition_error("clustered needs three parameters");
    double a = parse_number(parts[1], "clustered");
    double b = parse_number(parts[2], "clustered");
    int m = static_cast<int>(parse_number(parts[3], "clustered"));
    if (!(a < b) || m < 1 || m > n)
      throw precondition_error("clustered needs a < b and 1 <= m <= n");
    // m exact values, no jitter: the count of distinct eigenvalues is
    // part of the instance's meaning.
    for (int i = 0; i < n; ++i) {
      int c = static_cast<int>((static_cast<long long>(i) * m) / n);
      lam(i) = m == 1 ? a : a + (b - a) * c / (m - 1);
    }
    return lam;
  }
  if (name == "one-negative") {
    if (parts.size() != 3) throw precondition_error("one-negative needs two parameters");
    double c = parse_number(parts[1], "one-negative");
    double b = parse_number(parts[2], "one-negative");
    if (!(c > 0.0 && b > 0.0)) throw precondition_error("one-negative needs c, b > 0");
    if (n < 2) throw precondition_error("one-negative needs n >= 2");
    lam(0) = -c;
    lam(n - 1) = b;
    double la = std::log(b / 100.0), lb = std::log(b);
    for (int i = 1; i + 1 < n; ++i) lam(i) = std::exp(r.uniform(la, lb));
    std::sort(lam.data() + 1, lam.data() + n);
    return lam;
  }
  throw precondition_error("unknown spectrum law: " + name);
}

}  // namespace

simple_term parse_psi(const std::string& text, int n) {
  std::vector<std::string> parts = split_colons(text);
  if (parts.empty()) throw precondition_error("empty psi");
  const std::string& name = parts[0];
  if (name == "zero") {
    if (parts.size() != 1) throw precondition_error("zero psi takes no parameters");
    return zero_term();
  }
  if (name == "ball") {
    if (parts.size() != 2) throw precondition_error("ball psi needs a radius");
    return ball_term(parse_number(parts[1], "ball"));
  }
  if (name == "box") {
    if (parts.size() != 3) throw precondition_error("box psi needs two bounds");
    double lo = parse_number(parts[1], "box");
    double hi = parse_number(parts[2], "box");
    return box_term(dvec::Constant(n, lo), dvec::Constant(n, hi));
  }
  if (name == "l1") {
    if (parts.size() != 2) throw precondition_error("l1 psi needs a weight");
    return l1_term(parse_number(parts[1], "l1"));
  }
  throw precondition_error("unknown psi variant: " + name);
}

generator_spec spec_from_json(const nlohmann::json& j) {
  generator_spec s;
  s.kind = j.at("kind").get<std::string>();
  s.n = j.at("n").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.spectrum = j.at("spectrum").get<std::string>();
  s.psi = j.at("psi").get<std::string>();
  s.dense = j.value("dense", false);
  return s;
}

nlohmann::json spec_to_json(const generator_spec& s) {
  return {{"kind", s.kind},   {"n", s.n},     {"seed", s.seed},
          {"spectrum", s.spectrum}, {"psi", s.psi}, {"dense", s.dense}};
}

loaded_problem generate_problem(const generator_spec& s) {
  if (s.kind != "quadratic") throw precondition_error("unknown kind: " + s.kind);
  if (s.n < 1) throw precondition_error("generate: n must be positive");

  rng r(s.seed);
  dvec lam = draw_spectrum(s.spectrum, s.n, r);

  dvec b;
  if (split_colons(s.spectrum)[0] == "identity") {
    // Canonical instance: with the unit ball this puts the solution at
    // the boundary point b/2 regardless of seed.
    b = dvec::Zero(s.n);
    b(0) = 2.0;
  } else {
    b = r.normal_vector(s.n);
  }

  simple_term psi = parse_psi(s.psi, s.n);

  loaded_problem out;
  if (s.dense) {
    dmat gauss(s.n, s.n);
    for (int j = 0; j < s.n; ++j)
      for (int i = 0; i < s.n; ++i) gauss(i, j) = r.normal();
    Eigen::HouseholderQR<dmat> qr(gauss);
    dmat Q = qr.householderQ();
    dmat A = Q * lam.asDiagonal() * Q.transpose();
    A = 0.5 * (A + A.transpose()).eval();
    out.p = make_quadratic(std::move(A), std::move(b), std::move(psi));
  } else {
    out.p = make_quadratic_diagonal(std::move(lam), std::move(b), std::move(psi));
  }
  out.generator = spec_to_json(s);
  return out;
}

}  // namespace compass
