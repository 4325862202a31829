#pragma once

#include "compass/problem.hpp"

#include <json.hpp>

#include <string>

namespace compass {

// Problem files are JSON:
//   {"kind": "quadratic",
//    "matrix": {"dense": [[...], ...]} or {"diagonal": [...]},
//    "b": [...],
//    "psi": {"variant": "ball", "delta": 1.0} | {"variant": "zero"}
//         | {"variant": "box", "lower": [...], "upper": [...]}
//         | {"variant": "l1", "weight": 0.1}}
// An optional "generator" object records how the instance was drawn so
// sibling instances can be re-drawn under other seeds.

struct loaded_problem {
  problem p;
  nlohmann::json generator;  // null when absent
};

loaded_problem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const problem& p, const nlohmann::json& generator = nullptr);

loaded_problem load_problem(const std::string& path);
void save_problem(const problem& p, const std::string& path,
                  const nlohmann::json& generator = nullptr);

}  // namespace compass
