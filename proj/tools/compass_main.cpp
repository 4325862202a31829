#include "compass/generate.hpp"
#include "compass/problem_io.hpp"
#include "compass/trace.hpp"
#include "compass/trs.hpp"
#include "compass/verify.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

// "7", "3,5,9", or an inclusive range "1..20".
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (text.empty()) return seeds;

  auto parse_one = [](const std::string& tok) {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(tok, &pos);
    if (pos != tok.size()) throw compass::precondition_error("bad seed '" + tok + "'");
    return static_cast<std::uint64_t>(v);
  };

  std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    std::uint64_t lo = parse_one(text.substr(0, dots));
    std::uint64_t hi = parse_one(text.substr(dots + 2));
    if (hi < lo) throw compass::precondition_error("seed range is backwards");
    if (hi - lo >= 100000) throw compass::precondition_error("seed range too large");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }

  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string tok = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                    : comma - start);
    if (tok.empty()) throw compass::precondition_error("empty seed entry");
    seeds.push_back(parse_one(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return seeds;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"composite quadratic optimization workbench"};
  app.require_subcommand(1);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "draw a problem instance, write JSON");
  compass::generator_spec spec;
  std::string gen_out;
  gen_cmd->add_option("--kind", spec.kind, "problem family (quadratic)");
  gen_cmd->add_option("--n", spec.n, "dimension")->required();
  gen_cmd->add_option("--seed", spec.seed, "rng seed")->required();
  gen_cmd
      ->add_option("--spectrum", spec.spectrum,
                   "eigenvalue law: log-uniform:A:B | clustered:A:B:M | "
                   "one-negative:C:B | identity")
      ->required();
  gen_cmd->add_option("--psi", spec.psi,
                      "extra term: zero | ball:DELTA | box:LO:HI | l1:WEIGHT");
  gen_cmd->add_flag("--dense", spec.dense, "store a rotated dense matrix");
  gen_cmd->add_option("-o,--output", gen_out, "output path (default stdout)");

  // run
  auto* run_cmd = app.add_subcommand("run", "run an algorithm, write a trace");
  compass::run_options ropt;
  std::string run_problem, run_out;
  run_cmd->add_option("--algo", ropt.algo, "algorithm name")
      ->required()
      ->check(CLI::IsMember(compass::algorithm_names()));
  run_cmd->add_option("--max-iters", ropt.max_iters, "iteration cap");
  run_cmd->add_option("--tol", ropt.tol, "stopping tolerance");
  run_cmd->add_flag("--timing", ropt.timing,
                    "fill wall_time_ns (makes traces nondeterministic)");
  run_cmd->add_option("problem", run_problem, "problem JSON path")->required();
  run_cmd->add_option("-o,--output", run_out, "trace path (default stdout)");

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "check every certified inequality");
  std::string ver_algo, ver_seeds, ver_problem, ver_out;
  int ver_max_iters = 300;
  double ver_tol = 1e-9;
  ver_cmd->add_option("--algo", ver_algo, "algorithm name")
      ->required()
      ->check(CLI::IsMember(compass::algorithm_names()));
  ver_cmd->add_option("--seeds", ver_seeds, "sibling instances: 1..20 or 3,5,9");
  ver_cmd->add_option("--max-iters", ver_max_iters, "iteration cap per run");
  ver_cmd->add_option("--tol", ver_tol, "stopping tolerance per run");
  ver_cmd->add_option("problem", ver_problem, "problem JSON path")->required();
  ver_cmd->add_option("-o,--output", ver_out, "report path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) {
      compass::loaded_problem lp = compass::generate_problem(spec);
      nlohmann::json j = compass::problem_to_json(lp.p, lp.generator);
      if (gen_out.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::ofstream f = open_out(gen_out);
        f << j.dump(2) << "\n";
      }
      return 0;
    }

    if (run_cmd->parsed()) {
      compass::loaded_problem lp = compass::load_problem(run_problem);
      compass::run_result res = compass::run_algorithm(lp.p, ropt);
      if (run_out.empty()) {
        compass::write_trace(std::cout, res.trace);
      } else {
        compass::save_trace(run_out, res.trace);
      }
      std::cerr << (res.converged ? "converged" : "iteration cap reached") << " after "
                << res.iterations << " iterations, F = " << res.final_F << "\n";
      return res.converged ? 0 : 2;
    }

    // verify
    compass::loaded_problem lp = compass::load_problem(ver_problem);
    std::vector<std::uint64_t> seeds = parse_seed_list(ver_seeds);
    compass::verification_report rep =
        compass::verify_algorithm(lp, ver_algo, seeds, ver_max_iters, ver_tol);
    nlohmann::json j = compass::report_to_json(rep);
    if (ver_out.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::ofstream f = open_out(ver_out);
      f << j.dump(2) << "\n";
    }
    int failures = 0;
    for (const compass::check_result& c : rep.checks)
      if (!c.passed) ++failures;
    std::cerr << rep.checks.size() << " checks, " << failures << " failed\n";
    return rep.all_passed() ? 0 : 4;
  } catch (const compass::precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const compass::breakdown_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const compass::no_convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
