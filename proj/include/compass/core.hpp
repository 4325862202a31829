#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace compass {

using dvec = Eigen::VectorXd;
using dmat = Eigen::MatrixXd;

// An input violated a documented precondition.  Callers that have a
// fallback (e.g. the combination step when the optimal-weight formula
// does not apply) catch this type specifically.
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An iterative routine ran out of budget before hitting its residual
// target.
struct no_convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void ensure_finite(const dvec& v, const std::string& name);
void ensure_size(const dvec& v, Eigen::Index n, const std::string& name);

// Deterministic random stream.  Draws raw 64-bit words from mt19937_64
// and converts to doubles by hand (no std:: distributions), so the same
// seed yields the same sequence on every platform.
class rng {
 public:
  explicit rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // standard normal via Box-Muller on two uniform draws
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  dvec normal_vector(Eigen::Index n) {
    dvec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace compass
