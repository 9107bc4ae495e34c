#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

/// Numerical failure inside a solver (no convergence, breakdown, ...).
/// The CLI maps this to exit code 2.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent user configuration.  CLI exit code 3.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A mathematical assumption required by the method does not hold for the
/// requested inputs (e.g. a geometry outside the admissible class).
/// CLI exit code 4.
class AssumptionError : public std::runtime_error {
 public:
  explicit AssumptionError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Number of worker threads to use for embarrassingly parallel sweeps.
/// Reads STRIPDIRAC_WORKERS; defaults to 1 (deterministic single-thread).
int worker_count();

/// Run fn(i) for i in [0, n) on worker_count() threads.  Results must be
/// written by fn into pre-sized storage so output is deterministic.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace sd
