#pragma once

// Experiment runner: problem generation, noise, the three solvers, and
// table emission.

#include "dsm/linalg.hpp"
#include "dsm/problems.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dsm::bench {

enum class ProblemKind { Hilbert, FredholmA, FredholmB };
enum class Method { IS1, IS2, VR };
enum class Format { Csv, Markdown };

std::string_view to_string(ProblemKind kind) noexcept;
std::string_view to_string(Method method) noexcept;
ProblemKind parse_problem(std::string_view text);
Method parse_method(std::string_view text);
Format parse_format(std::string_view text);

struct ExperimentSpec {
  ProblemKind problem = ProblemKind::Hilbert;
  std::size_t m = 200;
  std::vector<double> deltas{1e-2};
  double q = 0.25;
  std::vector<double> q_values{0.5, 0.25, 0.125};  // used by q_sweep
  double alpha0 = 1.0;
  double C_is1 = 1.01;
  double C_is2 = 1.01;
  double C_vr = 1.01;
  double eps = 0.99;
  std::vector<std::uint64_t> seeds{15};
  std::vector<Method> methods{Method::IS1, Method::IS2, Method::VR};
  int n_max = 200;
  unsigned threads = 0;  // 0 picks std::thread::hardware_concurrency()

  /// Throws dsm::Error(Validation) on empty lists or out-of-range parameters.
  void validate() const;

  double C_for(Method method) const;
};

struct ResultRow {
  Method method = Method::IS1;
  ProblemKind problem = ProblemKind::Hilbert;
  std::size_t m = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double q = 0.0;
  double alpha0_used = 0.0;
  double C = 0.0;
  double eps = 0.0;
  double rel_err = 0.0;  // NaN when the solver failed
  int iterations = 0;
  std::string stop_reason;
  Vector solution;  // not serialized

  bool failed() const;
};

/// ||u - y|| / ||y||.
double relative_error(const Vector& u, const Vector& y);

ProblemInstance make_problem(ProblemKind kind, std::size_t m);

/// Runs every (delta, seed, method) of spec on an already factored instance.
/// Rows come back ordered by delta, then seed, then method.
std::vector<ResultRow> run_on_instance(const ExperimentSpec& spec, const ProblemInstance& problem,
                                       const SpectralFactors& factors);

/// Generates the instance, factors it once, and runs every row.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

struct SweepTable {
  std::vector<ResultRow> rows;  // ordered by q as given, then delta, seed, method
  bool iterations_monotone = true;  // IS iterations nondecreasing in q
  std::vector<std::string> violations;
};

SweepTable q_sweep(const ExperimentSpec& spec, std::span<const double> q_values);
SweepTable q_sweep_on_instance(const ExperimentSpec& spec, std::span<const double> q_values,
                               const ProblemInstance& problem, const SpectralFactors& factors);

inline constexpr std::string_view kCsvHeader =
    "method,problem,m,delta,seed,q,alpha0_used,C,eps,rel_err,iterations,stop_reason";

/// CSV (full precision) or a markdown table with one Rel.Err/Iter column pair
/// per method. Throws Validation on empty input.
std::string emit(std::span<const ResultRow> rows, Format format);

/// Inverse of emit(rows, Format::Csv); solution vectors are not restored.
std::vector<ResultRow> parse_csv(std::string_view text);

}  // namespace dsm::bench
