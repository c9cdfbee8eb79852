#include "dsm/bench/experiment.hpp"

#include "dsm/error.hpp"
#include "dsm/schemes.hpp"
#include "dsm/vr_newton.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace dsm::bench {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::Validation, msg); }

std::string full_precision(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

ResultRow solve_row(Method method, const ExperimentSpec& spec, const SpectralFactors& factors,
                    const Vector& f_noisy, const Vector& y, double delta) {
  ResultRow row;
  row.method = method;
  row.problem = spec.problem;
  row.m = factors.size();
  row.delta = delta;
  row.q = spec.q;
  row.C = spec.C_for(method);
  row.eps = spec.eps;
  try {
    if (method == Method::VR) {
      VrConfig cfg;
      cfg.alpha0 = spec.alpha0;
      cfg.C = row.C;
      cfg.delta = delta;
      const VrReport report = vr_solve(factors, f_noisy, cfg);
      row.alpha0_used = std::ldexp(spec.alpha0, -report.k_delta);
      row.iterations = report.newton_iters;
      row.stop_reason = "discrepancy-met";
      row.solution = report.solution;
    } else {
      SchemeConfig cfg;
      cfg.q = spec.q;
      cfg.alpha0 = spec.alpha0;
      cfg.C = row.C;
      cfg.eps = spec.eps;
      cfg.n_max = spec.n_max;
      cfg.delta = delta;
      const SolveReport report = method == Method::IS1 ? is1_solve(factors, f_noisy, cfg)
                                                       : is2_solve(factors, f_noisy, cfg);
      row.alpha0_used = report.alpha0_used;
      row.iterations = report.stop_index;
      row.stop_reason = std::string(to_string(report.stop_reason));
      row.solution = report.solution;
    }
    row.rel_err = relative_error(row.solution, y);
  } catch (const Error& e) {
    row.alpha0_used = spec.alpha0;
    row.rel_err = std::numeric_limits<double>::quiet_NaN();
    row.iterations = 0;
    row.stop_reason = std::string(to_string(e.kind()));
    row.solution = Vector();
  }
  return row;
}

template <typename Task>
void run_parallel(std::size_t count, unsigned threads, Task&& task) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    invalid("parse_csv: bad number '" + text + "'");
  }
  if (used != text.size()) invalid("parse_csv: bad number '" + text + "'");
  return value;
}

template <typename Int>
Int parse_integer(const std::string& text) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    invalid("parse_csv: bad integer '" + text + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::Hilbert: return "hilbert";
    case ProblemKind::FredholmA: return "fredholm-a";
    case ProblemKind::FredholmB: return "fredholm-b";
  }
  return "unknown";
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::IS1: return "is1";
    case Method::IS2: return "is2";
    case Method::VR: return "vr";
  }
  return "unknown";
}

ProblemKind parse_problem(std::string_view text) {
  if (text == "hilbert") return ProblemKind::Hilbert;
  if (text == "fredholm-a") return ProblemKind::FredholmA;
  if (text == "fredholm-b") return ProblemKind::FredholmB;
  invalid("unknown problem '" + std::string(text) + "' (hilbert, fredholm-a, fredholm-b)");
}

Method parse_method(std::string_view text) {
  if (text == "is1") return Method::IS1;
  if (text == "is2") return Method::IS2;
  if (text == "vr") return Method::VR;
  invalid("unknown method '" + std::string(text) + "' (is1, is2, vr)");
}

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "markdown") return Format::Markdown;
  invalid("unknown format '" + std::string(text) + "' (csv, markdown)");
}

void ExperimentSpec::validate() const {
  if (deltas.empty()) invalid("experiment: at least one delta is required");
  if (seeds.empty()) invalid("experiment: at least one seed is required");
  if (methods.empty()) invalid("experiment: at least one method is required");
  if (m < (problem == ProblemKind::Hilbert ? 1u : 2u)) invalid("experiment: m is too small");
  for (double d : deltas) {
    if (!(d > 0.0) || !std::isfinite(d)) invalid("experiment: deltas must be positive");
  }
  if (!(q > 0.0 && q < 1.0)) invalid("experiment: q must lie in (0, 1)");
  for (double v : q_values) {
    if (!(v > 0.0 && v < 1.0)) invalid("experiment: q values must lie in (0, 1)");
  }
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) invalid("experiment: alpha0 must be positive");
  for (double c : {C_is1, C_is2, C_vr}) {
    if (!(c > 1.0) || !std::isfinite(c)) invalid("experiment: C must exceed 1");
  }
  if (!(eps > 0.0 && eps < 1.0)) invalid("experiment: eps must lie in (0, 1)");
  if (n_max < 1) invalid("experiment: n_max must be at least 1");
}

double ExperimentSpec::C_for(Method method) const {
  switch (method) {
    case Method::IS1: return C_is1;
    case Method::IS2: return C_is2;
    case Method::VR: return C_vr;
  }
  return C_is1;
}

bool ResultRow::failed() const { return std::isnan(rel_err); }

double relative_error(const Vector& u, const Vector& y) { return (u - y).norm() / y.norm(); }

ProblemInstance make_problem(ProblemKind kind, std::size_t m) {
  switch (kind) {
    case ProblemKind::Hilbert: return hilbert_problem(m);
    case ProblemKind::FredholmA: return fredholm_a(m);
    case ProblemKind::FredholmB: return fredholm_b(m);
  }
  invalid("unknown problem kind");
}

std::vector<ResultRow> run_on_instance(const ExperimentSpec& spec, const ProblemInstance& problem,
                                       const SpectralFactors& factors) {
  spec.validate();
  const std::size_t per_task = spec.methods.size();
  const std::size_t tasks = spec.deltas.size() * spec.seeds.size();
  std::vector<ResultRow> rows(tasks * per_task);
  run_parallel(tasks, spec.threads, [&](std::size_t t) {
    const double delta = spec.deltas[t / spec.seeds.size()];
    const std::uint64_t seed = spec.seeds[t % spec.seeds.size()];
    const Vector f_noisy = add_noise(problem.f_exact, NoiseSpec{delta, seed});
    for (std::size_t k = 0; k < per_task; ++k) {
      ResultRow row = solve_row(spec.methods[k], spec, factors, f_noisy, problem.y_exact, delta);
      row.seed = seed;
      rows[t * per_task + k] = std::move(row);
    }
  });
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const ProblemInstance problem = make_problem(spec.problem, spec.m);
  const SpectralFactors factors = svd(problem.A);
  return run_on_instance(spec, problem, factors);
}

SweepTable q_sweep_on_instance(const ExperimentSpec& spec, std::span<const double> q_values,
                               const ProblemInstance& problem, const SpectralFactors& factors) {
  if (q_values.empty()) invalid("q_sweep: at least one q value is required");
  SweepTable table;
  for (double q : q_values) {
    ExperimentSpec one = spec;
    one.q = q;
    std::vector<ResultRow> rows = run_on_instance(one, problem, factors);
    table.rows.insert(table.rows.end(), std::make_move_iterator(rows.begin()),
                      std::make_move_iterator(rows.end()));
  }

  // Iterations should not decrease as q grows, per (method, delta, seed).
  std::map<std::tuple<Method, double, std::uint64_t>, std::vector<std::pair<double, int>>> series;
  for (const ResultRow& row : table.rows) {
    if (row.method == Method::VR || row.failed()) continue;
    series[{row.method, row.delta, row.seed}].emplace_back(row.q, row.iterations);
  }
  for (auto& [key, points] : series) {
    std::sort(points.begin(), points.end());
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i].second < points[i - 1].second) {
        table.iterations_monotone = false;
        table.violations.push_back(std::string(to_string(std::get<0>(key))) + " delta=" +
                                   short_number(std::get<1>(key)) + " seed=" +
                                   std::to_string(std::get<2>(key)) + ": " +
                                   std::to_string(points[i - 1].second) + " iterations at q=" +
                                   short_number(points[i - 1].first) + " but " +
                                   std::to_string(points[i].second) + " at q=" +
                                   short_number(points[i].first));
      }
    }
  }
  return table;
}

SweepTable q_sweep(const ExperimentSpec& spec, std::span<const double> q_values) {
  spec.validate();
  const ProblemInstance problem = make_problem(spec.problem, spec.m);
  const SpectralFactors factors = svd(problem.A);
  return q_sweep_on_instance(spec, q_values, problem, factors);
}

std::string emit(std::span<const ResultRow> rows, Format format) {
  if (rows.empty()) invalid("emit: no rows");
  std::ostringstream out;
  if (format == Format::Csv) {
    out << kCsvHeader << '\n';
    for (const ResultRow& r : rows) {
      out << to_string(r.method) << ',' << to_string(r.problem) << ',' << r.m << ','
          << full_precision(r.delta) << ',' << r.seed << ',' << full_precision(r.q) << ','
          << full_precision(r.alpha0_used) << ',' << full_precision(r.C) << ','
          << full_precision(r.eps) << ',' << (r.failed() ? "nan" : full_precision(r.rel_err))
          << ',' << r.iterations << ',' << r.stop_reason << '\n';
    }
    return out.str();
  }

  // Markdown: one line per (q, delta, seed), Rel.Err/Iter column pairs per method.
  std::vector<Method> methods;
  std::set<double> qs;
  for (const ResultRow& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    qs.insert(r.q);
  }
  const bool with_q = qs.size() > 1;
  using Key = std::tuple<double, double, std::uint64_t>;
  std::vector<Key> keys;
  std::map<std::pair<Key, Method>, const ResultRow*> cells;
  for (const ResultRow& r : rows) {
    const Key key{r.q, r.delta, r.seed};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    cells[{key, r.method}] = &r;
  }

  auto upper = [](Method m) {
    std::string s(to_string(m));
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  };
  out << '|';
  if (with_q) out << " q |";
  out << " delta | seed |";
  for (Method m : methods) out << ' ' << upper(m) << " Rel.Err | " << upper(m) << " Iter |";
  out << "\n|";
  if (with_q) out << "---|";
  out << "---|---|";
  for (std::size_t i = 0; i < methods.size(); ++i) out << "---|---|";
  out << '\n';
  for (const Key& key : keys) {
    out << '|';
    if (with_q) out << ' ' << short_number(std::get<0>(key)) << " |";
    out << ' ' << short_number(std::get<1>(key)) << " | " << std::get<2>(key) << " |";
    for (Method m : methods) {
      const auto it = cells.find({key, m});
      if (it == cells.end()) {
        out << " | |";
      } else if (it->second->failed()) {
        out << " fail (" << it->second->stop_reason << ") | - |";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", it->second->rel_err);
        out << ' ' << buf << " | " << it->second->iterations << " |";
      }
    }
    out << '\n';
  }
  return out.str();
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) invalid("parse_csv: unexpected header");
      header_seen = true;
      continue;
    }
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 12) invalid("parse_csv: expected 12 fields");
    ResultRow row;
    row.method = parse_method(f[0]);
    row.problem = parse_problem(f[1]);
    row.m = parse_integer<std::size_t>(f[2]);
    row.delta = parse_double(f[3]);
    row.seed = parse_integer<std::uint64_t>(f[4]);
    row.q = parse_double(f[5]);
    row.alpha0_used = parse_double(f[6]);
    row.C = parse_double(f[7]);
    row.eps = parse_double(f[8]);
    row.rel_err = parse_double(f[9]);
    row.iterations = parse_integer<int>(f[10]);
    row.stop_reason = f[11];
    rows.push_back(std::move(row));
  }
  if (!header_seen) invalid("parse_csv: missing header");
  return rows;
}

}  // namespace dsm::bench
