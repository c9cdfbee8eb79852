#include "dsm/bench/cli.hpp"

#include "dsm/bench/config.hpp"
#include "dsm/bench/experiment.hpp"
#include "dsm/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace dsm::bench {

namespace {

struct Flags {
  std::string config_path;
  std::string preset_name;
  std::optional<std::string> problem;
  std::optional<std::size_t> m;
  std::vector<double> deltas;
  std::vector<double> qs;
  std::optional<double> alpha0;
  std::optional<double> C;
  std::optional<double> eps;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> methods;
  std::optional<int> n_max;
  std::optional<unsigned> threads;
  std::string format = "csv";
  std::string out_path;
};

void add_experiment_flags(CLI::App& cmd, Flags& f, bool sweep) {
  cmd.add_option("--config", f.config_path, "key = value file; flags override it")
      ->check(CLI::ExistingFile);
  cmd.add_option("--preset", f.preset_name, "table2 ... table7");
  cmd.add_option("--problem", f.problem, "hilbert, fredholm-a or fredholm-b");
  cmd.add_option("--m", f.m, "dimension");
  cmd.add_option("--delta", f.deltas, "absolute noise level (repeatable)")->delimiter(',');
  cmd.add_option("--q", f.qs, sweep ? "q values to sweep (repeatable)" : "schedule ratio")
      ->delimiter(',');
  cmd.add_option("--alpha0", f.alpha0, "initial regularization parameter");
  cmd.add_option("--C", f.C, "discrepancy constant for every method");
  cmd.add_option("--eps", f.eps, "exponent in C*delta^eps");
  cmd.add_option("--seed", f.seeds, "noise seed (repeatable)")->delimiter(',');
  cmd.add_option("--method", f.methods, "is1, is2, vr (repeatable)")->delimiter(',');
  cmd.add_option("--n-max", f.n_max, "iteration cap");
  cmd.add_option("--threads", f.threads, "worker threads, 0 = hardware");
  cmd.add_option("--format", f.format, "csv or markdown");
  cmd.add_option("--out", f.out_path, "write results here and a manifest next to it");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Preset, then config file, then individual flags.
ExperimentSpec build_spec(const Flags& f, bool sweep) {
  ExperimentSpec spec = f.preset_name.empty() ? ExperimentSpec{} : preset(f.preset_name);
  if (!f.config_path.empty()) apply_config(spec, read_file(f.config_path));
  if (f.problem) spec.problem = parse_problem(*f.problem);
  if (f.m) spec.m = *f.m;
  if (!f.deltas.empty()) spec.deltas = f.deltas;
  if (!f.qs.empty()) {
    if (sweep) {
      spec.q_values = f.qs;
    } else if (f.qs.size() == 1) {
      spec.q = f.qs.front();
    } else {
      throw Error(ErrorKind::Validation, "run takes a single --q; use sweep-q for several");
    }
  }
  if (f.alpha0) spec.alpha0 = *f.alpha0;
  if (f.C) spec.C_is1 = spec.C_is2 = spec.C_vr = *f.C;
  if (f.eps) spec.eps = *f.eps;
  if (!f.seeds.empty()) spec.seeds = f.seeds;
  if (!f.methods.empty()) {
    spec.methods.clear();
    for (const auto& name : f.methods) spec.methods.push_back(parse_method(name));
  }
  if (f.n_max) spec.n_max = *f.n_max;
  if (f.threads) spec.threads = *f.threads;
  spec.validate();
  return spec;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  file << text;
  if (!file) throw Error(ErrorKind::InvalidInput, "write failed for '" + path + "'");
}

std::string command_line(int argc, const char* const* argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i) cmd += ' ';
    cmd += argv[i];
  }
  return cmd;
}

int finish(const std::vector<ResultRow>& rows, const ExperimentSpec& spec, const Flags& f,
           const std::string& command, std::ostream& out, std::ostream& err) {
  const std::string text = emit(rows, parse_format(f.format));
  if (f.out_path.empty()) {
    out << text;
  } else {
    write_text(f.out_path, text);
    write_text(f.out_path + ".manifest", manifest(spec, command));
  }
  const auto failures =
      std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return r.failed(); });
  if (failures > 0) {
    err << failures << " of " << rows.size() << " rows failed\n";
    return kExitRowFailures;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrepancy-stopped iterative regularization benchmarks", "dsm-bench"};
  app.require_subcommand(1);

  Flags run_flags;
  Flags sweep_flags;
  CLI::App* run = app.add_subcommand("run", "solve every (delta, seed, method) row");
  add_experiment_flags(*run, run_flags, false);
  CLI::App* sweep = app.add_subcommand("sweep-q", "repeat a run over several q values");
  add_experiment_flags(*sweep, sweep_flags, true);

  std::string export_problem = "hilbert";
  std::size_t export_m = 200;
  std::string export_out;
  CLI::App* exp = app.add_subcommand("export-problem", "write A, f and y as text");
  exp->add_option("--problem", export_problem, "hilbert, fredholm-a or fredholm-b");
  exp->add_option("--m", export_m, "dimension");
  exp->add_option("--out", export_out, "output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitSpecError;
  }

  const std::string command = command_line(argc, argv);
  try {
    if (*run) {
      const ExperimentSpec spec = build_spec(run_flags, false);
      parse_format(run_flags.format);
      return finish(run_experiment(spec), spec, run_flags, command, out, err);
    }
    if (*sweep) {
      const ExperimentSpec spec = build_spec(sweep_flags, true);
      parse_format(sweep_flags.format);
      const SweepTable table = q_sweep(spec, spec.q_values);
      for (const auto& v : table.violations) err << "warning: iterations decrease with q: " << v << '\n';
      return finish(table.rows, spec, sweep_flags, command, out, err);
    }
    const ProblemInstance problem = make_problem(parse_problem(export_problem), export_m);
    if (export_out.empty()) {
      write_problem(out, problem);
    } else {
      std::ofstream file(export_out);
      if (!file) throw Error(ErrorKind::InvalidInput, "cannot write '" + export_out + "'");
      write_problem(file, problem);
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitSpecError;
  }
}

}  // namespace dsm::bench
