#include "dsm/bench/cli.hpp"
#include "dsm/bench/config.hpp"
#include "dsm/bench/experiment.hpp"
#include "dsm/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dsm::bench {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dsm-bench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / "dsm_bench_test";
  fs::create_directories(dir);
  return dir / name;
}

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.m = 40;
  spec.deltas = {1e-2, 1e-3};
  spec.seeds = {1, 2};
  spec.threads = 2;
  return spec;
}

TEST(Spec, ValidationRejectsEmptyLists) {
  ExperimentSpec spec;
  spec.methods.clear();
  EXPECT_THROW(spec.validate(), Error);
  spec = ExperimentSpec{};
  spec.deltas.clear();
  EXPECT_THROW(spec.validate(), Error);
  spec = ExperimentSpec{};
  spec.seeds.clear();
  EXPECT_THROW(spec.validate(), Error);
  spec = ExperimentSpec{};
  spec.deltas = {-1.0};
  EXPECT_THROW(spec.validate(), Error);
  spec = ExperimentSpec{};
  spec.C_vr = 0.5;
  EXPECT_THROW(run_experiment(spec), Error);
}

TEST(Experiment, RowOrderAndStoredError) {
  const auto spec = small_spec();
  const auto problem = make_problem(spec.problem, spec.m);
  const auto rows = run_experiment(spec);
  ASSERT_EQ(rows.size(), 2u * 2u * 3u);
  std::size_t k = 0;
  for (double d : spec.deltas) {
    for (auto s : spec.seeds) {
      for (Method m : spec.methods) {
        EXPECT_EQ(rows[k].delta, d);
        EXPECT_EQ(rows[k].seed, s);
        EXPECT_EQ(rows[k].method, m);
        ASSERT_FALSE(rows[k].failed());
        EXPECT_NEAR(relative_error(rows[k].solution, problem.y_exact), rows[k].rel_err, 1e-14);
        ++k;
      }
    }
  }
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  auto spec = small_spec();
  const std::string a = emit(run_experiment(spec), Format::Csv);
  spec.threads = 1;
  const std::string b = emit(run_experiment(spec), Format::Csv);
  EXPECT_EQ(a, b);
}

TEST(Experiment, FailuresAreCapturedPerRow) {
  ExperimentSpec spec;
  spec.m = 20;
  spec.deltas = {1.0};
  spec.C_is1 = spec.C_is2 = spec.C_vr = 1000.0;  // C delta far above ||f_delta||
  const auto rows = run_experiment(spec);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.failed());
    EXPECT_FALSE(r.stop_reason.empty());
  }
}

TEST(Sweep, SingleQEqualsRun) {
  auto spec = small_spec();
  const std::vector<double> qs{0.25};
  const auto table = q_sweep(spec, qs);
  EXPECT_EQ(emit(table.rows, Format::Csv), emit(run_experiment(spec), Format::Csv));
}

TEST(Sweep, HilbertIterationsDecreaseWithQ) {
  ExperimentSpec spec = preset("table2");
  const auto table = q_sweep(spec, spec.q_values);
  EXPECT_TRUE(table.iterations_monotone);
  ASSERT_EQ(table.rows.size(), 6u);
  EXPECT_GT(table.rows[0].iterations, table.rows[2].iterations);
  EXPECT_GT(table.rows[2].iterations, table.rows[4].iterations);
}

TEST(Emit, CsvHeaderAndRoundTrip) {
  const auto rows = run_experiment(small_spec());
  const std::string csv = emit(rows, Format::Csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  const auto back = parse_csv(csv);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].method, rows[i].method);
    EXPECT_EQ(back[i].problem, rows[i].problem);
    EXPECT_EQ(back[i].m, rows[i].m);
    EXPECT_EQ(back[i].delta, rows[i].delta);
    EXPECT_EQ(back[i].seed, rows[i].seed);
    EXPECT_EQ(back[i].q, rows[i].q);
    EXPECT_EQ(back[i].alpha0_used, rows[i].alpha0_used);
    EXPECT_EQ(back[i].C, rows[i].C);
    EXPECT_EQ(back[i].eps, rows[i].eps);
    EXPECT_EQ(back[i].rel_err, rows[i].rel_err);
    EXPECT_EQ(back[i].iterations, rows[i].iterations);
    EXPECT_EQ(back[i].stop_reason, rows[i].stop_reason);
  }
  EXPECT_EQ(emit(back, Format::Csv), csv);
}

TEST(Emit, OneRowAndEmpty) {
  auto spec = small_spec();
  spec.deltas = {1e-2};
  spec.seeds = {3};
  spec.methods = {Method::IS2};
  const auto rows = run_experiment(spec);
  const std::string csv = emit(rows, Format::Csv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_THROW(emit(std::vector<ResultRow>{}, Format::Csv), Error);
}

TEST(Emit, MarkdownThreeDecimals) {
  ResultRow r;
  r.method = Method::IS1;
  r.delta = 0.01;
  r.seed = 15;
  r.q = 0.25;
  r.rel_err = 0.031234;
  r.iterations = 13;
  const std::vector<ResultRow> rows{r};
  const std::string md = emit(rows, Format::Markdown);
  EXPECT_NE(md.find("| 0.031 | 13 |"), std::string::npos) << md;
  EXPECT_NE(md.find("IS1 Rel.Err"), std::string::npos);
}

TEST(Config, AppliesKeysAndRejectsUnknown) {
  ExperimentSpec spec;
  apply_config(spec,
               "# comment\nproblem = fredholm-b\nm = 64\ndeltas = 0.05, 0.01\n"
               "seeds = 1,2,3\nmethods = is2\nC = 1.5\nalpha0 = 4 # trailing\n");
  EXPECT_EQ(spec.problem, ProblemKind::FredholmB);
  EXPECT_EQ(spec.m, 64u);
  EXPECT_EQ(spec.deltas, (std::vector<double>{0.05, 0.01}));
  EXPECT_EQ(spec.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(spec.methods, (std::vector<Method>{Method::IS2}));
  EXPECT_EQ(spec.C_vr, 1.5);
  EXPECT_EQ(spec.alpha0, 4.0);
  EXPECT_THROW(apply_config(spec, "colour = red\n"), Error);
  EXPECT_THROW(apply_config(spec, "m 5\n"), Error);
  EXPECT_THROW(apply_config(spec, "m = -5\n"), Error);
}

TEST(Config, DescribeRoundTrips) {
  const ExperimentSpec spec = preset("table5");
  ExperimentSpec back;
  apply_config(back, describe(spec));
  EXPECT_EQ(describe(back), describe(spec));
}

TEST(Config, PresetsCarryReferenceSettings) {
  EXPECT_EQ(preset_names().size(), 6u);
  for (const auto& name : preset_names()) {
    const auto spec = preset(name);
    EXPECT_NO_THROW(spec.validate());
    EXPECT_EQ(spec.eps, 0.99);
    EXPECT_EQ(spec.q, 0.25);
  }
  EXPECT_EQ(preset("table3").alpha0, 1.0);
  EXPECT_EQ(preset("table5").alpha0, 2.0);
  EXPECT_EQ(preset("table5").C_is1, 2.0);
  EXPECT_EQ(preset("table5").C_is2, 1.01);
  EXPECT_EQ(preset("table5").m, 600u);
  EXPECT_EQ(preset("table7").alpha0, 4.0);
  EXPECT_THROW(preset("table9"), Error);
}

TEST(Cli, RunToStdoutIsDeterministic) {
  const auto a = cli({"run", "--m", "30", "--delta", "0.01", "--seed", "4", "--seed", "5"});
  const auto b = cli({"run", "--m", "30", "--delta", "0.01", "--seed", "4", "--seed", "5"});
  EXPECT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(parse_csv(a.out).size(), 6u);
}

TEST(Cli, OutWritesManifest) {
  const fs::path out = scratch("run.csv");
  const auto r = cli({"run", "--preset", "table3", "--method", "is1", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto rows = parse_csv(slurp(out));
  EXPECT_EQ(rows.size(), 3u);
  const std::string manifest_text = slurp(out.string() + ".manifest");
  EXPECT_NE(manifest_text.find("version = "), std::string::npos);
  EXPECT_NE(manifest_text.find("seeds = 15"), std::string::npos);
  EXPECT_NE(manifest_text.find("problem = hilbert"), std::string::npos);
}

TEST(Cli, ConfigFileThenFlags) {
  const fs::path cfg = scratch("spec.cfg");
  std::ofstream(cfg) << "m = 25\nmethods = is1, vr\ndeltas = 0.02\n";
  const auto r = cli({"run", "--config", cfg.string(), "--delta", "0.005"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].m, 25u);
  EXPECT_EQ(rows[0].delta, 0.005);
  EXPECT_EQ(rows[1].method, Method::VR);
}

TEST(Cli, SpecErrorsExitOne) {
  EXPECT_EQ(cli({"run", "--method", "newton"}).code, kExitSpecError);
  EXPECT_EQ(cli({"run", "--problem", "nope"}).code, kExitSpecError);
  EXPECT_EQ(cli({"run", "--q", "1.5"}).code, kExitSpecError);
  EXPECT_EQ(cli({"run", "--preset", "table1"}).code, kExitSpecError);
  EXPECT_EQ(cli({"run", "--format", "xml", "--m", "10"}).code, kExitSpecError);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitSpecError);
  EXPECT_EQ(cli({}).code, kExitSpecError);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, RowFailuresExitTwo) {
  const auto r = cli({"run", "--m", "20", "--delta", "1", "--C", "1000"});
  EXPECT_EQ(r.code, kExitRowFailures);
  EXPECT_NE(r.err.find("rows failed"), std::string::npos);
  EXPECT_EQ(parse_csv(r.out).size(), 3u);
}

TEST(Cli, SweepQMarkdown) {
  const auto r = cli({"sweep-q", "--preset", "table2", "--format", "markdown"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("| q | delta | seed |", 0), 0u) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST(Cli, SweepQValuesFromFlags) {
  const auto r = cli({"sweep-q", "--m", "30", "--q", "0.5", "--q", "0.2", "--method", "is2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].q, 0.5);
  EXPECT_EQ(rows[1].q, 0.2);
}

TEST(Cli, ExportProblem) {
  const auto r = cli({"export-problem", "--problem", "hilbert", "--m", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  // m, four entries of A, f (two lines), y = (sqrt(1/2), 1)
  EXPECT_EQ(r.out.rfind("2\n0.33333333333333331\n0.25\n0.25\n0.20000000000000001\n", 0), 0u);
  EXPECT_TRUE(r.out.ends_with("\n0.70710678118654757\n1\n")) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 9);
  const fs::path out = scratch("b.txt");
  EXPECT_EQ(cli({"export-problem", "--problem", "fredholm-b", "--m", "8", "--out", out.string()}).code,
            kExitOk);
  std::ifstream in(out);
  const auto p = read_problem(in);
  EXPECT_EQ(p.m(), 8u);
  EXPECT_EQ(cli({"export-problem", "--problem", "fredholm-b", "--m", "1"}).code, kExitSpecError);
}

}  // namespace
}  // namespace dsm::bench
