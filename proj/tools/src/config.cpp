#include "dsm/bench/config.hpp"

#include "dsm/error.hpp"
#include "dsm/version.hpp"

#include <cstdio>
#include <sstream>

namespace dsm::bench {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::Validation, msg); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    if (comma == std::string_view::npos) comma = value.size();
    const std::string_view item = trim(value.substr(start, comma - start));
    if (!item.empty()) items.emplace_back(item);
    start = comma + 1;
  }
  return items;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  invalid("config: '" + key + "' expects a number, got '" + text + "'");
}

unsigned long long to_unsigned(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    if (!text.empty() && text.front() != '-') {
      const unsigned long long v = std::stoull(text, &used);
      if (used == text.size()) return v;
    }
  } catch (const std::exception&) {
  }
  invalid("config: '" + key + "' expects a nonnegative integer, got '" + text + "'");
}

std::string number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T, typename Fn>
std::string join(const std::vector<T>& items, Fn&& fn) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += fn(items[i]);
  }
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"table2", "table3", "table4", "table5", "table6", "table7"};
}

ExperimentSpec preset(std::string_view name) {
  ExperimentSpec spec;
  spec.q = 0.25;
  spec.eps = 0.99;
  spec.seeds = {15};
  spec.q_values = {0.5, 0.25, 0.125};
  if (name == "table2" || name == "table3") {
    spec.problem = ProblemKind::Hilbert;
    spec.m = 200;
    spec.alpha0 = 1.0;
    spec.C_is1 = spec.C_is2 = spec.C_vr = 1.01;
  } else if (name == "table4" || name == "table5") {
    spec.problem = ProblemKind::FredholmA;
    spec.m = 600;
    spec.alpha0 = 2.0;
    spec.C_is1 = 2.0;
    spec.C_is2 = spec.C_vr = 1.01;
  } else if (name == "table6" || name == "table7") {
    spec.problem = ProblemKind::FredholmB;
    spec.m = 200;
    spec.alpha0 = 4.0;
    spec.C_is1 = spec.C_is2 = spec.C_vr = 1.01;
  } else {
    invalid("unknown preset '" + std::string(name) + "' (table2 ... table7)");
  }
  if (name == "table2" || name == "table4" || name == "table6") {
    spec.deltas = {1e-2};
    spec.methods = {Method::IS1, Method::IS2};
  } else {
    spec.deltas = {0.05, 0.03, 0.01};
    spec.methods = {Method::IS1, Method::IS2, Method::VR};
  }
  return spec;
}

void apply_config(ExperimentSpec& spec, std::string_view text) {
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      invalid("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (value.empty()) invalid("config line " + std::to_string(line_no) + ": empty value");

    if (key == "problem") {
      spec.problem = parse_problem(value);
    } else if (key == "m") {
      spec.m = to_unsigned(key, value);
    } else if (key == "deltas" || key == "delta") {
      spec.deltas.clear();
      for (const auto& item : split_list(value)) spec.deltas.push_back(to_double(key, item));
    } else if (key == "q") {
      spec.q = to_double(key, value);
    } else if (key == "q_values") {
      spec.q_values.clear();
      for (const auto& item : split_list(value)) spec.q_values.push_back(to_double(key, item));
    } else if (key == "alpha0") {
      spec.alpha0 = to_double(key, value);
    } else if (key == "C") {
      spec.C_is1 = spec.C_is2 = spec.C_vr = to_double(key, value);
    } else if (key == "C_is1") {
      spec.C_is1 = to_double(key, value);
    } else if (key == "C_is2") {
      spec.C_is2 = to_double(key, value);
    } else if (key == "C_vr") {
      spec.C_vr = to_double(key, value);
    } else if (key == "eps") {
      spec.eps = to_double(key, value);
    } else if (key == "seeds" || key == "seed") {
      spec.seeds.clear();
      for (const auto& item : split_list(value)) spec.seeds.push_back(to_unsigned(key, item));
    } else if (key == "methods" || key == "method") {
      spec.methods.clear();
      for (const auto& item : split_list(value)) spec.methods.push_back(parse_method(item));
    } else if (key == "n_max") {
      spec.n_max = static_cast<int>(to_unsigned(key, value));
    } else if (key == "threads") {
      spec.threads = static_cast<unsigned>(to_unsigned(key, value));
    } else {
      invalid("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
}

std::string describe(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "problem = " << to_string(spec.problem) << '\n'
      << "m = " << spec.m << '\n'
      << "deltas = " << join(spec.deltas, number) << '\n'
      << "q = " << number(spec.q) << '\n'
      << "q_values = " << join(spec.q_values, number) << '\n'
      << "alpha0 = " << number(spec.alpha0) << '\n'
      << "C_is1 = " << number(spec.C_is1) << '\n'
      << "C_is2 = " << number(spec.C_is2) << '\n'
      << "C_vr = " << number(spec.C_vr) << '\n'
      << "eps = " << number(spec.eps) << '\n'
      << "seeds = " << join(spec.seeds, [](std::uint64_t s) { return std::to_string(s); }) << '\n'
      << "methods = " << join(spec.methods, [](Method m) { return std::string(to_string(m)); })
      << '\n'
      << "n_max = " << spec.n_max << '\n';
  return out.str();
}

std::string manifest(const ExperimentSpec& spec, std::string_view command) {
  std::ostringstream out;
  out << "# dsm-bench run manifest\n"
      << "version = " << kVersion << '\n'
      << "command = " << command << '\n'
      << "noise = splitmix64-box-muller\n"
      << describe(spec);
  return out.str();
}

}  // namespace dsm::bench
