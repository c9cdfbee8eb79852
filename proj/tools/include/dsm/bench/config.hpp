#pragma once

#include "dsm/bench/experiment.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dsm::bench {

/// Names accepted by preset(): table2 ... table7.
std::vector<std::string> preset_names();

/// Reference experiment settings. Throws Validation for unknown names.
ExperimentSpec preset(std::string_view name);

/// Applies "key = value" lines ('#' starts a comment). Keys mirror the
/// ExperimentSpec fields; list values are comma separated.
void apply_config(ExperimentSpec& spec, std::string_view text);

/// Serializes spec in the apply_config format.
std::string describe(const ExperimentSpec& spec);

/// Manifest written next to result files: spec, library version, seeds.
std::string manifest(const ExperimentSpec& spec, std::string_view command);

}  // namespace dsm::bench
