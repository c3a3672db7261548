// JSON (de)serialization for instances, action lists, trial records, sweep
// configs, and gap reports. Round-trips are bit-exact: read -> write -> read
// is the identity.
#pragma once

#include <string>
#include <vector>

#include "rcpe/core.hpp"
#include "rcpe/harness.hpp"
#include "rcpe/metrics.hpp"

namespace rcpe {

std::string instance_to_json(const BanditInstance& instance);
BanditInstance instance_from_json(const std::string& text);

std::string actions_to_json(std::size_t d, const std::vector<ActionVector>& actions);
std::vector<ActionVector> actions_from_json(const std::string& text, std::size_t expect_d);

std::string trial_record_to_json(const TrialRecord& record);

std::string gap_report_to_json(const GapReport& report);
std::string metrics_unavailable_json(const std::string& reason);

SweepConfig sweep_config_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace rcpe
