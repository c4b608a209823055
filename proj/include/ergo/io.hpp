#pragma once

// JSON files for groups, systems, observables, and windows, plus the report
// envelope and CSV output used by the command line tool.  Serialization is
// ordered so files are byte-stable across runs.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergo/system.hpp"
#include "ergo/window.hpp"

namespace ergo {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "ergocube";
inline constexpr const char* kToolVersion = "0.1.0";

ordered_json group_to_json(const GroupModel& group);
GroupModel group_from_json(const ordered_json& j);

ordered_json system_to_json(const FiniteSystem& system);
FiniteSystem system_from_json(const ordered_json& j);

ordered_json observable_to_json(const Observable& f);
Observable observable_from_json(const ordered_json& j);

// the mask is run-length encoded, alternating runs starting with zeros
ordered_json window_to_json(const SubsetWindow& w);
SubsetWindow window_from_json(const ordered_json& j);

ordered_json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const ordered_json& j);

// 12 significant digits, the precision used in CSV output
std::string format_sig(double x);

// envelope every report shares: tool, version, kind, seed, and the
// configuration that produced it
ordered_json make_report(const std::string& kind, ordered_json config, std::uint64_t seed);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace ergo
