#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "relcon/scenario.hpp"

namespace relcon {

// Shortest round-trip decimal form; the CSV dialect is comma-separated,
// '.' decimal, header row, LF endings, so files are bit-stable across runs.
std::string format_double(double x);
double parse_double(std::string_view s);

// Write via temp file + rename in the target directory.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string trajectories_csv(const ScenarioResult& r);                   // trial column
std::string trajectory_csv(const ScenarioResult& r, std::size_t trial);  // one trial
std::string distance_csv(const ScenarioResult& r);
std::string events_csv(const ScenarioResult& r);

struct WriteOptions {
    bool csv = true;
    bool json = true;
    bool svg = false;
    bool per_trial = false;
};

// Writes the run directory (run.json + requested artifacts); returns the file
// names written, which run.json also lists.
std::vector<std::string> write_result(const ScenarioResult& r, const std::filesystem::path& dir,
                                      const WriteOptions& opt);

struct LoadedRun {
    ScenarioSpec spec;
    EnsembleRun run;
    nlohmann::json run_json;
};

// Rebuilds an ensemble from a run directory (run.json + trajectories.csv).
LoadedRun load_run(const std::filesystem::path& dir);

} // namespace relcon
