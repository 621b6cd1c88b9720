#pragma once

#include <filesystem>

#include "relcon/scenario.hpp"

namespace relcon {

// Minimal polyline plot of a scenario run: stacked panels with the observed
// output per trial, the max-pairwise distance curve (when computed), and the
// applied input, with shaded bands over the intervals where all members sit
// in the same contraction region. No external plotting dependency; SVG is a
// convenience view, the CSV files are the verification surface.
void write_scenario_svg(const ScenarioResult& r, const std::filesystem::path& path);

} // namespace relcon
