#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "qrc/engine.hpp"

namespace qrc::harness {

using QubitPair = std::pair<int, int>;

/// CSV with header `cycle,z<i>,z<j>,...` (pairs flattened in order) and one row
/// per cycle, values to 17 significant digits.
void export_trajectory(const Trajectory& traj, std::span<const QubitPair> pairs, std::ostream& out);
void export_trajectory(const Trajectory& traj, std::span<const QubitPair> pairs, const std::filesystem::path& file);

/// Signal series as `cycle,value`.
void export_series(std::span<const double> values, std::ostream& out);

}  // namespace qrc::harness
