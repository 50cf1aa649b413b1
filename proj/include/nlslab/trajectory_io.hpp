#pragma once

// Trajectory directories: metadata.json plus snapshot_<index>.bin, each a
// little-endian float64 array of interleaved (re, im) samples.

#include <filesystem>

#include "nlslab/nls_dynamics.hpp"

namespace nlslab {

void write_snapshot(const std::filesystem::path& file, const RadialField& u);
/// Reads a snapshot written for grid; the sample count must match.
RadialField read_snapshot(const std::filesystem::path& file, GridPtr grid);

/// Creates dir if needed and overwrites any previous trajectory files in it.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir);
Trajectory read_trajectory(const std::filesystem::path& dir);

}  // namespace nlslab
