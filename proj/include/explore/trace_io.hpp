#pragma once

#include "explore/eval.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace explore {

// Trace files are JSON lines: one header object, then one object per step.

std::string format_trace(const EpisodeTrace& trace);
void write_trace(const EpisodeTrace& trace, const std::filesystem::path& path);
EpisodeTrace parse_trace(std::istream& in);
EpisodeTrace read_trace(const std::filesystem::path& path);

/// CSV with header `t,policy,eta,mode,mean,min,max`; mode is `matched` or
/// `door-mismatch`.
std::string format_curves_csv(std::span<const CurveRow> rows);

/// Shortest round-trip decimal representation.
std::string format_number(double v);

/// Writes via a temporary file and rename, so readers never see partial files.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace explore
