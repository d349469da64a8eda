#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scenex/simulator.hpp"

namespace scenex {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Strict full-string parse; throws on trailing garbage or non-numbers.
double parse_double(std::string_view s);
std::uint64_t parse_uint(std::string_view s);

std::vector<std::string> split_csv_line(const std::string& line);

/// FNV-1a 64-bit content hash, used for artifact fingerprints.
std::uint64_t fnv1a64(std::string_view data);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Trace CSV: `# key=value` metadata lines, a column header, then one row per
/// frame per actor. Writing a reread trace reproduces the file byte for byte.
std::string trace_to_csv(const SimulationTrace& trace);
SimulationTrace trace_from_csv(const std::string& text);
void write_trace_csv(const std::filesystem::path& path, const SimulationTrace& trace);
SimulationTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace scenex
