// Small I/O helpers shared by report writers: fixed-precision float
// formatting and atomic file writes (temp file + rename).
#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace hetnet {

// Shortest representation with 17 significant digits: round-trips a double.
std::string format17(double v);

// %.{sig}g formatting for human-facing numbers.
std::string format_sig(double v, int sig);

// Write content to path via a temp file in the same directory + rename, so
// readers never observe a half-written file. Throws std::runtime_error on
// I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

// Slurp a file; throws std::runtime_error if it cannot be opened.
std::string read_file(const std::string& path);

// Serialize JSON with every floating-point number rendered by format17, so
// repeated runs with identical inputs produce byte-identical report files.
// Objects keep the container's (sorted) key order; 2-space indentation.
std::string dump_json17(const nlohmann::json& j);

}  // namespace hetnet
