#pragma once

// File formats. CSV uses '.' decimals, ',' separators and LF line endings;
// reals are written with 17 significant digits so they round-trip exactly.

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cohercause/experiments.hpp"
#include "cohercause/inference.hpp"

namespace cohercause {

using Json = nlohmann::ordered_json;

/// Sequence data with a header row naming at least t, x and y. Extra
/// columns are accepted and ignored. Throws ParseError with the line number.
SequencePair read_sequence_csv(std::istream& in);
SequencePair read_sequence_csv(const std::filesystem::path& path);

/// Shortest text that parses back to exactly the same double.
std::string format_real(double v);

std::string sequence_csv(const SequencePair& data);          // t,x,y
std::string coherence_map_csv(const CoherenceMap& map);      // s,t,rho2
std::string power_curve_csv(const std::vector<PowerPoint>& curve);
std::string roc_curve_csv(const std::vector<ROCPoint>& curve);

/// Keys: statistic, threshold, p_value, alpha, method, reject_null, p, q, r, M, seed.
Json to_json(const TestOutcome& outcome);
Json to_json(const ReplicationConfig& config);
Json to_json(const SizeEstimate& size);

std::string to_string(WindowMode mode);
WindowMode parse_window_mode(const std::string& name);
std::string to_string(Conditioning conditioning);
Conditioning parse_conditioning(const std::string& name);

/// Writes to a temporary file in the same directory, then renames it over
/// `path`, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace cohercause
