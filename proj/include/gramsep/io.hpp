#pragma once

// JSON and CSV forms of points, reports, partitions, block sequences and
// experiment results.

#include "gramsep/constructions.hpp"
#include "gramsep/experiments.hpp"
#include "gramsep/feichtinger.hpp"
#include "gramsep/gramian.hpp"

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace gramsep {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that reads back to the same double; nan, inf, -inf
/// for non-finite values.
std::string format_number(double v);

/// Points as arrays of [re, im] pairs, one pair per coordinate.
Json points_to_json(std::span<const Point> points);
std::vector<Point> points_from_json(const Json& j);

Json report_to_json(const SeparationReport& r);
Json partition_to_json(const Partition& p);
Json h_partition_to_json(const HPartitionResult& r);
Json block_sequence_to_json(const BlockSequence& b);
Json matrix_to_json(const HermitianMatrix& m);

/// runtime_ms is only written when include_timing is set, so that repeated
/// runs give identical bytes.
Json result_to_json(const ExperimentResult& r, bool include_timing = false);
ExperimentResult result_from_json(const Json& j);

/// Header of grid then metric names, one line per grid point.
std::string result_to_csv(const ExperimentResult& r);
std::string report_to_csv(const SeparationReport& r);

enum class OutputFormat { json, csv };
OutputFormat parse_format(const std::string& name);

std::string render(const ExperimentResult& r, OutputFormat format, bool include_timing = false);

/// Writes the rendered result to `path` ("-" for stdout). I/O failures raise
/// std::runtime_error naming the path.
void emit(const ExperimentResult& r, OutputFormat format, const std::string& path, bool include_timing = false);

void write_text(const std::string& text, const std::string& path);
std::string read_text(const std::string& path);

}  // namespace gramsep
