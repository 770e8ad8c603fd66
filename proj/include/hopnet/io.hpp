#pragma once

#include "hopnet/graph.hpp"
#include "hopnet/point_process.hpp"

#include <json.hpp>

#include <filesystem>
#include <initializer_list>
#include <ostream>
#include <string>

namespace hopnet {

using Json = nlohmann::ordered_json;

/// Shortest text with round-trip precision ("%.17g"); inf/nan spelled out.
std::string format_double(double x);

/// {dimension, window: {lo, hi}, points: [{x: [...], e}]}.
Json to_json(const MarkedConfiguration& conf);
MarkedConfiguration configuration_from_json(const Json& j);

Json to_json(const GraphMeta& meta);

/// vertices.csv (index, x..., e), edges.csv (i, j, weight) and graph.json.
void write_graph(const WeightedGraph& graph, const std::filesystem::path& dir);

/// Comma-separated rows with a fixed header.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::initializer_list<std::string> header);
    CsvWriter& cell(double x);
    CsvWriter& cell(long long x);
    CsvWriter& cell(unsigned long long x);
    CsvWriter& cell(std::size_t x) { return cell(static_cast<unsigned long long>(x)); }
    CsvWriter& cell(const std::string& s);
    void end_row();

private:
    void sep();
    std::ostream& out_;
    bool first_ = true;
};

}  // namespace hopnet
