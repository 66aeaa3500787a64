#pragma once

#include "fracvia/grid.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fracvia {

using Json = nlohmann::ordered_json;

/// Shortest form that round-trips (17 significant digits).
std::string format_double(double v);

/// Header `time,ch0,ch1,...`, one row per node.
std::string to_csv(const GridFunction& f);
/// Long format `rep,time,ch0,...` with all replications stacked.
std::string to_csv_long(const std::vector<GridFunction>& paths);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

/// Reads the `time,ch0,...` layout written by to_csv.
GridFunction read_csv(const std::string& path);
GridFunction parse_csv(const std::string& text);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string file_digest(const std::string& path);

struct RunManifest {
    std::string subcommand;
    std::vector<std::string> argv;  // arguments after the program name
    std::map<std::string, std::string> flags;
    std::optional<std::uint64_t> seed;
    Json grid = Json::object();
    std::string version;
    std::vector<std::pair<std::string, std::string>> outputs;  // path, digest

    Json to_json() const;
    static RunManifest from_json(const Json& j);
};

void write_manifest(const std::string& path, const RunManifest& m);
RunManifest read_manifest(const std::string& path);

/// Non-finite values become null in JSON.
Json json_number(double v);

}  // namespace fracvia
