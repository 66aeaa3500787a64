#include "fracvia/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracvia {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void header(std::ostringstream& os, std::size_t dim) {
    os << "time";
    for (std::size_t c = 0; c < dim; ++c) os << ",ch" << c;
    os << '\n';
}

void rows(std::ostringstream& os, const GridFunction& f, const std::string& prefix) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        os << prefix << format_double(f.time(i));
        for (std::size_t c = 0; c < f.dim(); ++c) os << ',' << format_double(f(i, c));
        os << '\n';
    }
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

double parse_number(const std::string& s, std::size_t line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("CSV line " + std::to_string(line) + ": bad number '" + s + "'");
}

}  // namespace

std::string to_csv(const GridFunction& f) {
    std::ostringstream os;
    header(os, f.dim());
    rows(os, f, "");
    return os.str();
}

std::string to_csv_long(const std::vector<GridFunction>& paths) {
    std::ostringstream os;
    os << "rep,";
    header(os, paths.empty() ? 0 : paths.front().dim());
    for (std::size_t r = 0; r < paths.size(); ++r) rows(os, paths[r], std::to_string(r) + ",");
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GridFunction parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
    const auto head = split(line);
    if (head.size() < 2 || head[0] != "time") throw std::invalid_argument("CSV header must be time,ch0,...");
    const std::size_t dim = head.size() - 1;
    std::vector<double> times;
    std::vector<std::vector<double>> vals;
    std::size_t ln = 1;
    while (std::getline(in, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != dim + 1) throw std::invalid_argument("CSV line " + std::to_string(ln) + ": wrong column count");
        times.push_back(parse_number(cells[0], ln));
        std::vector<double> row(dim);
        for (std::size_t c = 0; c < dim; ++c) row[c] = parse_number(cells[c + 1], ln);
        vals.push_back(std::move(row));
    }
    Eigen::MatrixXd M(static_cast<Eigen::Index>(vals.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t c = 0; c < dim; ++c) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = vals[i][c];
    return GridFunction::from_samples(times, M);
}

GridFunction read_csv(const std::string& path) { return parse_csv(read_text(path)); }

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_digest(const std::string& path) { return fnv1a_hex(read_text(path)); }

Json RunManifest::to_json() const {
    Json j;
    j["subcommand"] = subcommand;
    j["argv"] = argv;
    j["flags"] = flags;
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    j["grid"] = grid;
    j["version"] = version;
    Json outs = Json::array();
    for (const auto& [p, d] : outputs) outs.push_back({{"path", p}, {"fnv1a64", d}});
    j["outputs"] = outs;
    return j;
}

RunManifest RunManifest::from_json(const Json& j) {
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    if (j.contains("argv")) m.argv = j["argv"].get<std::vector<std::string>>();
    m.flags = j.at("flags").get<std::map<std::string, std::string>>();
    if (j.contains("seed") && !j["seed"].is_null()) m.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("grid")) m.grid = j["grid"];
    m.version = j.value("version", "");
    if (j.contains("outputs"))
        for (const auto& o : j["outputs"]) m.outputs.emplace_back(o.at("path").get<std::string>(), o.at("fnv1a64").get<std::string>());
    return m;
}

void write_manifest(const std::string& path, const RunManifest& m) { write_text(path, m.to_json().dump(2) + "\n"); }

RunManifest read_manifest(const std::string& path) { return RunManifest::from_json(Json::parse(read_text(path))); }

Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace fracvia
