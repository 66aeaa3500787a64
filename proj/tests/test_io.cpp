#include <doctest.h>

#include "fracvia/io.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

using namespace fracvia;

TEST_CASE("doubles round-trip with 17 digits") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::nextafter(1.0, 2.0)})
        CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv round trip") {
    Eigen::MatrixXd v(4, 2);
    v << 0.0, 1.0, 0.1, -1.0 / 3.0, 0.2, 1e-17, 0.3, 4.0;
    const GridFunction f(UniformGrid(0.0, 0.75, 4), v);
    const std::string text = to_csv(f);
    CHECK(text.rfind("time,ch0,ch1\n", 0) == 0);
    const GridFunction back = parse_csv(text);
    CHECK(back.values() == v);
    CHECK(back.grid() == f.grid());
    CHECK_THROWS(parse_csv("time,ch0\n0,1\n0.5,2\n0.6,3\n"));
    CHECK(to_csv_long({f, f}).rfind("rep,time,ch0,ch1\n0,", 0) == 0);
}

TEST_CASE("fnv1a reference vectors") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("manifest round trip") {
    RunManifest m;
    m.subcommand = "fbm";
    m.argv = {"fbm", "--hurst", "0.7", "--seed", "7"};
    m.flags = {{"--hurst", "0.7"}, {"--seed", "7"}};
    m.seed = 7;
    m.grid = {{"t0", 0.0}, {"t1", 1.0}, {"n", 256}};
    m.version = "x";
    m.outputs = {{"a.csv", "0123456789abcdef"}};
    const auto path = std::filesystem::temp_directory_path() / "fracvia_manifest_test.json";
    write_manifest(path.string(), m);
    const RunManifest r = read_manifest(path.string());
    CHECK(r.subcommand == "fbm");
    CHECK(r.argv == m.argv);
    CHECK(r.flags == m.flags);
    CHECK(r.seed == m.seed);
    CHECK(r.grid == m.grid);
    CHECK(r.outputs == m.outputs);
    std::filesystem::remove(path);
    CHECK(json_number(std::nan("")).is_null());
    CHECK(json_number(2.5).get<double>() == 2.5);
}
