#include <doctest.h>

#include "commands.hpp"
#include "fracvia/io.hpp"

#include <filesystem>
#include <string>
#include <vector>

using fracvia::Json;
namespace fs = std::filesystem;

namespace {
fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fracvia_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}
}  // namespace

TEST_CASE("usage errors exit 64") {
    using fracvia::cli::run;
    CHECK(run({"--help"}) == 0);
    CHECK(run({"fbm", "--bogus"}) == 64);
    CHECK(run({"fbm", "--hurst", "0.7"}) == 64);
    CHECK(run({"frobnicate"}) == 64);
    CHECK(run({"solve", "--coeffs", "builtin:nope", "--seed", "1"}) == 64);
    CHECK(run({"viability", "--seed", "1"}) == 64);
    CHECK(run({}) == 64);
}

TEST_CASE("fbm writes one file per replication and a manifest") {
    const fs::path d = fresh_dir("fbm");
    const std::string out = (d / "p.csv").string();
    CHECK(fracvia::cli::run({"fbm", "--hurst", "0.7", "--n", "256", "--paths", "4", "--seed", "7", "--out", out}) == 0);
    for (int r = 0; r < 4; ++r) CHECK(fs::exists(d / ("p_rep" + std::to_string(r) + ".csv")));
    const fs::path manifest = d / "p_rep0.csv.manifest.json";
    REQUIRE(fs::exists(manifest));
    const fracvia::RunManifest m = fracvia::read_manifest(manifest.string());
    CHECK(m.seed == 7u);
    CHECK(m.outputs.size() == 4);
    CHECK(m.flags.at("--hurst") == "0.7");
    CHECK(m.grid["n"] == 256);
    CHECK(fracvia::cli::run({"--replay", manifest.string()}) == 0);

    const std::string csv = fracvia::read_text((d / "p_rep1.csv").string());
    fracvia::write_text((d / "p_rep1.csv").string(), csv + "\n");
    // the replay rewrites the file and the digests match again
    CHECK(fracvia::cli::run({"--replay", manifest.string()}) == 0);
}

TEST_CASE("calc integral and verify") {
    const fs::path d = fresh_dir("calc");
    Eigen::MatrixXd f(65, 1), g(65, 1);
    for (int i = 0; i < 65; ++i) {
        const double t = i / 64.0;
        f(i, 0) = 1.0;
        g(i, 0) = t * t;
    }
    const fracvia::UniformGrid grid(0.0, 1.0, 65);
    fracvia::write_text((d / "f.csv").string(), fracvia::to_csv(fracvia::GridFunction(grid, f)));
    fracvia::write_text((d / "g.csv").string(), fracvia::to_csv(fracvia::GridFunction(grid, g)));
    const std::string out = (d / "I.csv").string();
    CHECK(fracvia::cli::run({"calc", "--op", "integral", "--in-f", (d / "f.csv").string(), "--in-g", (d / "g.csv").string(),
                             "--out", out}) == 0);
    const fracvia::GridFunction I = fracvia::read_csv(out);
    CHECK(I(64) == doctest::Approx(1.0).epsilon(10.0 / 65));

    const std::string rep = (d / "v.json").string();
    CHECK(fracvia::cli::run({"calc", "--op", "verify", "--lambda", "4", "--in-f", (d / "f.csv").string(), "--in-g",
                             (d / "g.csv").string(), "--out", rep}) == 0);
    const Json j = Json::parse(fracvia::read_text(rep));
    CHECK(j["pass"] == true);
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("lhs"));
        CHECK(c.contains("rhs"));
        CHECK(c.contains("constant_used"));
    }
    CHECK(fracvia::cli::run({"calc", "--op", "wavelet", "--in-f", (d / "f.csv").string()}) == 64);
}

TEST_CASE("solve report") {
    const fs::path d = fresh_dir("solve");
    const std::string rep = (d / "r.json").string();
    CHECK(fracvia::cli::run({"solve", "--coeffs", "linear", "--a", "-0.5", "--s", "0.3", "--driver", "fbm:0.75", "--n",
                             "129", "--seed", "2", "--x0", "1", "--method", "both", "--out", (d / "x.csv").string(),
                             "--report", rep}) == 0);
    const Json j = Json::parse(fracvia::read_text(rep));
    CHECK(j.contains("iterations"));
    CHECK(j["residual"].get<double>() < 1e-9);
    CHECK(j.contains("lambda0"));
    CHECK(j["ledger"].is_object());
    for (const auto& b : j["bounds_checked"]) CHECK(b["pass"] == true);
    CHECK(fs::exists(d / "x.euler.csv"));
}

TEST_CASE("viability exit codes") {
    const fs::path d = fresh_dir("via");
    const std::vector<std::string> common = {"--tube", "ball:2", "--driver", "fbm:0.75", "--n", "1025", "--seed", "1",
                                             "--alpha", "0.26"};
    std::vector<std::string> ok = {"viability", "--coeffs", "builtin:ball-control", "--kappa", "0.2", "--s0", "0.02",
                                   "--epsilon", "0.05", "--out", (d / "ok.csv").string(), "--report",
                                   (d / "ok.json").string()};
    ok.insert(ok.end(), common.begin(), common.end());
    CHECK(fracvia::cli::run(ok) == 0);
    const Json j = Json::parse(fracvia::read_text((d / "ok.json").string()));
    CHECK(j["viable"] == true);
    CHECK(j["violations"].empty());
    CHECK(j["assumptions"]["pass"] == true);

    const std::vector<std::string> bad = {"viability", "--coeffs", "builtin:constant-noise", "--kappa", "0.05", "--x0",
                                          "1.99", "--tube", "ball:2", "--driver", "fbm:0.75", "--n", "2049", "--seed",
                                          "9", "--alpha", "0.26", "--epsilon", "2", "--out", (d / "bad.csv").string(),
                                          "--report", (d / "bad.json").string()};
    CHECK(fracvia::cli::run(bad) == 2);
    const Json b = Json::parse(fracvia::read_text((d / "bad.json").string()));
    REQUIRE(b["violations"].size() == 1);
    CHECK(b["violations"][0].contains("q_growth_exponent"));
    CHECK(b["violations"][0].contains("point"));

    CHECK(fracvia::cli::run({"viability", "--coeffs", "builtin:ball-control", "--epsilon", "0.1", "--eps-sweep", "0.1,0.05",
                             "--seed", "1"}) == 64);
}
