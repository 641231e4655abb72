#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "gdifs/errors.hpp"
#include "gdifs/pipeline.hpp"
#include "gdifs/toml_lite.hpp"

using namespace gdifs;
namespace fs = std::filesystem;

namespace {

std::string config_path(const std::string& leaf) {
    return std::string(GDIFS_CONFIG_DIR) + "/" + leaf;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("gdifs_pipeline_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> sorted_names(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

std::string write_temp_config(const std::string& tag, const std::string& body) {
    const fs::path p = fs::temp_directory_path() / ("gdifs_cfg_" + tag + ".json");
    std::ofstream out(p);
    out << body;
    return p.string();
}

} // namespace

TEST_CASE("every shipped config parses") {
    for (const char* leaf :
         {"golden_triangle.json", "golden_triangle_plain.json", "gaussian_square.json",
          "gaussian_square_reversed.json", "hexagon.json", "pisot_tile_square.json",
          "pisot_tile_skew.json", "imported_overlap_graph.json", "golden_weighted.json",
          "rational_matrix.json", "interval.toml"}) {
        CAPTURE(leaf);
        const PipelineConfig config = parse_config(config_path(leaf));
        CHECK(!config.name.empty());
        const int inputs = int(config.ifs.has_value()) + int(config.overlap_graph.has_value()) +
                           int(config.weighted.has_value()) + int(config.matrix.has_value());
        CHECK(inputs == 1);
    }
}

TEST_CASE("violations are collected into one diagnostic naming each field") {
    const std::string path = write_temp_config("bad", R"({
        "field": {"min_poly": [0, 1], "root_hint": [0.0, 0.0]},
        "maps": [{"a": ["1/2"], "b": ["0"]}, {"a": ["1/2"], "b": ["1/2"]}],
        "matrix": {"entries": [["1"]], "ratio": 0.5},
        "ordering": [2, 2],
        "typo_key": 1,
        "options": {"max_vertices": -3}
    })");
    try {
        parse_config(path);
        FAIL("expected a ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("exactly one of") != std::string::npos);
        CHECK(msg.find("ordering") != std::string::npos);
        CHECK(msg.find("typo_key") != std::string::npos);
        CHECK(msg.find("max_vertices") != std::string::npos);
    }
    fs::remove(path);
}

TEST_CASE("the ordering permutation is applied to the maps") {
    const PipelineConfig fwd = parse_config(config_path("gaussian_square.json"));
    const PipelineConfig rev = parse_config(config_path("gaussian_square_reversed.json"));
    REQUIRE(fwd.ifs.has_value());
    REQUIRE(rev.ifs.has_value());
    for (int k = 0; k < 4; ++k) CHECK(rev.ifs->maps[k] == fwd.ifs->maps[3 - k]);
}

TEST_CASE("the TOML subset reader normalizes to the JSON document model") {
    const auto doc = parse_toml_lite(
        "# comment\n"
        "name = \"demo\" # trailing\n"
        "flag = true\n"
        "count = -4\n"
        "scale = 2.5e-1\n"
        "items = [1, 2, [3, \"x\"]]\n"
        "[table]\n"
        "key = \"value\"\n"
        "[[rows]]\n"
        "a = 1\n"
        "[[rows]]\n"
        "a = 2\n");
    CHECK(doc["name"] == "demo");
    CHECK(doc["flag"] == true);
    CHECK(doc["count"] == -4);
    CHECK(doc["scale"] == 0.25);
    CHECK(doc["items"][2][1] == "x");
    CHECK(doc["table"]["key"] == "value");
    CHECK(doc["rows"].size() == 2);
    CHECK(doc["rows"][1]["a"] == 2);

    CHECK_THROWS_WITH_AS(parse_toml_lite("key value\n"), doctest::Contains("line 1"),
                         ValidationError);
    CHECK_THROWS_AS(parse_toml_lite("a = 1\na = 2\n"), ValidationError);
    CHECK_THROWS_AS(parse_toml_lite("a = [1,\n2]\n"), ValidationError);
}

TEST_CASE("the interval chain runs end to end deterministically") {
    const PipelineConfig config = parse_config(config_path("interval.toml"));
    const fs::path dir1 = fresh_dir("int1");
    const fs::path dir2 = fresh_dir("int2");
    const PipelineResult r1 = run_pipeline(config, {}, dir1.string());
    const PipelineResult r2 = run_pipeline(config, {}, dir2.string());

    CHECK(r1.summary["gifs"]["attractors"] == 1);
    CHECK(r1.summary["dimension"]["beta"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r1.summary["render"]["pieces"] == 64); // 2^6 at the default depth

    const auto names1 = sorted_names(dir1);
    const auto names2 = sorted_names(dir2);
    REQUIRE(names1 == names2);
    REQUIRE(!names1.empty());
    for (const auto& name : names1) CHECK(slurp(dir1 / name) == slurp(dir2 / name));

    // Content-addressed primaries come with stable latest aliases.
    bool found_alias = false, found_hashed = false;
    for (const auto& name : names1) {
        if (name.find("-latest.") != std::string::npos) found_alias = true;
        if (name.find("-latest.") == std::string::npos &&
            name.find("summary") == std::string::npos)
            found_hashed = true;
    }
    CHECK(found_alias);
    CHECK(found_hashed);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("stage requests must be an available prefix") {
    const PipelineConfig weighted = parse_config(config_path("golden_weighted.json"));
    CHECK(available_stages(weighted) == std::vector<std::string>{"dim"});
    CHECK_THROWS_WITH_AS(run_pipeline(weighted, {"reduce"}, fresh_dir("w").string()),
                         doctest::Contains("reduce"), ValidationError);

    const PipelineConfig interval = parse_config(config_path("interval.toml"));
    CHECK_THROWS_WITH_AS(run_pipeline(interval, {"gifs"}, fresh_dir("p").string()),
                         doctest::Contains("prefix"), ValidationError);
    CHECK_THROWS_WITH_AS(run_pipeline(interval, {"bogus"}, fresh_dir("b").string()),
                         doctest::Contains("bogus"), ValidationError);

    const fs::path dir = fresh_dir("prefix_ok");
    const PipelineResult r = run_pipeline(interval, {"nbr", "overlap"}, dir.string());
    CHECK(r.summary.contains("overlap"));
    CHECK(!r.summary.contains("gifs"));
    fs::remove_all(dir);
}

TEST_CASE("the output directory falls back to the environment variable") {
    const fs::path dir = fresh_dir("envdir");
    setenv("GDIFS_OUT_DIR", dir.c_str(), 1);
    const PipelineConfig config = parse_config(config_path("rational_matrix.json"));
    run_pipeline(config, {});
    unsetenv("GDIFS_OUT_DIR");
    CHECK(!sorted_names(dir).empty());
    fs::remove_all(dir);
}

TEST_CASE("the command-line tool maps error classes to exit codes") {
    const std::string tool = GDIFS_TOOL_PATH;
    const std::string out = (fs::temp_directory_path() / "gdifs_cli_out").string();
    auto run = [&](const std::string& args) {
        const int status = std::system((tool + " " + args + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };

    CHECK(run("dim --config " + config_path("rational_matrix.json") + " --out-dir " + out) == 0);
    CHECK(run("pipeline --config " + config_path("interval.toml") + " --out-dir " + out) == 0);
    CHECK(run("dim --config /nonexistent/x.json") == 2);
    CHECK(run("reduce --config " + config_path("golden_weighted.json")) == 2);
    CHECK(run("nbr --config " + config_path("gaussian_square.json") + " --out-dir " + out +
              " --max-vertices 2") == 3);
    const std::string bad = write_temp_config(
        "cli", R"({"maps": [], "matrix": {"entries": [["1"]], "ratio": 0.5}})");
    CHECK(run("gifs --config " + bad) == 2);
    fs::remove(bad);
    fs::remove_all(out);
}
