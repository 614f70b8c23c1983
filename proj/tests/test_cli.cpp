#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "wander/approximation.hpp"
#include "wander/cli.hpp"

using namespace wander;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

ordered_json parse(const CliResult& r) { return ordered_json::parse(r.out); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

// degree-0 approximant evaluating to log 2 everywhere: its map is z -> 2
void write_constant_map(const std::string& path) {
    std::ofstream out(path);
    out << R"({"kind": "arnoldi", "shift": [0.0, 0.0], "scale": 1.0, "degree": 0,)"
        << R"( "hessenberg": [], "coefficients": [[0.6931471805599453, 0.0]]})" << "\n";
}

}  // namespace

TEST_CASE("cli derives composed tables") {
    const auto r = run({"tables", "derive", "--word", "fg"});
    REQUIRE(r.code == 0);
    const auto j = parse(r);
    CHECK(j["word"] == "fg");
    CHECK(j["rules"][2]["branch"] == "B");
    CHECK(j["rules"][2]["tail"]["center"] == "-(4k+10)");
    CHECK(j["rules"][2]["tail"]["target"] == "B(k+2)");
}

TEST_CASE("cli prints the transcribed composite rows") {
    const auto r = run({"tables", "claimed", "--word", "fgh"});
    REQUIRE(r.code == 0);
    const auto j = parse(r);
    const auto& g1 = j["rules"][1]["exceptions"][0];
    CHECK(g1["k"] == 1);
    CHECK(g1["target"]["center"][0] == -18);
}

TEST_CASE("cli diff distinguishes agreeing and slipping words") {
    const auto agree = run({"tables", "diff", "--word", "gf", "--kmax", "10000"});
    REQUIRE(agree.code == 0);
    CHECK(parse(agree)["agrees"].get<bool>());
    CHECK(parse(agree)["entries"].empty());

    const auto slip = run({"tables", "diff", "--word", "fg", "--kmax", "100"});
    REQUIRE(slip.code == 0);  // discrepancies are data, not failure
    CHECK_FALSE(parse(slip)["agrees"].get<bool>());
    CHECK(parse(slip)["entries"].size() > 0);
}

TEST_CASE("cli classifies a wandering start") {
    const auto r = run({"classify", "--word", "f", "--start", "G:5", "--horizon", "100"});
    REQUIRE(r.code == 0);
    const auto j = parse(r);
    CHECK(j["start"] == "G(5)");
    CHECK(j["classification"]["kind"] == "Wandering");
}

TEST_CASE("cli enumerates the whole index range") {
    const auto r = run({"enumerate", "--word", "fg", "--kmax", "50"});
    REQUIRE(r.code == 0);
    const auto j = parse(r);
    CHECK(j["counts"]["Wandering"] == 100);
    CHECK(j["all_wandering"].get<bool>());
}

TEST_CASE("cli builds geometry as json") {
    const auto r = run({"geometry", "build", "--example", "3", "-N", "2", "-T", "2"});
    REQUIRE(r.code == 0);
    const auto j = parse(r);
    CHECK(j["kind"] == "Example3");
    CHECK(j["components"].size() == 9);
    CHECK(j["components"][0]["id"] == "G0");
}

TEST_CASE("cli reports complement connectivity") {
    const auto r = run({"check-complement", "--example", "3", "-N", "1", "-T", "1.5",
                        "--resolution", "20"});
    REQUIRE(r.code == 0);
    CHECK(parse(r)["connected"].get<bool>());
}

TEST_CASE("cli fit writes a loadable approximant") {
    const std::string path = "cli_fit_alpha.json";
    const auto r = run({"fit", "--target", "alpha", "--degree", "40", "--spacing",
                        "0.12", "-N", "1", "-T", "1.5", "--no-refine", "--out", path});
    REQUIRE(r.code == 0);
    const auto j = parse(r);
    CHECK(j["refined"].get<bool>() == false);
    CHECK(j["samples"].get<std::int64_t>() > 500);
    CHECK(j["max_residual"].get<double>() > 0.0);
    const auto approximant = approximant_from_json(ordered_json::parse(read_file(path)));
    CHECK(approximant.degree() == 40);
    std::remove(path.c_str());
}

TEST_CASE("cli refined fit reports tolerance ratios") {
    const auto r = run({"fit", "--target", "gamma", "--degree", "40", "--spacing",
                        "0.12", "-N", "1", "-T", "1.5"});
    REQUIRE(r.code == 0);
    const auto j = parse(r);
    CHECK(j["refined"].get<bool>());
    CHECK(j["max_ratio"].get<double>() > 0.0);
    CHECK(j["component_ratio"].contains("G0"));
    CHECK(j["approximant"]["degree"] == 40);
}

TEST_CASE("cli verify fails an unfit map with exit one") {
    const std::string path = "cli_const_map.json";
    write_constant_map(path);
    const auto r = run({"verify", "--word", "f", "--map-file", path, "-N", "1", "-T",
                        "1.5"});
    CHECK(r.code == 1);
    const auto j = parse(r);
    CHECK_FALSE(j["pass"].get<bool>());
    CHECK(j["components"][0]["id"] == "G0");
    CHECK(j["components"][0]["pass"].get<bool>());  // constant 2 is exact on G0
    std::remove(path.c_str());
}

TEST_CASE("cli verify arity mismatch is a usage error") {
    const std::string path = "cli_const_map2.json";
    write_constant_map(path);
    const auto r = run({"verify", "--word", "fg", "--map-file", path});
    CHECK(r.code == 2);
    CHECK(r.err.find("map-file") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("cli fixedpoint converges on a map file") {
    const std::string path = "cli_const_map3.json";
    write_constant_map(path);
    const auto r = run({"fixedpoint", "--map-file", path});
    REQUIRE(r.code == 0);
    const auto j = parse(r);
    CHECK(j["z"] == ordered_json{2.0, 0.0});
    CHECK(j["attracting"].get<bool>());
    std::remove(path.c_str());
}

TEST_CASE("cli fixedpoint fits a generator letter") {
    const auto r = run({"fixedpoint", "--map", "f", "--degree", "100"});
    REQUIRE(r.code == 0);
    const auto j = parse(r);
    CHECK(j["converged"].get<bool>());
    CHECK(j["multiplier"].get<double>() < 1.0);
}

TEST_CASE("cli render is deterministic and reports its byte count") {
    const std::string path = "cli_render.ppm";
    const std::vector<std::string> args{"render", "--viewport=-13,13,-3,3", "--res",
                                        "64x16", "-N", "2", "-T", "2", "--out", path};
    const auto first = run(args);
    REQUIRE(first.code == 0);
    const auto bytes = read_file(path);
    CHECK(bytes.size() == parse(first)["bytes"].get<std::size_t>());
    CHECK(bytes.substr(0, 11) == "P6\n64 16\n25");

    const auto second = run(args);
    CHECK(second.out == first.out);
    CHECK(read_file(path) == bytes);
    std::remove(path.c_str());
}

TEST_CASE("cli render overlays escape steps from a map file") {
    const std::string map_path = "cli_const_map4.json";
    const std::string img_path = "cli_overlay.ppm";
    write_constant_map(map_path);
    const auto r = run({"render", "--viewport=11.75,12.25,-0.25,0.25", "--res", "1x1",
                        "-N", "2", "-T", "2", "--map-file", map_path, "--out", img_path});
    REQUIRE(r.code == 0);
    const auto bytes = read_file(img_path);
    const std::string header = "P6\n1 1\n255\n";
    REQUIRE(bytes.size() == header.size() + 3);
    CHECK(static_cast<unsigned char>(bytes[header.size()]) == 229);  // one step in
    std::remove(map_path.c_str());
    std::remove(img_path.c_str());
}

TEST_CASE("cli usage errors exit with code two") {
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"classify", "--word", "f", "--start", "Q:3"}).code == 2);
    CHECK(run({"fixedpoint", "--map", "x"}).code == 2);
    CHECK(run({"render", "--res", "4x4"}).code == 2);  // missing --out
    CHECK(run({"tables", "claimed", "--word", "ff"}).code == 2);  // not transcribed
    CHECK(run({"fixedpoint", "--map-file", "no_such_file.json"}).code == 2);
    CHECK(run({"render", "--viewport=oops", "--res", "4x4", "--out", "x.ppm"}).code == 2);
}

TEST_CASE("cli config file replays a run") {
    const std::string path = "cli_config.json";
    {
        RunConfig cfg;
        cfg.subcommand = "tables derive";
        cfg.word = "hgf";
        std::ofstream out(path);
        out << run_config_to_json(cfg).dump(2) << "\n";
    }
    const auto from_config = run({"--config", path});
    const auto direct = run({"tables", "derive", "--word", "hgf"});
    CHECK(from_config.code == 0);
    CHECK(from_config.out == direct.out);

    const auto both = run({"--config", path, "classify", "--word", "f"});
    CHECK(both.code == 2);
    std::remove(path.c_str());
}

TEST_CASE("run config round-trips through json") {
    RunConfig cfg;
    cfg.subcommand = "render";
    cfg.word = "fgh";
    cfg.start = "B:4";
    cfg.k_max = 77;
    cfg.horizon = 12;
    cfg.example = 1;
    cfg.n = 5;
    cfg.t = 3.25;
    cfg.target = "gamma";
    cfg.degree = 250;
    cfg.lambda = 1e-8;
    cfg.refine = false;
    cfg.lawson_iterations = 4;
    cfg.derivative_penalty = 0.125;
    cfg.spacing = 0.075;
    cfg.resolution = 40.0;
    cfg.viewport_x0 = -2.5;
    cfg.viewport_x1 = 7.5;
    cfg.viewport_y0 = -1.25;
    cfg.viewport_y1 = 1.75;
    cfg.width = 321;
    cfg.height = 123;
    cfg.map = "h";
    cfg.map_files = {"a.json", "b.json"};
    cfg.out = "image.ppm";
    CHECK(run_config_from_json(run_config_to_json(cfg)) == cfg);
    CHECK(run_config_from_json(ordered_json::object()) == RunConfig{});
}

TEST_CASE("cli help exits zero and names the subcommands") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("tables") != std::string::npos);
    CHECK(r.out.find("render") != std::string::npos);
}
