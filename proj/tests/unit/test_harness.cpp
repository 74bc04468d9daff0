#include "harness/harness.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hroc;
using namespace hroc::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("hroc_harness_test_" + name);
    fs::remove_all(dir);
    return dir;
}

// All lines except '#' comments, with the trailing `drop` columns removed.
std::vector<std::string> numeric_rows(const std::string& csv, int drop) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (int k = 0; k < drop; ++k) line = line.substr(0, line.rfind(','));
        out.push_back(line);
    }
    return out;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HROC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
    const auto c = parse_config(R"({"model": {"name": "multiwell", "dim": 3},
        "convexify": {"N": 5000, "r": 2.0, "k_max": 4}, "n_rot": 8, "threads": 3, "seed": 17,
        "output": {"dir": "x"}})");
    EXPECT_EQ(c.model.name, "multiwell");
    EXPECT_EQ(c.dim(), 3);
    EXPECT_EQ(c.N, 5000);
    EXPECT_EQ(c.r, 2.0);
    EXPECT_EQ(c.k_max, 4);
    EXPECT_EQ(c.n_rot, 8);
    EXPECT_EQ(c.path.n_rot, 8);
    EXPECT_EQ(c.threads, 3);
    EXPECT_EQ(c.seed, 17u);
    EXPECT_EQ(c.out_dir, "x");
    EXPECT_EQ(c.point_or_default(), Matrix(3));
    validate(c);

    const auto d = parse_config("{}");
    EXPECT_EQ(d.model.name, "ksd");
    EXPECT_EQ(d.point_or_default(), (Matrix{{0.2, 0.1}, {0.1, 0.3}}));
}

TEST(Config, UnknownKeyReportsLine) {
    try {
        parse_config("{\n  \"model\": {\"name\": \"ksd\"},\n  \"convexify\": {\n    \"N\": 10,\n    \"bogus\": 1\n  }\n}");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("line 5"), std::string::npos) << msg;
        EXPECT_NE(msg.find("convexify.bogus"), std::string::npos) << msg;
    }
    EXPECT_THROW(parse_config(R"({"nonsense": 1})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"surface": {"delta": 0.1, "extra": 2}})"), ConfigError);
}

TEST(Config, TypeAndSyntaxErrors) {
    try {
        parse_config("{\n \"convexify\": {\"N\": \"many\"}\n}");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
    try {
        parse_config("{\n \"n_rot\": 4,\n \"seed\": }");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_config(R"({"point": [[1, 2], [3]]})"), ConfigError);
}

TEST(Config, ValidationRejectsInconsistentValues) {
    auto c = parse_config(R"({"model": {"name": "ksd"}, "point": [[1,0,0],[0,1,0],[0,0,1]]})");
    EXPECT_THROW(validate(c), ConfigError);
    EXPECT_THROW(validate(parse_config(R"({"model": {"name": "ksd", "dim": 3}})")), ConfigError);
    EXPECT_THROW(validate(parse_config(R"({"model": {"name": "what"}})")), ConfigError);
    EXPECT_THROW(validate(parse_config(R"({"model": {"name": "ksd", "params": {"mu": 1}}})")), ConfigError);
    EXPECT_THROW(validate(parse_config(R"({"convexify": {"N": 1}})")), ConfigError);
    EXPECT_THROW(validate(parse_config(R"({"n_rot": 0})")), ConfigError);
    EXPECT_THROW(validate(parse_config(R"({"surface": {"components": [[0, 0], [0, 0]]}})")), ConfigError);
    EXPECT_THROW(validate(parse_config(R"({"path": {"t0": 2, "t1": 1}})")), ConfigError);
    EXPECT_THROW(validate(parse_config(R"({"microstructure": {"m": 2}})")), ConfigError);
}

TEST(Config, HashIsCanonical) {
    const auto a = parse_config(R"({"convexify": {"N": 100, "r": 1.0}})");
    const auto b = parse_config(R"({"convexify": {"r": 1, "N": 100}, "model": {"name": "ksd"}})");
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    const auto c = parse_config(R"({"convexify": {"N": 101}})");
    EXPECT_NE(config_hash(a), config_hash(c));
    EXPECT_EQ(parse_config(to_json(a)).N, 100);
    EXPECT_EQ(config_hash(parse_config(to_json(a))), config_hash(a));
}

TEST(Fnv1a, ReferenceValues) {
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
}

TEST(ParseMatrix, Formats) {
    EXPECT_EQ(parse_matrix("0.2,0.1;0.1,0.3"), (Matrix{{0.2, 0.1}, {0.1, 0.3}}));
    EXPECT_EQ(parse_matrix("1, 0, 0; 0, 1, 0; 0, 0, 1"), Matrix::identity(3));
    EXPECT_THROW(parse_matrix("1,2;3"), ConfigError);
    EXPECT_THROW(parse_matrix("1,x;3,4"), ConfigError);
    EXPECT_THROW(parse_matrix("1"), ConfigError);
}

TEST(Commands, PointFilesCarryHashAndReproduce) {
    auto c = parse_config(R"({"model": {"name": "ksd"}, "convexify": {"N": 500}})");
    c.out_dir = scratch_dir("point").string();
    const auto out = cmd_point(c);
    ASSERT_EQ(out.files.size(), 3u);
    const std::string hash = config_hash(c);
    for (const auto& f : out.files) EXPECT_NE(slurp(f).find(hash), std::string::npos) << f;
    const std::string first = slurp(out.files[0]);
    EXPECT_NE(first.find(version()), std::string::npos);
    EXPECT_NE(first.find("F11,F12,F21,F22,W,W_rc,W_analytic"), std::string::npos);
    cmd_point(c);
    EXPECT_EQ(numeric_rows(slurp(out.files[0]), 1), numeric_rows(first, 1));
}

TEST(Commands, FailurePointIsFlaggedNotAttained) {
    auto c = parse_config(R"({"model": {"name": "fail"}, "convexify": {"N": 300}})");
    c.out_dir = scratch_dir("fail").string();
    const auto out = cmd_point(c);
    EXPECT_NE(out.summary.find("not attained"), std::string::npos);
    EXPECT_NE(slurp(out.files.back()).find("\"attained\": false"), std::string::npos);
}

TEST(Commands, SurfaceIsThreadIndependent) {
    auto c = parse_config(R"({"model": {"name": "ksd"}, "convexify": {"N": 100},
        "surface": {"lo": -0.5, "hi": 0.5, "delta": 0.25}})");
    c.out_dir = scratch_dir("surface1").string();
    const auto one = cmd_surface(c);
    c.threads = 3;
    c.out_dir = scratch_dir("surface3").string();
    const auto three = cmd_surface(c);
    const auto rows = numeric_rows(slurp(one.files[0]), 0);
    EXPECT_EQ(rows.size(), 26u);
    EXPECT_EQ(rows, numeric_rows(slurp(three.files[0]), 0));
}

TEST(Commands, ConvexSurfaceIsUnchanged) {
    auto c = parse_config(R"({"model": {"name": "quadratic"}, "convexify": {"N": 100},
        "surface": {"delta": 0.5}})");
    c.out_dir = scratch_dir("quadratic").string();
    cmd_surface(c);
    const auto rows = numeric_rows(slurp(fs::path(c.out_dir) / "surface.csv"), 0);
    ASSERT_EQ(rows.size(), 26u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream in(rows[i]);
        std::string s1, s2, W, Wrc;
        std::getline(in, s1, ',');
        std::getline(in, s2, ',');
        std::getline(in, W, ',');
        std::getline(in, Wrc, ',');
        EXPECT_EQ(W, Wrc);
    }
}

TEST(Commands, MultiwellPlaneNodeCount) {
    SurfaceConfig s;
    s.lo = -1.0;
    s.hi = 1.0;
    s.delta = 0.025;
    SurfaceSpec spec;
    spec.lo = s.lo;
    spec.hi = s.hi;
    spec.delta = s.delta;
    EXPECT_EQ(spec.nodes_per_axis() * spec.nodes_per_axis(), 6561);
}

TEST(Commands, MaterialPathStartsStressFree) {
    auto c = parse_config(R"({"model": {"name": "damage-nh1"}, "convexify": {"N": 200},
        "path": {"t0": 1.0, "t1": 1.1, "samples": 3}, "n_rot": 2})");
    c.out_dir = scratch_dir("path").string();
    cmd_material_path(c);
    const auto rows = numeric_rows(slurp(fs::path(c.out_dir) / "material_path.csv"), 0);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "t,W,W_rc,P11,P22,P11_rot,P22_rot,W_rot,dW_dt_half,dWrot_dt_half,alpha,depth,leaves");
    EXPECT_EQ(rows[1].substr(0, 20), "1,0,0,0,0,0,0,0,nan,");
}

TEST(Commands, MicrostructureWritesAllFields) {
    auto c = parse_config(R"({"model": {"name": "damage-nh1"}, "convexify": {"N": 500},
        "point": [[1.24, 0], [0, 1.24]], "microstructure": {"m": 16}})");
    c.out_dir = scratch_dir("micro").string();
    const auto out = cmd_microstructure(c);
    ASSERT_EQ(out.files.size(), 5u);
    for (const auto& f : out.files) EXPECT_NE(slurp(f).find(config_hash(c)), std::string::npos) << f;
}

TEST(Cli, ExitCodes) {
    const std::string dir = scratch_dir("cli").string();
    EXPECT_EQ(run_cli("point --model ksd --N 100 --out " + dir), 0);
    EXPECT_TRUE(fs::exists(fs::path(dir) / "point.csv"));
    EXPECT_EQ(run_cli("validate-config --model multiwell --dim 3 --N 50 --r 1 --kmax 3 --nrot 4 --threads 2 --out " + dir), 0);
    EXPECT_EQ(run_cli("point --model nope --out " + dir), 2);
    EXPECT_EQ(run_cli("point --N notanumber --out " + dir), 2);
    EXPECT_EQ(run_cli("point --config /nonexistent.json"), 2);
    EXPECT_EQ(run_cli("surface --model ksd --delta -1 --out " + dir), 2);
    EXPECT_EQ(run_cli("point --model damage-nh1 --t 0 --out " + dir), 3);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("--help"), 0);

    const fs::path cfg = fs::path(dir) / "bad.json";
    std::ofstream(cfg) << "{\n \"model\": {\"name\": \"ksd\", \"color\": 1}\n}\n";
    EXPECT_EQ(run_cli("validate-config --config " + cfg.string()), 2);
}
