// Copyright 2026 The lindsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lindsim/cli.hpp"

namespace fs = std::filesystem;

namespace {

fs::path config_dir() {
    const char* env = std::getenv("LINDSIM_CONFIG_DIR");
    return env ? fs::path(env) : fs::path("configs");
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("lindsim_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = lindsim::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("build prints M and g") {
    const fs::path dir = scratch("build");
    const Result r = run_cli({"build", "--config", (config_dir() / "build_example.json").string(), "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("M = 1\n") != std::string::npos);
    CHECK(r.out.find("g[0] = 1\n") != std::string::npos);
    CHECK(fs::exists(dir / "protocol.json"));
    CHECK(fs::exists(dir / "summary.json"));
}

TEST_CASE("protocol JSON round-trips bit for bit") {
    const fs::path dir = scratch("roundtrip");
    REQUIRE(run_cli({"build", "--config", (config_dir() / "build_example.json").string(), "--out", dir.string()}).code == 0);
    const std::string first = slurp(dir / "protocol.json");
    spit(dir / "again.json", "{\"mode\": \"build\", \"protocol\": " + first + "}");
    const fs::path dir2 = dir / "second";
    REQUIRE(run_cli({"build", "--config", (dir / "again.json").string(), "--out", dir2.string()}).code == 0);
    CHECK(slurp(dir2 / "protocol.json") == first);
}

TEST_CASE("invalid configs exit with code 2 and name the field") {
    const fs::path dir = scratch("invalid");
    spit(dir / "neg.json", R"({"mode": "build", "model": {"system_dims": [2], "hamiltonian": "zero",
        "jumps": [{"op": "pauli:minus", "rate": -1.0}]}})");
    Result r = run_cli({"build", "--config", (dir / "neg.json").string(), "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("model.jumps[0].rate") != std::string::npos);

    spit(dir / "unknown.json", R"({"mode": "build", "colour": 3})");
    r = run_cli({"build", "--config", (dir / "unknown.json").string(), "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("colour") != std::string::npos);

    r = run_cli({"sweep", "--config", (config_dir() / "build_example.json").string(), "--out", dir.string()});
    CHECK(r.code == 2);

    r = run_cli({"build", "--config", (config_dir() / "build_example.json").string(), "--tol", "bogus=1"});
    CHECK(r.code == 2);

    r = run_cli({"build", "--config", (dir / "missing.json").string(), "--out", dir.string()});
    CHECK(r.code != 0);

    r = run_cli({"build"});
    CHECK(r.code == 2);
}

TEST_CASE("outputs are deterministic") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const std::string cfg = (config_dir() / "fig3.json").string();
    REQUIRE(run_cli({"trace", "--config", cfg, "--out", a.string()}).code == 0);
    REQUIRE(run_cli({"trace", "--config", cfg, "--out", b.string(), "--threads", "2"}).code == 0);
    for (const char* name : {"trace_0.csv", "trace_1.csv"}) {
        const std::string text = slurp(a / name);
        CHECK(!text.empty());
        CHECK(text == slurp(b / name));
        CHECK(text.rfind("# config_hash=", 0) == 0);
    }
}

TEST_CASE("regress passes on the built-ins and fails on a wrong expectation") {
    const fs::path dir = scratch("regress");
    const Result ok = run_cli({"regress", "--config", (config_dir() / "regress.json").string(), "--out", dir.string()});
    CHECK(ok.code == 0);
    CHECK(fs::exists(dir / "regress.csv"));
    spit(dir / "tight.json", R"({"mode": "regress", "regress": {"g": 1.0, "threshold": 1e-30}})");
    const Result tight = run_cli({"regress", "--config", (dir / "tight.json").string(), "--out", dir.string()});
    CHECK(tight.code == 4);
}

TEST_CASE("hierarchy and evolve configs run") {
    const fs::path dir = scratch("misc");
    Result r = run_cli({"hierarchy", "--config", (config_dir() / "hierarchy.json").string(), "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS tau_r_stretch") != std::string::npos);
    r = run_cli({"evolve", "--config", (config_dir() / "evolve.json").string(), "--out", dir.string(), "--svg"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS leakage") != std::string::npos);
    CHECK(fs::exists(dir / "evolve.svg"));
}
