#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pgfv/cli.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("pgfv_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("solve writes the solution CSV and error JSON") {
    TempDir tmp;
    const auto csv = (tmp.path / "sol.csv").string();
    const auto json = (tmp.path / "err.json").string();
    const int rc = pgfv::cli_main({"solve", "--scheme", "mixed", "--n", "4", "--case",
                                   "sinsin", "--out", csv, "--json", json, "--quiet"});
    CHECK(rc == 0);

    const std::string text = slurp(csv);
    CHECK(text.rfind("cell_id,cx,cy,u\n", 0) == 0);
    CHECK(text.find("edge_id,flux\n") != std::string::npos);
    // 32 cell rows + 56 edge rows + 2 headers
    int lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    CHECK(lines == 2 + 32 + 56);

    const auto j = nlohmann::json::parse(slurp(json));
    CHECK(j.at("scheme") == "mixed");
    CHECK(j.at("e_V").get<double>() > 0.0);
}

TEST_CASE("converge writes a schema-conforming report") {
    TempDir tmp;
    const auto json = (tmp.path / "report.json").string();
    const int rc = pgfv::cli_main({"converge", "--scheme", "tpfa", "--case", "sinsin",
                                   "--levels", "2,4,8", "--json", json, "--quiet"});
    CHECK(rc == 0);
    const auto j = nlohmann::json::parse(slurp(json));
    CHECK(j.at("scheme") == "tpfa");
    CHECK(j.at("case") == "sinsin");
    REQUIRE(j.at("levels").size() == 3);
    for (const auto& lvl : j.at("levels")) {
        CHECK(lvl.contains("n"));
        CHECK(lvl.contains("h"));
        CHECK(lvl.contains("e_u"));
        CHECK(lvl.contains("e_p"));
        CHECK(lvl.contains("e_div"));
        CHECK(lvl.contains("e_V"));
        CHECK(lvl.contains("seconds"));
    }
    CHECK(j.at("rates").contains("e_V"));
}

TEST_CASE("stencil export") {
    TempDir tmp;
    const auto csv = (tmp.path / "stencils.csv").string();
    const int rc = pgfv::cli_main({"stencil", "--n", "6", "--out", csv});
    CHECK(rc == 0);
    const std::string text = slurp(csv);
    CHECK(text.rfind("edge_id,eta,alpha,beta,gamma,delta,residual_35,residual_36,"
                     "nullspace_dim\n",
                     0) == 0);
    int lines = -1; // minus the header
    for (char ch : text)
        if (ch == '\n') ++lines;
    CHECK(lines > 0);
}

TEST_CASE("validate and infsup subcommands") {
    CHECK(pgfv::cli_main({"validate", "--n", "4"}) == 0);
    CHECK(pgfv::cli_main({"infsup", "--n", "2"}) == 0);
    // too large for the dense diagnostic -> numerical failure
    CHECK(pgfv::cli_main({"infsup", "--n", "40"}) == 2);
}

TEST_CASE("mesh file input") {
    TempDir tmp;
    const auto node = tmp.path / "m.node";
    const auto ele = tmp.path / "m.ele";
    {
        std::ofstream(node) << "4 2 0 0\n1 0 0\n2 1 0\n3 0 1\n4 1 1\n";
        std::ofstream(ele) << "2 3 0\n1 1 2 4\n2 1 4 3\n";
    }
    CHECK(pgfv::cli_main({"validate", "--mesh", node.string() + "," + ele.string()}) == 0);
    // unreadable file is a usage error
    CHECK(pgfv::cli_main({"validate", "--mesh", "nope.node,nope.ele"}) == 1);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(pgfv::cli_main({"solve", "--scheme", "mixed", "--case", "sinsin"}) == 1);
    CHECK(pgfv::cli_main({"solve", "--scheme", "mixed", "--n", "4", "--mesh", "a,b"}) == 1);
    CHECK(pgfv::cli_main({"solve", "--scheme", "cosmic", "--n", "4"}) == 1);
    CHECK(pgfv::cli_main({"solve", "--scheme", "mixed", "--n", "4", "--case", "poly"}) == 1);
    CHECK(pgfv::cli_main({"converge", "--scheme", "mixed", "--levels", "8,4,2"}) == 1);
    CHECK(pgfv::cli_main({"converge", "--scheme", "mixed", "--levels", "4,8"}) == 1);
    CHECK(pgfv::cli_main({"frobnicate"}) == 1);
    CHECK(pgfv::cli_main({"solve", "--scheme", "petrov", "--n", "4", "--closure",
                          "fixed:bad"}) == 1);
}

TEST_CASE("closure flag variants run") {
    TempDir tmp;
    const auto csv = (tmp.path / "s.csv").string();
    CHECK(pgfv::cli_main({"stencil", "--n", "4", "--closure", "minnorm", "--out", csv}) ==
          0);
    CHECK(pgfv::cli_main({"stencil", "--n", "4", "--closure", "fixed:0.5,-0.25", "--out",
                          csv}) == 0);
    CHECK(pgfv::cli_main({"solve", "--scheme", "petrov", "--n", "4", "--case", "bubble",
                          "--closure", "fixed:0.1,0.2", "--quiet"}) == 0);
}
