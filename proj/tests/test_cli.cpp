#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string bin = UDW_BIN;
const fs::path src = UDW_SOURCE_DIR;

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = bin + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> cells(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) row.push_back(c);
        rows.push_back(row);
    }
    return rows;
}

// same shape, same text cells, numeric cells within 1e-9 relative (1e-12 absolute)
void same_table(const std::string& got, const std::string& want) {
    auto g = cells(got), w = cells(want);
    REQUIRE(g.size() == w.size());
    for (size_t i = 0; i < g.size(); ++i) {
        REQUIRE(g[i].size() == w[i].size());
        for (size_t j = 0; j < g[i].size(); ++j) {
            char* e1 = nullptr;
            char* e2 = nullptr;
            double a = std::strtod(g[i][j].c_str(), &e1), b = std::strtod(w[i][j].c_str(), &e2);
            if (*e1 || *e2 || g[i][j].empty()) {
                CHECK(g[i][j] == w[i][j]);
            } else {
                INFO("row " << i << " col " << j);
                CHECK(std::abs(a - b) <= 1e-12 + 1e-9 * std::abs(b));
            }
        }
    }
}

std::string cfg(const char* name) { return "--config " + (src / "configs" / name).string(); }
std::string data(const char* name) { return "--config " + (src / "tests" / "data" / name).string(); }

} // namespace

TEST_CASE("golden outputs") {
    struct G {
        const char* cmd;
        const char* name;
    };
    for (auto [cmd, name] : {G{"povm", "povm_lambda0"}, G{"povm", "povm_orthogonal"}, G{"povm", "povm_reference"},
                             G{"scan", "scan_selective_pointlike"}, G{"scan", "scan_ns_continuum"}, G{"scan", "empty_grid"},
                             G{"compare", "compare_selective"}, G{"compare", "compare_nonselective"}}) {
        INFO(name);
        auto r = run(std::string(cmd) + " " + cfg((std::string(name) + ".json").c_str()));
        CHECK(r.code == 0);
        same_table(r.out, slurp(src / "tests" / "golden" / (std::string(name) + ".csv")));
    }
}

TEST_CASE("empty grid gives a header-only table") {
    auto r = run("scan " + cfg("empty_grid.json"));
    CHECK(r.code == 0);
    CHECK(cells(r.out).size() == 1);
}

TEST_CASE("output is deterministic across runs and thread counts") {
    auto a = run("scan " + cfg("scan_ns_continuum.json"));
    auto b = run("scan " + cfg("scan_ns_continuum.json") + " --threads 3");
    auto c = run("scan --threads 2 " + cfg("scan_ns_continuum.json"));
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
}

TEST_CASE("--out writes the file atomically") {
    fs::path out = fs::temp_directory_path() / "udw_cli_test_out.csv";
    fs::remove(out);
    auto r = run("povm " + cfg("povm_lambda0.json") + " --out " + out.string());
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(out) == run("povm " + cfg("povm_lambda0.json")).out);
    CHECK_FALSE(fs::exists(out.string() + ".tmp"));
    fs::remove(out);
}

TEST_CASE("exit codes") {
    CHECK(run("povm --config /nonexistent/x.json").code == 2);
    CHECK(run("scan " + data("unknown_key.json")).code == 2);
    CHECK(run("povm " + cfg("povm_lambda0.json") + " --order 7").code == 2);
    CHECK(run("povm " + cfg("povm_lambda0.json") + " --backend nowhere").code == 2);
    CHECK(run("frobnicate " + cfg("povm_lambda0.json")).code == 2);
    CHECK(run("").code == 2);
    // the scan oracle backend does not exist
    CHECK(run("scan " + cfg("scan_ns_continuum.json") + " --backend oracle").code == 2);
    // phi at the detector's own point
    CHECK(run("scan " + data("coincident.json")).code == 3);
    CHECK(run("--help").code == 0);
}

TEST_CASE("abc report") {
    auto r = run("abc " + cfg("abc_nonselective.json"));
    CHECK(r.code == 0);
    CHECK(r.out.find("\"mode\": \"NS\"") != std::string::npos);
    CHECK(r.out.find("route_discrepancy") != std::string::npos);
}

TEST_CASE("order override changes the columns") {
    auto r = run("povm " + cfg("povm_lambda0.json") + " --order 1");
    CHECK(r.code == 0);
    CHECK(cells(r.out)[0] == std::vector<std::string>{"outcome", "order0", "order1", "bound"});
}
