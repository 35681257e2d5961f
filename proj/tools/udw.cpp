#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "commands.hpp"

using namespace udw;
using namespace udw::cli;

namespace {

// write next to the target and rename, so readers never see half a file
void write_atomic(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("--out", "cannot write '" + path + "'");
        f << text;
        if (!f) throw ConfigError("--out", "write failed for '" + path + "'");
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unruh-DeWitt measurement updates: POVMs, updated n-point functions, causality scans, oracle checks"};
    app.require_subcommand(1, 1);
    std::string config, out = "-", backend;
    int order = -1, threads = 0;
    app.add_option("--config", config, "JSON run configuration")->required();
    app.add_option("--out", out, "output file (default stdout)");
    app.add_option("--order", order, "perturbative order 0, 1 or 2")->check(CLI::Range(0, 2));
    app.add_option("--backend", backend, "continuum, box or oracle")->check(CLI::IsMember({"continuum", "box", "oracle"}));
    app.add_option("--threads", threads, "worker threads (fallback: UDW_THREADS)")->check(CLI::PositiveNumber);
    // options are accepted before or after the subcommand
    app.fallthrough();
    app.add_subcommand("povm", "outcome probabilities per order (CSV), oracle column with --backend oracle");
    app.add_subcommand("update", "updated n-point functions for query.tuples (CSV)");
    app.add_subcommand("scan", "Delta_n (S) or w^NS - w (NS) over query.tuples / query.grid (CSV)");
    app.add_subcommand("abc", "three-detector scenario report (JSON)");
    app.add_subcommand("compare", "oracle vs order-2 residuals and their log-log slope (CSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (threads == 0) {
        threads = 1;
        if (const char* env = std::getenv("UDW_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (!end || *end || v < 1) {
                std::cerr << "error: UDW_THREADS must be a positive integer\n";
                return 2;
            }
            threads = static_cast<int>(v);
        }
    }

    try {
        std::ifstream in(config);
        if (!in) throw ConfigError("--config", "cannot open '" + config + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("--config", std::string("not valid JSON: ") + e.what());
        }
        // command-line overrides are applied to the document, so they are validated the same way
        if (!backend.empty()) j["backend"] = backend;
        if (order >= 0) j["order"] = order;
        RunConfig c = parse_config(j);

        std::string cmd = app.get_subcommands().front()->get_name();
        std::string text;
        if (cmd == "povm") text = cmd_povm(c);
        else if (cmd == "update") text = cmd_update(c, threads);
        else if (cmd == "scan") text = cmd_scan(c, threads);
        else if (cmd == "compare") text = cmd_compare(c);
        else text = cmd_abc(c);
        write_atomic(out, text);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericGuardError& e) {
        std::cerr << "numeric guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
