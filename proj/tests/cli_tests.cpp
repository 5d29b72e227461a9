// End-to-end checks of the conflate binary: exit codes, output formats,
// determinism. The binary path and the sample-data directory come from the
// build system.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
    const std::string out_path = "cli_run_output.tmp";
    const std::string command =
        std::string(CONFLATE_BINARY) + " " + args + " > " + out_path + " 2>&1";
    const int status = std::system(command.c_str());
    std::ifstream in(out_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::remove(out_path.c_str());
    return {WEXITSTATUS(status), buffer.str()};
}

std::string data(const std::string& name) { return std::string(CONFLATE_DATA_DIR) + "/" + name; }

std::size_t count_lines(const std::string& text) {
    std::size_t lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    return lines;
}

}  // namespace

TEST_CASE("solve emits a verified equilibrium") {
    const RunResult result =
        run("solve --economy " + data("three_agent_split.json") + " --cuts 0,0.5,1");
    REQUIRE(result.exit_code == 0);
    const nlohmann::json out = nlohmann::json::parse(result.output);
    CHECK(out["utilities"][0].get<double>() == doctest::Approx(0.6667).epsilon(1e-3));
    CHECK(out["utilities"][1].get<double>() == doctest::Approx(0.3333).epsilon(1e-3));
    CHECK(out["utilities"][2].get<double>() == doctest::Approx(0.3333).epsilon(1e-3));
    CHECK(out["verification"]["pass"].get<bool>());
}

TEST_CASE("solve gives the lone agent everything") {
    const std::string path = "cli_single_agent.json";
    {
        std::ofstream out(path);
        out << R"({"omega":{"breakpoints":[0,1],"pieces":[{"c0":1,"c1":0}],"atoms":[]},)"
            << R"("agents":[{"claim":1,"utility":{"kind":"linear",)"
            << R"("evaluation":{"breakpoints":[0,1],"pieces":[{"c0":0.5,"c1":1}]}}}]})";
    }
    const RunResult result = run("solve --economy " + path + " --cuts 0,1");
    std::remove(path.c_str());
    REQUIRE(result.exit_code == 0);
    const nlohmann::json out = nlohmann::json::parse(result.output);
    CHECK(out["allocation"][0][0].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("solve dispatches on the utility family") {
    const std::string path = "cli_cobb.json";
    {
        std::ofstream out(path);
        out << R"({"omega":{"breakpoints":[0,1],"pieces":[{"c0":1,"c1":0}]},"agents":[)"
            << R"({"claim":0.5,"utility":{"kind":"cobb_douglas",)"
            << R"("evaluation":{"breakpoints":[0,1],"pieces":[{"c0":1,"c1":0}]}}},)"
            << R"({"claim":0.5,"utility":{"kind":"ces","rho":0.5,)"
            << R"("evaluation":{"breakpoints":[0,1],"pieces":[{"c0":1,"c1":0}]}}}]})";
    }
    // Mixed families are rejected up front with the validation exit code.
    const RunResult mixed = run("solve --economy " + path + " --cuts 0,0.5,1");
    CHECK(mixed.exit_code == 2);
    std::remove(path.c_str());

    const std::string cobb_path = "cli_cobb_only.json";
    {
        std::ofstream out(cobb_path);
        out << R"({"omega":{"breakpoints":[0,1],"pieces":[{"c0":1,"c1":0}]},"agents":[)"
            << R"({"claim":1,"utility":{"kind":"cobb_douglas",)"
            << R"("evaluation":{"breakpoints":[0,1],"pieces":[{"c0":1,"c1":0}]}}}]})";
    }
    const RunResult cobb = run("solve --economy " + cobb_path + " --cuts 0,0.5,1");
    std::remove(cobb_path.c_str());
    REQUIRE(cobb.exit_code == 0);
    const nlohmann::json out = nlohmann::json::parse(cobb.output);
    CHECK(out["iterations"].get<int>() == 0);  // closed form
    CHECK(out["verification"]["pass"].get<bool>());
}

TEST_CASE("malformed input exits 2 with a position anchor") {
    const std::string path = "cli_broken.json";
    {
        std::ofstream out(path);
        out << "{\n  \"omega\": [,]\n}\n";
    }
    const RunResult result = run("solve --economy " + path + " --cuts 0,1");
    std::remove(path.c_str());
    CHECK(result.exit_code == 2);
    CHECK(result.output.find(":2:") != std::string::npos);
}

TEST_CASE("sweeps produce one CSV row per grid point") {
    const RunResult tiny =
        run("sweep --economy " + data("opposed_linear.json") + " --family 0,t,1 --grid 2");
    REQUIRE(tiny.exit_code == 0);
    CHECK(count_lines(tiny.output) == 4);  // argmax note + header + 2 rows

    const RunResult design = run("sweep --economy " + data("opposed_linear.json") +
                                 " --family 0,t,1 --grid 99 --out cli_sweep.csv");
    REQUIRE(design.exit_code == 0);
    CHECK(design.output.find("welfare argmax at t=0.5") != std::string::npos);
    std::remove("cli_sweep.csv");

    const RunResult ratio = run("sweep --economy " + data("mirror_groups.json") +
                                " --family 0,0.25,0.25+0.5*t,0.75,1 --ratio-cells 0,3 --grid 19");
    REQUIRE(ratio.exit_code == 0);
    std::stringstream rows(ratio.output);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "t,price_ratio,u_1,u_2,welfare");
    while (std::getline(rows, line)) {
        const double t = std::stod(line);
        const double ratio_value = std::stod(line.substr(line.find(',') + 1));
        const double expected = t <= 1.0 / 6.0   ? 1.0 / (1.0 - 2.0 * t)
                                : t <= 0.5       ? 2.0 / (1.0 + 2.0 * t)
                                : t <= 5.0 / 6.0 ? (3.0 - 2.0 * t) / 2.0
                                                 : 2.0 * t - 1.0;
        CHECK(ratio_value == doctest::Approx(expected).epsilon(1e-6));
    }

    // Identical inputs produce byte-identical output.
    const RunResult again = run("sweep --economy " + data("mirror_groups.json") +
                                " --family 0,0.25,0.25+0.5*t,0.75,1 --ratio-cells 0,3 --grid 19");
    CHECK(again.output == ratio.output);
}

TEST_CASE("pareto search finds the dominating split") {
    const RunResult result = run("pareto --economy " + data("three_agent_split.json") +
                                 " --cuts 0,0.5,1 --grid 5 --k-max 2");
    REQUIRE(result.exit_code == 0);
    const nlohmann::json out = nlohmann::json::parse(result.output);
    REQUIRE(out["found"].get<bool>());
    CHECK(out["equilibrium"]["utilities"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("optimal commodity count for the block economy") {
    const RunResult result = run("optimal-k --economy " + data("block_supports_m2.json") +
                                 " --cost 0.333333333333333 --grid 8");
    REQUIRE(result.exit_code == 0);
    const nlohmann::json out = nlohmann::json::parse(result.output);
    CHECK(out["k_star"].get<int>() == 4);
    CHECK(out["table"].size() == 4);
}

TEST_CASE("classification distance") {
    const RunResult result = run("metric --economy " + data("three_agent_split.json") +
                                 " --cuts 0,0.5,1 --cuts-b 0,0.6,1");
    REQUIRE(result.exit_code == 0);
    CHECK(std::stod(result.output) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("reference scenarios run and aggregate") {
    const RunResult one = run("repro pareto_1");
    CHECK(one.exit_code == 0);
    CHECK(one.output.find("pareto_1") != std::string::npos);
    CHECK(one.output.find("PASS") != std::string::npos);

    const RunResult unknown = run("repro no_such_scenario");
    CHECK(unknown.exit_code == 2);

    const RunResult listed = run("repro --list");
    CHECK(listed.exit_code == 0);
    CHECK(count_lines(listed.output) == 11);

    const auto start = std::chrono::steady_clock::now();
    const RunResult everything = run("repro --all --out cli_repro_report.json");
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(everything.exit_code == 0);
    CHECK(seconds < 60.0);
    CHECK(everything.output.find("FAIL") == std::string::npos);
    std::ifstream report("cli_repro_report.json");
    REQUIRE(report.good());
    const nlohmann::json parsed = nlohmann::json::parse(report);
    CHECK(parsed.size() == 11);
    std::remove("cli_repro_report.json");
}
