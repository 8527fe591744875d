#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef QCAP_CLI_PATH
#define QCAP_CLI_PATH "qcap"
#endif

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

int run(const std::string& args, const std::string& stdout_path) {
    const std::string cmd =
        std::string(QCAP_CLI_PATH) + " " + args + " > " + stdout_path + " 2> /dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

double parse_field(const std::string& text, const std::string& key) {
    const auto pos = text.find("\"" + key + "\":");
    REQUIRE(pos != std::string::npos);
    return std::strtod(text.c_str() + pos + key.size() + 3, nullptr);
}

const char* kPhiState = R"({"version":1,"factors":[{"label":"A","dim":2},{"label":"B","dim":2}],
 "data":[[[0.5,0],[0,0],[0,0],[0.5,0]],
         [[0,0],[0,0],[0,0],[0,0]],
         [[0,0],[0,0],[0,0],[0,0]],
         [[0.5,0],[0,0],[0,0],[0.5,0]]]})";

const char* kEnsemble = R"({"version":1,
 "factors":[{"label":"Sc","dim":1},{"label":"Sr","dim":2},{"label":"A","dim":2}],
 "data":[[[0.5,0],[0,0],[0,0],[0.5,0]],
         [[0,0],[0,0],[0,0],[0,0]],
         [[0,0],[0,0],[0,0],[0,0]],
         [[0.5,0],[0,0],[0,0],[0.5,0]]]})";

}  // namespace

TEST_CASE("entropy command computes and reports") {
    write_file("cli_phi.json", kPhiState);
    REQUIRE(run("entropy --state cli_phi.json --which hmin --target A", "cli_out1.txt") == 0);
    const std::string out = slurp("cli_out1.txt");
    CHECK(parse_field(out, "value_bits") == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(out.find("\"status\": \"optimal\"") != std::string::npos);
}

TEST_CASE("product state max entropy through the CLI") {
    write_file("cli_pipi.json",
               R"({"version":1,"factors":[{"label":"A","dim":2},{"label":"B","dim":2}],
 "data":[[[0.25,0],[0,0],[0,0],[0,0]],
         [[0,0],[0.25,0],[0,0],[0,0]],
         [[0,0],[0,0],[0.25,0],[0,0]],
         [[0,0],[0,0],[0,0],[0.25,0]]]})");
    REQUIRE(run("entropy --state cli_pipi.json --which hmax --target A", "cli_out2.txt") == 0);
    CHECK(parse_field(slurp("cli_out2.txt"), "value_bits") == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("validation failures exit with code 2") {
    write_file("cli_phi.json", kPhiState);
    CHECK(run("entropy --state cli_phi.json --which hmin_smooth --target A --eps 1.5",
              "cli_out3.txt") == 2);
    write_file("cli_bad.json", "{\"version\": 2}");
    CHECK(run("entropy --state cli_bad.json --which hmin --target A", "cli_out4.txt") == 2);
    CHECK(run("entropy --state cli_missing.json --which hmin --target A", "cli_out5.txt") == 2);
    // no partial output on validation failure
    CHECK(slurp("cli_out3.txt").empty());
}

TEST_CASE("bound command on the identity channel") {
    write_file("cli_id.json",
               R"({"version":1,"kind":"kraus","dims":[2,2],"data":[[[[1,0],[0,0]],[[0,0],[1,0]]]]})");
    write_file("cli_ens.json", kEnsemble);
    REQUIRE(run("bound --channel cli_id.json --state cli_ens.json --mode direct "
                "--q 0.5 --e 0.5 --delta 1.0 --delta2 0.5 --delta1 0.5",
                "cli_out6.txt") == 0);
    CHECK(slurp("cli_out6.txt").find("\"feasible\": true") != std::string::npos);
    REQUIRE(run("bound --channel cli_id.json --state cli_ens.json --mode converse "
                "--q 1 --delta 1.0 --iota 0.5",
                "cli_out7.txt") == 0);
    CHECK(slurp("cli_out7.txt").find("\"holds\": true") != std::string::npos);
}

TEST_CASE("decouple command reproduces byte-identical reports") {
    write_file("cli_inst.json",
               R"({"version":1,"num_blocks":2,"block_dim":2,"ref_dim":2,"state_seed":11})");
    REQUIRE(run("decouple --instance cli_inst.json --samples 150 --seed 5", "cli_dec1.txt") == 0);
    REQUIRE(run("decouple --instance cli_inst.json --samples 150 --seed 5", "cli_dec2.txt") == 0);
    const std::string a = slurp("cli_dec1.txt"), b = slurp("cli_dec2.txt");
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(a.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("region command writes plot-ready artifacts") {
    write_file("cli_id.json",
               R"({"version":1,"kind":"kraus","dims":[2,2],"data":[[[[1,0],[0,0]],[[0,0],[1,0]]]]})");
    REQUIRE(run("region --channel cli_id.json --mode asymptotic --grid 2 --seed 3 "
                "--out cli_region.csv",
                "cli_out8.txt") == 0);
    const std::string csv = slurp("cli_region.csv");
    CHECK(csv.find("C,Q,E") == 0);
    CHECK(!slurp("cli_region.csv.json").empty());
    // identical invocation is byte-identical including artifacts
    REQUIRE(run("region --channel cli_id.json --mode asymptotic --grid 2 --seed 3 "
                "--out cli_region2.csv",
                "cli_out9.txt") == 0);
    CHECK(slurp("cli_region2.csv") == csv);
}

TEST_CASE("channel validate reports Kraus rank") {
    write_file("cli_std.json", R"({"version":1,"kind":"standard","name":"erasure","param":0.4})");
    REQUIRE(run("channel validate --channel cli_std.json", "cli_out10.txt") == 0);
    const std::string out = slurp("cli_out10.txt");
    CHECK(out.find("\"d_out\": 3") != std::string::npos);
}
