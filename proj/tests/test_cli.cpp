#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string data_file(const char* name) {
    return std::string(GROTHCOVER_DATA_DIR) + "/" + name;
}

int run_cli(const std::string& args, const std::string& out_file) {
    const std::string cmd = std::string(GROTHCOVER_CLI_PATH) + " " + args +
                            " > " + out_file + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("cover subcommand emits a passing certificate") {
    const int rc = run_cli(
        "cover --input " + data_file("k3.json") + " --beta 0.8 --seed 7",
        "/tmp/grothcover_cli_cover.json");
    CHECK(rc == 0);
    const std::string out = slurp("/tmp/grothcover_cli_cover.json");
    CHECK(out.find("\"pass\":true") != std::string::npos);
    CHECK(out.find("\"beta\":0.8") != std::string::npos);
    CHECK(out.find("\"seed\":7") != std::string::npos);
}

TEST_CASE("solve subcommand with oracle block") {
    const int rc = run_cli("solve --input " + data_file("arc.json") +
                               " --beta 0.7 --seed 1 --oracle",
                           "/tmp/grothcover_cli_solve.json");
    CHECK(rc == 0);
    const std::string out = slurp("/tmp/grothcover_cli_solve.json");
    CHECK(out.find("\"oracle\"") != std::string::npos);
    CHECK(out.find("\"maxq\":1") != std::string::npos);
    CHECK(out.find("\"beta_rho_le_maxq\":true") != std::string::npos);
    CHECK(out.find("\"mu_le_fevc\":true") != std::string::npos);
}

TEST_CASE("byte-identical reruns") {
    run_cli("cover --input " + data_file("k3.json") + " --beta 0.8 --seed 9",
            "/tmp/grothcover_cli_a.json");
    run_cli("cover --input " + data_file("k3.json") + " --beta 0.8 --seed 9",
            "/tmp/grothcover_cli_b.json");
    const std::string a = slurp("/tmp/grothcover_cli_a.json");
    CHECK(!a.empty());
    CHECK(a == slurp("/tmp/grothcover_cli_b.json"));
}

TEST_CASE("exit code 2 on input errors") {
    CHECK(run_cli("cover --input /nonexistent.json --beta 0.8",
                  "/tmp/grothcover_cli_e.json") == 2);
    CHECK(run_cli("cover --input " + data_file("k3.json") + " --beta 0.99",
                  "/tmp/grothcover_cli_e.json") == 2);
    CHECK(run_cli("cover --input " + data_file("k3.json") + " --mode bogus",
                  "/tmp/grothcover_cli_e.json") == 2);
}

TEST_CASE("exit code 3 on exhausted sampling budget") {
    CHECK(run_cli("cover --input " + data_file("k3.json") +
                      " --beta 0.8 --seed 7 --samples-cap 0",
                  "/tmp/grothcover_cli_e.json") == 3);
}

TEST_CASE("text format and edge-list input") {
    const int rc =
        run_cli("cover --input " + data_file("k3.txt") +
                    " --kind maxcut --beta 0.8 --seed 7 --format text",
                "/tmp/grothcover_cli_t.txt");
    CHECK(rc == 0);
    const std::string out = slurp("/tmp/grothcover_cli_t.txt");
    CHECK(out.find("clause i ") != std::string::npos);
    CHECK(out.find("clause iv") != std::string::npos);
    CHECK(out.find("certificate: pass") != std::string::npos);
}

TEST_CASE("estimate-alpha and oracle subcommands") {
    const int rc1 =
        run_cli("estimate-alpha --input " + data_file("k3.json") + " --seed 5",
                "/tmp/grothcover_cli_alpha.json");
    CHECK(rc1 == 0);
    const std::string a = slurp("/tmp/grothcover_cli_alpha.json");
    CHECK(a.find("\"alpha_hat\":0.8") != std::string::npos);

    const int rc2 = run_cli("oracle --input " + data_file("k3.json"),
                            "/tmp/grothcover_cli_oracle.json");
    CHECK(rc2 == 0);
    const std::string o = slurp("/tmp/grothcover_cli_oracle.json");
    CHECK(o.find("\"maxq\":2") != std::string::npos);
    CHECK(o.find("\"fevc\":1.5") != std::string::npos);
}
