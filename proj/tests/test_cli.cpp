#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "pfbasis/catalog.hpp"
#include "pfbasis/io.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "pfbasis_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = std::string(PFBASIS_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p);
    f << content;
}

fs::path exported(const std::string& name, const std::string& suffix) {
    static bool done = false;
    const fs::path dir = work_dir() / "export";
    if (!done) {
        for (const char* n : {"lugano", "gyni3", "shift", "domino", "app-e-weak"}) {
            auto r = run_cli(std::string("catalog show ") + n + " --export " + dir.string());
            REQUIRE(r.exit_code == 0);
        }
        done = true;
    }
    return dir / (name + suffix);
}

}  // namespace

TEST_CASE("catalog list names the canonical instances") {
    auto r = run_cli("--format json catalog list");
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    bool found = false;
    for (const auto& e : j.at("entries"))
        if (e.at("name") == "lugano") found = true;
    CHECK(found);
}

TEST_CASE("classify the exported lugano table") {
    auto r = run_cli("--format json pf classify " +
                     exported("lugano", ".pf.json").string());
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(j.at("validity") == "valid");
    CHECK(j.at("causality") == "non_causal");
    CHECK(j.at("has_global_past") == false);
    CHECK(j.at("genuinely_non_causal") == true);
}

TEST_CASE("game values of the lugano table are exact fractions") {
    auto r = run_cli("--format json pf game " + exported("lugano", ".pf.json").string());
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(j.at("causal_bound") == "7/8");
    CHECK(j.at("best_causal_value") == "3/4");
    CHECK(j.at("swap_value") == "1");
    CHECK_FALSE(j.at("strategy").is_null());
}

TEST_CASE("an invalid verdict is a successful run") {
    auto r = run_cli("--format json pf validate " +
                     exported("gyni3", ".pf.json").string() + " --method both");
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(j.at("bruteforce").at("valid") == false);
    CHECK(j.at("recursive").at("valid") == false);
    CHECK(j.at("agree") == true);
    CHECK(j.at("bruteforce").contains("witness"));
}

TEST_CASE("an ambiguous basis verdict is a successful run") {
    auto r = run_cli("--format json basis classify " +
                     exported("domino", ".basis.json").string());
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(j.at("kind") == "ambiguous");
    CHECK_FALSE(j.at("ambiguity_witness").is_null());
}

TEST_CASE("basis check reports completeness, unambiguity and exclusivity") {
    auto r = run_cli("--format json basis check " +
                     exported("domino", ".basis.json").string());
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(j.at("complete") == true);
    CHECK(j.at("unambiguous") == false);
    CHECK(j.at("weakly_unambiguous") == false);
    CHECK(j.at("exclusivity") == false);
}

TEST_CASE("shift decodes to lugano through the pipeline") {
    auto r = run_cli("--format json basis to-pf " +
                     exported("shift", ".basis.json").string());
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(pfb::io::pf_from_json(j.at("pf")) == pfb::catalog::lugano());
    CHECK(j.at("validity").at("valid") == true);
    CHECK(j.at("labels").size() == 8);
}

TEST_CASE("lugano encodes to the shift basis with the default seed") {
    auto r = run_cli("--format json pf to-basis " +
                     exported("lugano", ".pf.json").string() + " --seed 0");
    REQUIRE(r.exit_code == 0);
    auto S = pfb::io::basis_from_json(json::parse(r.out));
    CHECK(pfb::basis_set_match(S, pfb::catalog::shift_basis()).has_value());
}

TEST_CASE("an explicit unitaries document drives the encoding") {
    const fs::path ufile = work_dir() / "ih3.unitaries.json";
    write_file(ufile, pfb::io::unitaries_to_json(pfb::catalog::qubit_family_IH(3)).dump());
    auto r = run_cli("--format json pf to-basis " +
                     exported("lugano", ".pf.json").string() + " --unitaries " +
                     ufile.string());
    REQUIRE(r.exit_code == 0);
    auto S = pfb::io::basis_from_json(json::parse(r.out));
    CHECK(pfb::basis_set_match(S, pfb::catalog::shift_basis()).has_value());
}

TEST_CASE("explicit labels drive the decode through the CLI") {
    const fs::path bfile = work_dir() / "d2.basis.json";
    write_file(bfile, pfb::io::basis_to_json(pfb::catalog::app_d2_basis()).dump());
    auto r = run_cli("--format json basis to-pf " + bfile.string());
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(pfb::io::pf_from_json(j.at("pf")) == pfb::catalog::one_way_2x3());
    CHECK(j.at("validity").at("valid") == true);
}

TEST_CASE("the cap flag bounds the game search") {
    auto r = run_cli("--cap 16 pf game " + exported("lugano", ".pf.json").string());
    CHECK(r.exit_code == 2);
    auto j = json::parse(r.err);
    CHECK(j.at("error").at("kind") == "size");
}

TEST_CASE("basis check confirms the shift basis end to end") {
    auto r = run_cli("--format json basis check " +
                     exported("shift", ".basis.json").string());
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(j.at("complete") == true);
    CHECK(j.at("unambiguous") == true);
}

TEST_CASE("repair produces an unambiguous basis deterministically") {
    auto a = run_cli("--format json --seed 4 basis repair " +
                     exported("app-e-weak", ".basis.json").string());
    auto b = run_cli("--format json --seed 4 basis repair " +
                     exported("app-e-weak", ".basis.json").string());
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    auto S = pfb::io::basis_from_json(json::parse(a.out));
    CHECK(pfb::is_unambiguous(S).unambiguous);
}

TEST_CASE("outputs are byte-stable across runs") {
    const std::string cmd =
        "--format json pf game " + exported("lugano", ".pf.json").string();
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    CHECK(a.out == b.out);
}

TEST_CASE("schema violations exit 2 with a structured error") {
    const fs::path bad = work_dir() / "bad.pf.json";
    write_file(bad, R"({"parties":[{"x_size":2,"a_size":2}],"table":[[0],[0]],"oops":1})");
    auto r = run_cli("pf classify " + bad.string());
    CHECK(r.exit_code == 2);
    auto j = json::parse(r.err);
    CHECK(j.at("error").at("kind") == "input");
    CHECK(j.at("error").at("message").get<std::string>().find("oops") !=
          std::string::npos);
}

TEST_CASE("malformed json exits 2") {
    const fs::path bad = work_dir() / "broken.json";
    write_file(bad, "{not json");
    auto r = run_cli("pf classify " + bad.string());
    CHECK(r.exit_code == 2);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("unknown catalog entries exit 2") {
    auto r = run_cli("catalog show nothing-here");
    CHECK(r.exit_code == 2);
    auto j = json::parse(r.err);
    CHECK(j.at("error").at("kind") == "input");
}

TEST_CASE("text format prints a human summary") {
    auto r = run_cli("pf classify " + exported("lugano", ".pf.json").string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("validity: valid") != std::string::npos);
    CHECK(r.out.find("causality: non_causal") != std::string::npos);
}
