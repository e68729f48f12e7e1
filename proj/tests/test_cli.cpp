#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include <activescalar/harness.hpp>

using namespace asl;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_tmp(const std::string& name, const std::string& content) {
    auto p = fs::temp_directory_path() / name;
    std::ofstream os(p);
    os << content;
    return p.string();
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is);
    nlohmann::json j;
    is >> j;
    return j;
}

const std::string kSmallRun =
    R"({"law":"sqg","nu":0.1,"kappa":0.5,"gamma":1,"n":16,"d":2,"dt":0.01,"t_end":0.5,)"
    R"("seed":17,"checkpoint_every":10,)"
    R"("initial_data":{"type":"random","slope":3}})";

}  // namespace

TEST_CASE("audit subcommand writes reports and exits 0") {
    auto out = fresh_dir("asl_cli_audit");
    int rc = cli_run({"audit", "--law", "mg", "--K", "16", "--nu", "0,0.1", "--out",
                      out.string(), "--condition", "A1"});
    CHECK(rc == 0);
    auto j = read_json(out / "audit_mg_A1.json");
    CHECK(j["pass"].get<bool>());

    std::ifstream is("schemas/audit_report.schema.json");
    REQUIRE(is);
    nlohmann::json schema;
    is >> schema;
    std::string err;
    INFO(err);
    CHECK(validate_against_schema(j, schema, &err));
}

TEST_CASE("usage errors exit 2") {
    CHECK(cli_run({}) == 2);
    CHECK(cli_run({"frobnicate"}) == 2);
    CHECK(cli_run({"run", "--no-such-flag"}) == 2);
    CHECK(cli_run({"run"}) == 2);  // neither --config nor --preset
    // sweep preset given to the run subcommand
    CHECK(cli_run({"run", "--preset", "sqg-critical-kappa-sweep"}) == 2);
    CHECK(cli_run({"run", "--config", "/no/such/file.json"}) == 2);
    CHECK(cli_run({"audit", "--law", "nope"}) == 2);
    CHECK(cli_run({"report", "--in", "/no/such/dir"}) == 2);
}

TEST_CASE("run subcommand emits series, summary and checkpoint") {
    auto out = fresh_dir("asl_cli_run");
    auto cfg = write_tmp("asl_cli_run.json", kSmallRun);
    CHECK(cli_run({"run", "--config", cfg, "--out", out.string()}) == 0);
    CHECK(fs::exists(out / "run_series.csv"));
    CHECK(fs::exists(out / "final.ckpt"));

    auto j = read_json(out / "run_summary.json");
    std::ifstream is("schemas/run_summary.schema.json");
    REQUIRE(is);
    nlohmann::json schema;
    is >> schema;
    std::string err;
    INFO(err);
    CHECK(validate_against_schema(j, schema, &err));

    // first CSV line is the header, then one row per checkpoint
    std::ifstream csv(out / "run_series.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header.substr(0, 5) == "t,l2,");
}

TEST_CASE("identical invocations produce identical bytes") {
    auto out1 = fresh_dir("asl_cli_det1");
    auto out2 = fresh_dir("asl_cli_det2");
    auto cfg = write_tmp("asl_cli_det.json", kSmallRun);
    CHECK(cli_run({"run", "--config", cfg, "--out", out1.string()}) == 0);
    CHECK(cli_run({"run", "--config", cfg, "--out", out2.string()}) == 0);
    for (const char* name : {"run_series.csv", "run_summary.json", "final.ckpt"}) {
        std::ifstream a(out1 / name, std::ios::binary), b(out2 / name, std::ios::binary);
        std::string sa((std::istreambuf_iterator<char>(a)), {});
        std::string sb((std::istreambuf_iterator<char>(b)), {});
        CHECK(sa == sb);
    }
}

TEST_CASE("resume reproduces the uninterrupted run") {
    auto out_full = fresh_dir("asl_cli_full");
    auto out_mid = fresh_dir("asl_cli_mid");
    auto out_res = fresh_dir("asl_cli_res");
    auto cfg = write_tmp("asl_cli_resume.json", kSmallRun);

    CHECK(cli_run({"run", "--config", cfg, "--out", out_full.string()}) == 0);
    CHECK(cli_run({"run", "--config", cfg, "--out", out_mid.string(), "--save-at", "25"}) == 0);
    CHECK(cli_run({"resume", "--config", cfg, "--checkpoint",
                   (out_mid / "mid.ckpt").string(), "--out", out_res.string()}) == 0);

    std::ifstream a(out_full / "final.ckpt", std::ios::binary);
    std::ifstream b(out_res / "final.ckpt", std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), {});
    std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);

    // mismatched checkpoint/config pairing is a usage error
    CHECK(cli_run({"resume", "--config", cfg, "--checkpoint", "/no/such.ckpt"}) == 2);
}

TEST_CASE("sweep subcommand emits a convergence report") {
    auto out = fresh_dir("asl_cli_sweep");
    auto cfg = write_tmp(
        "asl_cli_sweep.json",
        R"({"law":"ipmb","kappa":0,"gamma":2,"n":16,"d":2,"dt":0.01,"t_end":0.1,"seed":3,)"
        R"("initial_data":{"type":"random","slope":3,"max_k":4},)"
        R"("sweep":{"param":"nu","values":[0.1,0.05,0],"eval_times":[0.1]}})");
    CHECK(cli_run({"sweep", "--config", cfg, "--out", out.string()}) == 0);
    auto j = read_json(out / "convergence_report.json");
    CHECK(j["monotone"].get<bool>());

    std::ifstream is("schemas/convergence_report.schema.json");
    REQUIRE(is);
    nlohmann::json schema;
    is >> schema;
    std::string err;
    INFO(err);
    CHECK(validate_against_schema(j, schema, &err));
}

TEST_CASE("report subcommand summarizes a directory") {
    auto out = fresh_dir("asl_cli_report");
    CHECK(cli_run({"audit", "--law", "sqg", "--K", "8", "--condition", "A1", "--out",
                   out.string()}) == 0);
    CHECK(cli_run({"audit", "--law", "sqg", "--K", "8", "--condition", "A5", "--out",
                   out.string()}) == 0);
    // A3 at nu=0 measures an unbounded symbol; the audit must say so
    CHECK(cli_run({"audit", "--law", "sqg", "--K", "8", "--condition", "A3", "--nu", "0",
                   "--out", out.string()}) == 1);
    CHECK(cli_run({"report", "--in", out.string()}) == 0);
}

TEST_CASE("ASL_OUT_DIR is the output fallback") {
    auto out = fresh_dir("asl_cli_env");
    setenv("ASL_OUT_DIR", out.string().c_str(), 1);
    CHECK(cli_run({"audit", "--law", "sqg", "--K", "8", "--condition", "A1"}) == 0);
    unsetenv("ASL_OUT_DIR");
    CHECK(fs::exists(out / "audit_sqg_A1.json"));
}
