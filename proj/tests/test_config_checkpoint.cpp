#include <catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>

#include <activescalar/checkpoint.hpp>
#include <activescalar/config.hpp>

using namespace asl;

namespace {

std::filesystem::path tmp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string write_tmp(const std::string& name, const std::string& content) {
    auto p = tmp_file(name);
    std::ofstream os(p);
    os << content;
    return p.string();
}

SolverConfig small_run() {
    SolverConfig cfg;
    cfg.law = {LawKind::SQG, 0.1};
    cfg.dim = 2;
    cfg.n = 16;
    cfg.kappa = 0.5;
    cfg.gamma = 1.0;
    cfg.dt = 1e-2;
    cfg.t_end = 1.0;
    cfg.checkpoint_every = 10;
    cfg.initial_data.kind = FieldSpec::Kind::RandomSpectrum;
    cfg.initial_data.spectrum_slope = 3.0;
    cfg.seed = 17;
    return cfg;
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
    auto path = write_tmp("asl_min.json",
                          R"({"law":"sqg","nu":0.1,"kappa":1,"gamma":1,"n":64,"d":2,)"
                          R"("dt":1e-3,"t_end":1})");
    auto parsed = parse_config(path);
    REQUIRE(parsed.config);
    CHECK(parsed.config->law.kind == LawKind::SQG);
    CHECK(parsed.config->integrator == Integrator::RK4IF);
    CHECK(parsed.config->checkpoint_every == 100);
    CHECK(parsed.config->hs_list == std::vector<double>{1.0});
    CHECK(!parsed.sweep);
}

TEST_CASE("gamma outside (0,2] is rejected with the range in the message") {
    auto path = write_tmp("asl_gamma.json", R"({"law":"sqg","gamma":2.5,"n":16,"d":2})");
    try {
        parse_config(path);
        FAIL("expected GammaOutOfRange");
    } catch (const GammaOutOfRange& e) {
        CHECK(std::string(e.what()).find("(0,2]") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected") {
    auto path = write_tmp("asl_unknown.json", R"({"law":"sqg","n":16,"d":2,"cfl":0.5})");
    CHECK_THROWS_AS(parse_config(path), ConfigError);
}

TEST_CASE("sweep section parses") {
    auto path = write_tmp("asl_sweep.json",
                          R"({"law":"ipmb","n":16,"d":2,"t_end":0.1,)"
                          R"("sweep":{"param":"nu","values":[0.1,0.05,0],"eval_times":[0.1]}})");
    auto parsed = parse_config(path);
    REQUIRE(parsed.sweep);
    CHECK(parsed.sweep->param == SweepParam::Nu);
    CHECK(parsed.sweep->values == std::vector<double>{0.1, 0.05, 0.0});
}

TEST_CASE("preset expansion") {
    auto p = get_preset("ipmb-nu-sweep");
    REQUIRE(p.sweep);
    CHECK(p.sweep->values == std::vector<double>{0.1, 0.05, 0.025, 0.0125, 0.0});
    CHECK(p.config.law.kind == LawKind::IPMB);
    CHECK_THROWS_AS(get_preset("no-such-preset"), ConfigError);
    for (const auto& id : preset_ids()) CHECK(get_preset(id).id == id);

    auto path = write_tmp("asl_preset.json", R"({"preset":"absorbing-ball"})");
    auto parsed = parse_config(path);
    REQUIRE(parsed.preset);
    CHECK(parsed.preset->kind == "absorbing-ball");
}

TEST_CASE("config json round trip") {
    SolverConfig cfg = small_run();
    auto j = solver_config_to_json(cfg);
    SolverConfig back = solver_config_from_json(j);
    CHECK(solver_config_to_json(back).dump() == j.dump());
}

TEST_CASE("checkpoint round trip is bit-exact") {
    SolverConfig cfg = small_run();
    cfg.integrator = Integrator::AB2IF;  // exercise the history payload
    Runner runner(cfg);
    for (int i = 0; i < 25; ++i) runner.step();
    auto path = tmp_file("asl_rt.ckpt").string();
    save_checkpoint(runner.state(), cfg, path);

    CheckpointHeader header;
    StepState loaded = load_checkpoint(path, &header);
    CHECK(header.n == cfg.n);
    CHECK(header.law == LawKind::SQG);
    CHECK(header.kappa == cfg.kappa);
    CHECK(loaded.t == runner.state().t);
    CHECK(loaded.step == 25);
    CHECK(loaded.theta.coeffs == runner.state().theta.coeffs);
    REQUIRE(loaded.prev_rhs);
    CHECK(loaded.prev_rhs->coeffs == runner.state().prev_rhs->coeffs);
    CHECK(loaded.diss_integral == runner.state().diss_integral);
    CHECK(loaded.force_integral == runner.state().force_integral);
}

TEST_CASE("corrupt checkpoints are rejected") {
    SolverConfig cfg = small_run();
    Runner runner(cfg);
    runner.step();
    auto path = tmp_file("asl_corrupt.ckpt").string();
    save_checkpoint(runner.state(), cfg, path);

    // truncation
    auto bytes = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, bytes / 2);
    try {
        load_checkpoint(path);
        FAIL("expected CheckpointError");
    } catch (const CheckpointError& e) {
        CHECK(std::string(e.what()).find("truncated") != std::string::npos);
    }

    // bad magic
    auto bad = tmp_file("asl_badmagic.ckpt").string();
    {
        std::ofstream os(bad, std::ios::binary);
        os << "NOPE1payload";
    }
    CHECK_THROWS_AS(load_checkpoint(bad), CheckpointError);

    // unsupported version
    save_checkpoint(runner.state(), cfg, path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(5);
        std::uint32_t v = 99;
        f.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
    try {
        load_checkpoint(path);
        FAIL("expected CheckpointError");
    } catch (const CheckpointError& e) {
        CHECK(std::string(e.what()).find("version") != std::string::npos);
    }
}

TEST_CASE("resumed run matches the uninterrupted one bit for bit") {
    for (Integrator integ : {Integrator::RK4IF, Integrator::AB2IF}) {
        SolverConfig cfg = small_run();
        cfg.integrator = integ;

        auto full = Runner(cfg).run();

        Runner first(cfg);
        for (int i = 0; i < 50; ++i) first.step();
        auto path = tmp_file("asl_resume.ckpt").string();
        save_checkpoint(first.state(), cfg, path);

        Runner second(cfg, load_checkpoint(path));
        auto resumed = second.run();

        CHECK(resumed.state.theta.coeffs == full.state.theta.coeffs);
        CHECK(resumed.state.t == full.state.t);
        CHECK(resumed.series.back().l2 == full.series.back().l2);
        CHECK(resumed.series.back().energy_residual == full.series.back().energy_residual);
    }
}
