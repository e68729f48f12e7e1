#include <catch_amalgamated.hpp>

#include <fstream>

#include <activescalar/audit.hpp>
#include <activescalar/reports.hpp>

using namespace asl;

TEST_CASE("mg A1 audit passes") {
    auto r = audit_condition(LawKind::MG, Condition::A1, 16, {0.0, 0.1});
    CHECK(r.measured_sup <= 1e-12);
    CHECK(r.pass);
    CHECK(r.singular_modes > 0);  // nu=0 ray k2=k3=0 excluded
    CHECK(r.shells.size() == 16);
}

TEST_CASE("ipmb A2* audit attains sup 1") {
    auto r = audit_condition(LawKind::IPMB, Condition::A2Star, 32, {0.0});
    CHECK(r.measured_sup == Catch::Approx(1.0));
    CHECK(r.pass);
    // attained already on the first shell at k=(1,0)
    CHECK(r.shells.front().sup == Catch::Approx(1.0));
}

TEST_CASE("ipmb A5 audit fits unit rate") {
    auto r = audit_condition(LawKind::IPMB, Condition::A5, 32, {0.0, 1e-3, 1e-2, 0.1});
    CHECK(r.pass);
    CHECK(r.fitted_rate >= 0.5);
    CHECK(r.fit_r_squared >= 0.99);
    CHECK(r.reference_k == std::array<int, 3>{1, 1, 0});
    // per-mode difference bound: nu K^2/(1+nu K^2) * max|m^0| with max|m^0|=1
    double bound = 0.1 * 32.0 * 32.0 / (1.0 + 0.1 * 32.0 * 32.0);
    CHECK(r.measured_sup <= bound + 1e-12);
}

TEST_CASE("mg A3 audit plateaus for nu > 0") {
    auto r = audit_condition(LawKind::MG, Condition::A3, 16, {0.1});
    CHECK(r.pass);
    CHECK(r.measured_sup <= 3.0 / 0.1);
}

TEST_CASE("sqg A2 audit") {
    auto r = audit_condition(LawKind::SQG, Condition::A2, 16, {0.0, 0.1});
    CHECK(r.pass);
    CHECK(r.measured_sup <= 1.0 + 1e-12);
}

TEST_CASE("audit rejects tiny shell cutoffs") {
    CHECK_THROWS_AS(audit_condition(LawKind::SQG, Condition::A1, 4, {0.0}), ConfigError);
}

TEST_CASE("audit is bit-reproducible") {
    auto a = audit_condition(LawKind::MG, Condition::A2, 12, {0.0, 0.5});
    auto b = audit_condition(LawKind::MG, Condition::A2, 12, {0.0, 0.5});
    CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("audit report validates against its schema") {
    std::ifstream is("schemas/audit_report.schema.json");
    REQUIRE(is);
    nlohmann::json schema;
    is >> schema;
    std::string err;
    for (Condition c : {Condition::A1, Condition::A2Star, Condition::A5}) {
        auto r = audit_condition(LawKind::IPMB, c, 8, {0.0, 0.1});
        INFO(err);
        CHECK(validate_against_schema(to_json(r), schema, &err));
    }
}

TEST_CASE("condition name round trip") {
    for (Condition c : {Condition::A1, Condition::A2, Condition::A2Star, Condition::A3,
                        Condition::A5})
        CHECK(condition_from_name(condition_name(c)) == c);
    CHECK_THROWS_AS(condition_from_name("A4"), ConfigError);
}
