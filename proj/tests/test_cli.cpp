#include <doctest.h>

#include <fstream>
#include <sstream>

#include "slnz/matio.hpp"
#include "slnz/report_json.hpp"

using namespace slnz;
using reports::json;

TEST_CASE("matrix text parsing") {
    SUBCASE("round trip") {
        IntMat m(2, 3);
        m.at(0, 0) = -5;
        m.at(1, 2) = Int("123456789012345678901234567890");
        std::istringstream in(m.to_text());
        CHECK(parse_matrix_text(in) == m);
    }
    SUBCASE("error messages carry line numbers") {
        std::istringstream bad1("2 2\n1 2\n3");
        CHECK_THROWS_WITH_AS(parse_matrix_text(bad1), doctest::Contains("line 3"), ParseError);
        std::istringstream bad2("2 2\n1 2 9\n3 4");
        CHECK_THROWS_WITH_AS(parse_matrix_text(bad2), doctest::Contains("line 2"), ParseError);
        std::istringstream bad3("not a header");
        CHECK_THROWS_AS(parse_matrix_text(bad3), ParseError);
        std::istringstream bad4("2 2\n1 x\n3 4");
        CHECK_THROWS_WITH_AS(parse_matrix_text(bad4), doctest::Contains("bad integer"), ParseError);
    }
    SUBCASE("blank lines are skipped") {
        std::istringstream in("\n2 2\n\n1 0\n0 1\n");
        CHECK(parse_matrix_text(in) == IntMat::identity(2));
    }
}

namespace {

json load_schema() {
    std::ifstream f("docs/report_schema.json");
    if (!f) f.open("../docs/report_schema.json");
    REQUIRE(f.good());
    return json::parse(f);
}

bool type_matches(const json& v, const std::string& t) {
    if (t == "number") return v.is_number();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    return false;
}

void validate(const json& schema, const json& report) {
    REQUIRE(report.contains("kind"));
    std::string kind = report["kind"];
    REQUIRE(schema["reports"].contains(kind));
    for (const auto& [key, type] : schema["reports"][kind]["required"].items()) {
        INFO(kind << " requires " << key);
        REQUIRE(report.contains(key));
        REQUIRE(type_matches(report[key], type.get<std::string>()));
    }
}

} // namespace

TEST_CASE("every report kind validates against the shipped schema") {
    json schema = load_schema();

    HTable table(200);
    validate(schema, reports::bound_report(100, std::nullopt, table, false));
    validate(schema, reports::bound_report(10, 5L, table, true));

    validate(schema,
             reports::chain_report(verify_chain_R2(2024, 50), verify_chain_Rp(50),
                                   verify_chain_Rpq(50, 50)));

    IntMat g = random_sl(6, 12, 42);
    auto cert = factor_full(g);
    auto word = expand_to_elementary(cert);
    validate(schema, reports::factor_certificate(cert, "3k", &word));
    validate(schema, reports::factor_certificate(cert, "3k", nullptr));

    VectorSystem v = random_complete_system(2, 6, 50, 9);
    auto tr = reduce_to_standard(v, ReducePolicy::Z3k);
    validate(schema, reports::reduction_trace(v, tr, replay_trace(v, tr), "z3k"));

    auto part = check_partition(8);
    auto ids = check_mapping_identities(8);
    auto bp = check_Bp_Cp(3, 4);
    validate(schema, reports::torus_report(8, part, ids, negative_control_violations(8), &bp, 3,
                                           4, true));
    validate(schema, reports::torus_report(8, part, ids, negative_control_violations(8), nullptr,
                                           0, 0, false));

    auto rep = compare_bounds(3, 2);
    validate(schema, reports::spectral_report(rep));

    validate(schema, reports::mixing_report(3, 2, 0.25, 168, 5));
}

TEST_CASE("report builders are deterministic") {
    HTable table(50);
    auto a = reports::bound_report(10, 3L, table, false).dump();
    auto b = reports::bound_report(10, 3L, table, false).dump();
    CHECK(a == b);

    IntMat g = random_sl(5, 10, 77);
    auto c1 = reports::factor_certificate(factor_full(g), "3k", nullptr).dump();
    auto c2 = reports::factor_certificate(factor_full(g), "3k", nullptr).dump();
    CHECK(c1 == c2);
}

TEST_CASE("bound report content spot checks") {
    HTable table(200);
    json r = reports::bound_report(100, std::nullopt, table, false);
    CHECK(r["kazhdan"]["lower_Aprime"].get<double>() == doctest::Approx(7.8125e-4).epsilon(1e-12));
    CHECK(r["consistency_flags"].size() == 2);
    CHECK(r["consistency_flags"][0]["id"] == "lowerA_50_vs_64");
    json rp = reports::bound_report(10, 5L, table, false);
    CHECK(rp["l"].get<double>() == doctest::Approx(std::sqrt(30.0) + 3.0).epsilon(1e-12));
    CHECK(rp["applications"].contains("mixing_bound"));
}
