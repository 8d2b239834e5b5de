#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <modeforge/io.hpp>

#include <random>

using namespace modeforge;
using namespace modeforge::io;
namespace mf = modeforge::modforms;

TEST_CASE("series documents round-trip (property)") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> num(-50, 50), den(1, 9), len(0, 12), nd(1, 3), st(-4, 4);
    for (int trial = 0; trial < 40; ++trial) {
        long N = nd(rng), start = st(rng);
        std::vector<Rational> c(static_cast<size_t>(len(rng)));
        for (auto& x : c) x = Rational(num(rng), den(rng));
        Series s(N, start, start + static_cast<long>(c.size()) + 2, c);
        json j = emit_series(s);
        auto back = parse_series<Rational>(json::parse(j.dump()));
        CHECK(back == s);
        CHECK(emit_series(back).dump() == j.dump());
    }
    auto d = mf::Delta(30);
    CHECK(parse_series<Rational>(emit_series(d)) == d);
    auto z = Series::zero(5);
    CHECK(parse_series<Rational>(emit_series(z)) == z);
}

TEST_CASE("c-polynomial coefficients round-trip") {
    CPoly c = CPoly::c();
    std::vector<CPoly> v{CPoly(Rational(1)), c * Rational(3, 2) + CPoly(Rational(-7)), CPoly::monomial(Rational(5), -2)};
    CSeries s(3, -1, 6, v);
    json j = emit_series(s);
    CHECK(j["terms"][1][1]["cpow"]["1"] == "3/2");
    auto back = parse_series<CPoly>(json::parse(j.dump()));
    CHECK(back == s);
}

TEST_CASE("series document errors") {
    CHECK_THROWS_AS(parse_series<Rational>(json::parse(R"({"terms": [[0, "1"]]})")), InputError);
    CHECK_THROWS_AS(parse_series<Rational>(json::parse(R"({"terms": [[0, "x"]], "order": 3})")), InputError);
    CHECK_THROWS_AS(parse_series<Rational>(json::parse(R"({"terms": [[5, "1"]], "order": 3})")), InputError);
    CHECK_THROWS_AS(parse_series<Rational>(json::parse(R"({"terms": [], "order": 3, "denom": 0})")), InputError);
    CHECK_THROWS_AS(parse_series<Rational>(json::parse(R"({"terms": [], "order": 3, "extra": 1})")), InputError);
    CHECK_THROWS_AS(read_json_text("{\"a\": ", "x"), InputError);
}

TEST_CASE("spec documents round-trip (property)") {
    std::mt19937 rng(37);
    std::uniform_int_distribution<int> gap(1, 4), off(-3, 3);
    auto make = [&](Rational sum) {
        Rational a(off(rng)), b = a + Rational(gap(rng)), c = b + Rational(gap(rng));
        Rational shift = (sum - a - b - c) / Rational(3);
        return existence::Triple{a + shift, b + shift, c + shift};
    };
    int done = 0;
    for (int trial = 0; trial < 30; ++trial) {
        existence::ExponentSpec s;
        s.inf = make(Rational(0));
        s.i = make(Rational(3));
        s.rho = make(Rational(3));
        if (trial % 2) s.points.push_back({Rational(2 + trial, 7), make(Rational(3))});
        try {
            existence::validate(s);
        } catch (const std::invalid_argument&) {
            continue;
        }
        auto d = parse_spec(json::parse(emit_spec(s).dump()));
        CHECK(d.spec.inf == s.inf);
        CHECK(d.spec.i == s.i);
        CHECK(d.spec.rho == s.rho);
        REQUIRE(d.spec.points.size() == s.points.size());
        for (size_t k = 0; k < s.points.size(); ++k) {
            CHECK(d.spec.points[k].t == s.points[k].t);
            CHECK(d.spec.points[k].kappa == s.points[k].kappa);
        }
        CHECK(emit_spec(d.spec).dump() == emit_spec(s).dump());
        ++done;
    }
    CHECK(done >= 10);
}

TEST_CASE("spec documents are validated on load") {
    CHECK_NOTHROW(parse_spec(json::parse(R"({"rho": ["-2", "1", "4"]})")));
    CHECK_THROWS_AS(parse_spec(json::parse(R"({"rho": ["-2", "1", "4"], "strict": true})")), InputError);
    CHECK_THROWS_AS(parse_spec(json::parse(R"({"i": ["0", "1", "3"]})")), InputError);
    CHECK_THROWS_AS(parse_spec(json::parse(R"({"i": ["0", "1"]})")), InputError);
    CHECK_THROWS_AS(parse_spec(json::parse(R"({"cusp": ["0", "0", "0"]})")), InputError);
    CHECK_THROWS_AS(parse_spec(json::parse(R"({"points": [{"t": "1", "kappa": ["0", "1", "2"]}]})")), InputError);
    auto d = parse_spec(json::parse(R"({"points": [{"t": null, "kappa": ["-1", "1", "3"]}]})"));
    CHECK_FALSE(d.spec.points[0].t.has_value());
}

TEST_CASE("emitted systems carry the constraint polynomials") {
    auto d = parse_spec(read_json_file(std::string(MODEFORGE_DATA_DIR) + "/extremal6_spec.json"));
    auto p = existence::fix_indicial(d.spec);
    auto sys = existence::obstruction_polynomials(d.spec, p);
    json j = emit_system(sys);
    REQUIRE(j["constraints"].size() == 1);
    CHECK(j["constraints"][0]["point"] == "i");
    CHECK(j["constraints"][0]["degree"] == 1);
    // rebuild the polynomial from its sparse terms
    MPoly back;
    for (const auto& t : j["constraints"][0]["terms"]) back += MPoly::term(t[0].get<Mono>(), Rational::parse(t[1].get<std::string>()));
    CHECK(back == sys.constraints()[0]->poly);
    auto v = existence::verify_candidate(sys, parse_assignment(json::parse(R"({"s_i1": "-1/36"})")));
    CHECK(v.ok);
    CHECK_THROWS_AS(parse_assignment(json::parse(R"({"s_i1": "a"})")), InputError);
}
