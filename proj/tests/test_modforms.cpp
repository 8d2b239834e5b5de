#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <modeforge/modforms.hpp>

#include <chrono>
#include <random>

using namespace modeforge;
using namespace modeforge::modforms;

TEST_CASE("Eisenstein leading coefficients") {
    auto e4 = E4(5), e6 = E6(5), e2 = E2(5);
    CHECK(e4.coeff(1) == Rational(240));
    CHECK(e4.coeff(2) == Rational(2160));
    CHECK(e6.coeff(1) == Rational(-504));
    CHECK(e6.coeff(2) == Rational(-16632));
    CHECK(e2.coeff(3) == Rational(-96));
}

TEST_CASE("Ramanujan tau from the product formula") {
    const long tau[] = {1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920};
    auto d = Delta(10);
    CHECK(d.lead_exp() == Rational(1));
    for (long n = 1; n <= 10; ++n) CHECK(d.coeff(n) == Rational(tau[n - 1]));
}

TEST_CASE("1728 Delta = E4^3 - E6^2 to order 200") {
    auto t0 = std::chrono::steady_clock::now();
    auto lhs = Delta(200) * Rational(1728);
    auto rhs = E4(200).pow(3) - E6(200).pow(2);
    CHECK(lhs == rhs);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 2.0);
}

TEST_CASE("eta^24 is Delta; eta has exponent 1/24") {
    auto e = eta_power(1, 10);
    CHECK(e.lead_exp() == Rational(1, 24));
    CHECK(eta_power(24, 20).agrees_with(Delta(20)));
    CHECK(e.pow(24).agrees_with(Delta(10)));
}

TEST_CASE("Ramanujan derivative identities") {
    long o = 40;
    auto e2 = E2(o), e4 = E4(o), e6 = E6(o);
    CHECK((e2.dq() * Rational(12)).agrees_with(e2 * e2 - e4));
    CHECK((e4.dq() * Rational(3)).agrees_with(e2 * e4 - e6));
    CHECK((e6.dq() * Rational(2)).agrees_with(e2 * e6 - e4 * e4));
    CHECK(Delta(o).dq().agrees_with(e2 * Delta(o)));
}

TEST_CASE("dimension and basis") {
    CHECK(dimension(2) == 0);
    CHECK(dimension(12) == 2);
    CHECK(dimension(14) == 1);
    CHECK(dimension(24) == 3);
    CHECK(dimension(26) == 2);
    auto b = basis(24, 10);
    REQUIRE(b.size() == 3);
    CHECK(b[0].e4 == 6);
    CHECK(b[1].e4 == 3);
    CHECK(b[1].delta == 1);
    CHECK(b[2].delta == 2);
}

TEST_CASE("membership") {
    auto c = membership(E4(30).pow(2), 8);
    REQUIRE(c);
    CHECK((*c)[0] == Rational(1));
    CHECK(membership(E4(30) * E6(30), 10));
    CHECK_FALSE(membership(E2(30), 2));
    CHECK_FALSE(membership(E2(30) * E4(30), 6));
    auto w = membership(E4(30).pow(6) - E4(30).pow(3) * Delta(30) * Rational(5), 24);
    REQUIRE(w);
    CHECK((*w)[1] == Rational(-5));
    CHECK((*w)[2] == Rational(0));
}

TEST_CASE("factor_form canonical and full views") {
    long o = 30;
    auto w = E4(o).pow(6) * E6(o).pow(3) * Delta(o).pow(3) * Rational(7);
    auto f = factor_form(w, 78);
    CHECK(f.a == 0);
    CHECK(f.b == 1);
    CHECK(f.d == 3);
    CHECK(f.P.degree() == 3);
    CHECK(f.scale == Rational(7));
    CHECK(f.e4_power == 6);
    CHECK(f.e6_power == 3);
    CHECK(f.residual.degree() == 0);
    CHECK(expand_factorization(f, o).agrees_with(w));
}

TEST_CASE("factor_form round trip (property)") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> small(0, 2), root(-50, 50), deg(0, 3);
    for (int trial = 0; trial < 20; ++trial) {
        int a = small(rng), b = small(rng) % 2, d = small(rng), n = deg(rng);
        std::vector<Rational> roots;
        for (int i = 0; i < n; ++i) roots.emplace_back(root(rng) * 36, 1 + small(rng));
        UPoly P = UPoly::from_roots(roots);
        Factorization fz;
        fz.a = a; fz.b = b; fz.d = d; fz.P = P; fz.scale = Rational(3, 5);
        int k = 4 * a + 6 * b + 12 * (d + n);
        long o = 12 + d + n;
        auto s = expand_factorization(fz, o);
        auto g = factor_form(s, k);
        CHECK(g.a == a);
        CHECK(g.b == b);
        CHECK(g.d == d);
        CHECK(g.P == P);
        CHECK(g.scale == Rational(3, 5));
        int m0 = 0, m1 = 0;
        for (const auto& r : roots) { if (r.is_zero()) ++m0; if (r == Rational(1728)) ++m1; }
        CHECK(g.e4_power == a + 3 * m0);
        CHECK(g.e6_power == b + 2 * m1);
    }
}

TEST_CASE("expression evaluation") {
    auto w = evaluate("E4^3*Delta", 10);
    REQUIRE(w.weight);
    CHECK(*w.weight == Rational(24));
    CHECK(w.series.agrees_with(E4(10).pow(3) * Delta(10)));
    auto mixed = evaluate("E4 + E6", 10);
    CHECK_FALSE(mixed.weight);
    auto d = evaluate("(E4^3 - E6^2)/1728", 10);
    CHECK(d.series.agrees_with(Delta(10)));
    CHECK_THROWS(evaluate("E5", 10));
    CHECK_THROWS(evaluate("E4 +", 10));
}
