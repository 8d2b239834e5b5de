#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <modeforge/mode.hpp>
#include <modeforge/quasi.hpp>

#include <random>

using namespace modeforge;
using namespace modeforge::quasi;
namespace mf = modeforge::modforms;

TEST_CASE("extremal forms: vanishing order and normalization") {
    for (int k : {6, 8, 10, 12, 14, 16}) {
        auto f = extremal(k, 30);
        auto s = f.series();
        CHECK(s.lead_exp() == Rational(k / 4));
        CHECK(s.lead_coeff() == Rational(1));
        CHECK(mf::dimension(k) + mf::dimension(k - 2) + mf::dimension(k - 4) == 1 + k / 4);
    }
    CHECK(extremal(6, 20).depth() == 1);
    CHECK(extremal(8, 20).depth() == 2);
    auto f12 = extremal(12, 20);
    CHECK(f12.g().coeff(0) != Rational(0));
    CHECK_THROWS(extremal(7, 20));
    CHECK_THROWS(extremal(4, 20));
}

TEST_CASE("h-vector: z-terms cancel and W is a c-power times a modular form") {
    auto f = extremal(8, 24);
    auto h = h_vector(f);
    CHECK(h.h1.degree() == 2);
    CHECK(h.h2.degree() == 1);
    auto W = wronskian(f);
    auto fz = mf::factor_form(W.series, 24);
    CHECK(fz.a == 0);
    CHECK(fz.b == 0);
    CHECK(fz.d == 2);
    CHECK(fz.P.degree() == 0);
}

TEST_CASE("extremal Wronskians are pure Delta / Delta*E6 products") {
    for (int k : {6, 8, 10, 12, 14, 16}) {
        auto f = extremal(k, 44);
        auto W = wronskian(f);
        auto fz = mf::factor_form(W.series, 3 * k);
        CHECK(fz.P.degree() == 0);
        if (k % 4 == 0) {
            CHECK(fz.e4_power == 0);
            CHECK(fz.e6_power == 0);
            CHECK(fz.d == k / 4);
        } else {
            CHECK(fz.e4_power == 0);
            CHECK(fz.e6_power == 1);
            CHECK(fz.d == (k - 2) / 4);
        }
        CHECK(mf::expand_factorization(fz, 40) == W.series.truncate(Rational(40)));
    }
}

TEST_CASE("cusp exponents from orders, four cases") {
    auto e1 = cusp_exponents_from_orders(2, 2, 3);
    CHECK(e1.sorted() == std::vector<Rational>{0, 0, 0});
    auto e2 = cusp_exponents_from_orders(3, 0, 5);
    CHECK(e2.k1 == Rational(-1));
    CHECK(e2.k2 == Rational(-1));
    CHECK(e2.k3 == Rational(2));
    auto e3 = cusp_exponents_from_orders(2, 4, 0);
    CHECK(e3.k1 == Rational(-4, 3));
    CHECK(e3.k2 == Rational(2, 3));
    CHECK(e3.k3 == Rational(2, 3));
    auto e4 = cusp_exponents_from_orders(5, 2, 0);
    CHECK(e4.sorted() == std::vector<Rational>{Rational(-7, 3), Rational(-1, 3), Rational(8, 3)});
}

TEST_CASE("cusp exponents from orders agree with the MODE") {
    for (int k : {8, 10, 12}) {
        auto f = extremal(k, 40);
        auto m = mode::from_quasi(f, 24);
        auto e = cusp_exponents_from_orders(order_at_infinity(f.series()), order_at_infinity(f.g()), order_at_infinity(f.f2));
        CHECK(e.sorted() == m.cusp.sorted());
        long r = k / 4;
        CHECK(m.cusp.sorted() == std::vector<Rational>{Rational(-r, 3), Rational(-r, 3), Rational(2 * r, 3)});
    }
}

TEST_CASE("random seeds: W is a holomorphic modular form of weight 3k (property)") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int trial = 0; trial < 6; ++trial) {
        int k = 8 + 2 * (trial % 3);
        long order = 30;
        QuasiForm f{k, mf::Series::zero(order), mf::Series::zero(order), mf::Series::zero(order)};
        for (int j = 0; j <= 2; ++j) {
            auto b = mf::basis(k - 2 * j, order);
            std::vector<Rational> c;
            for (size_t i = 0; i < b.size(); ++i) c.emplace_back(d(rng));
            if (j == 2 && c[0].is_zero()) c[0] = Rational(1);
            auto s = mf::combination(b, c);
            (j == 0 ? f.f0 : j == 1 ? f.f1 : f.f2) = s;
        }
        auto W = wronskian(f);
        CHECK(mf::membership(W.series.truncate(Rational(24)), 3 * k).has_value());
    }
}

TEST_CASE("a common Delta factor does not change the MODE") {
    auto f = extremal(10, 40);
    auto D = mf::Delta(40);
    QuasiForm g{22, f.f0 * D, f.f1 * D, f.f2 * D};
    auto m1 = mode::from_quasi(f, 20);
    auto m2 = mode::from_quasi(g, 20);
    CHECK(m1.Q == m2.Q);
    CHECK(m1.R == m2.R);
}
