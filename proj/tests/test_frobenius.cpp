#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <modeforge/frobenius.hpp>

#include <random>

using namespace modeforge;
using namespace modeforge::frobenius;

namespace {

using RS = QSeries<Rational>;

OdeData<Rational> ode_with_roots(Form form, const std::vector<long>& k, std::vector<Rational> A, std::vector<Rational> B) {
    // (s-k1)(s-k2)(s-k3) = P0(s) + A0 s + B0
    UPoly f = UPoly::from_roots({Rational(k[0]), Rational(k[1]), Rational(k[2])});
    UPoly x = UPoly::x();
    UPoly p0 = form == Form::Interior ? x * (x - UPoly(Rational(1))) * (x - UPoly(Rational(2))) : x * x * x;
    UPoly r = f - p0;
    REQUIRE(r.degree() <= 1);
    A[0] = r.coeff(1);
    B[0] = r.coeff(0);
    long n = static_cast<long>(A.size()) - 1;
    return {form, RS::from_coeffs(A, n), RS::from_coeffs(B, n)};
}

bool has_log_squared(const LocalStructure<Rational>& s) {
    for (const auto& y : s.basis)
        if (y.degree() >= 2) return true;
    return false;
}

// Leading exponents (x^kappa L^j) are distinct across a basis.
bool independent_leads(const LocalStructure<Rational>& s) {
    std::set<std::pair<Rational, int>> seen;
    for (const auto& y : s.basis) {
        int j = y.degree();
        auto lead = y.coeff(j);
        if (lead.is_zero()) return false;
        if (!seen.insert({lead.lead_exp(), j}).second) return false;
    }
    return true;
}

} // namespace

TEST_CASE("trivial operator has exponents 0, 1, 2 and is apparent") {
    OdeData<Rational> d{Form::Interior, RS::zero(20), RS::zero(20)};
    auto e = indicial(Form::Interior, Rational(0), Rational(0));
    REQUIRE(e.supported);
    CHECK(e.sorted() == std::vector<Rational>{0, 1, 2});
    auto s = classify(d, e, 20);
    CHECK(s.tag == Tag::Apparent);
    for (const auto& y : s.basis) {
        CHECK(y.is_log_free());
        CHECK(annihilates(d, y));
    }
}

TEST_CASE("cusp indicial cubic with a double root") {
    auto e = indicial(Form::Cusp, Rational(-3), Rational(-2));
    REQUIRE(e.supported);
    CHECK(e.k1 == Rational(-1));
    CHECK(e.k2 == Rational(-1));
    CHECK(e.k3 == Rational(2));
    CHECK(e.m1 == 0);
    CHECK(e.m2 == 3);
}

TEST_CASE("non-rational exponents are reported as unsupported") {
    auto e = indicial(Form::Cusp, Rational(-2), Rational(0));  // s^3 - 2s
    CHECK_FALSE(e.supported);
    CHECK(e.note.find("unsupported configuration") != std::string::npos);
    auto h = indicial(Form::Cusp, Rational(0), Rational(-1, 8));  // roots in (1/2)Z
    CHECK_FALSE(h.supported);
}

TEST_CASE("extremal weight 14 data at i") {
    taylor::Ansatz an;
    an.r_inf = Frac(Rational(-3));
    an.r_i2 = Frac(Rational(-1, 3));
    an.s_inf = Frac(Rational(-2));
    an.s_i3 = Frac(Rational(5, 54));
    an.s_i1 = Frac(Rational(-11, 12));
    auto loc = taylor::local_ode_data(an, taylor::PointClass::i(), 16);
    auto d = convert(from_local(loc), [](const Frac& f) { return *f.as_rational(); });
    auto e = indicial(d.form, d.A_n(0), d.B_n(0));
    REQUIRE(e.supported);
    CHECK(e.sorted() == std::vector<Rational>{Rational(-1, 3), Rational(2, 3), Rational(8, 3)});
    auto s = classify(d, e, 14);
    CHECK(s.tag == Tag::Apparent);
    for (const auto& y : s.basis) CHECK(annihilates(d, y));
}

TEST_CASE("symbolic obstruction is linear in a free coefficient") {
    // x^3 L with exponents 0, 1, 2 and A_1 = p: R_1(0) vanishes identically, R_2 depends on p.
    MPoly p = MPoly::var(0);
    OdeData<MPoly> d{Form::Interior, QSeries<MPoly>::from_coeffs({MPoly(0), p}, 6),
                     QSeries<MPoly>::from_coeffs({MPoly(0), MPoly(0), MPoly(1)}, 6)};
    auto r = recursion<MPoly, MPoly>(d, MPoly(0), 4);
    REQUIRE(r.obstruction.count(1));
    REQUIRE(r.obstruction.count(2));
    CHECK(r.obstruction.at(1).is_zero());
    CHECK(r.obstruction.at(2) == MPoly(1));
    auto r2 = recursion<MPoly, MPoly>(d, MPoly(1), 4);
    CHECK(r2.obstruction.at(1) == p);
    CHECK_THROWS(recursion<MPoly, MPoly>(d, MPoly(0), 7));
}

TEST_CASE("every branch yields solutions (property)") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coef(-4, 4), shape(0, 5), gap(0, 3), sparse(0, 2);
    std::map<std::string, int> hits;
    for (int trial = 0; trial < 120; ++trial) {
        Form form = trial % 2 ? Form::Cusp : Form::Interior;
        long m1 = gap(rng), m2 = gap(rng);
        if (shape(rng) == 0) m1 = 0;
        if (shape(rng) == 0) m2 = 0;
        long sum = form == Form::Interior ? 3 : 0;
        // k1 + (k1+m1) + (k1+m1+m2) = sum requires divisibility; otherwise shift by x^k.
        long base = sum - 2 * m1 - m2;
        if (base % 3 != 0) continue;
        long k1 = base / 3;
        std::vector<long> k{k1, k1 + m1, k1 + m1 + m2};
        std::vector<Rational> A(13), B(13);
        for (size_t n = 1; n < A.size(); ++n) {
            A[n] = sparse(rng) ? Rational(0) : Rational(coef(rng), 1 + sparse(rng));
            B[n] = sparse(rng) ? Rational(0) : Rational(coef(rng), 1 + sparse(rng));
        }
        auto d = ode_with_roots(form, k, A, B);
        auto e = indicial(form, d.A_n(0), d.B_n(0));
        REQUIRE(e.supported);
        auto s = classify(d, e, 12);
        hits[s.theorem]++;
        REQUIRE(s.basis.size() == 3);
        for (const auto& y : s.basis) CHECK(annihilates(d, y));
        CHECK(independent_leads(s));
        if (s.tag == Tag::Apparent)
            for (const auto& y : s.basis) CHECK(y.is_log_free());
        if (s.tag == Tag::CompletelyNotApparent) CHECK(has_log_squared(s));
        if (s.tag == Tag::NotApparent) CHECK_FALSE(has_log_squared(s));
    }
    MESSAGE("branches exercised: " << hits.size());
    CHECK(hits.size() >= 6);
}

TEST_CASE("forced branches with exact witnesses") {
    // Distinct 0,1,2 with R_1(0) != 0 and R_1(1) = 0: A_1 = 1.
    std::vector<Rational> A(9, Rational(0)), B(9, Rational(0));
    A[1] = Rational(1);
    auto d = ode_with_roots(Form::Interior, {0, 1, 2}, A, B);
    auto e = indicial(d.form, d.A_n(0), d.B_n(0));
    auto s = classify(d, e, 8);
    CHECK(s.witness.at("R_m1(k1)") == Rational(0));
    CHECK(s.witness.at("R_m2(k2)") == Rational(1));
    for (const auto& y : s.basis) CHECK(annihilates(d, y));
    CHECK(s.tag == Tag::NotApparent);

    // Triple root at the cusp: y0, y1, y2.
    std::vector<Rational> C(9, Rational(0)), D(9, Rational(0));
    D[1] = Rational(1);
    auto t = ode_with_roots(Form::Cusp, {0, 0, 0}, C, D);
    auto st = classify(t, indicial(t.form, t.A_n(0), t.B_n(0)), 8);
    CHECK(st.tag == Tag::CompletelyNotApparent);
    CHECK(st.basis[2].degree() == 2);
    for (const auto& y : st.basis) CHECK(annihilates(t, y));
}
