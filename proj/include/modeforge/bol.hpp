#pragma once

#include "algebra.hpp"
#include "mode.hpp"
#include "modforms.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modeforge::bol {

using Series = QSeries<Rational>;
using CSeries = QSeries<CPoly>;
using Mat3 = std::array<std::array<Rational, 3>, 3>;

enum class BolTag { Irreducible, Trivial };

inline std::string bol_tag_name(BolTag t) { return t == BolTag::Irreducible ? "irreducible" : "trivial"; }

// Smallest exponent at each singular point.
struct KappaData {
    Rational inf, i, rho;
    std::vector<std::pair<Rational, Rational>> points;  // (t, kappa1)
};

inline int ell_of(const KappaData& k) {
    Rational l = Rational(-2) - k.inf * Rational(12) - k.rho * Rational(4) - k.i * Rational(6);
    for (const auto& [t, kap] : k.points) l -= kap * Rational(12);
    if (!l.is_integer()) throw std::invalid_argument("bol: non-integral weight l = " + l.str());
    long v = l.to_long();
    if (v % 2 != 0) throw std::invalid_argument("bol: odd weight l = " + l.str());
    return static_cast<int>(v);
}

// F up to a constant: F_true = F * prod base^exponent over `scale`.
struct Multiplier {
    Series F;
    int ell = 0;
    std::vector<std::pair<Rational, Rational>> scale;
};

inline Series delta_power(const Rational& a, long order) {
    return modforms::detail::euler(order).pow_rational(a * Rational(24)).shift(a).truncate(Rational(order));
}

inline Multiplier multiplier_F(const KappaData& k, long order) {
    if (!k.rho.is_integer()) throw std::invalid_argument("multiplier_F: exponent at rho must be an integer, got " + k.rho.str());
    Multiplier m;
    m.ell = ell_of(k);
    long n = order + 2;
    Series F = delta_power(-k.inf, n);
    if (!k.rho.is_zero()) F = F * modforms::E4(n).pow(-k.rho.to_long());
    if (!k.i.is_zero()) F = F * modforms::E6(n).pow_rational(-k.i);
    for (const auto& [t, kap] : k.points) {
        if (kap.is_zero()) continue;
        Rational lead = Rational(1) - t;
        Series Ft = (modforms::E4(n).pow(3) - modforms::E6(n).pow(2) * t) * (Rational(1) / lead);
        F = F * Ft.pow_rational(-kap);
        m.scale.emplace_back(lead, -kap);
    }
    m.F = F.truncate(Rational(order));
    return m;
}

inline KappaData kappa_data(const std::vector<mode::PointReport>& reports) {
    KappaData k;
    for (const auto& r : reports) {
        if (!r.exponents.supported) throw std::invalid_argument("bol: unsupported exponents at " + r.name);
        Rational k1 = r.exponents.sorted()[0];
        if (r.cusp) k.inf = k1;
        else if (r.point->tag == taylor::PointTag::I) k.i = k1;
        else if (r.point->tag == taylor::PointTag::Rho) k.rho = k1;
        else k.points.emplace_back(*r.point->t.as_rational(), k1);
    }
    return k;
}

// Parity of {3 kappa_i}: one odd entry -> irreducible, three -> trivial.
inline BolTag classify_bol(const frobenius::LocalExponents& at_i) {
    int odd = 0;
    for (const auto& k : at_i.sorted()) {
        Rational t = k * Rational(3);
        if (!t.is_integer()) throw std::invalid_argument("classify_bol: exponent at i outside (1/3)Z");
        if (t.to_long() % 2 != 0) ++odd;
    }
    if (odd == 1) return BolTag::Irreducible;
    if (odd == 3) return BolTag::Trivial;
    throw std::invalid_argument("classify_bol: exponents at i violate the sum rule");
}

inline Mat3 identity3() {
    Mat3 m{};
    for (int i = 0; i < 3; ++i) m[i][i] = Rational(1);
    return m;
}

inline Mat3 mul3(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

inline Mat3 pow3(const Mat3& a, int e) {
    Mat3 r = identity3();
    for (int i = 0; i < e; ++i) r = mul3(r, a);
    return r;
}

// Coefficients (tr, e2, det) of x^3 - tr x^2 + e2 x - det.
inline std::array<Rational, 3> char_poly(const Mat3& m) {
    Rational tr = m[0][0] + m[1][1] + m[2][2];
    Rational e2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2] -
                  m[1][2] * m[2][1];
    return {tr, e2, det3(m)};
}

// Root of unity exp(2 pi i * turn), turn reduced to [0, 1).
struct Turn {
    Rational turn;
    std::complex<double> value() const {
        double a = 2 * std::numbers::pi * turn.to_double();
        return {std::cos(a), std::sin(a)};
    }
};

inline Turn make_turn(const Rational& r) {
    Rational t = r - Rational(r.floor());
    return {t};
}

inline bool spectrum_matches(const Mat3& m, const std::vector<Turn>& eig, double tol = 1e-12) {
    using C = std::complex<double>;
    C a = eig[0].value(), b = eig[1].value(), c = eig[2].value();
    auto cp = char_poly(m);
    C tr = a + b + c, e2 = a * b + a * c + b * c, d = a * b * c;
    return std::abs(tr - cp[0].to_double()) < tol && std::abs(e2 - cp[1].to_double()) < tol &&
           std::abs(d - cp[2].to_double()) < tol;
}

struct BolData {
    int ell = 0;
    BolTag tag = BolTag::Irreducible;
    Mat3 S_hat{}, R_hat{}, T_hat{};
    std::vector<Turn> S_eigen, R_eigen;  // from the exponent differences
};

inline Mat3 canonical_S() {
    Mat3 s{};
    s[0] = {Rational(0), Rational(0), Rational(1)};
    s[1] = {Rational(2), Rational(-1), Rational(2)};
    s[2] = {Rational(1), Rational(0), Rational(0)};
    return s;
}

inline Mat3 canonical_R() {
    Mat3 r{};
    r[0] = {Rational(0), Rational(0), Rational(1)};
    r[1] = {Rational(1), Rational(0), Rational(0)};
    r[2] = {Rational(0), Rational(1), Rational(0)};
    return r;
}

// Eigenvalues e^{-pi i (l + 2k)/3} of R_hat (rho differences) and i^{-l-2k} of S_hat (i differences).
inline std::vector<Turn> r_eigen(int ell, const frobenius::LocalExponents& rho) {
    auto e = rho.sorted();
    std::vector<Turn> out;
    for (const auto& k : e) out.push_back(make_turn(-(Rational(ell) + (k - e[0]) * Rational(2)) / Rational(6)));
    return out;
}

inline std::vector<Turn> s_eigen(int ell, const frobenius::LocalExponents& at_i) {
    auto e = at_i.sorted();
    std::vector<Turn> out;
    for (const auto& k : e) out.push_back(make_turn(-(Rational(ell) + (k - e[0]) * Rational(2)) / Rational(4)));
    return out;
}

inline BolData canonical_matrices(BolTag tag, int ell, const frobenius::LocalExponents& at_i,
                                  const frobenius::LocalExponents& at_rho) {
    BolData b;
    b.ell = ell;
    b.tag = tag;
    if (tag == BolTag::Trivial) {
        b.S_hat = b.R_hat = b.T_hat = identity3();
        if (ell % 12 != 0) throw std::invalid_argument("canonical_matrices: trivial representation needs 12 | l");
    } else {
        b.S_hat = canonical_S();
        b.R_hat = canonical_R();
        b.T_hat = mul3(b.S_hat, b.R_hat);
    }
    b.S_eigen = s_eigen(ell, at_i);
    b.R_eigen = r_eigen(ell, at_rho);
    if (!spectrum_matches(b.S_hat, b.S_eigen) || !spectrum_matches(b.R_hat, b.R_eigen))
        throw std::invalid_argument("canonical_matrices: eigenvalues from the exponents disagree with the matrix spectrum");
    return b;
}

// Group relations S^2 = R^3 = I, T = S R, det = 1.
inline bool relations_hold(const BolData& b) {
    Mat3 I = identity3();
    return pow3(b.S_hat, 2) == I && pow3(b.R_hat, 3) == I && b.T_hat == mul3(b.S_hat, b.R_hat) &&
           det3(b.S_hat) == Rational(1) && det3(b.R_hat) == Rational(1) && det3(b.T_hat) == Rational(1);
}

struct Analysis {
    std::vector<mode::PointReport> reports;
    KappaData kappa;
    BolData data;
};

inline const mode::PointReport& find_report(const std::vector<mode::PointReport>& r, taylor::PointTag tag) {
    for (const auto& p : r)
        if (!p.cusp && p.point->tag == tag) return p;
    throw std::invalid_argument("bol: missing report at an elliptic point");
}

inline Analysis analyze(const mode::ModeData& m) {
    if (!m.closed) throw std::invalid_argument("bol: closed form of the MODE is required");
    Analysis a;
    a.reports = mode::exponents_everywhere(m);
    a.kappa = kappa_data(a.reports);
    const auto& ri = find_report(a.reports, taylor::PointTag::I);
    const auto& rr = find_report(a.reports, taylor::PointTag::Rho);
    a.data = canonical_matrices(classify_bol(ri.exponents), ell_of(a.kappa), ri.exponents, rr.exponents);
    return a;
}

// Recovered depth-2 decomposition F y_+ = m2 E2^2/(6c)^2 + m1 E2/(6c) + m0.
struct Recovered {
    CSeries m0, m1, m2;
    int w0 = 0, w1 = 0, w2 = 0;
    Rational n, m;  // corrections nu = c n, mu = c^2 m
    long order = 0;
};

namespace detail {

inline long lcm_l(long a, long b) { return a / std::gcd(a, b) * b; }

// Rows of sum_j x_j cols[j] + rhs = 0 at every exponent on the common grid through `hi`.
inline void add_equations(Matrix& a, std::vector<Rational>& b, const std::vector<Series>& cols, const Series& rhs,
                          const Rational& hi) {
    long N = rhs.denom();
    Rational lo = rhs.is_zero() ? hi : rhs.lead_exp();
    for (const auto& c : cols) {
        N = lcm_l(N, c.denom());
        if (!c.is_zero()) lo = std::min(lo, c.lead_exp());
    }
    long s = (lo * Rational(N)).floor().get_si(), e = (hi * Rational(N)).floor().get_si();
    for (long k = s; k <= e; ++k) {
        Rational x(k, N);
        std::vector<Rational> row;
        for (const auto& c : cols) row.push_back(c.coeff(x));
        a.push_back(std::move(row));
        b.push_back(-rhs.coeff(x));
    }
}

inline Series zero_like(long order) { return Series::zero(order); }

} // namespace detail

inline Recovered recover_quasimodular(const mode::ModeData& md, const Multiplier& F, long order) {
    auto cb = mode::cusp_basis(md);
    if (!cb.normalized) throw std::invalid_argument("recover_quasimodular: MODE is not completely not apparent at the cusp");
    const auto& b1 = cb.local.basis[1];
    const auto& b2 = cb.local.basis[2];
    Series s3 = b1.coeff(0), sb = b2.coeff(1), sc = b2.coeff(0), yp = cb.y_plus;
    Series E2 = modforms::E2(order + 2);
    Series Fs_c = F.F * sc * Rational(1, 4), Fs3 = F.F * s3 * Rational(1, 2), Fy = F.F * yp, Fs_b = F.F * sb * Rational(1, 2);
    Rational hi = std::min({Fs_c.valid(), Fs3.valid(), Fy.valid(), Fs_b.valid(), Rational(order)});
    if (hi < Rational(order)) throw std::invalid_argument("recover_quasimodular: MODE known to insufficient order");
    int l = F.ell;
    auto B2 = l - 2 >= 0 ? modforms::basis(l - 2, order + 2) : std::vector<modforms::BasisElement>{};
    auto B1 = l >= 0 ? modforms::basis(l, order + 2) : std::vector<modforms::BasisElement>{};
    auto B0 = l + 2 >= 0 ? modforms::basis(l + 2, order + 2) : std::vector<modforms::BasisElement>{};
    // unknowns: n, m, a (B2), b (B1), e (B0)
    size_t na = B2.size(), nb = B1.size(), ne = B0.size(), N = 2 + na + nb + ne;
    Series Z = detail::zero_like(order + 2);
    auto cols_for = [&](std::vector<Series> v) {
        v.resize(N, Z);
        return v;
    };
    Matrix a;
    std::vector<Rational> rhs;
    // G2 = Fs_c + n Fs3 + m Fy - sum a B2 = 0
    {
        std::vector<Series> c{Fs3, Fy};
        for (const auto& x : B2) c.push_back(-x.series);
        detail::add_equations(a, rhs, cols_for(c), Fs_c, hi);
    }
    // M1 = Fs_b + n Fy - (1/3) E2 sum a B2 - sum b B1 = 0
    {
        std::vector<Series> c{Fy, Z};
        for (const auto& x : B2) c.push_back(-(E2 * x.series) * Rational(1, 3));
        for (const auto& x : B1) c.push_back(-x.series);
        detail::add_equations(a, rhs, cols_for(c), Fs_b, hi);
    }
    // F y_+ - E2^2 sum a B2 / 36 - E2 sum b B1 / 6 - sum e B0 = 0
    {
        std::vector<Series> c{Z, Z};
        for (const auto& x : B2) c.push_back(-(E2 * E2 * x.series) * Rational(1, 36));
        for (const auto& x : B1) c.push_back(-(E2 * x.series) * Rational(1, 6));
        for (const auto& x : B0) c.push_back(-x.series);
        detail::add_equations(a, rhs, cols_for(c), Fy, hi);
    }
    bool unique = false;
    auto x = solve(a, rhs, &unique);
    if (!x) throw std::runtime_error("modularity certification failed");
    if (!unique) throw std::runtime_error("ambiguous recovery");
    Recovered r;
    r.n = (*x)[0];
    r.m = (*x)[1];
    std::vector<Rational> ca(x->begin() + 2, x->begin() + 2 + static_cast<long>(na));
    std::vector<Rational> cbv(x->begin() + 2 + static_cast<long>(na), x->begin() + 2 + static_cast<long>(na + nb));
    std::vector<Rational> ce(x->begin() + 2 + static_cast<long>(na + nb), x->end());
    Rational o(order);
    Series G2 = na ? modforms::combination(B2, ca).truncate(o) : Series::zero(order);
    Series M1 = nb ? modforms::combination(B1, cbv).truncate(o) : Series::zero(order);
    Series M0 = ne ? modforms::combination(B0, ce).truncate(o) : Series::zero(order);
    CPoly c = CPoly::c();
    r.m2 = quasi::to_c(G2).scale(c * c);
    r.m1 = quasi::to_c(M1).scale(c);
    r.m0 = quasi::to_c(M0);
    r.w2 = l - 2;
    r.w1 = l;
    r.w0 = l + 2;
    r.order = order;
    // certificate: reassemble F y_+ over Q[c]
    CSeries e2 = quasi::to_c(E2.truncate(o));
    CPoly k = (c * Rational(6)).inv();
    CSeries back = (r.m2 * e2 * e2).scale(k * k) + (r.m1 * e2).scale(k) + r.m0;
    if (!(back == quasi::to_c(Fy.truncate(o)))) throw std::logic_error("recover_quasimodular: certificate failed");
    return r;
}

// Trivial tag: F y is a modular form of weight l for each cusp-basis solution.
inline bool certify_trivial(const mode::ModeData& md, const Multiplier& F, long order) {
    auto loc = mode::classify_cusp(md);
    for (const auto& y : loc.basis) {
        if (!y.is_log_free()) return false;
        Series g = (F.F * y.coeff(0)).truncate(Rational(order));
        if (g.valid() < Rational(order)) return false;
        if (!modforms::membership(g, F.ell)) return false;
    }
    return true;
}

} // namespace modeforge::bol
