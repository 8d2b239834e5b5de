#pragma once

#include "algebra.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modeforge::taylor {

// Variable ids used by local expansions: B = E4(z0), C = E6(z0).
inline constexpr int kB = 0;
inline constexpr int kC = 1;

inline const std::vector<std::string>& bc_names() {
    static const std::vector<std::string> n{"B", "C"};
    return n;
}

enum class PointTag { I, Rho, Generic };

struct PointClass {
    PointTag tag = PointTag::Generic;
    Frac t;  // only for Generic; may be a symbol

    int stabilizer() const { return tag == PointTag::I ? 2 : tag == PointTag::Rho ? 3 : 1; }
    static PointClass i() { return {PointTag::I, Frac()}; }
    static PointClass rho() { return {PointTag::Rho, Frac()}; }
    static PointClass generic(const Frac& t) {
        if (auto r = t.as_rational(); r && (r->is_zero() || *r == Rational(1)))
            throw std::invalid_argument("taylor: generic point needs t outside {0, 1}");
        return {PointTag::Generic, t};
    }
    // Canonical (B, C): (1, 0) at i, (0, 1) at rho, (t, t) otherwise so that t = B^3/C^2.
    Frac B() const { return tag == PointTag::I ? Frac(1) : tag == PointTag::Rho ? Frac(0) : t; }
    Frac C() const { return tag == PointTag::I ? Frac(0) : tag == PointTag::Rho ? Frac(1) : t; }
    std::string name(const std::vector<std::string>& vars = {}) const {
        if (tag == PointTag::I) return "i";
        if (tag == PointTag::Rho) return "rho";
        return "t=" + t.str(vars);
    }
};

struct LocalExpansion {
    int weight = 0;
    std::vector<MPoly> coeffs;  // coefficient of u^n
};

// Weight of a monomial B^a C^b.
inline int bc_weight(const Mono& m) {
    int a = m.size() > 0 ? m[0] : 0;
    int b = m.size() > 1 ? m[1] : 0;
    return 4 * a + 6 * b;
}

inline bool is_homogeneous(const MPoly& p, int k) {
    for (const auto& [m, c] : p.terms())
        if (bc_weight(m) != k) return false;
    return true;
}

// Serre derivative as a derivation on Q[B, C]: dB = -C/3, dC = -B^2/2.
inline MPoly serre(const MPoly& p) {
    MPoly B = MPoly::var(kB), C = MPoly::var(kC);
    return p.derivative(kB) * (C * Rational(-1, 3)) + p.derivative(kC) * (B * B * Rational(-1, 2));
}

// Coefficients of u^n, n = 0..order, of the local expansion of the weight-k
// form given as a polynomial in E4 = B and E6 = C.
inline LocalExpansion taylor_expand(const MPoly& f, int k, int order) {
    if (!is_homogeneous(f, k)) throw std::invalid_argument("taylor: expression is not homogeneous of the given weight");
    if (order < 0) throw std::invalid_argument("taylor: negative order");
    LocalExpansion out;
    out.weight = k;
    MPoly E4 = MPoly::var(kB);
    std::vector<MPoly> fn;
    fn.push_back(f);
    if (order >= 1) fn.push_back(serre(f));
    for (int n = 1; n < order; ++n) {
        MPoly next = serre(fn[static_cast<size_t>(n)]) -
                     fn[static_cast<size_t>(n - 1)] * E4 * Rational(static_cast<long>(n) * (n + k - 1), 144);
        fn.push_back(std::move(next));
    }
    Rational fact(1);
    for (int n = 0; n <= order; ++n) {
        if (n > 0) fact *= Rational(n);
        out.coeffs.push_back(fn[static_cast<size_t>(n)] * fact.inv());
    }
    return out;
}

inline bool homogeneity_holds(const LocalExpansion& e) {
    for (size_t n = 0; n < e.coeffs.size(); ++n)
        if (!is_homogeneous(e.coeffs[n], e.weight + 2 * static_cast<int>(n))) return false;
    return true;
}

// At an elliptic point of order e the coefficient of u^n can only be nonzero
// when k + 2n is divisible by 2e; checked after specializing (B, C).
inline bool parity_filter_check(const LocalExpansion& exp, int e) {
    std::map<int, Rational> at;
    if (e == 2) at = {{kB, Rational(1)}, {kC, Rational(0)}};
    else if (e == 3) at = {{kB, Rational(0)}, {kC, Rational(1)}};
    else return true;
    for (size_t n = 0; n < exp.coeffs.size(); ++n) {
        int w = exp.weight + 2 * static_cast<int>(n);
        if (w % (2 * e) != 0 && !exp.coeffs[n].substitute(at).is_zero()) return false;
    }
    return true;
}

// Evaluate a polynomial in (B, C) at ring values.
template <class K>
K eval_bc(const MPoly& p, const K& B, const K& C) {
    K out(0);
    for (const auto& [m, c] : p.terms()) {
        K v = K(c);
        int a = m.size() > 0 ? m[0] : 0, b = m.size() > 1 ? m[1] : 0;
        for (int i = 0; i < a; ++i) v = v * B;
        for (int i = 0; i < b; ++i) v = v * C;
        out = out + v;
    }
    return out;
}

template <class K>
QSeries<K> specialize(const LocalExpansion& e, const K& B, const K& C) {
    std::vector<K> c;
    for (const auto& m : e.coeffs) c.push_back(eval_bc(m, B, C));
    return QSeries<K>::from_coeffs(std::move(c), static_cast<long>(e.coeffs.size()) - 1);
}

// Parameters of the general weight-4 / weight-6 ansatz with poles at i, rho
// and generic points z_j (F_j = E4^3 - t_j E6^2).
struct GenericParams {
    Frac t;
    Frac r2, r1;      // Q: E4 D0^2/F^2, E4 D0/F
    Frac s3, s2, s1;  // R: E6 D0^k/F^k
};

struct Ansatz {
    Frac r_inf, s_inf;
    Frac r_i2, s_i3, s_i1;
    Frac r_rho2, s_rho3;
    std::vector<GenericParams> points;
};

struct LocalOde {
    PointClass point;
    QSeries<Frac> Q;  // sum_{n >= -2} a_n x^n
    QSeries<Frac> B;  // 1/2 Q' + R = sum_{n >= -3} b_n x^n

    Frac a(long n) const { return Q.coeff(n); }
    Frac b(long n) const { return B.coeff(n); }
};

namespace detail {

struct Generator {
    std::string name;
    QSeries<Frac> series;
    int max_pole;
};

inline void check_pole(const Generator& g) {
    if (g.series.is_zero()) return;
    if (g.series.lead_exp() < Rational(-g.max_pole))
        throw std::invalid_argument("local_ode_data: generator " + g.name + " has a pole of order " +
                                    (-g.series.lead_exp()).str() + " beyond the Fuchsian bound");
}

} // namespace detail

// Local Laurent data (Q~, combined R~) at `point` through x^order.
inline LocalOde local_ode_data(const Ansatz& an, const PointClass& point, int order) {
    int work = order + 12;
    auto e4x = taylor_expand(MPoly::var(kB), 4, work);
    auto e6x = taylor_expand(MPoly::var(kC), 6, work);
    Frac B = point.B(), C = point.C();
    QSeries<Frac> E4 = specialize(e4x, B, C), E6 = specialize(e6x, B, C);
    QSeries<Frac> D0 = E4.pow(3) - E6.pow(2);
    auto inv = [](const QSeries<Frac>& s, const std::string& what) {
        if (s.is_zero()) throw std::invalid_argument("local_ode_data: " + what + " vanishes identically at the point");
        return s.inv();
    };

    std::vector<std::pair<Frac, detail::Generator>> q_terms, r_terms;
    auto addq = [&](const Frac& p, std::string n, QSeries<Frac> s) {
        if (p.is_zero()) return;
        detail::Generator g{std::move(n), std::move(s), 2};
        detail::check_pole(g);
        q_terms.emplace_back(p, std::move(g));
    };
    auto addr = [&](const Frac& p, std::string n, QSeries<Frac> s) {
        if (p.is_zero()) return;
        detail::Generator g{std::move(n), std::move(s), 3};
        detail::check_pole(g);
        r_terms.emplace_back(p, std::move(g));
    };

    addq(an.r_inf, "E4", E4);
    addr(an.s_inf, "E6", E6);
    if (!an.r_i2.is_zero() || !an.s_i3.is_zero() || !an.s_i1.is_zero()) {
        QSeries<Frac> iE6 = inv(E6, "E6");
        addq(an.r_i2, "E4*Delta0/E6^2", E4 * D0 * iE6 * iE6);
        addr(an.s_i3, "Delta0^2/E6^3", D0 * D0 * iE6 * iE6 * iE6);
        addr(an.s_i1, "Delta0/E6", D0 * iE6);
    }
    if (!an.r_rho2.is_zero() || !an.s_rho3.is_zero()) {
        QSeries<Frac> iE4 = inv(E4, "E4");
        addq(an.r_rho2, "Delta0/E4^2", D0 * iE4 * iE4);
        addr(an.s_rho3, "E6*Delta0/E4^3", E6 * D0 * iE4 * iE4 * iE4);
    }
    for (size_t j = 0; j < an.points.size(); ++j) {
        const auto& gp = an.points[j];
        std::string tag = "F" + std::to_string(j + 1);
        QSeries<Frac> F = E4.pow(3) - E6.pow(2).scale(gp.t);
        QSeries<Frac> ratio = D0 * inv(F, tag);
        addq(gp.r2, "E4*Delta0^2/" + tag + "^2", E4 * ratio * ratio);
        addq(gp.r1, "E4*Delta0/" + tag, E4 * ratio);
        addr(gp.s3, "E6*Delta0^3/" + tag + "^3", E6 * ratio * ratio * ratio);
        addr(gp.s2, "E6*Delta0^2/" + tag + "^2", E6 * ratio * ratio);
        addr(gp.s1, "E6*Delta0/" + tag, E6 * ratio);
    }

    auto combine = [&](const std::vector<std::pair<Frac, detail::Generator>>& terms) {
        QSeries<Frac> s = QSeries<Frac>::zero(order);
        for (const auto& [p, g] : terms) s = s + g.series.scale(p).truncate(Rational(order));
        return s;
    };
    QSeries<Frac> Qx = combine(q_terms);
    QSeries<Frac> Rx = combine(r_terms);
    if (Qx.valid() < Rational(order) || Rx.valid() < Rational(order))
        throw std::logic_error("local_ode_data: insufficient working precision");
    QSeries<Frac> dQ = Qx.dq().shift(Rational(-1));  // d/dx
    QSeries<Frac> Bx = (dQ * Rational(1, 2) + Rx).truncate(Rational(order - 1));
    return {point, Qx, Bx};
}

} // namespace modeforge::taylor
