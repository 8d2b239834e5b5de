#pragma once

#include "algebra.hpp"
#include "taylor.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace modeforge::frobenius {

// Third-order operator in Euler form,
//   L = P0(theta) + A(x) theta + B(x),  theta = x d/dx,
// with P0(s) = s(s-1)(s-2) at interior points (x^3 times the equation) and
// P0(s) = s^3 at a cusp. A and B are power series with A(0), B(0) finite.
enum class Form { Interior, Cusp };

template <class T>
struct OdeData {
    Form form = Form::Interior;
    QSeries<T> A;
    QSeries<T> B;

    T A_n(long n) const { return n <= A.valid().floor().get_si() ? A.coeff(n) : throw_range(); }
    T B_n(long n) const { return n <= B.valid().floor().get_si() ? B.coeff(n) : throw_range(); }
    long max_n() const { return std::min(A.valid().floor().get_si(), B.valid().floor().get_si()); }

private:
    static T throw_range() { throw std::out_of_range("frobenius: local data known to insufficient order"); }
};

// x^2 Q~ and x^3 (Q~'/2 + R~) from local Laurent data.
inline OdeData<Frac> from_local(const taylor::LocalOde& d) {
    return {Form::Interior, d.Q.shift(Rational(2)), d.B.shift(Rational(3))};
}

// theta-form at a cusp from q-expansions of Q and R: A = Q, B = theta(Q)/2 + R.
template <class T>
OdeData<T> from_cusp(const QSeries<T>& Q, const QSeries<T>& R) {
    return {Form::Cusp, Q, Q.dq() * Rational(1, 2) + R};
}

template <class T, class F>
OdeData<std::invoke_result_t<F, const T&>> convert(const OdeData<T>& d, F f) {
    return {d.form, d.A.map(f), d.B.map(f)};
}

// Indicial polynomial value P0(s) + A0 s + B0 in any ring U containing T.
template <class U, class T>
U indicial_value(Form form, const T& A0, const T& B0, const U& s) {
    U p = form == Form::Interior ? s * (s - U(1)) * (s - U(2)) : s * s * s;
    return p + U(A0) * s + U(B0);
}

inline UPoly indicial_poly(Form form, const Rational& A0, const Rational& B0) {
    UPoly x = UPoly::x();
    UPoly p0 = form == Form::Interior ? x * (x - UPoly(Rational(1))) * (x - UPoly(Rational(2))) : x * x * x;
    return p0 + x * A0 + UPoly(B0);
}

struct LocalExponents {
    Rational k1, k2, k3;  // sorted
    long m1 = 0, m2 = 0;  // k2 - k1, k3 - k2
    bool supported = true;
    std::string note;
    std::vector<Rational> sorted() const { return {k1, k2, k3}; }
};

// Roots of the indicial cubic; `supported` is false unless all roots lie
// in (1/3)Z with integer differences.
inline LocalExponents indicial(Form form, const Rational& A0, const Rational& B0) {
    UPoly f = indicial_poly(form, A0, B0);
    auto roots = f.rational_roots();
    std::vector<Rational> r;
    for (const auto& [v, m] : roots)
        for (int i = 0; i < m; ++i) r.push_back(v);
    LocalExponents e;
    if (r.size() != 3) {
        e.supported = false;
        e.note = "unsupported configuration: indicial polynomial " + f.str("s") + " has non-rational roots";
        return e;
    }
    std::sort(r.begin(), r.end());
    e.k1 = r[0];
    e.k2 = r[1];
    e.k3 = r[2];
    for (const auto& v : r)
        if (!(v * Rational(3)).is_integer()) {
            e.supported = false;
            e.note = "unsupported configuration: exponent " + v.str() + " not in (1/3)Z";
        }
    if (!(e.k2 - e.k1).is_integer() || !(e.k3 - e.k2).is_integer()) {
        e.supported = false;
        e.note = "unsupported configuration: exponent differences are not integers";
        return e;
    }
    e.m1 = (e.k2 - e.k1).to_long();
    e.m2 = (e.k3 - e.k2).to_long();
    return e;
}

inline LocalExponents make_exponents(std::vector<Rational> k) {
    std::sort(k.begin(), k.end());
    LocalExponents e;
    e.k1 = k[0];
    e.k2 = k[1];
    e.k3 = k[2];
    if (!(e.k2 - e.k1).is_integer() || !(e.k3 - e.k2).is_integer())
        throw std::invalid_argument("frobenius: exponent differences must be integers");
    e.m1 = (e.k2 - e.k1).to_long();
    e.m2 = (e.k3 - e.k2).to_long();
    return e;
}

namespace detail {
template <class T>
const T& value_of(const T& v) { return v; }
template <class T>
const T& value_of(const Jet<T>& v) { return v.v[0]; }
} // namespace detail

template <class U>
struct Recursion {
    std::vector<U> c;                // c_0 .. c_nmax
    std::map<long, U> obstruction;   // R_n at resonances
};

// Solves f(alpha+n) c_n + sum_{k<n} [(alpha+k) A_{n-k} + B_{n-k}] c_k = 0.
// At resonances (f(alpha+n) = 0) the sum is recorded as R_n and c_n is taken
// from `choices` (default 0). U is T or Jet<T>.
template <class U, class T>
Recursion<U> recursion(const OdeData<T>& d, const U& alpha, long nmax, const std::map<long, T>& choices = {}) {
    if (nmax > d.max_n()) throw std::out_of_range("frobenius: requested coefficients beyond the known local data");
    Recursion<U> out;
    out.c.reserve(static_cast<size_t>(nmax + 1));
    out.c.push_back(U(1));
    T A0 = d.A_n(0), B0 = d.B_n(0);
    std::vector<T> A(static_cast<size_t>(nmax + 1)), B(static_cast<size_t>(nmax + 1));
    for (long n = 0; n <= nmax; ++n) {
        A[static_cast<size_t>(n)] = d.A_n(n);
        B[static_cast<size_t>(n)] = d.B_n(n);
    }
    for (long n = 1; n <= nmax; ++n) {
        U s(0);
        for (long k = 0; k < n; ++k) {
            const T& a = A[static_cast<size_t>(n - k)];
            const T& b = B[static_cast<size_t>(n - k)];
            if (is_zero(a) && is_zero(b)) continue;
            U coef = (alpha + U(T(Rational(k)))) * U(a) + U(b);
            s = s + coef * out.c[static_cast<size_t>(k)];
        }
        U fn = indicial_value<U>(d.form, A0, B0, alpha + U(T(Rational(n))));
        if (is_zero(detail::value_of(fn))) {
            out.obstruction[n] = s;
            auto it = choices.find(n);
            out.c.push_back(it == choices.end() ? U(0) : U(it->second));
        } else {
            out.c.push_back(-(s * inverse(fn)));
        }
    }
    return out;
}

enum class Tag { Apparent, NotApparent, CompletelyNotApparent };

inline std::string tag_name(Tag t) {
    switch (t) {
        case Tag::Apparent: return "apparent";
        case Tag::NotApparent: return "not apparent";
        case Tag::CompletelyNotApparent: return "completely not apparent";
    }
    return "?";
}

template <class T>
struct LocalStructure {
    LocalExponents exponents;
    Tag tag = Tag::Apparent;
    std::string theorem;  // which branch of the case analysis was used
    std::vector<LogSeries<T>> basis;
    std::map<std::string, T> witness;
};

namespace detail {

template <class T>
QSeries<T> series_at(const Rational& kappa, const std::vector<T>& c, long nmax) {
    return QSeries<T>::from_coeffs(c, nmax).shift(kappa);
}

template <class T>
struct Expanded {
    QSeries<T> s0, s1, s2;  // sum c_n x^{k+n}, sum c_n' x^{k+n}, sum c_n'' x^{k+n}
    std::map<long, Jet<T>> obstruction;

    LogSeries<T> y0() const { return LogSeries<T>({s0}, T(1)); }
    LogSeries<T> y1() const { return LogSeries<T>({s1, s0}, T(1)); }
    LogSeries<T> y2() const { return LogSeries<T>({s2, s1 * Rational(2), s0}, T(1)); }
};

template <class T>
Expanded<T> expand(const OdeData<T>& d, const Rational& kappa, long nmax, const std::map<long, T>& choices = {}) {
    Jet<T> alpha(T(kappa), T(1), T(0));
    auto rec = recursion<Jet<T>, T>(d, alpha, nmax, choices);
    std::vector<T> c0, c1, c2;
    for (const auto& j : rec.c) {
        c0.push_back(j.v[0]);
        c1.push_back(j.d1());
        c2.push_back(j.d2());
    }
    return {series_at(kappa, c0, nmax), series_at(kappa, c1, nmax), series_at(kappa, c2, nmax), rec.obstruction};
}

template <class T>
LogSeries<T> lin(const std::vector<std::pair<T, LogSeries<T>>>& parts) {
    LogSeries<T> out(T(1));
    bool first = true;
    for (const auto& [c, y] : parts) {
        if (is_zero(c)) continue;
        LogSeries<T> t = y.scale(c);
        out = first ? t : out + t;
        first = false;
    }
    return out;
}

} // namespace detail

// Solution structure at a regular singular point with integer exponent
// differences, with an explicit basis for every branch.
template <class T>
LocalStructure<T> classify(const OdeData<T>& d, const LocalExponents& e, long nmax,
                           const std::map<Rational, std::map<long, T>>& choices = {}) {
    auto pick = [&](const Rational& k) {
        auto it = choices.find(k);
        return it == choices.end() ? std::map<long, T>{} : it->second;
    };
    T A0 = d.A_n(0), B0 = d.B_n(0);
    auto fp = [&](const Rational& k) {
        Jet<T> v = indicial_value<Jet<T>>(d.form, A0, B0, Jet<T>(T(k), T(1), T(0)));
        return std::pair<T, T>{v.d1(), v.d2()};
    };
    LocalStructure<T> out;
    out.exponents = e;
    const Rational &k1 = e.k1, &k2 = e.k2, &k3 = e.k3;
    auto E3 = detail::expand(d, k3, nmax);
    auto [f3, f3pp] = fp(k3);

    if (e.m1 == 0 && e.m2 == 0) {
        out.theorem = "triple exponent";
        out.tag = Tag::CompletelyNotApparent;
        out.basis = {E3.y0(), E3.y1(), E3.y2()};
        return out;
    }
    if (e.m2 == 0) {
        // k1 < k2 = k3
        auto E1 = detail::expand(d, k1, nmax, pick(k1));
        T R1 = E1.obstruction.at(e.m1).v[0];
        out.witness["R_m1(k1)"] = R1;
        if (is_zero(R1)) {
            out.theorem = "k1 < k2 = k3, R_m1(k1) = 0";
            out.tag = Tag::NotApparent;
            out.basis = {E3.y0(), E3.y1(), E1.y0()};
        } else {
            out.theorem = "k1 < k2 = k3, R_m1(k1) != 0";
            out.tag = Tag::CompletelyNotApparent;
            out.basis = {E3.y0(), E3.y1(), detail::lin<T>({{T(1), E3.y2()}, {-(f3pp * inverse(R1)), E1.y0()}})};
        }
        return out;
    }
    // near k2 the slot m2 is held at zero as a function of alpha
    auto E2 = detail::expand(d, k2, nmax);
    T R2 = E2.obstruction.at(e.m2).v[0];
    T R2p = E2.obstruction.at(e.m2).d1();
    out.witness["R_m2(k2)"] = R2;
    if (e.m1 == 0) {
        // k1 = k2 < k3
        if (is_zero(R2)) {
            auto E2c = detail::expand(d, k2, nmax, pick(k2));
            out.theorem = "k1 = k2 < k3, R_m2(k2) = 0";
            out.tag = Tag::NotApparent;
            out.basis = {E3.y0(), E2c.y0(), detail::lin<T>({{T(1), E2.y1()}, {-(R2p * inverse(f3)), E3.y1()}})};
        } else {
            T iR2 = inverse(R2);
            out.theorem = "k1 = k2 < k3, R_m2(k2) != 0";
            out.tag = Tag::CompletelyNotApparent;
            LogSeries<T> second = detail::lin<T>({{T(1), E3.y1()}, {-(f3 * iR2), E2.y0()}});
            T c0 = -((f3pp * R2 - f3 * R2p * Rational(2)) * iR2 * iR2);
            LogSeries<T> third = detail::lin<T>({{T(1), E3.y2()}, {-(f3 * iR2 * Rational(2)), E2.y1()}, {c0, E2.y0()}});
            out.basis = {E3.y0(), second, third};
        }
        return out;
    }
    // distinct exponents
    auto [f2, f2pp] = fp(k2);
    (void)f2pp;
    auto E1 = detail::expand(d, k1, nmax, pick(k1));
    T R1 = E1.obstruction.at(e.m1).v[0];
    T R13 = E1.obstruction.at(e.m1 + e.m2).v[0];
    out.witness["R_m1(k1)"] = R1;
    out.witness["R_m1+m2(k1)"] = R13;
    if (is_zero(R2)) {
        auto E2c = detail::expand(d, k2, nmax, pick(k2));
        LogSeries<T> second = E2c.y0();
        if (is_zero(R1) && is_zero(R13)) {
            out.theorem = "distinct, R_m2(k2) = R_m1(k1) = R_m1+m2(k1) = 0";
            out.tag = Tag::Apparent;
            out.basis = {E3.y0(), second, E1.y0()};
        } else if (is_zero(R1)) {
            out.theorem = "distinct, R_m2(k2) = 0, R_m1(k1) = 0, R_m1+m2(k1) != 0";
            out.tag = Tag::NotApparent;
            out.basis = {E3.y0(), second, detail::lin<T>({{T(1), E3.y1()}, {-(f3 * inverse(R13)), E1.y0()}})};
        } else {
            out.theorem = "distinct, R_m2(k2) = 0, R_m1(k1) != 0";
            out.tag = Tag::NotApparent;
            T iR1 = inverse(R1);
            T c3 = -((R1 * R2p - f2 * R13) * inverse(f3 * R1));
            out.basis = {E3.y0(), second,
                         detail::lin<T>({{T(1), E2.y1()}, {-(f2 * iR1), E1.y0()}, {c3, E3.y1()}})};
        }
        return out;
    }
    T iR2 = inverse(R2);
    LogSeries<T> second = detail::lin<T>({{T(1), E3.y1()}, {-(f3 * iR2), E2.y0()}});
    if (is_zero(R1) && is_zero(R13)) {
        out.theorem = "distinct, R_m2(k2) != 0, R_m1(k1) = R_m1+m2(k1) = 0";
        out.tag = Tag::NotApparent;
        out.basis = {E3.y0(), second, E1.y0()};
    } else if (is_zero(R1)) {
        out.theorem = "distinct, R_m2(k2) != 0, R_m1(k1) = 0, R_m1+m2(k1) != 0";
        out.tag = Tag::NotApparent;
        out.basis = {E3.y0(), second, detail::lin<T>({{T(1), E1.y0()}, {-(R13 * iR2), E2.y0()}})};
    } else {
        out.theorem = "distinct, R_m2(k2) != 0, R_m1(k1) != 0";
        out.tag = Tag::CompletelyNotApparent;
        T iR1 = inverse(R1);
        T C1 = f3 * f2 * iR1 * iR2 * Rational(2);
        T C2 = (f3pp - f3 * R2p * iR2 * Rational(2) + C1 * R13) * iR2;
        out.basis = {E3.y0(), second,
                     detail::lin<T>({{T(1), E3.y2()}, {-(f3 * iR2 * Rational(2)), E2.y1()}, {C1, E1.y0()}, {-C2, E2.y0()}})};
    }
    return out;
}

// L[y] for a log series y in the local variable (delta = 1).
template <class T>
LogSeries<T> apply(const OdeData<T>& d, const LogSeries<T>& y) {
    LogSeries<T> t1 = y.D();
    LogSeries<T> t2 = t1.D();
    LogSeries<T> t3 = t2.D();
    LogSeries<T> p0 = d.form == Form::Interior ? t3 - t2 * Rational(3) + t1 * Rational(2) : t3;
    return p0 + t1 * d.A + y * d.B;
}

template <class T>
bool annihilates(const OdeData<T>& d, const LogSeries<T>& y) {
    return apply(d, y).is_zero();
}

} // namespace modeforge::frobenius
