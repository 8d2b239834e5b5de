#pragma once

#include "algebra.hpp"
#include "frobenius.hpp"
#include "modforms.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace modeforge::quasi {

using Series = QSeries<Rational>;
using CSeries = QSeries<CPoly>;
using ZSeries = LogSeries<CPoly>;  // polynomial in z with D(z) = c/2

inline CSeries to_c(const Series& s) {
    return s.map([](const Rational& r) { return CPoly(r); });
}

// alpha = 6/(pi i) = 6c
inline CPoly alpha() { return CPoly::c() * Rational(6); }
inline CPoly z_delta() { return CPoly::c() * Rational(1, 2); }

// f = f0 + f1 E2 + f2 E2^2 with f_j of weight k - 2j.
struct QuasiForm {
    int weight = 0;
    Series f0, f1, f2;

    int depth() const {
        if (!f2.is_zero()) return 2;
        if (!f1.is_zero()) return 1;
        return 0;
    }
    long order() const {
        return std::min({f0.valid(), f1.valid(), f2.valid()}).floor().get_si();
    }
    Series series() const {
        Series e2 = modforms::E2(order());
        return f0 + f1 * e2 + f2 * e2 * e2;
    }
    // g = f1 + 2 f2 E2
    Series g() const { return f1 + f2 * modforms::E2(order()) * Rational(2); }
    QuasiForm truncate(long n) const {
        return {weight, f0.truncate(Rational(n)), f1.truncate(Rational(n)), f2.truncate(Rational(n))};
    }
};

struct HVector {
    ZSeries h1, h2, h3;
    std::vector<ZSeries> rows() const { return {h1, h2, h3}; }
};

// h3 = f, h2 = 2zf + alpha g, h1 = z^2 f + alpha z g + alpha^2 f2.
inline HVector h_vector(const QuasiForm& f) {
    CSeries F = to_c(f.series()), G = to_c(f.g()), H = to_c(f.f2);
    CPoly a = alpha();
    HVector v;
    v.h3 = ZSeries({F}, z_delta());
    v.h2 = ZSeries({G.scale(a), F * Rational(2)}, z_delta());
    v.h1 = ZSeries({H.scale(a * a), G.scale(a), F}, z_delta());
    return v;
}

template <class X>
X det3(const X& a, const X& b, const X& c, const X& d, const X& e, const X& f, const X& g, const X& h, const X& i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

// det [y_j, D y_j, D^2 y_j] over three log series.
template <class T>
LogSeries<T> wronskian3(const std::vector<LogSeries<T>>& y) {
    if (y.size() != 3) throw std::invalid_argument("wronskian: need three functions");
    std::vector<LogSeries<T>> d1, d2;
    for (const auto& v : y) {
        d1.push_back(v.D());
        d2.push_back(d1.back().D());
    }
    return det3(y[0], d1[0], d2[0], y[1], d1[1], d2[1], y[2], d1[2], d2[2]);
}

// A series of the form c^p * (rational series).
struct CMonomialSeries {
    int c_power = 0;
    Series series;
};

inline std::optional<CMonomialSeries> split_c_power(const CSeries& s) {
    std::optional<int> p;
    std::vector<Rational> coeffs;
    for (const auto& c : s.raw()) {
        if (c.is_zero()) {
            coeffs.emplace_back(0);
            continue;
        }
        if (!c.is_monomial()) return std::nullopt;
        int q = c.min_power();
        if (p && *p != q) return std::nullopt;
        p = q;
        coeffs.push_back(c.coeff(q));
    }
    Series r(s.denom(), s.start_num(), s.hi_num(), std::move(coeffs));
    return CMonomialSeries{p.value_or(0), r};
}

// W_f with D_q in place of d/dz; weight 3k.
inline CMonomialSeries wronskian(const QuasiForm& f) {
    if (f.depth() == 0) throw std::invalid_argument("wronskian: quasimodular form of depth 0 has a degenerate Wronskian");
    auto h = h_vector(f);
    ZSeries w = wronskian3(h.rows());
    if (!w.is_log_free()) throw std::logic_error("wronskian: z-terms failed to cancel");
    auto r = split_c_power(w.coeff(0));
    if (!r) throw std::logic_error("wronskian: coefficients are not a single c-power");
    if (r->series.is_zero()) throw std::invalid_argument("wronskian: vanishes to working order");
    return *r;
}

// Cusp exponents from the orders of f, g = f1 + 2 f2 E2 and h = f2 (nullopt = identically zero).
inline frobenius::LocalExponents cusp_exponents_from_orders(std::optional<long> of, std::optional<long> og,
                                                            std::optional<long> oh) {
    if (!of) throw std::invalid_argument("cusp exponents: f must be nonzero");
    const long inf = std::numeric_limits<long>::max();
    long f = *of, g = og.value_or(inf), h = oh.value_or(inf);
    long m = std::min({f, g, h});
    long ordW;
    if (f == m) ordW = 3 * m;
    else if (g == m) ordW = f + 2 * g;
    else if (f <= g) ordW = 2 * f + h;
    else ordW = f + g + h;
    Rational r(ordW, 3);
    return frobenius::make_exponents({Rational(m) - r, Rational(std::min(f, g)) - r, Rational(f) - r});
}

inline std::optional<long> order_at_infinity(const Series& s) {
    if (s.is_zero()) return std::nullopt;
    return s.lead_exp().to_long();
}

// Extremal depth-2 quasimodular form of weight k: vanishing order floor(k/4),
// leading coefficient 1; the kernel must be one-dimensional.
inline QuasiForm extremal(int k, long order) {
    if (k % 2 != 0) throw std::invalid_argument("extremal: weight must be even");
    if (k < 6) throw std::invalid_argument("extremal: weight must be at least 6");
    long r = k / 4;
    if (order < r) throw std::invalid_argument("extremal: order below the vanishing order");
    Series e2 = modforms::E2(order);
    std::vector<Series> cols;
    std::vector<std::pair<int, size_t>> which;  // (j, basis index)
    std::vector<std::vector<modforms::BasisElement>> bases;
    for (int j = 0; j <= 2; ++j) {
        bases.push_back(modforms::basis(k - 2 * j, order));
        for (size_t b = 0; b < bases.back().size(); ++b) {
            Series s = bases.back()[b].series;
            for (int e = 0; e < j; ++e) s = s * e2;
            cols.push_back(s);
            which.emplace_back(j, b);
        }
    }
    Matrix a(static_cast<size_t>(r), std::vector<Rational>(cols.size()));
    for (long n = 0; n < r; ++n)
        for (size_t c = 0; c < cols.size(); ++c) a[static_cast<size_t>(n)][c] = cols[c].coeff(n);
    auto ker = nullspace(a, cols.size());
    if (ker.size() != 1)
        throw std::runtime_error("extremal: kernel dimension " + std::to_string(ker.size()) + " (expected 1) at weight " +
                                 std::to_string(k));
    auto v = ker[0];
    Rational lead(0);
    for (size_t c = 0; c < cols.size(); ++c) lead += v[c] * cols[c].coeff(r);
    if (lead.is_zero()) throw std::runtime_error("extremal: vanishing order exceeds floor(k/4)");
    QuasiForm out{k, Series::zero(order), Series::zero(order), Series::zero(order)};
    for (size_t c = 0; c < cols.size(); ++c) {
        if (v[c].is_zero()) continue;
        auto [j, b] = which[c];
        Series term = bases[static_cast<size_t>(j)][b].series * (v[c] / lead);
        if (j == 0) out.f0 = out.f0 + term;
        else if (j == 1) out.f1 = out.f1 + term;
        else out.f2 = out.f2 + term;
    }
    return out;
}

} // namespace modeforge::quasi
