#pragma once

#include "algebra.hpp"

#include <cctype>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace modeforge::modforms {

using Series = QSeries<Rational>;

inline mpz_class sigma(int k, long n) {
    mpz_class s = 0, p;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k));
        s += p;
        long e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(k));
            s += p;
        }
    }
    return s;
}

namespace detail {

inline Series eisenstein(int k, const Rational& factor, long order) {
    std::vector<Rational> c(static_cast<size_t>(order + 1));
    c[0] = Rational(1);
    for (long n = 1; n <= order; ++n) c[static_cast<size_t>(n)] = factor * Rational(sigma(k - 1, n));
    return Series::from_coeffs(std::move(c), order);
}

// prod (1 - q^n) from the pentagonal number theorem
inline Series euler(long order) {
    std::vector<Rational> c(static_cast<size_t>(order + 1), Rational(0));
    for (long k = 0;; ++k) {
        bool any = false;
        for (long s : {1L, -1L}) {
            if (k == 0 && s == -1) continue;
            long kk = s * k;
            long e = kk * (3 * kk - 1) / 2;
            if (e <= order) {
                c[static_cast<size_t>(e)] = Rational(k % 2 ? -1 : 1);
                any = true;
            }
        }
        if (!any) break;
    }
    return Series::from_coeffs(std::move(c), order);
}

enum class Form { E2, E4, E6, Delta, Euler };

class Cache {
public:
    static Cache& instance() {
        static Cache c;
        return c;
    }
    Series get(Form f, long order) {
        {
            std::lock_guard<std::mutex> lock(m_);
            auto it = store_.find(f);
            if (it != store_.end() && it->second.valid() >= Rational(order)) return it->second.truncate(Rational(order));
        }
        Series s = compute(f, order);
        std::lock_guard<std::mutex> lock(m_);
        auto it = store_.find(f);
        if (it == store_.end() || it->second.valid() < s.valid()) store_[f] = s;
        return s;
    }

private:
    std::mutex m_;
    std::map<Form, Series> store_;

    static Series compute(Form f, long order) {
        switch (f) {
            case Form::E2: return eisenstein(2, Rational(-24), order);
            case Form::E4: return eisenstein(4, Rational(240), order);
            case Form::E6: return eisenstein(6, Rational(-504), order);
            case Form::Euler: return euler(order);
            case Form::Delta: return euler(order).pow(24).shift(Rational(1)).truncate(Rational(order));
        }
        throw std::logic_error("modforms: unknown form");
    }
};

} // namespace detail

inline Series E2(long order) { return detail::Cache::instance().get(detail::Form::E2, order); }
inline Series E4(long order) { return detail::Cache::instance().get(detail::Form::E4, order); }
inline Series E6(long order) { return detail::Cache::instance().get(detail::Form::E6, order); }
// Computed from the product expansion, independently of E4 and E6.
inline Series Delta(long order) { return detail::Cache::instance().get(detail::Form::Delta, order); }
// E4^3 - E6^2
inline Series Delta0(long order) { return E4(order).pow(3) - E6(order).pow(2); }

// eta^m = q^{m/24} prod (1 - q^n)^m
inline Series eta_power(long m, long order) {
    Series p = detail::Cache::instance().get(detail::Form::Euler, order);
    return p.pow(m).shift(Rational(m, 24)).truncate(Rational(order));
}

// j = E4^3 / Delta, known through q^order.
inline Series J(long order) {
    return (E4(order + 2).pow(3) * Delta(order + 2).inv()).truncate(Rational(order));
}

inline int dimension(int k) {
    if (k < 0 || k % 2) return 0;
    if (k == 2) return 0;
    return k % 12 == 2 ? k / 12 : k / 12 + 1;
}

struct BasisElement {
    int e4, e6, delta;  // E4^e4 E6^e6 Delta^delta
    Series series;
};

// Triangular basis Delta^d E4^a E6^b of M_k, d = 0..dim-1.
inline std::vector<BasisElement> basis(int k, long order) {
    std::vector<BasisElement> out;
    int dim = dimension(k);
    for (int d = 0; d < dim; ++d) {
        int w = k - 12 * d;
        int b = (w % 4 == 2) ? 1 : 0;
        int a = (w - 6 * b) / 4;
        Series s = E4(order).pow(a) * E6(order).pow(b);
        if (d > 0) s = s * Delta(order).pow(d);
        out.push_back({a, b, d, s.truncate(Rational(order))});
    }
    return out;
}

// Coordinates of f in basis(k) if f is in M_k (checked through f's precision).
inline std::optional<std::vector<Rational>> membership(const Series& input, int k) {
    long order = input.valid().floor().get_si();
    Series f = input.truncate(Rational(order));
    auto b = basis(k, order);
    std::vector<Rational> coords(b.size(), Rational(0));
    if (!f.is_zero() && f.lead_exp() < Rational(0)) return std::nullopt;
    if (!f.is_zero() && !(f.simplified().denom() == 1)) return std::nullopt;
    if (static_cast<long>(b.size()) > order + 1) throw std::invalid_argument("membership: precision too low for weight");
    Series rest = f;
    for (size_t d = 0; d < b.size(); ++d) {
        coords[d] = rest.coeff(static_cast<long>(d));
        rest = rest - b[d].series * coords[d];
    }
    if (!rest.is_zero()) return std::nullopt;
    return coords;
}

inline Series combination(const std::vector<BasisElement>& b, const std::vector<Rational>& coords) {
    Series s = Series::zero(b.empty() ? 0 : b[0].series.hi_num());
    for (size_t i = 0; i < b.size(); ++i) s = s + b[i].series * coords[i];
    return s;
}

// f = scale * E4^a E6^b Delta^d * Delta^n P(j) with a <= 2, b <= 1, n = deg P,
// P monic. The full view absorbs the roots j = 0 and j = 1728 of P into E4
// and E6 powers.
struct Factorization {
    int weight = 0;
    Rational scale;
    int a = 0, b = 0, d = 0;
    UPoly P;
    int e4_power = 0, e6_power = 0;
    UPoly residual;
    std::map<Rational, int> residual_roots;
    bool roots_complete = true;
};

inline Factorization factor_form(const Series& f, int k) {
    if (f.is_zero()) throw std::invalid_argument("factor_form: zero form");
    if (k < 0 || k % 2) throw std::invalid_argument("factor_form: weight must be even and nonnegative");
    Factorization out;
    out.weight = k;
    static const int A[6] = {0, 2, 1, 0, 2, 1};
    static const int B[6] = {0, 1, 0, 1, 0, 1};
    out.a = A[(k % 12) / 2];
    out.b = B[(k % 12) / 2];
    int w = k - 4 * out.a - 6 * out.b;
    if (w < 0) throw std::invalid_argument("factor_form: weight has no holomorphic forms");
    int m = w / 12;
    long order = f.valid().floor().get_si();
    if (order < m + 1) throw std::invalid_argument("factor_form: precision too low");
    Series g = f * (E4(order).pow(out.a) * E6(order).pow(out.b)).inv();
    if (g.lead_exp() < Rational(0) || !g.lead_exp().is_integer()) throw std::invalid_argument("factor_form: not a modular form");
    out.d = static_cast<int>(g.lead_exp().to_long());
    if (out.d > m) throw std::invalid_argument("factor_form: order at infinity exceeds weight bound");
    Series h = g * Delta(order + m).pow(m).inv();  // Laurent in q with pole order m - d
    Series j = J(order + m);
    std::vector<Rational> p(static_cast<size_t>(m - out.d + 1), Rational(0));
    for (int e = m - out.d; e >= 0; --e) {
        Rational c = h.coeff(Rational(-e));
        p[static_cast<size_t>(e)] = c;
        if (!c.is_zero()) h = h - j.pow(e) * c;
    }
    if (!h.truncate(Rational(order - m - 1)).is_zero()) throw std::invalid_argument("factor_form: not in M_k");
    out.P = UPoly(p);
    out.scale = out.P.lead();
    out.P = out.P * out.scale.inv();
    out.residual = out.P;
    out.e4_power = out.a;
    out.e6_power = out.b;
    while (out.residual.degree() > 0 && out.residual.coeff(0).is_zero()) {
        out.residual = out.residual.deflate(Rational(0));
        out.e4_power += 3;
    }
    while (out.residual.degree() > 0 && out.residual(Rational(1728)).is_zero()) {
        out.residual = out.residual.deflate(Rational(1728));
        out.e6_power += 2;
    }
    out.residual_roots = out.residual.rational_roots(&out.roots_complete);
    return out;
}

// Reassemble the series from a factorization (used to check round trips).
inline Series expand_factorization(const Factorization& fz, long order) {
    int n = fz.P.degree();
    Series j = J(order + n);
    Series p = Series::zero(order + n);
    Series jp = Series::constant(Rational(1), order + n);
    for (int e = 0; e <= n; ++e) {
        if (!fz.P.coeff(e).is_zero()) p = p + jp * fz.P.coeff(e);
        jp = jp * j;
    }
    Series out = E4(order).pow(fz.a) * E6(order).pow(fz.b) * Delta(order + n).pow(fz.d + n) * p;
    return (out * fz.scale).truncate(Rational(order));
}

// Weighted expression over E2, E4, E6, Delta, Delta0, J, eta with rational
// constants, + - * / and integer powers.
struct Weighted {
    Series series;
    std::optional<Rational> weight;  // nullopt if inhomogeneous
};

class ExprParser {
public:
    ExprParser(std::string text, long order) : s_(std::move(text)), order_(order) {}

    Weighted parse() {
        Weighted w = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return w;
    }

private:
    std::string s_;
    long order_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression: " + msg + " at position " + std::to_string(pos_));
    }
    void skip() { while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_; }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    static std::optional<Rational> join_weight(const std::optional<Rational>& a, const std::optional<Rational>& b, bool sum) {
        if (!a || !b) return std::nullopt;
        if (sum) return *a == *b ? a : std::nullopt;
        return *a + *b;
    }

    Weighted sum() {
        bool neg = eat('-');
        Weighted w = product();
        if (neg) w.series = -w.series;
        for (;;) {
            if (eat('+')) {
                Weighted r = product();
                w = {w.series + r.series, constant_aware_sum(w, r)};
            } else if (eat('-')) {
                Weighted r = product();
                w = {w.series - r.series, constant_aware_sum(w, r)};
            } else break;
        }
        return w;
    }
    static std::optional<Rational> constant_aware_sum(const Weighted& a, const Weighted& b) {
        if (a.series.is_zero()) return b.weight;
        if (b.series.is_zero()) return a.weight;
        return join_weight(a.weight, b.weight, true);
    }

    Weighted product() {
        Weighted w = power();
        for (;;) {
            if (eat('*')) {
                Weighted r = power();
                w = {w.series * r.series, join_weight(w.weight, r.weight, false)};
            } else if (eat('/')) {
                Weighted r = power();
                if (r.series.is_zero()) fail("division by zero");
                std::optional<Rational> rw;
                if (r.weight) rw = -*r.weight;
                w = {w.series * r.series.inv(), join_weight(w.weight, rw, false)};
            } else break;
        }
        return w;
    }

    Weighted power() {
        Weighted base = atom();
        if (eat('^')) {
            bool neg = eat('-');
            skip();
            size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (st == pos_) fail("expected integer exponent");
            long e = std::stol(s_.substr(st, pos_ - st));
            if (neg) e = -e;
            Weighted r{base.series.pow(e), std::nullopt};
            if (base.weight) r.weight = *base.weight * Rational(e);
            return r;
        }
        return base;
    }

    Weighted atom() {
        skip();
        if (eat('(')) {
            Weighted w = sum();
            if (!eat(')')) fail("expected ')'");
            return w;
        }
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            size_t st = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
            Rational c = Rational::parse(s_.substr(st, pos_ - st));
            return {Series::constant(c, order_), Rational(0)};
        }
        size_t st = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string name = s_.substr(st, pos_ - st);
        long o = order_;
        if (name == "E2") return {E2(o), Rational(2)};
        if (name == "E4") return {E4(o), Rational(4)};
        if (name == "E6") return {E6(o), Rational(6)};
        if (name == "Delta") return {Delta(o), Rational(12)};
        if (name == "Delta0") return {Delta0(o), Rational(12)};
        if (name == "J" || name == "j") return {J(o), Rational(0)};
        if (name == "eta") return {eta_power(1, o), Rational(1, 2)};
        if (name.empty()) fail("expected a form name");
        pos_ = st;
        fail("unknown form '" + name + "'");
    }
};

inline Weighted evaluate(const std::string& expr, long order) { return ExprParser(expr, order).parse(); }

} // namespace modeforge::modforms
