#pragma once

#include "rational.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace modeforge {

// Dense univariate polynomial over Q; c[i] multiplies x^i.
class UPoly {
public:
    UPoly() = default;
    UPoly(const Rational& r) { if (!r.is_zero()) c_.push_back(r); }
    explicit UPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
    static UPoly x() { return UPoly({Rational(0), Rational(1)}); }
    static UPoly from_roots(const std::vector<Rational>& roots) {
        UPoly p(Rational(1));
        for (const auto& r : roots) p = p * UPoly({-r, Rational(1)});
        return p;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<size_t>(i)] : Rational(0); }
    Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

    Rational operator()(const Rational& x) const {
        Rational r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return UPoly(std::move(c));
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + b * Rational(-1); }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j].addmul(a.c_[i], b.c_[j]);
        return UPoly(std::move(c));
    }
    friend UPoly operator*(const UPoly& a, const Rational& r) {
        std::vector<Rational> c = a.c_;
        for (auto& v : c) v *= r;
        return UPoly(std::move(c));
    }
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

    UPoly derivative() const {
        std::vector<Rational> c;
        for (size_t i = 1; i < c_.size(); ++i) c.push_back(c_[i] * Rational(static_cast<long>(i)));
        return UPoly(std::move(c));
    }

    // Division by (x - r); the remainder must vanish.
    UPoly deflate(const Rational& r) const {
        if (c_.empty()) return {};
        std::vector<Rational> q(c_.size() - 1, Rational(0));
        Rational acc(0);
        for (size_t i = c_.size(); i-- > 1;) {
            acc = acc * r + c_[i];
            q[i - 1] = acc;
        }
        return UPoly(std::move(q));
    }

    // Rational roots with multiplicity. `complete` reports whether the
    // search covered every candidate; it is false when an integer could
    // not be factored within the trial-division budget.
    std::map<Rational, int> rational_roots(bool* complete = nullptr) const;

    std::string str(const std::string& var = "x") const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i].is_zero()) continue;
            Rational a = c_[i];
            if (!first) {
                os << (a.sign() < 0 ? " - " : " + ");
                a = modeforge::abs(a);
            }
            first = false;
            if (i == 0) { os << a; continue; }
            if (a == Rational(-1)) os << "-";
            else if (a != Rational(1)) os << a << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        return os.str();
    }

private:
    std::vector<Rational> c_;
    void trim() { while (!c_.empty() && c_.back().is_zero()) c_.pop_back(); }
};

namespace detail {

// Positive divisors of |n| by trial division; returns false when the
// cofactor left after the budget is composite.
inline bool divisors(const mpz_class& n_in, std::vector<mpz_class>& out, unsigned long budget = 2000000UL) {
    mpz_class n = abs(n_in);
    out.clear();
    if (n == 0) return false;
    std::vector<std::pair<mpz_class, int>> fac;
    bool ok = true;
    for (unsigned long p = 2; p <= budget && p * p <= n; ++p) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            int e = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
                ++e;
            }
            fac.emplace_back(mpz_class(p), e);
        }
    }
    if (n > 1) {
        mpz_class b(static_cast<unsigned long>(budget));
        if (n > b * b && mpz_probab_prime_p(n.get_mpz_t(), 30) == 0) ok = false;
        fac.emplace_back(n, 1);
    }
    out.push_back(mpz_class(1));
    for (const auto& [p, e] : fac) {
        size_t base = out.size();
        mpz_class pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
        if (out.size() > 200000) return false;
    }
    return ok;
}

} // namespace detail

inline std::map<Rational, int> UPoly::rational_roots(bool* complete) const {
    std::map<Rational, int> roots;
    if (complete) *complete = true;
    if (c_.empty()) return roots;
    UPoly p = *this;
    while (p.degree() > 0 && p.coeff(0).is_zero()) {
        roots[Rational(0)]++;
        p = p.deflate(Rational(0));
    }
    if (p.degree() <= 0) return roots;
    // clear denominators
    mpz_class l = 1;
    for (const auto& v : p.c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.den().get_mpz_t());
    std::vector<mpz_class> ic;
    for (const auto& v : p.c_) ic.push_back((v * Rational(l)).num());
    std::vector<mpz_class> dn, dd;
    bool ok1 = detail::divisors(ic.front(), dn);
    bool ok2 = detail::divisors(ic.back(), dd);
    if (complete) *complete = ok1 && ok2;
    for (const auto& a : dn)
        for (const auto& b : dd) {
            if (p.degree() <= 0) return roots;
            for (int s : {1, -1}) {
                Rational cand(a * s, b);
                while (p.degree() > 0 && p(cand).is_zero()) {
                    roots[cand]++;
                    p = p.deflate(cand);
                }
            }
        }
    return roots;
}

} // namespace modeforge
