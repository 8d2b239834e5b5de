#pragma once

#include "rational.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace modeforge {

// Laurent polynomial in the formal constant c = 1/(pi i) with rational
// coefficients. Terms are kept sorted by power with no zero coefficients.
class CPoly {
public:
    using Term = std::pair<int, Rational>;

    CPoly() = default;
    CPoly(int v) : CPoly(Rational(v)) {}
    CPoly(const Rational& r) {
        if (!r.is_zero()) t_.emplace_back(0, r);
    }
    static CPoly monomial(const Rational& coef, int power) {
        CPoly p;
        if (!coef.is_zero()) p.t_.emplace_back(power, coef);
        return p;
    }
    static CPoly c() { return monomial(Rational(1), 1); }

    const std::vector<Term>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_monomial() const { return t_.size() == 1; }

    Rational coeff(int power) const {
        for (const auto& [p, r] : t_)
            if (p == power) return r;
        return Rational(0);
    }

    std::optional<Rational> as_rational() const {
        if (t_.empty()) return Rational(0);
        if (t_.size() == 1 && t_[0].first == 0) return t_[0].second;
        return std::nullopt;
    }

    int min_power() const { return t_.empty() ? 0 : t_.front().first; }
    int max_power() const { return t_.empty() ? 0 : t_.back().first; }

    CPoly inv() const {
        if (t_.size() != 1) throw std::domain_error("cpoly: only monomials in c are invertible");
        return monomial(t_[0].second.inv(), -t_[0].first);
    }

    CPoly& operator+=(const CPoly& o) { *this = combine(*this, o, false); return *this; }
    CPoly& operator-=(const CPoly& o) { *this = combine(*this, o, true); return *this; }
    CPoly& operator*=(const CPoly& o) { *this = *this * o; return *this; }
    CPoly& operator*=(const Rational& r) {
        if (r.is_zero()) { t_.clear(); return *this; }
        for (auto& [p, v] : t_) v *= r;
        return *this;
    }

    friend CPoly operator+(const CPoly& a, const CPoly& b) { return combine(a, b, false); }
    friend CPoly operator-(const CPoly& a, const CPoly& b) { return combine(a, b, true); }
    CPoly operator-() const {
        CPoly r = *this;
        for (auto& [p, v] : r.t_) v = -v;
        return r;
    }
    friend CPoly operator*(const CPoly& a, const CPoly& b) {
        if (a.t_.empty() || b.t_.empty()) return {};
        CPoly r;
        if (a.t_.size() == 1 && b.t_.size() == 1) {
            r.t_.emplace_back(a.t_[0].first + b.t_[0].first, a.t_[0].second * b.t_[0].second);
            return r;
        }
        std::vector<Term> acc;
        acc.reserve(a.t_.size() * b.t_.size());
        for (const auto& [pa, va] : a.t_)
            for (const auto& [pb, vb] : b.t_) acc.emplace_back(pa + pb, va * vb);
        std::sort(acc.begin(), acc.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
        for (auto& term : acc) {
            if (!r.t_.empty() && r.t_.back().first == term.first) r.t_.back().second += term.second;
            else r.t_.push_back(std::move(term));
        }
        r.prune();
        return r;
    }
    friend CPoly operator*(CPoly a, const Rational& r) { a *= r; return a; }
    friend CPoly operator*(const Rational& r, CPoly a) { a *= r; return a; }
    friend CPoly operator/(const CPoly& a, const CPoly& b) { return a * b.inv(); }

    friend bool operator==(const CPoly& a, const CPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const CPoly& a, const CPoly& b) { return !(a == b); }

    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [p, v] : t_) {
            Rational a = v;
            if (!first) {
                os << (a.sign() < 0 ? " - " : " + ");
                a = modeforge::abs(a);
            }
            first = false;
            if (p == 0) { os << a; continue; }
            if (a == Rational(-1)) os << "-";
            else if (a != Rational(1)) os << a << "*";
            os << "c";
            if (p != 1) os << "^" << p;
        }
        return os.str();
    }
    friend std::ostream& operator<<(std::ostream& os, const CPoly& p) { return os << p.str(); }

private:
    std::vector<Term> t_;

    void prune() {
        t_.erase(std::remove_if(t_.begin(), t_.end(), [](const Term& x) { return x.second.is_zero(); }), t_.end());
    }

    static CPoly combine(const CPoly& a, const CPoly& b, bool subtract) {
        CPoly r;
        r.t_.reserve(a.t_.size() + b.t_.size());
        size_t i = 0, j = 0;
        while (i < a.t_.size() || j < b.t_.size()) {
            if (j == b.t_.size() || (i < a.t_.size() && a.t_[i].first < b.t_[j].first)) {
                r.t_.push_back(a.t_[i++]);
            } else if (i == a.t_.size() || b.t_[j].first < a.t_[i].first) {
                r.t_.emplace_back(b.t_[j].first, subtract ? -b.t_[j].second : b.t_[j].second);
                ++j;
            } else {
                Rational v = subtract ? a.t_[i].second - b.t_[j].second : a.t_[i].second + b.t_[j].second;
                if (!v.is_zero()) r.t_.emplace_back(a.t_[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        return r;
    }
};

inline bool is_zero(const CPoly& p) { return p.is_zero(); }
inline CPoly inverse(const CPoly& p) { return p.inv(); }

} // namespace modeforge
