#pragma once

#include "rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace modeforge {

// Exponent vector, indexed by variable id, trailing zeros trimmed.
using Mono = std::vector<int>;

inline void trim(Mono& m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
}

inline Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

inline bool mono_divides(const Mono& d, const Mono& m) {
    if (d.size() > m.size()) return false;
    for (size_t i = 0; i < d.size(); ++i)
        if (d[i] > m[i]) return false;
    return true;
}

inline Mono mono_div(const Mono& m, const Mono& d) {
    Mono r = m;
    for (size_t i = 0; i < d.size(); ++i) r[i] -= d[i];
    trim(r);
    return r;
}

inline int mono_degree(const Mono& m) {
    int s = 0;
    for (int e : m) s += e;
    return s;
}

// Names for variable ids. Only used for printing and parsing.
class VarTable {
public:
    int id(const std::string& name) {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        names_.push_back(name);
        return static_cast<int>(names_.size() - 1);
    }
    std::optional<int> find(const std::string& name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return std::nullopt;
    }
    const std::string& name(int i) const { return names_.at(static_cast<size_t>(i)); }
    size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
};

// Sparse multivariate polynomial over Q. Monomials are ordered lex with
// variable 0 most significant; the leading term is the largest key.
class MPoly {
public:
    using Terms = std::map<Mono, Rational>;

    MPoly() = default;
    MPoly(int v) : MPoly(Rational(v)) {}
    MPoly(const Rational& r) {
        if (!r.is_zero()) t_.emplace(Mono{}, r);
    }
    static MPoly var(int id, int power = 1) {
        MPoly p;
        Mono m(static_cast<size_t>(id) + 1, 0);
        m[static_cast<size_t>(id)] = power;
        trim(m);
        p.t_.emplace(std::move(m), Rational(1));
        return p;
    }
    static MPoly term(const Mono& m, const Rational& c) {
        MPoly p;
        Mono mm = m;
        trim(mm);
        if (!c.is_zero()) p.t_.emplace(std::move(mm), c);
        return p;
    }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.empty()); }
    std::optional<Rational> as_rational() const {
        if (t_.empty()) return Rational(0);
        if (is_constant()) return t_.begin()->second;
        return std::nullopt;
    }
    Rational constant_term() const {
        auto it = t_.find(Mono{});
        return it == t_.end() ? Rational(0) : it->second;
    }

    const Mono& leading_mono() const { return t_.rbegin()->first; }
    const Rational& leading_coeff() const { return t_.rbegin()->second; }

    int total_degree() const {
        int d = t_.empty() ? -1 : 0;
        for (const auto& [m, c] : t_) d = std::max(d, mono_degree(m));
        return d;
    }
    int degree_in(int var) const {
        int d = t_.empty() ? -1 : 0;
        for (const auto& [m, c] : t_)
            if (static_cast<size_t>(var) < m.size()) d = std::max(d, m[static_cast<size_t>(var)]);
        return d;
    }
    // Total degree counting only the listed variables.
    int degree_in(const std::vector<int>& vars) const {
        int d = t_.empty() ? -1 : 0;
        for (const auto& [m, c] : t_) {
            int s = 0;
            for (int v : vars)
                if (static_cast<size_t>(v) < m.size()) s += m[static_cast<size_t>(v)];
            d = std::max(d, s);
        }
        return d;
    }
    std::vector<int> variables() const {
        std::vector<int> used;
        for (const auto& [m, c] : t_)
            for (size_t i = 0; i < m.size(); ++i)
                if (m[i] != 0 && std::find(used.begin(), used.end(), static_cast<int>(i)) == used.end())
                    used.push_back(static_cast<int>(i));
        std::sort(used.begin(), used.end());
        return used;
    }

    MPoly& operator+=(const MPoly& o) {
        for (const auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        for (const auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    MPoly& operator*=(const Rational& r) {
        if (r.is_zero()) { t_.clear(); return *this; }
        for (auto& [m, c] : t_) c *= r;
        return *this;
    }
    MPoly& operator*=(const MPoly& o) { *this = *this * o; return *this; }

    friend MPoly operator+(MPoly a, const MPoly& b) { a += b; return a; }
    friend MPoly operator-(MPoly a, const MPoly& b) { a -= b; return a; }
    MPoly operator-() const {
        MPoly r = *this;
        for (auto& [m, c] : r.t_) c = -c;
        return r;
    }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly r;
        if (a.t_.empty() || b.t_.empty()) return r;
        if (b.is_constant()) { r = a; r *= b.t_.begin()->second; return r; }
        if (a.is_constant()) { r = b; r *= a.t_.begin()->second; return r; }
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }
    friend MPoly operator*(MPoly a, const Rational& r) { a *= r; return a; }
    friend MPoly operator*(const Rational& r, MPoly a) { a *= r; return a; }

    friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }
    friend bool operator<(const MPoly& a, const MPoly& b) { return a.t_ < b.t_; }

    MPoly pow(int e) const {
        if (e < 0) throw std::domain_error("mpoly: negative power");
        MPoly r(1), b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    // Only constants are invertible inside the polynomial ring.
    MPoly inv() const {
        auto r = as_rational();
        if (!r || r->is_zero()) throw std::domain_error("mpoly: not invertible");
        return MPoly(r->inv());
    }

    // Exact division; nullopt when d does not divide *this.
    std::optional<MPoly> divide_exact(const MPoly& d) const {
        if (d.is_zero()) throw std::domain_error("mpoly: division by zero");
        if (d.is_constant()) {
            MPoly q = *this;
            q *= d.t_.begin()->second.inv();
            return q;
        }
        MPoly q, r = *this;
        const Mono& ld = d.leading_mono();
        Rational lc_inv = d.leading_coeff().inv();
        while (!r.is_zero()) {
            const Mono& lr = r.leading_mono();
            if (!mono_divides(ld, lr)) return std::nullopt;
            Mono m = mono_div(lr, ld);
            Rational c = r.leading_coeff() * lc_inv;
            q.add_term(m, c);
            for (const auto& [md, cd] : d.t_) r.add_term(mono_mul(m, md), -(c * cd));
        }
        return q;
    }

    // Scale so the leading coefficient is one; returns the factor removed.
    Rational make_monic() {
        if (t_.empty()) return Rational(1);
        Rational lc = leading_coeff();
        *this *= lc.inv();
        return lc;
    }

    MPoly derivative(int var) const {
        MPoly r;
        for (const auto& [m, c] : t_) {
            if (static_cast<size_t>(var) >= m.size() || m[static_cast<size_t>(var)] == 0) continue;
            Mono mm = m;
            int e = mm[static_cast<size_t>(var)]--;
            trim(mm);
            r.add_term(mm, c * Rational(e));
        }
        return r;
    }

    // Replace variable `var` by the polynomial `value`.
    MPoly substitute(int var, const MPoly& value) const {
        MPoly r;
        std::map<int, MPoly> powers;
        for (const auto& [m, c] : t_) {
            int e = static_cast<size_t>(var) < m.size() ? m[static_cast<size_t>(var)] : 0;
            Mono rest = m;
            if (e) { rest[static_cast<size_t>(var)] = 0; trim(rest); }
            MPoly part = term(rest, c);
            if (e) {
                auto it = powers.find(e);
                if (it == powers.end()) it = powers.emplace(e, value.pow(e)).first;
                part = part * it->second;
            }
            r += part;
        }
        return r;
    }
    MPoly substitute(const std::map<int, Rational>& values) const {
        MPoly r;
        for (const auto& [m, c] : t_) {
            Rational coef = c;
            Mono rest = m;
            for (size_t i = 0; i < m.size(); ++i) {
                auto it = values.find(static_cast<int>(i));
                if (it != values.end() && m[i] != 0) {
                    coef *= it->second.pow(m[i]);
                    rest[i] = 0;
                }
            }
            trim(rest);
            r.add_term(rest, coef);
        }
        return r;
    }

    // Coefficients of powers of `var`; entry e multiplies var^e.
    std::vector<MPoly> coefficients_in(int var) const {
        std::vector<MPoly> out(static_cast<size_t>(std::max(0, degree_in(var)) + 1));
        for (const auto& [m, c] : t_) {
            int e = static_cast<size_t>(var) < m.size() ? m[static_cast<size_t>(var)] : 0;
            Mono rest = m;
            if (e) { rest[static_cast<size_t>(var)] = 0; trim(rest); }
            out[static_cast<size_t>(e)].add_term(rest, c);
        }
        return out;
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            const auto& [m, c] = *it;
            Rational a = c;
            if (!first) {
                os << (a.sign() < 0 ? " - " : " + ");
                a = modeforge::abs(a);
            }
            first = false;
            std::string mon = mono_str(m, names);
            if (mon.empty()) { os << a; continue; }
            if (a == Rational(-1)) os << "-";
            else if (a != Rational(1)) os << a << "*";
            os << mon;
        }
        return os.str();
    }
    friend std::ostream& operator<<(std::ostream& os, const MPoly& p) { return os << p.str(); }

    void add_term(const Mono& m, const Rational& c) {
        if (c.is_zero()) return;
        auto it = t_.find(m);
        if (it == t_.end()) { t_.emplace(m, c); return; }
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }

private:
    Terms t_;

    static std::string mono_str(const Mono& m, const std::vector<std::string>& names) {
        std::string s;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += i < names.size() ? names[i] : "x" + std::to_string(i);
            if (m[i] != 1) s += "^" + std::to_string(m[i]);
        }
        return s;
    }
};

inline bool is_zero(const MPoly& p) { return p.is_zero(); }
inline MPoly inverse(const MPoly& p) { return p.inv(); }

} // namespace modeforge
