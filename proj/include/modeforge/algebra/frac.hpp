#pragma once

#include "mpoly.hpp"

#include <utility>
#include <vector>

namespace modeforge {

// Rational function num / prod(atom^e). Atoms are monic, non-constant and
// pairwise distinct. Single-variable monomial factors are split off into
// their own atoms so that powers of a parameter cancel reliably.
class Frac {
public:
    using Atom = std::pair<MPoly, int>;

    Frac() = default;
    Frac(int v) : num_(v) {}
    Frac(const Rational& r) : num_(r) {}
    Frac(const MPoly& p) : num_(p) {}

    const MPoly& num() const { return num_; }
    const std::vector<Atom>& den() const { return den_; }
    MPoly den_poly() const {
        MPoly d(1);
        for (const auto& [a, e] : den_) d = d * a.pow(e);
        return d;
    }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }
    std::optional<MPoly> as_mpoly() const {
        if (den_.empty()) return num_;
        return std::nullopt;
    }
    std::optional<Rational> as_rational() const {
        if (!den_.empty()) return std::nullopt;
        return num_.as_rational();
    }

    Frac inv() const {
        if (num_.is_zero()) throw std::domain_error("frac: division by zero");
        Frac r;
        r.num_ = den_poly();
        std::vector<Atom> atoms;
        Rational scale = split_into_atoms(num_, atoms);
        r.num_ *= scale.inv();
        for (auto& [a, e] : atoms) push_atom(r.den_, a, e);
        r.cancel();
        return r;
    }

    friend Frac operator*(const Frac& a, const Frac& b) {
        if (a.is_zero() || b.is_zero()) return {};
        Frac r;
        r.num_ = a.num_ * b.num_;
        r.den_ = a.den_;
        for (const auto& [p, e] : b.den_) push_atom(r.den_, p, e);
        r.cancel();
        return r;
    }
    friend Frac operator*(Frac a, const Rational& s) { a.num_ *= s; if (a.num_.is_zero()) a.den_.clear(); return a; }
    friend Frac operator*(const Rational& s, Frac a) { return a * s; }
    friend Frac operator/(const Frac& a, const Frac& b) { return a * b.inv(); }

    friend Frac operator+(const Frac& a, const Frac& b) { return add(a, b, false); }
    friend Frac operator-(const Frac& a, const Frac& b) { return add(a, b, true); }
    Frac operator-() const { Frac r = *this; r.num_ = -r.num_; return r; }
    Frac& operator+=(const Frac& o) { *this = *this + o; return *this; }
    Frac& operator-=(const Frac& o) { *this = *this - o; return *this; }
    Frac& operator*=(const Frac& o) { *this = *this * o; return *this; }
    Frac& operator*=(const Rational& s) { *this = *this * s; return *this; }

    friend bool operator==(const Frac& a, const Frac& b) {
        if (a.den_ == b.den_) return a.num_ == b.num_;
        return (a - b).is_zero();
    }
    friend bool operator!=(const Frac& a, const Frac& b) { return !(a == b); }

    // Substitute rational values for some variables.
    Frac substitute(const std::map<int, Rational>& values) const {
        Frac n(num_.substitute(values));
        Frac d(den_poly().substitute(values));
        return n / d;
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        if (den_.empty()) return num_.str(names);
        std::string s = "(" + num_.str(names) + ")/(";
        bool first = true;
        for (const auto& [a, e] : den_) {
            if (!first) s += "*";
            first = false;
            s += "(" + a.str(names) + ")";
            if (e != 1) s += "^" + std::to_string(e);
        }
        return s + ")";
    }

private:
    MPoly num_;
    std::vector<Atom> den_;

    static void push_atom(std::vector<Atom>& den, const MPoly& a, int e) {
        for (auto& [p, k] : den)
            if (p == a) { k += e; return; }
        den.emplace_back(a, e);
        std::sort(den.begin(), den.end(), [](const Atom& x, const Atom& y) { return x.first < y.first; });
    }

    // Writes p = scale * prod(atoms); atoms are monic.
    static Rational split_into_atoms(const MPoly& p, std::vector<Atom>& atoms) {
        if (p.is_constant()) return *p.as_rational();
        // strip the gcd monomial
        Mono g;
        bool first = true;
        for (const auto& [m, c] : p.terms()) {
            if (first) { g = m; first = false; continue; }
            g.resize(std::min(g.size(), m.size()));
            for (size_t i = 0; i < g.size(); ++i) g[i] = std::min(g[i], m[i]);
        }
        trim(g);
        MPoly rest = p;
        if (!g.empty()) {
            rest = *p.divide_exact(MPoly::term(g, Rational(1)));
            for (size_t i = 0; i < g.size(); ++i)
                if (g[i] > 0) atoms.emplace_back(MPoly::var(static_cast<int>(i)), g[i]);
        }
        if (rest.is_constant()) return *rest.as_rational();
        Rational lc = rest.make_monic();
        atoms.emplace_back(rest, 1);
        return lc;
    }

    static Frac add(const Frac& a, const Frac& b, bool subtract) {
        if (a.den_ == b.den_) {
            Frac r;
            r.num_ = subtract ? a.num_ - b.num_ : a.num_ + b.num_;
            if (r.num_.is_zero()) return {};
            r.den_ = a.den_;
            r.cancel();
            return r;
        }
        std::vector<Atom> l = a.den_;
        for (const auto& [p, e] : b.den_) {
            bool found = false;
            for (auto& [q, k] : l)
                if (q == p) { k = std::max(k, e); found = true; }
            if (!found) push_atom(l, p, e);
        }
        auto cofactor = [&](const std::vector<Atom>& d) {
            MPoly m(1);
            for (const auto& [q, k] : l) {
                int have = 0;
                for (const auto& [p, e] : d)
                    if (p == q) have = e;
                if (k > have) m = m * q.pow(k - have);
            }
            return m;
        };
        Frac r;
        MPoly na = a.num_ * cofactor(a.den_);
        MPoly nb = b.num_ * cofactor(b.den_);
        r.num_ = subtract ? na - nb : na + nb;
        if (r.num_.is_zero()) return {};
        r.den_ = std::move(l);
        r.cancel();
        return r;
    }

    void cancel() {
        if (num_.is_zero()) { den_.clear(); return; }
        for (auto& [a, e] : den_) {
            while (e > 0) {
                auto q = num_.divide_exact(a);
                if (!q) break;
                num_ = std::move(*q);
                --e;
            }
        }
        den_.erase(std::remove_if(den_.begin(), den_.end(), [](const Atom& x) { return x.second == 0; }), den_.end());
    }
};

inline bool is_zero(const Frac& f) { return f.is_zero(); }
inline Frac inverse(const Frac& f) { return f.inv(); }

} // namespace modeforge
