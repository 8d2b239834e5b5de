#pragma once

#include "rational.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace modeforge {

namespace detail {
template <class T>
bool coeff_is_zero(const T& v) { return is_zero(v); }
} // namespace detail

// Truncated Puiseux series sum c_k q^{(start+k)/N}, known through the
// exponent hi/N (inclusive). Coefficients past the stored vector and up to
// hi are zero. Works over any coefficient ring T with the usual operators,
// T * Rational, is_zero(T) and inverse(T).
template <class T>
class QSeries {
public:
    QSeries() = default;

    QSeries(long denom, long start, long hi, std::vector<T> coeffs)
        : N_(denom), start_(start), hi_(hi), c_(std::move(coeffs)) {
        if (N_ <= 0) throw std::invalid_argument("qseries: exponent denominator must be positive");
        if (static_cast<long>(c_.size()) > hi_ - start_ + 1) c_.resize(static_cast<size_t>(std::max(0L, hi_ - start_ + 1)));
        normalize();
    }

    static QSeries zero(long hi, long denom = 1) { return QSeries(denom, hi + 1, hi, {}); }
    static QSeries constant(const T& v, long order) { return QSeries(1, 0, order, {v}); }
    // c q^{e}, known through q^{valid}.
    static QSeries monomial(const T& v, const Rational& e, const Rational& valid) {
        long n = lcm_long(e.den().get_si(), valid.den().get_si());
        Rational s = e * Rational(n), h = valid * Rational(n);
        return QSeries(n, s.to_long(), h.floor().get_si(), {v});
    }
    // Dense integer-exponent series from coefficients of q^0, q^1, ...
    static QSeries from_coeffs(std::vector<T> coeffs, long order, long start = 0) {
        return QSeries(1, start, order, std::move(coeffs));
    }

    long denom() const { return N_; }
    long start_num() const { return start_; }
    long hi_num() const { return hi_; }
    const std::vector<T>& raw() const { return c_; }
    Rational valid() const { return Rational(hi_, N_); }
    bool is_zero() const { return c_.empty(); }

    // Leading exponent; throws for the zero series.
    Rational lead_exp() const {
        if (c_.empty()) throw std::domain_error("qseries: leading exponent of zero series");
        return Rational(start_, N_);
    }
    const T& lead_coeff() const {
        if (c_.empty()) throw std::domain_error("qseries: leading coefficient of zero series");
        return c_.front();
    }
    // Order at q = 0 or nullopt if zero through the known range.
    std::optional<Rational> order() const {
        if (c_.empty()) return std::nullopt;
        return lead_exp();
    }

    // Coefficient of q^{n/N}.
    T coeff_num(long n) const {
        if (n > hi_) throw std::out_of_range("qseries: coefficient beyond known precision");
        if (n < start_ || n - start_ >= static_cast<long>(c_.size())) return T(0);
        return c_[static_cast<size_t>(n - start_)];
    }
    T coeff(const Rational& e) const {
        Rational s = e * Rational(N_);
        if (e > valid()) throw std::out_of_range("qseries: coefficient beyond known precision");
        if (!s.is_integer()) return T(0);
        return coeff_num(s.to_long());
    }
    T coeff(long e) const { return coeff(Rational(e)); }

    // Same series over a finer exponent lattice.
    QSeries refine(long M) const {
        if (M % N_ != 0) throw std::invalid_argument("qseries: refine needs a multiple of the denominator");
        long f = M / N_;
        if (f == 1) return *this;
        std::vector<T> c;
        if (!c_.empty()) {
            c.assign(static_cast<size_t>((static_cast<long>(c_.size()) - 1) * f + 1), T(0));
            for (size_t k = 0; k < c_.size(); ++k) c[k * static_cast<size_t>(f)] = c_[k];
        }
        QSeries r;
        r.N_ = M;
        r.start_ = c_.empty() ? hi_ * f + 1 : start_ * f;
        r.hi_ = hi_ * f;
        r.c_ = std::move(c);
        return r;
    }

    // Smallest denominator representing the same data.
    QSeries simplified() const {
        long g = N_;
        g = std::gcd(g, hi_);
        if (!c_.empty()) g = std::gcd(g, start_);
        for (size_t k = 0; k < c_.size() && g > 1; ++k)
            if (!is_zero_coeff(c_[k])) g = std::gcd(g, start_ + static_cast<long>(k));
        if (g <= 1) return *this;
        std::vector<T> c;
        for (size_t k = 0; k < c_.size(); k += static_cast<size_t>(g)) c.push_back(c_[k]);
        return QSeries(N_ / g, c_.empty() ? hi_ / g + 1 : start_ / g, hi_ / g, std::move(c));
    }

    QSeries truncate(const Rational& e) const {
        Rational h = e * Rational(N_);
        long nh = std::min(hi_, h.floor().get_si());
        QSeries r = *this;
        r.hi_ = nh;
        if (!r.c_.empty() && static_cast<long>(r.c_.size()) > nh - start_ + 1)
            r.c_.resize(static_cast<size_t>(std::max(0L, nh - start_ + 1)));
        if (r.c_.empty()) r.start_ = nh + 1;
        r.normalize();
        return r;
    }

    // Multiply by q^e.
    QSeries shift(const Rational& e) const {
        long M = lcm_long(N_, e.den().get_si());
        QSeries r = refine(M);
        long d = (e * Rational(M)).to_long();
        r.start_ += d;
        r.hi_ += d;
        return r;
    }

    template <class F>
    auto map(F f) const -> QSeries<decltype(f(std::declval<const T&>()))> {
        using U = decltype(f(std::declval<const T&>()));
        std::vector<U> c;
        c.reserve(c_.size());
        for (const auto& v : c_) c.push_back(f(v));
        return QSeries<U>(N_, c_.empty() ? hi_ + 1 : start_, hi_, std::move(c));
    }

    QSeries operator-() const {
        QSeries r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) { return add(a, b, false); }
    friend QSeries operator-(const QSeries& a, const QSeries& b) { return add(a, b, true); }
    QSeries& operator+=(const QSeries& o) { *this = add(*this, o, false); return *this; }
    QSeries& operator-=(const QSeries& o) { *this = add(*this, o, true); return *this; }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        long M = lcm_long(a.N_, b.N_);
        QSeries x = a.refine(M), y = b.refine(M);
        long sx = x.c_.empty() ? x.hi_ + 1 : x.start_;
        long sy = y.c_.empty() ? y.hi_ + 1 : y.start_;
        long hi = std::min(x.hi_ + sy, y.hi_ + sx);
        if (x.c_.empty() || y.c_.empty()) return zero_at(M, hi);
        long start = x.start_ + y.start_;
        long len = std::min<long>(hi - start + 1, static_cast<long>(x.c_.size() + y.c_.size()) - 1);
        std::vector<T> c(static_cast<size_t>(std::max(0L, len)), T(0));
        for (size_t i = 0; i < x.c_.size(); ++i) {
            if (is_zero_coeff(x.c_[i])) continue;
            for (size_t j = 0; j < y.c_.size() && static_cast<long>(i + j) < len; ++j) {
                if (is_zero_coeff(y.c_[j])) continue;
                addmul(c[i + j], x.c_[i], y.c_[j]);
            }
        }
        return QSeries(M, start, hi, std::move(c));
    }
    QSeries& operator*=(const QSeries& o) { *this = *this * o; return *this; }

    friend QSeries operator*(QSeries a, const Rational& r) {
        if (r.is_zero()) return zero_at(a.N_, a.hi_);
        for (auto& v : a.c_) v = v * r;
        return a;
    }
    friend QSeries operator*(const Rational& r, QSeries a) { return std::move(a) * r; }
    // Scalar multiple by a ring element.
    QSeries scale(const T& s) const {
        if (is_zero_coeff(s)) return zero_at(N_, hi_);
        QSeries r = *this;
        for (auto& v : r.c_) v = v * s;
        r.normalize();
        return r;
    }

    QSeries inv() const {
        if (c_.empty()) throw std::domain_error("qseries: inverse of zero series");
        T a0inv = inverse(c_[0]);
        long m = hi_ - start_;
        std::vector<T> b(static_cast<size_t>(m + 1), T(0));
        b[0] = a0inv;
        for (long n = 1; n <= m; ++n) {
            T s(0);
            long kmax = std::min<long>(n, static_cast<long>(c_.size()) - 1);
            for (long k = 1; k <= kmax; ++k) {
                if (is_zero_coeff(c_[static_cast<size_t>(k)])) continue;
                addmul(s, c_[static_cast<size_t>(k)], b[static_cast<size_t>(n - k)]);
            }
            b[static_cast<size_t>(n)] = -(s * a0inv);
        }
        return QSeries(N_, -start_, hi_ - 2 * start_, std::move(b));
    }

    friend QSeries operator/(const QSeries& a, const QSeries& b) { return a * b.inv(); }

    QSeries pow(long e) const {
        if (e < 0) return inv().pow(-e);
        QSeries r = one_like();
        QSeries base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return r;
    }

    // Rational power; the leading coefficient must be one.
    QSeries pow_rational(const Rational& r) const {
        if (r.is_integer()) return pow(r.to_long());
        if (c_.empty()) throw std::domain_error("qseries: rational power of zero series");
        if (!(c_[0] == T(1))) throw std::domain_error("qseries: rational power needs leading coefficient 1");
        long m = hi_ - start_;
        std::vector<T> b(static_cast<size_t>(m + 1), T(0));
        b[0] = T(1);
        for (long n = 1; n <= m; ++n) {
            T s(0);
            long kmax = std::min<long>(n, static_cast<long>(c_.size()) - 1);
            for (long k = 1; k <= kmax; ++k) {
                if (is_zero_coeff(c_[static_cast<size_t>(k)])) continue;
                Rational w = (r + Rational(1)) * Rational(k) - Rational(n);
                if (w.is_zero()) continue;
                addmul(s, c_[static_cast<size_t>(k)], b[static_cast<size_t>(n - k)] * w);
            }
            b[static_cast<size_t>(n)] = s * Rational(1, n);
        }
        // exponent start*r/N on lattice 1/M with M a multiple of N
        Rational e0 = Rational(start_, N_) * r;
        long M = lcm_long(N_, e0.den().get_si());
        long f = M / N_;
        std::vector<T> c;
        if (f == 1) c = std::move(b);
        else {
            c.assign(static_cast<size_t>(m * f + 1), T(0));
            for (long k = 0; k <= m; ++k) c[static_cast<size_t>(k * f)] = std::move(b[static_cast<size_t>(k)]);
        }
        long s0 = (e0 * Rational(M)).to_long();
        return QSeries(M, s0, s0 + m * f, std::move(c));
    }

    // q d/dq
    QSeries dq() const {
        QSeries r = *this;
        for (size_t k = 0; k < r.c_.size(); ++k) {
            long e = start_ + static_cast<long>(k);
            r.c_[k] = e == 0 ? T(0) : r.c_[k] * Rational(e, N_);
        }
        r.normalize();
        return r;
    }

    // One, known to the relative precision of this series.
    QSeries one_like() const {
        long m = c_.empty() ? hi_ : hi_ - start_;
        return QSeries(N_, 0, m, {T(1)});
    }

    // Equality of all coefficients up to the common known precision.
    bool agrees_with(const QSeries& o) const {
        long M = lcm_long(N_, o.N_);
        QSeries a = refine(M), b = o.refine(M);
        long hi = std::min(a.hi_, b.hi_);
        long lo = std::min(a.c_.empty() ? hi : a.start_, b.c_.empty() ? hi : b.start_);
        for (long n = lo; n <= hi; ++n)
            if (!(a.coeff_num(n) == b.coeff_num(n))) return false;
        return true;
    }

    friend bool operator==(const QSeries& a, const QSeries& b) {
        return a.valid() == b.valid() && a.agrees_with(b);
    }
    friend bool operator!=(const QSeries& a, const QSeries& b) { return !(a == b); }

    // Text form like "q - 24q^2 + 252q^3"; coefficient printing by `fmt`.
    std::string str(const std::function<std::string(const T&)>& fmt, bool with_order = false) const {
        std::ostringstream os;
        bool first = true;
        for (size_t k = 0; k < c_.size(); ++k) {
            if (is_zero_coeff(c_[k])) continue;
            Rational e(start_ + static_cast<long>(k), N_);
            std::string cs = fmt(c_[k]);
            bool neg = !cs.empty() && cs[0] == '-' && cs.find_first_of("+- ", 1) == std::string::npos;
            if (neg) cs = cs.substr(1);
            bool compound = cs.find_first_of("+- ", 0) != std::string::npos;
            if (compound) cs = "(" + cs + ")";
            if (first) os << (neg ? "-" : "");
            else os << (neg ? " - " : " + ");
            first = false;
            if (e.is_zero()) { os << cs; continue; }
            if (cs != "1") os << cs;
            os << "q";
            if (e != Rational(1)) {
                if (e.is_integer() && e.sign() > 0) os << "^" << e;
                else os << "^(" << e << ")";
            }
        }
        if (first) os << "0";
        if (with_order) {
            Rational v = valid();
            os << " + O(q^" << (v.is_integer() ? (v + Rational(1)).str() : "(>" + v.str() + ")") << ")";
        }
        return os.str();
    }

private:
    long N_ = 1;
    long start_ = 1;
    long hi_ = 0;
    std::vector<T> c_;

    static bool is_zero_coeff(const T& v) { return detail::coeff_is_zero(v); }

    static void addmul(T& acc, const T& a, const T& b) {
        if constexpr (std::is_same_v<T, Rational>) acc.addmul(a, b);
        else acc += a * b;
    }

    static QSeries zero_at(long N, long hi) {
        QSeries r;
        r.N_ = N;
        r.hi_ = hi;
        r.start_ = hi + 1;
        return r;
    }

    void normalize() {
        size_t lead = 0;
        while (lead < c_.size() && is_zero_coeff(c_[lead])) ++lead;
        if (lead == c_.size()) {
            c_.clear();
            start_ = hi_ + 1;
            return;
        }
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
            start_ += static_cast<long>(lead);
        }
        while (!c_.empty() && is_zero_coeff(c_.back())) c_.pop_back();
    }

    static QSeries add(const QSeries& a, const QSeries& b, bool subtract) {
        long M = lcm_long(a.N_, b.N_);
        QSeries x = a.refine(M), y = b.refine(M);
        long hi = std::min(x.hi_, y.hi_);
        if (x.c_.empty() && y.c_.empty()) return zero_at(M, hi);
        long start = std::min(x.c_.empty() ? y.start_ : x.start_, y.c_.empty() ? x.start_ : y.start_);
        if (start > hi) return zero_at(M, hi);
        long endx = x.c_.empty() ? start : x.start_ + static_cast<long>(x.c_.size());
        long endy = y.c_.empty() ? start : y.start_ + static_cast<long>(y.c_.size());
        long end = std::min(hi + 1, std::max(endx, endy));
        std::vector<T> c(static_cast<size_t>(end - start), T(0));
        for (size_t k = 0; k < x.c_.size(); ++k) {
            long n = x.start_ + static_cast<long>(k);
            if (n > hi) break;
            c[static_cast<size_t>(n - start)] = x.c_[k];
        }
        for (size_t k = 0; k < y.c_.size(); ++k) {
            long n = y.start_ + static_cast<long>(k);
            if (n > hi) break;
            if (subtract) c[static_cast<size_t>(n - start)] -= y.c_[k];
            else c[static_cast<size_t>(n - start)] += y.c_[k];
        }
        return QSeries(M, start, hi, std::move(c));
    }
};

template <class T>
QSeries<T> dq(const QSeries<T>& s) { return s.dq(); }

// Lift a rational series into a larger coefficient ring.
template <class U>
QSeries<U> lift(const QSeries<Rational>& s) {
    return s.map([](const Rational& r) { return U(r); });
}

} // namespace modeforge
