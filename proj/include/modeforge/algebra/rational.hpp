#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace modeforge {

// Exact rational number. Thin value wrapper over mpq_class so that `auto`
// never captures a GMP expression template.
class Rational {
public:
    Rational() = default;
    Rational(int v) : v_(v) {}
    Rational(long v) : v_(v) {}
    Rational(long long v) : v_(static_cast<long>(v)) {}
    Rational(long num, long den) {
        if (den == 0) throw std::domain_error("rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(const mpz_class& z) : v_(z) {}
    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Accepts "p", "-p", "p/q".
    static Rational parse(const std::string& s) {
        std::string t;
        for (char ch : s)
            if (ch != ' ' && ch != '+') t.push_back(ch);
        if (t.empty()) throw std::invalid_argument("rational: empty string");
        mpq_class q;
        if (q.set_str(t, 10) != 0) throw std::invalid_argument("rational: cannot parse '" + s + "'");
        if (q.get_den() == 0) throw std::domain_error("rational: zero denominator");
        q.canonicalize();
        return Rational(q);
    }

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }
    double to_double() const { return v_.get_d(); }

    long to_long() const {
        if (!is_integer() || !v_.get_num().fits_slong_p()) throw std::domain_error("rational: not a machine integer");
        return v_.get_num().get_si();
    }

    mpz_class floor() const {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return r;
    }

    Rational inv() const {
        if (is_zero()) throw std::domain_error("rational: division by zero");
        return Rational(mpq_class(1) / v_);
    }

    Rational pow(long e) const {
        if (e < 0) return inv().pow(-e);
        mpz_class n, d;
        mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(e));
        mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(e));
        return Rational(n, d);
    }

    std::string str() const { return v_.get_str(10); }

    Rational& operator+=(const Rational& o) { mpq_add(v_.get_mpq_t(), v_.get_mpq_t(), o.v_.get_mpq_t()); return *this; }
    Rational& operator-=(const Rational& o) { mpq_sub(v_.get_mpq_t(), v_.get_mpq_t(), o.v_.get_mpq_t()); return *this; }
    Rational& operator*=(const Rational& o) { mpq_mul(v_.get_mpq_t(), v_.get_mpq_t(), o.v_.get_mpq_t()); return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("rational: division by zero");
        mpq_div(v_.get_mpq_t(), v_.get_mpq_t(), o.v_.get_mpq_t());
        return *this;
    }

    // this += a * b without a temporary allocation on the caller side
    void addmul(const Rational& a, const Rational& b) {
        mpq_class t;
        mpq_mul(t.get_mpq_t(), a.v_.get_mpq_t(), b.v_.get_mpq_t());
        mpq_add(v_.get_mpq_t(), v_.get_mpq_t(), t.get_mpq_t());
    }

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
    Rational operator-() const { Rational r; mpq_neg(r.v_.get_mpq_t(), v_.get_mpq_t()); return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) < 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class v_;
};

inline bool is_zero(const Rational& r) { return r.is_zero(); }
inline Rational inverse(const Rational& r) { return r.inv(); }
inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline long lcm_long(long a, long b) {
    if (a == 0 || b == 0) return 0;
    long g = std::gcd(a, b);
    return std::abs(a / g * b);
}

} // namespace modeforge

template <>
struct std::hash<modeforge::Rational> {
    size_t operator()(const modeforge::Rational& r) const noexcept {
        return std::hash<std::string>{}(r.str());
    }
};
