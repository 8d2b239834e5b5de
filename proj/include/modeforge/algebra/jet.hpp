#pragma once

#include "rational.hpp"

#include <array>

namespace modeforge {

// Truncated expansion v0 + v1 e + v2 e^2 in a formal parameter e with e^3 = 0.
template <class T>
struct Jet {
    std::array<T, 3> v{T(0), T(0), T(0)};

    Jet() = default;
    Jet(int x) : v{T(x), T(0), T(0)} {}
    Jet(const T& x) : v{x, T(0), T(0)} {}
    Jet(const T& a, const T& b, const T& c) : v{a, b, c} {}

    const T& value() const { return v[0]; }
    // First and second derivative with respect to the parameter at e = 0.
    T d1() const { return v[1]; }
    T d2() const { return v[2] * Rational(2); }

    friend Jet operator+(const Jet& a, const Jet& b) { return {a.v[0] + b.v[0], a.v[1] + b.v[1], a.v[2] + b.v[2]}; }
    friend Jet operator-(const Jet& a, const Jet& b) { return {a.v[0] - b.v[0], a.v[1] - b.v[1], a.v[2] - b.v[2]}; }
    Jet operator-() const { return {-v[0], -v[1], -v[2]}; }
    Jet& operator+=(const Jet& o) { *this = *this + o; return *this; }
    Jet& operator-=(const Jet& o) { *this = *this - o; return *this; }
    friend Jet operator*(const Jet& a, const Jet& b) {
        return {a.v[0] * b.v[0], a.v[0] * b.v[1] + a.v[1] * b.v[0], a.v[0] * b.v[2] + a.v[1] * b.v[1] + a.v[2] * b.v[0]};
    }
    friend Jet operator*(const Jet& a, const Rational& r) { return {a.v[0] * r, a.v[1] * r, a.v[2] * r}; }
    friend bool operator==(const Jet& a, const Jet& b) { return a.v == b.v; }
    friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

    Jet inv() const {
        T b0 = inverse(v[0]);
        T b1 = -(v[1] * b0 * b0);
        T b2 = b0 * b0 * (v[1] * v[1] * b0 - v[2]);
        return {b0, b1, b2};
    }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.inv(); }
};

template <class T>
bool is_zero(const Jet<T>& j) { return is_zero(j.v[0]) && is_zero(j.v[1]) && is_zero(j.v[2]); }
template <class T>
Jet<T> inverse(const Jet<T>& j) { return j.inv(); }

} // namespace modeforge
