#pragma once

#include "rational.hpp"

#include <array>
#include <optional>
#include <vector>

namespace modeforge {

using Matrix = std::vector<std::vector<Rational>>;

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<size_t> rref(Matrix& a) {
    std::vector<size_t> piv;
    if (a.empty()) return piv;
    size_t rows = a.size(), cols = a[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        Rational inv = a[r][c].inv();
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Rational f = a[i][c];
            for (size_t j = c; j < cols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

// Basis of the right kernel of a (rows x cols).
inline std::vector<std::vector<Rational>> nullspace(Matrix a, size_t cols) {
    std::vector<std::vector<Rational>> basis;
    if (a.empty()) {
        for (size_t j = 0; j < cols; ++j) {
            std::vector<Rational> v(cols, Rational(0));
            v[j] = Rational(1);
            basis.push_back(v);
        }
        return basis;
    }
    auto piv = rref(a);
    std::vector<bool> is_piv(cols, false);
    for (size_t c : piv) is_piv[c] = true;
    for (size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[f] = Rational(1);
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solves a x = b; nullopt if inconsistent. `unique` reports whether the
// solution is determined.
inline std::optional<std::vector<Rational>> solve(const Matrix& a, const std::vector<Rational>& b, bool* unique = nullptr) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    Matrix m = a;
    for (size_t i = 0; i < rows; ++i) m[i].push_back(b[i]);
    auto piv = rref(m);
    for (size_t c : piv)
        if (c == cols) return std::nullopt;
    std::vector<Rational> x(cols, Rational(0));
    for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = m[i][cols];
    if (unique) *unique = piv.size() == cols;
    return x;
}

inline Rational det3(const std::array<std::array<Rational, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

} // namespace modeforge
