#pragma once

#include "qseries.hpp"

#include <vector>

namespace modeforge {

// Polynomial in a logarithmic variable L with series coefficients:
// sum_k terms[k] * L^k, where the derivation used by D() satisfies
// D(L) = delta. For a local coordinate x and L = log x, delta = 1 with D = x d/dx.
template <class T>
class LogSeries {
public:
    LogSeries() = default;
    explicit LogSeries(T delta) : delta_(std::move(delta)) {}
    LogSeries(std::vector<QSeries<T>> terms, T delta) : t_(std::move(terms)), delta_(std::move(delta)) { trim(); }
    static LogSeries plain(const QSeries<T>& s, T delta) { return LogSeries({s}, std::move(delta)); }

    const std::vector<QSeries<T>>& terms() const { return t_; }
    const T& delta() const { return delta_; }
    int degree() const { return static_cast<int>(t_.size()) - 1; }
    bool is_log_free() const { return t_.size() <= 1; }
    // Coefficient of L^k.
    QSeries<T> coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(t_.size())) return QSeries<T>::zero(min_valid().floor().get_si());
        return t_[static_cast<size_t>(k)];
    }

    LogSeries D() const {
        LogSeries r(delta_);
        r.t_.resize(t_.size());
        for (size_t k = 0; k < t_.size(); ++k) r.t_[k] = t_[k].dq();
        for (size_t k = 1; k < t_.size(); ++k)
            r.t_[k - 1] = r.t_[k - 1] + t_[k].scale(delta_ * Rational(static_cast<long>(k)));
        r.trim();
        return r;
    }

    friend LogSeries operator+(const LogSeries& a, const LogSeries& b) { return combine(a, b, false); }
    friend LogSeries operator-(const LogSeries& a, const LogSeries& b) { return combine(a, b, true); }
    LogSeries operator-() const {
        LogSeries r = *this;
        for (auto& s : r.t_) s = -s;
        return r;
    }
    friend LogSeries operator*(const LogSeries& a, const LogSeries& b) {
        LogSeries r(a.delta_);
        if (a.t_.empty() || b.t_.empty()) return r;
        r.t_.resize(a.t_.size() + b.t_.size() - 1);
        std::vector<bool> set(r.t_.size(), false);
        for (size_t i = 0; i < a.t_.size(); ++i)
            for (size_t j = 0; j < b.t_.size(); ++j) {
                QSeries<T> p = a.t_[i] * b.t_[j];
                if (set[i + j]) r.t_[i + j] = r.t_[i + j] + p;
                else { r.t_[i + j] = std::move(p); set[i + j] = true; }
            }
        r.trim();
        return r;
    }
    friend LogSeries operator*(const LogSeries& a, const QSeries<T>& s) {
        LogSeries r = a;
        for (auto& t : r.t_) t = t * s;
        r.trim();
        return r;
    }
    friend LogSeries operator*(LogSeries a, const Rational& c) {
        for (auto& t : a.t_) t = t * c;
        a.trim();
        return a;
    }
    LogSeries scale(const T& c) const {
        LogSeries r = *this;
        for (auto& t : r.t_) t = t.scale(c);
        r.trim();
        return r;
    }
    LogSeries truncate(const Rational& e) const {
        LogSeries r = *this;
        for (auto& t : r.t_) t = t.truncate(e);
        r.trim();
        return r;
    }

    Rational min_valid() const {
        if (t_.empty()) return Rational(0);
        Rational v = t_[0].valid();
        for (const auto& s : t_) v = std::min(v, s.valid());
        return v;
    }
    bool is_zero() const {
        for (const auto& s : t_)
            if (!s.is_zero()) return false;
        return true;
    }

private:
    std::vector<QSeries<T>> t_;
    T delta_{};

    void trim() {
        while (t_.size() > 1 && t_.back().is_zero()) t_.pop_back();
    }

    static LogSeries combine(const LogSeries& a, const LogSeries& b, bool subtract) {
        LogSeries r(a.delta_);
        size_t n = std::max(a.t_.size(), b.t_.size());
        r.t_.resize(n);
        for (size_t k = 0; k < n; ++k) {
            if (k < a.t_.size() && k < b.t_.size()) r.t_[k] = subtract ? a.t_[k] - b.t_[k] : a.t_[k] + b.t_[k];
            else if (k < a.t_.size()) r.t_[k] = a.t_[k];
            else r.t_[k] = subtract ? -b.t_[k] : b.t_[k];
        }
        r.trim();
        return r;
    }
};

} // namespace modeforge
