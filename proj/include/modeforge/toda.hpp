#pragma once

#include "algebra.hpp"
#include "mode.hpp"
#include "modforms.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modeforge::toda {

using Series = QSeries<Rational>;
using cd = std::complex<double>;

inline constexpr double two_pi = 2 * std::numbers::pi;

// Double-precision copy of a q-series for evaluation at tau in H.
struct NumSeries {
    long denom = 1, start = 0, hi = 0;
    std::vector<double> c;

    explicit NumSeries(const Series& s)
        : denom(s.denom()), start(s.start_num()), hi(s.hi_num()) {
        for (const auto& v : s.raw()) c.push_back(v.to_double());
    }

    struct Value {
        cd value;
        double tail;
    };

    Value eval(cd tau) const {
        if (tau.imag() <= 0) throw std::invalid_argument("eval_series: tau must lie in the upper half plane");
        cd x = std::exp(cd(0, two_pi / static_cast<double>(denom)) * tau);  // q^{1/N}
        cd acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        cd v = acc * std::pow(x, static_cast<double>(start));
        double ax = std::abs(x);
        double tail = 0;
        if (!c.empty()) {
            size_t k0 = c.size() > 3 ? c.size() - 3 : 0;
            double m = 0;
            for (size_t k = k0; k < c.size(); ++k) m = std::max(m, std::abs(c[k]));
            tail = m * std::pow(ax, static_cast<double>(hi + 1)) / std::max(1e-300, 1 - ax) * static_cast<double>(hi + 1);
        }
        return {v, tail};
    }
};

inline NumSeries::Value eval_series(const Series& s, cd tau, double tol = 1e-12) {
    auto v = NumSeries(s).eval(tau);
    if (v.tail > tol * std::max(1.0, std::abs(v.value)))
        throw std::invalid_argument("eval_series: truncation tail too large; increase the order");
    return v;
}

struct TripleSeed {
    int weight = 0;
    std::vector<Series> f;  // three forms in M_k
    long order = 0;
};

inline TripleSeed weight24_seed(long order) {
    auto E4 = modforms::E4(order), D = modforms::Delta(order);
    return {24, {E4.pow(6), (E4.pow(3) * D).truncate(Rational(order)), D.pow(2).truncate(Rational(order))}, order};
}

struct Grid {
    double x0 = -0.3, x1 = 0.3, y0 = 0.9, y1 = 1.5;
    int n = 41;
    double hx() const { return (x1 - x0) / (n - 1); }
    double hy() const { return (y1 - y0) / (n - 1); }
    cd node(int i, int j) const { return {x0 + i * hx(), y0 + j * hy()}; }
};

// Elliptic fixed points (orbits of i and rho) and given generic points inside a window.
inline std::vector<cd> singular_points(const Grid& g, double margin, const std::vector<cd>& generic = {}) {
    std::vector<cd> base{cd(0, 1), cd(-0.5, std::sqrt(3.0) / 2)};
    for (const auto& p : generic) base.push_back(p);
    std::vector<cd> out;
    const int C = 8;
    for (int c = 0; c <= C; ++c)
        for (int d = -C; d <= C; ++d) {
            if (std::gcd(c, d) != 1 || (c == 0 && d != 1)) continue;
            // a d - b c = 1
            int a = 1, b = 0;
            if (c != 0) {
                bool found = false;
                for (a = -C * C; a <= C * C && !found; ++a)
                    if ((a * d - 1) % c == 0) {
                        b = (a * d - 1) / c;
                        found = true;
                        break;
                    }
                if (!found) continue;
            }
            for (const auto& z : base) {
                cd w = (static_cast<double>(a) * z + static_cast<double>(b)) / (static_cast<double>(c) * z + static_cast<double>(d));
                double shift = std::floor(w.real() - g.x0 + margin);
                for (double k = -shift - 2; k <= -shift + 2; ++k) {
                    cd p = w + k;
                    if (p.real() >= g.x0 - margin && p.real() <= g.x1 + margin && p.imag() >= g.y0 - margin &&
                        p.imag() <= g.y1 + margin) {
                        bool dup = false;
                        for (const auto& q : out) dup = dup || std::abs(q - p) < 1e-9;
                        if (!dup) out.push_back(p);
                    }
                }
            }
        }
    return out;
}

// f = E4^a E6^b g with g nonvanishing at the elliptic points; avoids cancellation near i and rho.
struct Factored {
    int a = 0, b = 0;
    NumSeries rest;
    Factored(const Series& f, int weight) : rest(f) {
        long n = f.hi_num() / f.denom();
        Series E4 = modforms::E4(n), E6 = modforms::E6(n), g = f;
        for (bool more = true; more;) {
            more = false;
            for (auto [E, w, e] : {std::tuple{&E4, 4, &a}, std::tuple{&E6, 6, &b}}) {
                if (weight < w) continue;
                Series h = g / *E;
                if (modforms::membership(h, weight - w)) {
                    g = h;
                    weight -= w;
                    ++*e;
                    more = true;
                }
            }
        }
        rest = NumSeries(g);
    }
    NumSeries::Value eval(cd tau, const NumSeries& E4, const NumSeries& E6) const {
        auto r = rest.eval(tau);
        cd m = std::pow(E4.eval(tau).value, a) * std::pow(E6.eval(tau).value, b);
        return {r.value * m, r.tail * std::abs(m)};
    }
};

// Exact data of a triple: pair Wronskians and the full Wronskian, all with D_q.
struct TodaSeries {
    std::vector<Factored> f;
    std::vector<Factored> w;  // W_12, W_23, W_31
    Factored W;
    NumSeries E4, E6;
    Series W_exact;
};

inline TodaSeries prepare(const TripleSeed& s) {
    if (s.f.size() != 3) throw std::invalid_argument("toda: need three forms");
    Matrix rows;
    for (const auto& x : s.f) {
        auto c = modforms::membership(x, s.weight);
        if (!c) throw std::invalid_argument("toda: input is not in M_k");
        rows.push_back(*c);
    }
    if (rref(rows).size() != 3) throw std::invalid_argument("toda: the three forms are linearly dependent");
    std::vector<Series> d;
    for (const auto& x : s.f) d.push_back(x.dq());
    auto pair = [&](int i, int j) { return (d[static_cast<size_t>(i)] * s.f[static_cast<size_t>(j)] - d[static_cast<size_t>(j)] * s.f[static_cast<size_t>(i)]); };
    Series W = mode::triple_wronskian(s.f);
    long n = W.hi_num() / W.denom();
    TodaSeries t{{}, {}, Factored(W, 3 * (s.weight + 2)), NumSeries(modforms::E4(n)), NumSeries(modforms::E6(n)), W};
    for (int j = 0; j < 3; ++j) t.f.emplace_back(s.f[static_cast<size_t>(j)], s.weight);
    for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{2, 0}}) t.w.emplace_back(pair(i, j), 2 * s.weight + 2);
    return t;
}

struct Params {
    double lambda = 1, mu = 1;
    std::array<double, 3> a() const { return {lambda * lambda / mu, mu * mu / lambda, 1 / (lambda * mu)}; }
    std::array<double, 3> b() const { return {lambda * mu, mu / (lambda * lambda), lambda / (mu * mu)}; }
};

// Pointwise values in d/dz: y_j = f_j / W_z^{1/3}, W(y_i, y_j) = 2 pi i W_ij / W_z^{2/3}.
struct PointValues {
    std::array<cd, 3> f, w;
    cd Wz;
    double U1, U2;
};

inline PointValues point_values(const TodaSeries& t, const Params& p, cd z) {
    PointValues v;
    double tail = 0;
    for (int j = 0; j < 3; ++j) {
        auto e = t.f[static_cast<size_t>(j)].eval(z, t.E4, t.E6);
        v.f[static_cast<size_t>(j)] = e.value;
        auto w = t.w[static_cast<size_t>(j)].eval(z, t.E4, t.E6);
        v.w[static_cast<size_t>(j)] = cd(0, two_pi) * w.value;
        tail = std::max({tail, e.tail / std::max(1e-300, std::abs(e.value)), w.tail / std::max(1e-300, std::abs(w.value))});
    }
    auto W = t.W.eval(z, t.E4, t.E6);
    v.Wz = std::pow(cd(0, two_pi), 3) * W.value;
    if (tail > 1e-10) throw std::invalid_argument("toda: series order too low at this point");
    auto a = p.a(), b = p.b();
    double s1 = 0, s2 = 0;
    for (int j = 0; j < 3; ++j) {
        s1 += a[static_cast<size_t>(j)] * std::norm(v.f[static_cast<size_t>(j)]);
        s2 += b[static_cast<size_t>(j)] * std::norm(v.w[static_cast<size_t>(j)]);
    }
    double lw = std::log(std::abs(v.Wz));
    v.U1 = -std::log(s1 / 4) + 2.0 / 3.0 * lw;
    v.U2 = -std::log(s2 / 4) + 4.0 / 3.0 * lw;
    return v;
}

// Smooth parts: U1 and U2 minus harmonic terms, normalized by the entry `k`.
inline double smooth1(const PointValues& v, const Params& p, int k) {
    auto a = p.a();
    double s = 0;
    for (int j = 0; j < 3; ++j) s += a[static_cast<size_t>(j)] * std::norm(v.f[static_cast<size_t>(j)] / v.f[static_cast<size_t>(k)]);
    return -std::log(s / 4);
}

inline double smooth2(const PointValues& v, const Params& p, int k) {
    auto b = p.b();
    double s = 0;
    for (int j = 0; j < 3; ++j) s += b[static_cast<size_t>(j)] * std::norm(v.w[static_cast<size_t>(j)] / v.w[static_cast<size_t>(k)]);
    return -std::log(s / 4);
}

inline int argmax_abs(const std::array<cd, 3>& x) {
    int k = 0;
    for (int j = 1; j < 3; ++j)
        if (std::abs(x[static_cast<size_t>(j)]) > std::abs(x[static_cast<size_t>(k)])) k = j;
    return k;
}

struct Node {
    double x = 0, y = 0;
    bool active = false;  // residuals computed
    double U1 = 0, U2 = 0, u1 = 0, u2 = 0;
    double res1 = std::numeric_limits<double>::quiet_NaN(), res2 = std::numeric_limits<double>::quiet_NaN();
    double naive1 = std::numeric_limits<double>::quiet_NaN(), naive2 = std::numeric_limits<double>::quiet_NaN();
};

struct TodaField {
    Params params;
    Grid grid;
    std::vector<Node> nodes;  // row-major in y
    int excluded = 0;
    double max_res1 = 0, max_res2 = 0;
    double max_naive1 = 0, max_naive2 = 0;
    const Node& at(int i, int j) const { return nodes[static_cast<size_t>(j * grid.n + i)]; }
};

// Residuals of Delta U1 + e^{2U1 - U2} and Delta U2 + e^{2U2 - U1} with a 5-point Laplacian.
// The Laplacian acts on the smooth parts; `naive` applies it to U directly.
inline TodaField toda_fields(const TodaSeries& t, const Params& p, const Grid& g, double margin = 0.05,
                             const std::vector<cd>& generic = {}) {
    if (!(p.lambda > 0) || !(p.mu > 0)) throw std::invalid_argument("toda: lambda and mu must be positive");
    if (g.n < 3) throw std::invalid_argument("toda: grid needs at least 3 nodes per side");
    auto sing = singular_points(g, margin, generic);
    TodaField out;
    out.params = p;
    out.grid = g;
    out.nodes.resize(static_cast<size_t>(g.n * g.n));
    double hx = g.hx(), hy = g.hy();
    auto near = [&](cd z, double r) {
        for (const auto& s : sing)
            if (std::abs(z - s) < r) return true;
        return false;
    };
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            Node& nd = out.nodes[static_cast<size_t>(j * g.n + i)];
            cd z = g.node(i, j);
            nd.x = z.real();
            nd.y = z.imag();
            if (near(z, margin)) {
                ++out.excluded;
                continue;
            }
            auto v = point_values(t, p, z);
            nd.U1 = v.U1;
            nd.U2 = v.U2;
            nd.u1 = 2 * v.U1 - v.U2;
            nd.u2 = 2 * v.U2 - v.U1;
            if (i == 0 || j == 0 || i == g.n - 1 || j == g.n - 1) continue;
            if (near(z, margin + std::max(hx, hy))) continue;
            int k1 = argmax_abs(v.f), k2 = argmax_abs(v.w);
            std::array<cd, 4> nb{z + hx, z - hx, z + cd(0, hy), z - cd(0, hy)};
            double c1 = smooth1(v, p, k1), c2 = smooth2(v, p, k2);
            double l1x = -2 * c1, l1y = -2 * c1, l2x = -2 * c2, l2y = -2 * c2;
            double n1x = -2 * v.U1, n1y = -2 * v.U1, n2x = -2 * v.U2, n2y = -2 * v.U2;
            for (int s = 0; s < 4; ++s) {
                auto w = point_values(t, p, nb[static_cast<size_t>(s)]);
                bool horiz = s < 2;
                (horiz ? l1x : l1y) += smooth1(w, p, k1);
                (horiz ? l2x : l2y) += smooth2(w, p, k2);
                (horiz ? n1x : n1y) += w.U1;
                (horiz ? n2x : n2y) += w.U2;
            }
            double lap1 = l1x / (hx * hx) + l1y / (hy * hy), lap2 = l2x / (hx * hx) + l2y / (hy * hy);
            double nl1 = n1x / (hx * hx) + n1y / (hy * hy), nl2 = n2x / (hx * hx) + n2y / (hy * hy);
            double e1 = std::exp(2 * v.U1 - v.U2), e2 = std::exp(2 * v.U2 - v.U1);
            nd.active = true;
            nd.res1 = lap1 + e1;
            nd.res2 = lap2 + e2;
            nd.naive1 = nl1 + e1;
            nd.naive2 = nl2 + e2;
            out.max_res1 = std::max(out.max_res1, std::abs(nd.res1));
            out.max_res2 = std::max(out.max_res2, std::abs(nd.res2));
            out.max_naive1 = std::max(out.max_naive1, std::abs(nd.naive1));
            out.max_naive2 = std::max(out.max_naive2, std::abs(nd.naive2));
        }
    return out;
}

// Max residual ratio between grid spacing h and h/2 over the coarse active nodes.
struct Scaling {
    double coarse = 0, fine = 0;
    double ratio() const { return fine > 0 ? coarse / fine : std::numeric_limits<double>::infinity(); }
};

inline Scaling residual_scaling(const TodaSeries& t, const Params& p, const Grid& g, double margin = 0.05) {
    auto a = toda_fields(t, p, g, margin);
    Grid h = g;
    h.n = 2 * g.n - 1;
    auto b = toda_fields(t, p, h, margin);
    Scaling s;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const Node& c = a.at(i, j);
            const Node& f = b.at(2 * i, 2 * j);
            if (!c.active || !f.active) continue;
            s.coarse = std::max({s.coarse, std::abs(c.res1), std::abs(c.res2)});
            s.fine = std::max({s.fine, std::abs(f.res1), std::abs(f.res2)});
        }
    return s;
}

// U1(-1/z) - U1(z) - 4 ln|z|.
inline double automorphy_defect(const TodaSeries& t, const Params& p, cd z) {
    auto a = point_values(t, p, z), b = point_values(t, p, -1.0 / z);
    return b.U1 - a.U1 - 4 * std::log(std::abs(z));
}

// w = E4^3 / (E4^3 - E6^2) and w' = -2 pi i E4^2 E6 / (E4^3 - E6^2).
struct PlaneSample {
    cd z, w;
    double v1, v2;
};

struct PlaneMap {
    NumSeries E4, E6, D0;
    explicit PlaneMap(long order)
        : E4(modforms::E4(order)), E6(modforms::E6(order)), D0(modforms::Delta0(order)) {}
    std::pair<cd, cd> w_and_dw(cd z) const {
        cd e4 = E4.eval(z).value, e6 = E6.eval(z).value, d0 = D0.eval(z).value;
        return {e4 * e4 * e4 / d0, cd(0, -two_pi) * e4 * e4 * e6 / d0};
    }
};

inline PlaneSample plane_sample(const TodaSeries& t, const PlaneMap& m, const Params& p, cd z) {
    auto [w, dw] = m.w_and_dw(z);
    if (std::abs(dw) < 1e-12) throw std::invalid_argument("plane_transform: sample at a critical point of w");
    auto v = point_values(t, p, z);
    double l = 2 * std::log(std::abs(dw));
    return {z, w, 2 * v.U1 - v.U2 - l, 2 * v.U2 - v.U1 - l};
}

inline std::vector<PlaneSample> plane_transform(const TodaSeries& t, const TodaField& f, long order) {
    PlaneMap m(order);
    std::vector<PlaneSample> out;
    for (const auto& nd : f.nodes) {
        if (nd.U1 == 0 && nd.U2 == 0) continue;
        out.push_back(plane_sample(t, m, f.params, cd(nd.x, nd.y)));
    }
    return out;
}

// Dirac coefficients of the plane system from the exponent data.
struct PlaneCoefficients {
    std::array<Rational, 2> at_one, at_zero, infinity_slope;
    std::vector<std::array<Rational, 2>> generic;
};

inline PlaneCoefficients plane_coefficients(const std::vector<mode::PointReport>& reports) {
    PlaneCoefficients c;
    for (const auto& r : reports) {
        auto e = r.exponents.sorted();
        if (r.cusp) {
            std::array<Rational, 2> m{e[1] - e[0], e[2] - e[1]};
            for (int k = 0; k < 2; ++k) c.infinity_slope[static_cast<size_t>(k)] = Rational(-2) * (m[static_cast<size_t>(k)] + Rational(1));
            continue;
        }
        std::array<Rational, 2> m{e[1] - e[0] - Rational(1), e[2] - e[1] - Rational(1)};
        if (r.point->tag == taylor::PointTag::I)
            for (int k = 0; k < 2; ++k) c.at_one[static_cast<size_t>(k)] = (m[static_cast<size_t>(k)] - Rational(1)) / Rational(2);
        else if (r.point->tag == taylor::PointTag::Rho)
            for (int k = 0; k < 2; ++k) c.at_zero[static_cast<size_t>(k)] = (m[static_cast<size_t>(k)] - Rational(2)) / Rational(3);
        else c.generic.push_back(m);
    }
    return c;
}

} // namespace modeforge::toda
