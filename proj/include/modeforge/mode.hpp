#pragma once

#include "algebra.hpp"
#include "frobenius.hpp"
#include "modforms.hpp"
#include "quasi.hpp"
#include "taylor.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modeforge::mode {

using Series = QSeries<Rational>;
using CSeries = QSeries<CPoly>;

enum class Provenance { QuasiSeed, TripleSeed, Ansatz };

inline std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::QuasiSeed: return "quasi-seed";
        case Provenance::TripleSeed: return "triple-seed";
        case Provenance::Ansatz: return "ansatz";
    }
    return "?";
}

// Rational parameters of the E4/E6/Delta0/F_t generator language.
struct PointParams {
    Rational t, r2, r1, s3, s2, s1;
};

struct Params {
    Rational r_inf, s_inf;
    Rational r_i2, s_i3, s_i1;
    Rational r_rho2, s_rho3;
    std::vector<PointParams> points;

    taylor::Ansatz ansatz() const {
        taylor::Ansatz a;
        a.r_inf = Frac(r_inf);
        a.s_inf = Frac(s_inf);
        a.r_i2 = Frac(r_i2);
        a.s_i3 = Frac(s_i3);
        a.s_i1 = Frac(s_i1);
        a.r_rho2 = Frac(r_rho2);
        a.s_rho3 = Frac(s_rho3);
        for (const auto& p : points) a.points.push_back({Frac(p.t), Frac(p.r2), Frac(p.r1), Frac(p.s3), Frac(p.s2), Frac(p.s1)});
        return a;
    }
};

// Zeros of the seed Wronskian in the fundamental domain.
struct Inventory {
    int w_weight = 0;
    int ord_inf = 0, ord_i = 0, ord_rho = 0;
    UPoly generic;                       // P(j) with the roots 0 and 1728 removed
    std::map<Rational, int> generic_j;   // rational roots of `generic`
    bool roots_complete = true;
    std::vector<Rational> t_values() const {
        std::vector<Rational> t;
        for (const auto& [j, m] : generic_j) t.push_back(j / (j - Rational(1728)));
        return t;
    }
    Rational kappa1_inf() const { return Rational(-ord_inf, 3); }
    Rational kappa1_i() const { return Rational(-ord_i, 3); }
    Rational kappa1_rho() const { return Rational(-ord_rho, 3); }
};

inline Inventory singular_inventory(const Series& W, int weight) {
    auto fz = modforms::factor_form(W, weight);
    Inventory inv;
    inv.w_weight = weight;
    inv.ord_inf = fz.d;
    inv.ord_i = fz.e6_power;
    inv.ord_rho = fz.e4_power;
    inv.generic = fz.residual;
    inv.generic_j = fz.residual_roots;
    inv.roots_complete = fz.roots_complete;
    for (const auto& [j, m] : inv.generic_j)
        if (m != 1) throw std::invalid_argument("singular_inventory: repeated generic zero of W is not supported");
    return inv;
}

struct ModeData {
    Series Q, R;
    long order = 0;
    Provenance provenance = Provenance::Ansatz;
    frobenius::LocalExponents cusp;
    std::optional<Inventory> inventory;
    std::optional<Params> closed;
    std::optional<quasi::CMonomialSeries> W;  // seed Wronskian, D_q convention
    int seed_weight = 0;
};

// General monic annihilator D^3 + P2 D^2 + P1 D + P0 of three functions and
// its reduction D^3 + Q D + (DQ/2 + R).
struct RawMode {
    CSeries P2, P1, P0;
    CSeries Q, R;
    LogSeries<CPoly> W;
};

inline RawMode annihilator(const std::vector<LogSeries<CPoly>>& y) {
    using quasi::det3;
    if (y.size() != 3) throw std::invalid_argument("mode_from_solutions: need three solutions");
    std::vector<LogSeries<CPoly>> d1, d2, d3;
    for (const auto& v : y) {
        d1.push_back(v.D());
        d2.push_back(d1.back().D());
        d3.push_back(d2.back().D());
    }
    auto W = det3(y[0], d1[0], d2[0], y[1], d1[1], d2[1], y[2], d1[2], d2[2]);
    auto W2 = det3(y[0], d2[0], d3[0], y[1], d2[1], d3[1], y[2], d2[2], d3[2]);
    auto W3 = det3(d1[0], d2[0], d3[0], d1[1], d2[1], d3[1], d1[2], d2[2], d3[2]);
    if (W.is_zero()) throw std::invalid_argument("mode_from_solutions: inputs are linearly dependent to working order");
    if (!W.is_log_free() || !W2.is_log_free() || !W3.is_log_free())
        throw std::invalid_argument("mode_from_solutions: span of inputs is not closed under the log monodromy");
    CSeries w = W.coeff(0);
    if (!w.lead_coeff().is_monomial()) throw std::invalid_argument("mode_from_solutions: Wronskian is not unit-normalizable");
    CSeries iw = w.inv();
    RawMode m;
    m.W = W;
    m.P2 = -(w.dq() * iw);
    m.P1 = W2.coeff(0) * iw;
    m.P0 = -(W3.coeff(0) * iw);
    CSeries dP2 = m.P2.dq();
    m.Q = m.P1 - m.P2 * m.P2 * Rational(1, 3) - dP2;
    CSeries Z0 = m.P0 - m.P2 * m.P1 * Rational(1, 3) + m.P2 * m.P2 * m.P2 * Rational(2, 27) - dP2.dq() * Rational(1, 3);
    m.R = Z0 - m.Q.dq() * Rational(1, 2);
    for (size_t j = 0; j < 3; ++j) {
        auto res = d3[j] + d2[j] * m.P2 + d1[j] * m.P1 + y[j] * m.P0;
        if (!res.is_zero()) throw std::logic_error("mode_from_solutions: annihilator check failed");
    }
    return m;
}

inline Series c_free(const CSeries& s, const char* what) {
    std::vector<Rational> c;
    for (const auto& v : s.raw()) {
        auto r = v.as_rational();
        if (!r) throw std::logic_error(std::string("c-cancellation failed in ") + what);
        c.push_back(*r);
    }
    return Series(s.denom(), s.start_num(), s.hi_num(), std::move(c));
}

// Q and R through q^order from three solutions; requires the c-powers to cancel.
inline ModeData mode_from_solutions(const std::vector<LogSeries<CPoly>>& y, long order) {
    RawMode raw = annihilator(y);
    ModeData m;
    m.Q = c_free(raw.Q, "Q");
    m.R = c_free(raw.R, "R");
    if (m.Q.valid() < Rational(order) || m.R.valid() < Rational(order)) {
        long need = order + (Rational(order) - std::min(m.Q.valid(), m.R.valid())).floor().get_si() + 1;
        throw std::invalid_argument("mode_from_solutions: insufficient order; inputs needed through about q^" + std::to_string(need));
    }
    m.Q = m.Q.truncate(Rational(order));
    m.R = m.R.truncate(Rational(order));
    m.order = order;
    m.W = quasi::split_c_power(raw.W.coeff(0));
    m.cusp = frobenius::indicial(frobenius::Form::Cusp, m.Q.coeff(0), m.R.coeff(0));
    return m;
}

namespace detail {

inline Series F_t(const Rational& t, long n) {
    return modforms::E4(n).pow(3) - modforms::E6(n).pow(2) * t;
}

} // namespace detail

// Least-data fit of Q and R to the generators allowed by the inventory; the
// fit uses every known coefficient, so success certifies equality to `order`.
inline std::optional<Params> fit_closed_form(const Series& Q, const Series& R, const Inventory& inv) {
    if (!inv.roots_complete || inv.generic.degree() != static_cast<int>(inv.generic_j.size())) return std::nullopt;
    long n = std::min(Q.valid(), R.valid()).floor().get_si();
    Series E4 = modforms::E4(n), E6 = modforms::E6(n), D0 = modforms::Delta0(n);
    Series iE6 = E6.inv(), iE4 = E4.inv();
    auto ts = inv.t_values();
    std::vector<Series> qg{E4}, rg{E6};
    if (inv.ord_i > 0) {
        qg.push_back(E4 * D0 * iE6 * iE6);
        rg.push_back(D0 * D0 * iE6 * iE6 * iE6);
        rg.push_back(D0 * iE6);
    }
    if (inv.ord_rho > 0) {
        qg.push_back(D0 * iE4 * iE4);
        rg.push_back(E6 * D0 * iE4 * iE4 * iE4);
    }
    for (const auto& t : ts) {
        Series ratio = D0 * detail::F_t(t, n).inv();
        qg.push_back(E4 * ratio * ratio);
        qg.push_back(E4 * ratio);
        rg.push_back(E6 * ratio * ratio * ratio);
        rg.push_back(E6 * ratio * ratio);
        rg.push_back(E6 * ratio);
    }
    auto fit = [&](const Series& target, const std::vector<Series>& gens) -> std::optional<std::vector<Rational>> {
        Matrix a;
        std::vector<Rational> b;
        for (long e = 0; e <= n; ++e) {
            std::vector<Rational> row;
            for (const auto& g : gens) row.push_back(g.coeff(e));
            a.push_back(std::move(row));
            b.push_back(target.coeff(e));
        }
        bool unique = false;
        auto x = solve(a, b, &unique);
        if (!x || !unique) return std::nullopt;
        return x;
    };
    auto xq = fit(Q, qg), xr = fit(R, rg);
    if (!xq || !xr) return std::nullopt;
    Params p;
    size_t iq = 0, ir = 0;
    p.r_inf = (*xq)[iq++];
    p.s_inf = (*xr)[ir++];
    if (inv.ord_i > 0) {
        p.r_i2 = (*xq)[iq++];
        p.s_i3 = (*xr)[ir++];
        p.s_i1 = (*xr)[ir++];
    }
    if (inv.ord_rho > 0) {
        p.r_rho2 = (*xq)[iq++];
        p.s_rho3 = (*xr)[ir++];
    }
    for (const auto& t : ts) {
        PointParams pp;
        pp.t = t;
        pp.r2 = (*xq)[iq++];
        pp.r1 = (*xq)[iq++];
        pp.s3 = (*xr)[ir++];
        pp.s2 = (*xr)[ir++];
        pp.s1 = (*xr)[ir++];
        p.points.push_back(pp);
    }
    return p;
}

// q-expansions of the closed form.
inline std::pair<Series, Series> expand_closed_form(const Params& p, long n) {
    Series E4 = modforms::E4(n), E6 = modforms::E6(n), D0 = modforms::Delta0(n);
    Series iE6 = E6.inv(), iE4 = E4.inv();
    Series Q = E4 * p.r_inf, R = E6 * p.s_inf;
    Q = Q + E4 * D0 * iE6 * iE6 * p.r_i2;
    R = R + D0 * D0 * iE6 * iE6 * iE6 * p.s_i3 + D0 * iE6 * p.s_i1;
    Q = Q + D0 * iE4 * iE4 * p.r_rho2;
    R = R + E6 * D0 * iE4 * iE4 * iE4 * p.s_rho3;
    for (const auto& pt : p.points) {
        Series ratio = D0 * detail::F_t(pt.t, n).inv();
        Q = Q + E4 * ratio * ratio * pt.r2 + E4 * ratio * pt.r1;
        R = R + E6 * ratio * ratio * ratio * pt.s3 + E6 * ratio * ratio * pt.s2 + E6 * ratio * pt.s1;
    }
    return {Q.truncate(Rational(n)), R.truncate(Rational(n))};
}

inline void attach_inventory(ModeData& m, const quasi::CMonomialSeries& W, int weight) {
    m.W = W;
    m.inventory = singular_inventory(W.series, weight);
    m.closed = fit_closed_form(m.Q, m.R, *m.inventory);
}

// MODE of a quasimodular seed of depth >= 1 through q^order.
inline ModeData from_quasi(const quasi::QuasiForm& f, long order) {
    long work = order + f.weight / 4 + 2;
    if (f.order() < work) throw std::invalid_argument("from_quasi: seed known to insufficient order");
    quasi::QuasiForm g = f.truncate(work);
    auto h = quasi::h_vector(g);
    ModeData m = mode_from_solutions(h.rows(), order);
    m.provenance = Provenance::QuasiSeed;
    m.seed_weight = f.weight;
    attach_inventory(m, quasi::wronskian(g), 3 * f.weight);
    return m;
}

inline ModeData from_extremal(int k, long order) {
    return from_quasi(quasi::extremal(k, order + k / 4 + 2), order);
}

// W_{f,g,h} with D_q, weight 3(k+2).
inline Series triple_wronskian(const std::vector<Series>& fs) {
    std::vector<LogSeries<Rational>> y;
    for (const auto& f : fs) y.push_back(LogSeries<Rational>({f}, Rational(1)));
    auto w = quasi::wronskian3(y);
    if (w.is_zero()) throw std::invalid_argument("triple_wronskian: the three forms are linearly dependent");
    return w.coeff(0);
}

inline ModeData from_triple(const std::vector<Series>& fs, int k, long order) {
    if (fs.size() != 3) throw std::invalid_argument("from_triple: need three forms");
    Matrix rows;
    for (const auto& f : fs) {
        auto c = modforms::membership(f, k);
        if (!c) throw std::invalid_argument("from_triple: input is not in M_k");
        rows.push_back(*c);
    }
    if (rref(rows).size() != 3) throw std::invalid_argument("from_triple: the three forms are linearly dependent");
    long work = order + (k + 2) / 4 + 2;
    std::vector<LogSeries<CPoly>> y;
    for (const auto& f : fs) {
        if (f.valid() < Rational(work)) throw std::invalid_argument("from_triple: seed known to insufficient order");
        y.push_back(LogSeries<CPoly>({quasi::to_c(f.truncate(Rational(work)))}, quasi::z_delta()));
    }
    ModeData m = mode_from_solutions(y, order);
    m.provenance = Provenance::TripleSeed;
    m.seed_weight = k;
    std::vector<Series> tr;
    for (const auto& f : fs) tr.push_back(f.truncate(Rational(work)));
    attach_inventory(m, quasi::CMonomialSeries{0, triple_wronskian(tr)}, 3 * (k + 2));
    return m;
}

inline ModeData from_params(const Params& p, long order) {
    ModeData m;
    std::tie(m.Q, m.R) = expand_closed_form(p, order);
    m.order = order;
    m.provenance = Provenance::Ansatz;
    m.closed = p;
    m.cusp = frobenius::indicial(frobenius::Form::Cusp, m.Q.coeff(0), m.R.coeff(0));
    return m;
}

struct PointReport {
    std::string name;
    bool cusp = false;
    std::optional<taylor::PointClass> point;
    frobenius::LocalExponents exponents;
    std::optional<frobenius::Tag> tag;
    std::string theorem;
};

inline frobenius::OdeData<Rational> cusp_ode(const ModeData& m) { return frobenius::from_cusp(m.Q, m.R); }

inline frobenius::LocalStructure<Rational> classify_cusp(const ModeData& m, long nmax = -1) {
    auto d = cusp_ode(m);
    if (!m.cusp.supported) throw std::invalid_argument("classify_cusp: " + m.cusp.note);
    if (nmax < 0) nmax = d.max_n();
    return frobenius::classify(d, m.cusp, nmax);
}

inline frobenius::OdeData<Rational> interior_ode(const Params& p, const taylor::PointClass& pt, int order) {
    auto loc = taylor::local_ode_data(p.ansatz(), pt, order);
    return frobenius::convert(frobenius::from_local(loc), [](const Frac& f) {
        auto r = f.as_rational();
        if (!r) throw std::logic_error("interior_ode: non-rational local coefficient");
        return *r;
    });
}

inline PointReport classify_interior(const Params& p, const taylor::PointClass& pt) {
    PointReport rep;
    rep.name = pt.name();
    rep.point = pt;
    auto head = interior_ode(p, pt, 2);
    rep.exponents = frobenius::indicial(frobenius::Form::Interior, head.A_n(0), head.B_n(0));
    if (!rep.exponents.supported) return rep;
    long span = rep.exponents.m1 + rep.exponents.m2;
    auto d = interior_ode(p, pt, static_cast<int>(span) + 2);
    auto s = frobenius::classify(d, rep.exponents, span + 1);
    for (const auto& y : s.basis)
        if (!frobenius::annihilates(d, y)) throw std::logic_error("classify_interior: basis fails the ODE check");
    rep.tag = s.tag;
    rep.theorem = s.theorem;
    return rep;
}

// Exponents and classification at infinity, i, rho and the generic points.
inline std::vector<PointReport> exponents_everywhere(const ModeData& m) {
    std::vector<PointReport> out;
    PointReport inf;
    inf.name = "infinity";
    inf.cusp = true;
    inf.exponents = m.cusp;
    if (m.cusp.supported) {
        auto s = classify_cusp(m);
        inf.tag = s.tag;
        inf.theorem = s.theorem;
    }
    out.push_back(inf);
    if (!m.closed) return out;
    out.push_back(classify_interior(*m.closed, taylor::PointClass::i()));
    out.push_back(classify_interior(*m.closed, taylor::PointClass::rho()));
    for (const auto& pt : m.closed->points) out.push_back(classify_interior(*m.closed, taylor::PointClass::generic(Frac(pt.t))));
    return out;
}

// Cusp basis (y_-, y_perp, y_+) in z = (c/2) log q, with
// y_perp = z y_+ + eta3 and y_- = z^2 y_+ + z eta1 + eta2.
struct CuspBasis {
    frobenius::LocalStructure<Rational> local;
    bool normalized = false;
    Series y_plus;
    CSeries eta1, eta2, eta3;
    LogSeries<CPoly> y_minus, y_perp;
};

inline CuspBasis cusp_basis(const ModeData& m, long nmax = -1) {
    CuspBasis cb;
    cb.local = classify_cusp(m, nmax);
    cb.y_plus = cb.local.basis[0].coeff(0);
    if (cb.local.tag != frobenius::Tag::CompletelyNotApparent) return cb;
    const auto& b1 = cb.local.basis[1];
    const auto& b2 = cb.local.basis[2];
    if (b1.degree() != 1 || b2.degree() != 2 || !(b1.coeff(1) == cb.y_plus) || !(b2.coeff(2) == cb.y_plus))
        throw std::logic_error("cusp_basis: unexpected shape of the log solutions");
    CPoly h = quasi::z_delta();
    cb.eta3 = quasi::to_c(b1.coeff(0)).scale(h);
    cb.eta1 = quasi::to_c(b2.coeff(1)).scale(h);
    cb.eta2 = quasi::to_c(b2.coeff(0)).scale(h * h);
    CSeries yp = quasi::to_c(cb.y_plus);
    cb.y_perp = LogSeries<CPoly>({cb.eta3, yp}, h);
    cb.y_minus = LogSeries<CPoly>({cb.eta2, cb.eta1, yp}, h);
    cb.normalized = true;
    return cb;
}

} // namespace modeforge::mode
