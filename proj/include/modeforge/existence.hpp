#pragma once

#include "algebra.hpp"
#include "frobenius.hpp"
#include "mode.hpp"
#include "taylor.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modeforge::existence {

using Triple = std::array<Rational, 3>;

struct GenericSpec {
    std::optional<Rational> t;  // nullopt: t is a symbol
    Triple kappa;
};

struct ExponentSpec {
    Triple inf{Rational(0), Rational(0), Rational(0)};
    Triple i{Rational(0), Rational(1), Rational(2)};
    Triple rho{Rational(0), Rational(1), Rational(2)};
    std::vector<GenericSpec> points;
};

inline Triple sorted(Triple k) {
    std::sort(k.begin(), k.end());
    return k;
}

inline Rational e2_of(const Triple& k) { return k[0] * k[1] + k[0] * k[2] + k[1] * k[2]; }
inline Rational e3_of(const Triple& k) { return k[0] * k[1] * k[2]; }

// {3 kappa_i} = {0, 0, 1} mod 2.
inline bool assumption_i(const ExponentSpec& s) {
    int odd = 0;
    for (const auto& k : s.i) {
        Rational t = k * Rational(3);
        if (!t.is_integer()) return false;
        if (t.to_long() % 2 != 0) ++odd;
    }
    return odd == 1;
}

// {kappa_rho} = {0, 1, 2} mod 3 after removing the common offset.
inline bool assumption_rho(const ExponentSpec& s) {
    std::array<long, 3> r{};
    for (int j = 0; j < 3; ++j) {
        Rational d = s.rho[static_cast<size_t>(j)] - s.rho[0];
        if (!d.is_integer()) return false;
        r[static_cast<size_t>(j)] = ((d.to_long() % 3) + 3) % 3;
    }
    std::sort(r.begin(), r.end());
    return r == std::array<long, 3>{0, 1, 2};
}

// Sum rules, integral differences and the (1/3)Z lattice; congruences are reported separately.
inline void validate(const ExponentSpec& s) {
    auto check = [](const Triple& k, const Rational& sum, const std::string& where, bool thirds, bool distinct = true) {
        if (k[0] + k[1] + k[2] != sum)
            throw std::invalid_argument("spec: exponents at " + where + " must sum to " + sum.str());
        for (const auto& v : k) {
            if (!(v - k[0]).is_integer()) throw std::invalid_argument("spec: exponent differences at " + where + " must be integers");
            if (thirds && !(v * Rational(3)).is_integer())
                throw std::invalid_argument("spec: exponents at " + where + " must lie in (1/3)Z");
        }
        auto t = sorted(k);
        if (distinct && (t[0] == t[1] || t[1] == t[2])) throw std::invalid_argument("spec: repeated exponent at " + where);
    };
    check(s.inf, Rational(0), "infinity", true, false);
    check(s.i, Rational(3), "i", true);
    check(s.rho, Rational(3), "rho", true);
    for (size_t j = 0; j < s.points.size(); ++j) {
        check(s.points[j].kappa, Rational(3), "z" + std::to_string(j + 1), false);
        if (s.points[j].t && (s.points[j].t->is_zero() || *s.points[j].t == Rational(1)))
            throw std::invalid_argument("spec: generic t must avoid 0 and 1");
    }
    if (s.points.size() > 1)
        for (const auto& p : s.points)
            if (!p.t) throw std::invalid_argument("spec: symbolic t is supported for a single generic point only");
}

struct AnsatzParams {
    VarTable vars;
    taylor::Ansatz ansatz;
    std::vector<int> free;     // free parameter ids
    std::vector<int> t_vars;   // symbolic t ids
    std::optional<int> s_i1;
    struct PointVars {
        int r1, s2, s1;
        std::optional<int> t;
    };
    std::vector<PointVars> point_vars;
    bool ok_i = true, ok_rho = true;
};

inline AnsatzParams fix_indicial(const ExponentSpec& s, bool strict = false) {
    validate(s);
    AnsatzParams p;
    p.ok_i = assumption_i(s);
    p.ok_rho = assumption_rho(s);
    if (strict && !p.ok_i) throw std::invalid_argument("spec: exponents at i violate {3k} = {0,0,1} mod 2");
    if (strict && !p.ok_rho) throw std::invalid_argument("spec: exponents at rho violate {k} = {0,1,2} mod 3");
    // ids 0 and 1 are the Taylor engine's B and C
    p.vars.id("B");
    p.vars.id("C");
    auto& a = p.ansatz;
    a.r_inf = Frac(e2_of(s.inf));
    a.s_inf = Frac(-e3_of(s.inf));
    Rational ri = (e2_of(s.i) - Rational(2)) / Rational(4);
    a.r_i2 = Frac(ri);
    a.s_i3 = Frac((e3_of(s.i) - ri * Rational(4)) / Rational(8));
    int si1 = p.vars.id("s_i1");
    p.s_i1 = si1;
    p.free.push_back(si1);
    a.s_i1 = Frac(MPoly::var(si1));
    Rational rr = (Rational(2) - e2_of(s.rho)) / Rational(9);
    a.r_rho2 = Frac(rr);
    a.s_rho3 = Frac((-e3_of(s.rho) - rr * Rational(9)) / Rational(27));
    for (size_t j = 0; j < s.points.size(); ++j) {
        std::string n = std::to_string(j + 1);
        AnsatzParams::PointVars pv{};
        Frac t;
        if (s.points[j].t) t = Frac(*s.points[j].t);
        else {
            pv.t = p.vars.id("t" + n);
            p.t_vars.push_back(*pv.t);
            t = Frac(MPoly::var(*pv.t));
        }
        pv.r1 = p.vars.id("r" + n + "_1");
        pv.s2 = p.vars.id("s" + n + "_2");
        pv.s1 = p.vars.id("s" + n + "_1");
        p.free.insert(p.free.end(), {pv.r1, pv.s2, pv.s1});
        Frac r2 = t * Frac(e2_of(s.points[j].kappa) - Rational(2));
        taylor::GenericParams gp;
        gp.t = t;
        gp.r2 = r2;
        gp.s3 = t * r2 - t * t * Frac(e3_of(s.points[j].kappa));
        gp.r1 = Frac(MPoly::var(pv.r1));
        gp.s2 = Frac(MPoly::var(pv.s2));
        gp.s1 = Frac(MPoly::var(pv.s1));
        a.points.push_back(gp);
        p.point_vars.push_back(pv);
    }
    return p;
}

struct Obstruction {
    std::string point;
    int k1 = 0, k2 = 0;          // 1-based exponent indices
    long gap = 0;                // kappa^(k2) - kappa^(k1)
    MPoly poly;                  // numerator, over the free parameters (and t)
    bool predicted_zero = false; // by the elliptic vanishing lemma
    std::optional<int> expected_degree;
    int degree = -1;             // in the free parameters
};

struct ObstructionSystem {
    std::vector<std::string> names;  // variable names by id
    std::vector<int> free, t_vars;
    std::vector<Obstruction> all;
    bool ok_i = true, ok_rho = true;

    std::vector<const Obstruction*> constraints() const {
        std::vector<const Obstruction*> out;
        for (const auto& o : all)
            if (!o.poly.is_zero()) out.push_back(&o);
        return out;
    }
};

inline MPoly numerator(const Frac& f) { return f.num(); }

inline long default_cap() { return 30; }

namespace detail {

inline void point_obstructions(ObstructionSystem& sys, const AnsatzParams& p, const taylor::PointClass& pt,
                               const Triple& kappa, const std::string& name, long cap) {
    Triple k = sorted(kappa);
    long m1 = (k[1] - k[0]).to_long(), m2 = (k[2] - k[1]).to_long();
    if (m1 + m2 > cap) throw std::invalid_argument("obstruction_polynomials: exponent gap at " + name + " exceeds the cap");
    auto loc = taylor::local_ode_data(p.ansatz, pt, static_cast<int>(m1 + m2) + 2);
    auto d = frobenius::from_local(loc);
    auto head = frobenius::indicial_value<Frac>(d.form, d.A_n(0), d.B_n(0), Frac(k[0]));
    if (!head.is_zero()) throw std::logic_error("obstruction_polynomials: indicial fixing failed at " + name);
    auto from1 = frobenius::recursion<Frac, Frac>(d, Frac(k[0]), m1 + m2);
    auto from2 = frobenius::recursion<Frac, Frac>(d, Frac(k[1]), m2);
    int e = pt.stabilizer();
    bool elliptic = e > 1;
    bool assumptions = pt.tag == taylor::PointTag::I ? p.ok_i : pt.tag == taylor::PointTag::Rho ? p.ok_rho : true;
    auto add = [&](int a, int b, long gap, const Frac& value) {
        Obstruction o;
        o.point = name;
        o.k1 = a;
        o.k2 = b;
        o.gap = gap;
        o.poly = numerator(value);
        o.predicted_zero = elliptic && assumptions && gap % e != 0;
        if (o.predicted_zero && !o.poly.is_zero())
            throw std::logic_error("obstruction_polynomials: elliptic vanishing failed at " + name);
        if (!elliptic) o.expected_degree = static_cast<int>(a == 1 && b == 3 ? gap - 1 : gap);
        else if (pt.tag == taylor::PointTag::I && assumptions && gap % 2 == 0) o.expected_degree = static_cast<int>(gap / 2);
        o.degree = o.poly.degree_in(p.free);
        sys.all.push_back(std::move(o));
    };
    add(1, 2, m1, from1.obstruction.at(m1));
    add(2, 3, m2, from2.obstruction.at(m2));
    add(1, 3, m1 + m2, from1.obstruction.at(m1 + m2));
}

} // namespace detail

inline ObstructionSystem obstruction_polynomials(const ExponentSpec& s, const AnsatzParams& p, long cap = default_cap()) {
    ObstructionSystem sys;
    sys.names = p.vars.names();
    sys.free = p.free;
    sys.t_vars = p.t_vars;
    sys.ok_i = p.ok_i;
    sys.ok_rho = p.ok_rho;
    detail::point_obstructions(sys, p, taylor::PointClass::i(), s.i, "i", cap);
    detail::point_obstructions(sys, p, taylor::PointClass::rho(), s.rho, "rho", cap);
    for (size_t j = 0; j < s.points.size(); ++j) {
        Frac t = s.points[j].t ? Frac(*s.points[j].t) : Frac(MPoly::var(*p.point_vars[j].t));
        detail::point_obstructions(sys, p, taylor::PointClass::generic(t), s.points[j].kappa, "z" + std::to_string(j + 1), cap);
    }
    return sys;
}

struct DegreeLine {
    std::string point;
    int k1, k2;
    int degree;
    std::optional<int> expected;
    bool leading_nonzero;  // the designated top-degree part does not vanish
    bool ok() const { return !expected || (degree == *expected && leading_nonzero); }
};

inline MPoly top_part(const MPoly& p, const std::vector<int>& vars) {
    int d = p.degree_in(vars);
    MPoly out;
    for (const auto& [m, c] : p.terms()) {
        int s = 0;
        for (int v : vars)
            if (static_cast<size_t>(v) < m.size()) s += m[static_cast<size_t>(v)];
        if (s == d) out += MPoly::term(m, c);
    }
    return out;
}

inline std::vector<DegreeLine> degree_report(const ObstructionSystem& sys) {
    std::vector<DegreeLine> out;
    for (const auto& o : sys.all) {
        if (o.predicted_zero) continue;
        DegreeLine l{o.point, o.k1, o.k2, o.degree, o.expected_degree, !top_part(o.poly, sys.free).is_zero()};
        out.push_back(l);
    }
    return out;
}

struct Verification {
    bool ok = true;
    std::vector<std::pair<std::string, MPoly>> residuals;  // nonzero residuals
};

// Assignment keys are variable names.
inline Verification verify_candidate(const ObstructionSystem& sys, const std::map<std::string, Rational>& assignment) {
    std::map<int, Rational> vals;
    for (const auto& [name, v] : assignment) {
        auto it = std::find(sys.names.begin(), sys.names.end(), name);
        if (it == sys.names.end()) throw std::invalid_argument("verify_candidate: unknown variable " + name);
        vals[static_cast<int>(it - sys.names.begin())] = v;
    }
    for (int f : sys.free)
        if (!vals.count(f)) throw std::invalid_argument("verify_candidate: no value for " + sys.names[static_cast<size_t>(f)]);
    Verification v;
    for (const auto& o : sys.all) {
        MPoly r = o.poly.substitute(vals);
        if (!r.is_zero()) {
            v.ok = false;
            v.residuals.emplace_back(o.point + "(" + std::to_string(o.k1) + "," + std::to_string(o.k2) + ")", r);
        }
    }
    return v;
}

// Common rational roots when the system involves a single variable.
struct UnivariateRoots {
    int var = -1;
    std::map<Rational, int> roots;
    bool complete = true;
};

inline std::optional<UnivariateRoots> univariate_roots(const ObstructionSystem& sys) {
    std::vector<int> used;
    for (const auto& o : sys.all)
        for (int v : o.poly.variables())
            if (std::find(used.begin(), used.end(), v) == used.end()) used.push_back(v);
    if (used.size() != 1) return std::nullopt;
    UnivariateRoots r;
    r.var = used[0];
    bool first = true;
    for (const auto& o : sys.all) {
        if (o.poly.is_zero()) continue;
        auto cs = o.poly.coefficients_in(r.var);
        std::vector<Rational> c;
        for (const auto& m : cs) c.push_back(*m.as_rational());
        UPoly u(c);
        bool complete = true;
        auto roots = u.rational_roots(&complete);
        r.complete = r.complete && complete;
        if (first) {
            r.roots = roots;
            first = false;
        } else {
            std::map<Rational, int> keep;
            for (const auto& [x, m] : r.roots)
                if (roots.count(x)) keep[x] = std::min(m, roots.at(x));
            r.roots = keep;
        }
    }
    return r;
}

// Exponent spec and free-parameter values of a MODE with a closed form.
struct SeedData {
    ExponentSpec spec;
    std::map<std::string, Rational> assignment;
};

inline Triple triple_of(const frobenius::LocalExponents& e) { return {e.k1, e.k2, e.k3}; }

inline SeedData seed_data(const mode::ModeData& m) {
    if (!m.closed) throw std::invalid_argument("seed_data: MODE has no closed form");
    SeedData sd;
    auto reps = mode::exponents_everywhere(m);
    const auto& p = *m.closed;
    size_t j = 0;
    for (const auto& r : reps) {
        if (!r.exponents.supported) throw std::invalid_argument("seed_data: unsupported exponents at " + r.name);
        if (r.cusp) sd.spec.inf = triple_of(r.exponents);
        else if (r.point->tag == taylor::PointTag::I) sd.spec.i = triple_of(r.exponents);
        else if (r.point->tag == taylor::PointTag::Rho) sd.spec.rho = triple_of(r.exponents);
        else {
            sd.spec.points.push_back({p.points[j].t, triple_of(r.exponents)});
            std::string n = std::to_string(j + 1);
            sd.assignment["r" + n + "_1"] = p.points[j].r1;
            sd.assignment["s" + n + "_2"] = p.points[j].s2;
            sd.assignment["s" + n + "_1"] = p.points[j].s1;
            ++j;
        }
    }
    sd.assignment["s_i1"] = p.s_i1;
    return sd;
}

// The indicial fixing reproduces the seed's fixed parameters.
inline bool fixed_params_match(const AnsatzParams& a, const mode::Params& p) {
    auto eq = [](const Frac& f, const Rational& r) { return f == Frac(r); };
    bool ok = eq(a.ansatz.r_inf, p.r_inf) && eq(a.ansatz.s_inf, p.s_inf) && eq(a.ansatz.r_i2, p.r_i2) &&
              eq(a.ansatz.s_i3, p.s_i3) && eq(a.ansatz.r_rho2, p.r_rho2) && eq(a.ansatz.s_rho3, p.s_rho3);
    for (size_t j = 0; ok && j < p.points.size(); ++j)
        ok = eq(a.ansatz.points[j].r2, p.points[j].r2) && eq(a.ansatz.points[j].s3, p.points[j].s3);
    return ok;
}

} // namespace modeforge::existence
