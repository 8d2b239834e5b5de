#pragma once

#include "existence.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace modeforge::io {

using json = nlohmann::ordered_json;
using Series = QSeries<Rational>;
using CSeries = QSeries<CPoly>;

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline Rational parse_rational(const json& j, const std::string& what) {
    try {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long>());
    } catch (const std::exception&) {
    }
    throw InputError(what + ": expected a rational \"p/q\"");
}

inline json emit_coeff(const Rational& r) { return r.str(); }

inline json emit_coeff(const CPoly& p) {
    json m = json::object();
    for (const auto& [pw, v] : p.terms()) m[std::to_string(pw)] = v.str();
    return json{{"cpow", m}};
}

inline void parse_coeff(const json& j, Rational& out) { out = parse_rational(j, "coefficient"); }

inline void parse_coeff(const json& j, CPoly& out) {
    if (!j.is_object() || !j.contains("cpow") || !j["cpow"].is_object()) {
        out = CPoly(parse_rational(j, "coefficient"));
        return;
    }
    out = CPoly();
    for (const auto& [k, v] : j["cpow"].items()) {
        int pw;
        try {
            size_t used = 0;
            pw = std::stoi(k, &used);
            if (used != k.size()) throw std::invalid_argument(k);
        } catch (const std::exception&) {
            throw InputError("coefficient: bad c-power '" + k + "'");
        }
        out += CPoly::monomial(parse_rational(v, "coefficient"), pw);
    }
}

// {denom, terms: [[exponent numerator, coefficient]], order: valid-through numerator}
template <class T>
json emit_series(const QSeries<T>& s) {
    json terms = json::array();
    for (size_t k = 0; k < s.raw().size(); ++k) {
        const T& c = s.raw()[k];
        if (detail::coeff_is_zero(c)) continue;
        terms.push_back(json::array({s.start_num() + static_cast<long>(k), emit_coeff(c)}));
    }
    return json{{"denom", s.denom()}, {"terms", terms}, {"order", s.hi_num()}};
}

template <class T>
QSeries<T> parse_series(const json& j) {
    if (!j.is_object()) throw InputError("series: expected an object");
    for (const auto& [k, v] : j.items())
        if (k != "denom" && k != "terms" && k != "order") throw InputError("series: unknown key '" + k + "'");
    if (!j.contains("terms") || !j["terms"].is_array() || !j.contains("order") || !j["order"].is_number_integer())
        throw InputError("series: need 'terms' and integer 'order'");
    long N = 1;
    if (j.contains("denom")) {
        if (!j["denom"].is_number_integer() || j["denom"].get<long>() <= 0) throw InputError("series: bad 'denom'");
        N = j["denom"].get<long>();
    }
    long hi = j["order"].get<long>();
    std::map<long, T> c;
    for (const auto& t : j["terms"]) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer()) throw InputError("series: bad term");
        long e = t[0].get<long>();
        if (e > hi) throw InputError("series: term beyond the stated order");
        T v;
        parse_coeff(t[1], v);
        c[e] += v;
    }
    if (c.empty()) return QSeries<T>::zero(hi, N);
    long start = c.begin()->first;
    std::vector<T> coeffs(static_cast<size_t>(c.rbegin()->first - start + 1));
    for (const auto& [e, v] : c) coeffs[static_cast<size_t>(e - start)] = v;
    return QSeries<T>(N, start, hi, std::move(coeffs));
}

inline json emit_triple(const existence::Triple& t) { return json::array({t[0].str(), t[1].str(), t[2].str()}); }

inline existence::Triple parse_triple(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) throw InputError(what + ": expected three exponents");
    return {parse_rational(j[0], what), parse_rational(j[1], what), parse_rational(j[2], what)};
}

inline json emit_spec(const existence::ExponentSpec& s) {
    json pts = json::array();
    for (const auto& p : s.points) {
        json t = p.t ? json(p.t->str()) : json(nullptr);
        pts.push_back(json{{"t", t}, {"kappa", emit_triple(p.kappa)}});
    }
    return json{{"infinity", emit_triple(s.inf)}, {"i", emit_triple(s.i)}, {"rho", emit_triple(s.rho)}, {"points", pts}};
}

struct SpecDocument {
    existence::ExponentSpec spec;
    bool strict = false;
};

// Validates the exponent data on load.
inline SpecDocument parse_spec(const json& j) {
    if (!j.is_object()) throw InputError("spec: expected an object");
    SpecDocument d;
    for (const auto& [k, v] : j.items()) {
        if (k == "infinity") d.spec.inf = parse_triple(v, k);
        else if (k == "i") d.spec.i = parse_triple(v, k);
        else if (k == "rho") d.spec.rho = parse_triple(v, k);
        else if (k == "strict") {
            if (!v.is_boolean()) throw InputError("spec: 'strict' must be boolean");
            d.strict = v.get<bool>();
        } else if (k == "points") {
            if (!v.is_array()) throw InputError("spec: 'points' must be an array");
            for (const auto& p : v) {
                if (!p.is_object() || !p.contains("kappa")) throw InputError("spec: point needs 'kappa'");
                existence::GenericSpec g;
                g.kappa = parse_triple(p["kappa"], "point kappa");
                if (p.contains("t") && !p["t"].is_null()) g.t = parse_rational(p["t"], "point t");
                for (const auto& [pk, pv] : p.items())
                    if (pk != "t" && pk != "kappa") throw InputError("spec: unknown point key '" + pk + "'");
                d.spec.points.push_back(g);
            }
        } else throw InputError("spec: unknown key '" + k + "'");
    }
    try {
        existence::validate(d.spec);
        if (d.strict) existence::fix_indicial(d.spec, true);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return d;
}

inline json emit_poly(const MPoly& p) {
    json terms = json::array();
    for (const auto& [m, c] : p.terms()) terms.push_back(json::array({json(m), c.str()}));
    return terms;
}

inline json emit_system(const existence::ObstructionSystem& sys) {
    json free = json::array();
    for (int v : sys.free) free.push_back(sys.names.at(static_cast<size_t>(v)));
    json cons = json::array();
    for (const auto* o : sys.constraints()) {
        json e{{"point", o->point}, {"pair", json::array({o->k1, o->k2})}, {"gap", o->gap}, {"degree", o->degree}};
        e["expected_degree"] = o->expected_degree ? json(*o->expected_degree) : json(nullptr);
        e["text"] = o->poly.str(sys.names);
        e["terms"] = emit_poly(o->poly);
        cons.push_back(e);
    }
    json deg = json::array();
    for (const auto& l : existence::degree_report(sys)) {
        json e{{"point", l.point}, {"pair", json::array({l.k1, l.k2})}, {"degree", l.degree}};
        e["expected"] = l.expected ? json(*l.expected) : json(nullptr);
        e["ok"] = l.ok();
        deg.push_back(e);
    }
    return json{{"variables", sys.names}, {"free", free}, {"assumption_i", sys.ok_i}, {"assumption_rho", sys.ok_rho},
                {"constraints", cons}, {"degrees", deg}};
}

inline std::map<std::string, Rational> parse_assignment(const json& j) {
    if (!j.is_object()) throw InputError("assignment: expected an object of name -> \"p/q\"");
    std::map<std::string, Rational> out;
    for (const auto& [k, v] : j.items()) out[k] = parse_rational(v, "assignment " + k);
    return out;
}

inline json read_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(what + ": malformed JSON (" + std::string(e.what()) + ")");
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return read_json_text(ss.str(), path);
}

} // namespace modeforge::io
