#include <modeforge/bol.hpp>
#include <modeforge/existence.hpp>
#include <modeforge/io.hpp>
#include <modeforge/toda.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

using namespace modeforge;
using io::InputError;
using io::json;

namespace {

constexpr int kOk = 0, kFail = 1, kUsage = 2;

long default_order() {
    if (const char* e = std::getenv("MODEFORGE_ORDER")) {
        try {
            long v = std::stol(e);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
        throw InputError("MODEFORGE_ORDER must be a positive integer");
    }
    return 64;
}

std::string rat(const Rational& r) { return r.str(); }

std::string series_text(const mode::Series& s, long terms) {
    return s.truncate(Rational(std::min<long>(terms, s.hi_num() / s.denom()))).str(rat, true);
}

std::string triple_text(const frobenius::LocalExponents& e) {
    return "{" + e.k1.str() + ", " + e.k2.str() + ", " + e.k3.str() + "}";
}

void print_matrix(std::ostream& os, const std::string& name, const bol::Mat3& m) {
    os << name << " = [";
    for (size_t r = 0; r < 3; ++r) {
        os << (r ? "; " : "");
        for (size_t c = 0; c < 3; ++c) os << (c ? " " : "") << m[r][c];
    }
    os << "]\n";
}

void print_turns(std::ostream& os, const std::string& name, const std::vector<bol::Turn>& t) {
    os << name << " eigenvalues (turns):";
    for (const auto& x : t) os << " " << x.turn;
    os << "\n";
}

struct Checker {
    int failures = 0;
    void operator()(bool ok, const std::string& what) {
        std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
        if (!ok) ++failures;
    }
};

// ---- expand

int cmd_expand(const std::string& name, long order, const std::string& format) {
    auto w = modforms::evaluate(name, order);
    auto s = w.series.truncate(Rational(order));
    if (format == "json") {
        json j = io::emit_series(s);
        j["name"] = name;
        j["weight"] = w.weight ? json(w.weight->str()) : json(nullptr);
        std::cout << j.dump(2) << "\n";
    } else std::cout << s.str(rat) << "\n";
    return kOk;
}

// ---- mode

struct TripleFile {
    int weight = 0;
    std::vector<mode::Series> forms;
    json expect;
};

TripleFile read_triple(const std::string& path, long order) {
    json j = io::read_json_file(path);
    if (!j.is_object() || !j.contains("weight") || !j["weight"].is_number_integer() || !j.contains("forms") ||
        !j["forms"].is_array() || j["forms"].size() != 3)
        throw InputError(path + ": need integer 'weight' and three 'forms'");
    TripleFile t;
    t.weight = j["weight"].get<int>();
    for (const auto& f : j["forms"]) {
        if (f.is_string()) {
            auto w = modforms::evaluate(f.get<std::string>(), order);
            if (!w.weight || *w.weight != Rational(t.weight))
                throw InputError(path + ": form '" + f.get<std::string>() + "' is not of weight " + std::to_string(t.weight));
            t.forms.push_back(w.series);
        } else t.forms.push_back(io::parse_series<Rational>(f));
    }
    if (j.contains("expect")) t.expect = j["expect"];
    return t;
}

int report_mode(const mode::ModeData& m, const json& expect, bool check, int extremal_k) {
    std::cout << "provenance: " << mode::provenance_name(m.provenance) << "\n";
    std::cout << "order: " << m.order << "\n";
    std::cout << "Q = " << series_text(m.Q, 6) << "\n";
    std::cout << "R = " << series_text(m.R, 6) << "\n";
    if (m.closed) {
        const auto& p = *m.closed;
        std::cout << "closed form: r_inf=" << p.r_inf << " s_inf=" << p.s_inf << " r_i2=" << p.r_i2 << " s_i3=" << p.s_i3
                  << " s_i1=" << p.s_i1 << " r_rho2=" << p.r_rho2 << " s_rho3=" << p.s_rho3 << "\n";
        for (const auto& q : p.points)
            std::cout << "  point t=" << q.t << ": r2=" << q.r2 << " r1=" << q.r1 << " s3=" << q.s3 << " s2=" << q.s2
                      << " s1=" << q.s1 << "\n";
    } else std::cout << "closed form: none\n";
    auto reports = mode::exponents_everywhere(m);
    std::cout << "exponents:\n";
    for (const auto& r : reports)
        std::cout << "  " << std::left << std::setw(10) << r.name << triple_text(r.exponents) << "  "
                  << (r.tag ? frobenius::tag_name(*r.tag) : std::string("-")) << "  " << r.theorem << "\n";
    auto a = bol::analyze(m);
    std::cout << "bol: " << bol::bol_tag_name(a.data.tag) << ", l = " << a.data.ell << "\n";
    print_matrix(std::cout, "S", a.data.S_hat);
    print_matrix(std::cout, "R", a.data.R_hat);
    print_matrix(std::cout, "T", a.data.T_hat);
    print_turns(std::cout, "S", a.data.S_eigen);
    print_turns(std::cout, "R", a.data.R_eigen);
    if (!check) return kOk;

    Checker c;
    c(bol::relations_hold(a.data), "S^2 = R^3 = I, T = SR, det = 1");
    c(bol::spectrum_matches(a.data.S_hat, a.data.S_eigen) && bol::spectrum_matches(a.data.R_hat, a.data.R_eigen), "spectra");
    bool interior_apparent = true;
    frobenius::Tag cusp_tag = frobenius::Tag::Apparent;
    for (const auto& r : reports) {
        if (r.cusp) cusp_tag = r.tag.value_or(frobenius::Tag::NotApparent);
        else interior_apparent = interior_apparent && r.tag == frobenius::Tag::Apparent;
    }
    c(interior_apparent, "apparent at every interior singular point");
    if (m.provenance == mode::Provenance::QuasiSeed)
        c(cusp_tag == frobenius::Tag::CompletelyNotApparent, "completely not apparent at infinity");
    else c(cusp_tag == frobenius::Tag::Apparent, "apparent at infinity");
    if (a.data.tag == bol::BolTag::Trivial) c(a.data.ell % 12 == 0, "12 | l");
    if (m.closed) {
        auto sd = existence::seed_data(m);
        auto p = existence::fix_indicial(sd.spec);
        auto sys = existence::obstruction_polynomials(sd.spec, p);
        c(existence::verify_candidate(sys, sd.assignment).ok, "apparentness system vanishes at the seed parameters");
    }
    if (extremal_k > 0) {
        Rational k(extremal_k);
        if (extremal_k % 4 == 0) {
            c(m.Q == modforms::E4(m.order) * (-k * k / Rational(48)), "Q = -(k^2/48) E4");
            c(m.R == modforms::E6(m.order) * (-k * k * k / Rational(864)), "R = -(k^3/864) E6");
        } else {
            bool ok = m.closed.has_value();
            if (ok) {
                const auto& p = *m.closed;
                Rational kk = k - Rational(2);
                ok = p.r_inf == -kk * kk / Rational(48) && p.s_inf == -kk * kk * kk / Rational(864) &&
                     p.r_i2 == Rational(-1, 3) && p.s_i3 == Rational(5, 54) &&
                     p.s_i1 == (Rational(12) - kk * kk) / Rational(144) && p.r_rho2.is_zero() && p.s_rho3.is_zero() &&
                     p.points.empty();
                auto [Q, R] = mode::expand_closed_form(p, m.order);
                ok = ok && Q == m.Q && R == m.R;
            }
            c(ok, "three-term closed form with s_i1 = (12 - (k-2)^2)/144");
        }
        c(a.data.tag == bol::BolTag::Irreducible && a.data.ell == extremal_k - 2, "Bol tag irreducible, l = k - 2");
    }
    if (expect.is_object()) {
        for (const auto& [key, v] : expect.items()) {
            if (key == "s_i1") c(m.closed && m.closed->s_i1 == io::parse_rational(v, key), "s_i1 = " + v.get<std::string>());
            else if (key == "bol") c(bol::bol_tag_name(a.data.tag) == v.get<std::string>(), "Bol tag " + v.get<std::string>());
            else if (key == "exponents") {
                for (const auto& [pt, tri] : v.items()) {
                    auto want = io::parse_triple(tri, pt);
                    bool ok = false;
                    for (const auto& r : reports)
                        if (r.name == pt) ok = existence::sorted(want) == existence::Triple{r.exponents.k1, r.exponents.k2, r.exponents.k3};
                    c(ok, "exponents at " + pt);
                }
            } else throw InputError("expect: unknown key '" + key + "'");
        }
    }
    std::cout << (c.failures ? "FAIL" : "PASS") << "\n";
    return c.failures ? kFail : kOk;
}

int cmd_mode(int k, const std::string& triple, bool check, long order) {
    if (k != 0) {
        if (k < 6 || k % 2 != 0) throw InputError("--from-extremal: weight must be even and at least 6");
        return report_mode(mode::from_extremal(k, order), json(), check, k);
    }
    auto t = read_triple(triple, order + 12);
    return report_mode(mode::from_triple(t.forms, t.weight, order), t.expect, check, 0);
}

// ---- existence

int cmd_existence(const std::string& spec_path, bool emit, const std::string& verify) {
    auto doc = io::parse_spec(io::read_json_file(spec_path));
    auto p = existence::fix_indicial(doc.spec, doc.strict);
    auto sys = existence::obstruction_polynomials(doc.spec, p);
    auto cons = sys.constraints();
    std::cout << "assumption at i: " << (sys.ok_i ? "holds" : "fails") << "\n";
    std::cout << "assumption at rho: " << (sys.ok_rho ? "holds" : "fails") << "\n";
    if (cons.empty()) std::cout << "no constraints\n";
    for (const auto* o : cons)
        std::cout << "P[" << o->point << "; " << o->k1 << "," << o->k2 << "] degree " << o->degree << ": "
                  << o->poly.str(sys.names) << "\n";
    for (const auto& l : existence::degree_report(sys))
        if (l.expected)
            std::cout << "degree " << l.point << " (" << l.k1 << "," << l.k2 << "): " << l.degree << " expected "
                      << *l.expected << (l.ok() ? "" : " MISMATCH") << "\n";
    if (auto u = existence::univariate_roots(sys)) {
        std::cout << "rational roots in " << sys.names.at(static_cast<size_t>(u->var)) << ":";
        for (const auto& [r, mult] : u->roots) std::cout << " " << r << (mult > 1 ? "^" + std::to_string(mult) : "");
        if (u->roots.empty()) std::cout << " none";
        std::cout << (u->complete ? "" : " (possibly incomplete)") << "\n";
    }
    if (emit) std::cout << io::emit_system(sys).dump(2) << "\n";
    if (verify.empty()) return kOk;
    json a = verify.find('{') != std::string::npos ? io::read_json_text(verify, "--verify") : io::read_json_file(verify);
    existence::Verification v;
    try {
        v = existence::verify_candidate(sys, io::parse_assignment(a));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    for (const auto& [name, r] : v.residuals) std::cout << "residual " << name << ": " << r.str(sys.names) << "\n";
    std::cout << (v.ok ? "PASS" : "FAIL") << "\n";
    return v.ok ? kOk : kFail;
}

// ---- toda

int cmd_toda(const std::string& seed, double lambda, double mu, const std::string& grid, const std::string& out,
             bool refine, long order) {
    if (!(lambda > 0) || !(mu > 0)) throw InputError("--lambda and --mu must be positive");
    toda::Grid g;
    if (!grid.empty()) {
        std::stringstream ss(grid);
        std::string tok;
        std::vector<double> v;
        while (std::getline(ss, tok, ',')) {
            try {
                v.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw InputError("--grid: bad number '" + tok + "'");
            }
        }
        if (v.size() != 5 || v[4] != std::floor(v[4]) || v[4] < 3 || !(v[0] < v[1]) || !(v[2] < v[3]) || v[2] <= 0)
            throw InputError("--grid: expected x0,x1,y0,y1,n with x0<x1, 0<y0<y1, n>=3");
        g = {v[0], v[1], v[2], v[3], static_cast<int>(v[4])};
    }
    toda::TripleSeed s;
    if (seed == "weight24") s = toda::weight24_seed(order);
    else {
        auto t = read_triple(seed, order);
        s = {t.weight, t.forms, order};
    }
    auto ts = [&] {
        try {
            return toda::prepare(s);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }();
    toda::Params p{lambda, mu};
    auto f = toda::toda_fields(ts, p, g);
    int active = 0;
    for (const auto& nd : f.nodes) active += nd.active;
    if (active == 0) throw InputError("grid: every node lies within the margin of the singular set");
    std::cout << std::setprecision(6);
    std::cout << "grid: " << g.n << "x" << g.n << " h = " << g.hx() << ", excluded nodes: " << f.excluded << "\n";
    std::cout << "max residual 1: " << f.max_res1 << "\n";
    std::cout << "max residual 2: " << f.max_res2 << "\n";
    if (refine) {
        auto sc = toda::residual_scaling(ts, p, g);
        std::cout << "refined max residual: " << sc.fine << ", ratio: " << sc.ratio() << "\n";
    }
    std::cout << "automorphy deltas:";
    for (toda::cd z : {toda::cd(0.1, 1.2), toda::cd(-0.2, 1.1), toda::cd(0.25, 1.3), toda::cd(0.05, 0.95), toda::cd(-0.15, 1.45)})
        std::cout << " " << std::abs(toda::automorphy_defect(ts, p, z));
    std::cout << "\n";
    if (out.empty()) return kOk;
    std::ofstream os(out);
    if (!os) throw InputError("cannot write " + out);
    os << std::setprecision(17);
    bool csv = out.size() >= 4 && out.substr(out.size() - 4) == ".csv";
    auto num = [](double x) { return std::isnan(x) ? json(nullptr) : json(x); };
    if (csv) {
        os << "x,y,U1,U2,u1,u2,residual1,residual2\n";
        for (const auto& nd : f.nodes) {
            if (nd.U1 == 0 && nd.U2 == 0) continue;
            os << nd.x << "," << nd.y << "," << nd.U1 << "," << nd.U2 << "," << nd.u1 << "," << nd.u2 << ",";
            if (nd.active) os << nd.res1 << "," << nd.res2;
            else os << ",";
            os << "\n";
        }
    } else {
        json rows = json::array();
        for (const auto& nd : f.nodes) {
            if (nd.U1 == 0 && nd.U2 == 0) continue;
            rows.push_back(json::array({nd.x, nd.y, nd.U1, nd.U2, nd.u1, nd.u2, num(nd.res1), num(nd.res2)}));
        }
        json plane = json::array();
        for (const auto& q : toda::plane_transform(ts, f, order))
            plane.push_back(json::array({q.w.real(), q.w.imag(), q.v1, q.v2}));
        json j{{"lambda", lambda}, {"mu", mu}, {"columns", {"x", "y", "U1", "U2", "u1", "u2", "residual1", "residual2"}},
               {"rows", rows}, {"plane_columns", {"re_w", "im_w", "v1", "v2"}}, {"plane", plane},
               {"max_residual", {f.max_res1, f.max_res2}}};
        os << j.dump(1) << "\n";
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"modeforge: modular ODEs from quasimodular and modular seeds"};
    app.require_subcommand(1);
    long order = -1;

    auto* ex = app.add_subcommand("expand", "q-expansion of a form expression");
    std::string name, format = "text";
    ex->add_option("name", name, "expression in E2, E4, E6, Delta, Delta0, J, eta")->required();
    ex->add_option("--order", order, "last exponent printed");
    ex->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* md = app.add_subcommand("mode", "build and analyze a MODE");
    int k = 0;
    std::string triple;
    bool check = false;
    auto* oe = md->add_option("--from-extremal", k, "extremal quasimodular seed of weight k");
    auto* ot = md->add_option("--from-triple", triple, "JSON file with three modular forms");
    oe->excludes(ot);
    md->add_flag("--check", check, "compare against known closed forms");
    md->add_option("--order", order);

    auto* es = app.add_subcommand("existence", "apparentness polynomial system for exponent data");
    std::string spec, verify;
    bool emit = false;
    es->add_option("--spec", spec)->required();
    es->add_flag("--emit-system", emit);
    es->add_option("--verify", verify, "assignment as JSON text or file");

    auto* td = app.add_subcommand("toda", "evaluate the Toda solutions on a grid");
    std::string seed = "weight24", grid, out;
    double lambda = 1, mu = 1;
    bool refine = false;
    td->add_option("--seed", seed, "weight24 or a triple file");
    td->add_option("--lambda", lambda);
    td->add_option("--mu", mu);
    td->add_option("--grid", grid, "x0,x1,y0,y1,n");
    td->add_option("--out", out, "CSV (.csv) or JSON output");
    td->add_flag("--refine", refine, "also run with h/2 and report the residual ratio");
    td->add_option("--order", order);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        bool explicit_order = ex->count("--order") + md->count("--order") + td->count("--order") > 0;
        if (!explicit_order) order = default_order();
        if (order < 0) throw InputError("--order must be nonnegative");
        if (*ex) return cmd_expand(name, order, format);
        if (*md) {
            if (!*oe && !*ot) throw InputError("mode: give --from-extremal or --from-triple");
            return cmd_mode(k, triple, check, order);
        }
        if (*es) return cmd_existence(spec, emit, verify);
        if (*td) return cmd_toda(seed, lambda, mu, grid, out, refine, order);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
