#include "opcoh/builtins.hpp"
#include "opcoh/cohomology.hpp"
#include "opcoh/document.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace opcoh;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kFileDefaultWindow = 4;
constexpr int kFileMaxWindow = 6;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string command;
    std::string operad;
    std::string file;
    std::string ring = "Q";
    int max_arity = -1;
    std::string variant = "full";
    bool override_guard = false;
    std::string algebra;
    int mod_ideal = -1;
    int ideal_k = 2;
    bool stabilization = false;
    bool force_direct = false;
    bool no_timing = false;
    bool no_reps = false;
    int arity = -1;
    int order = 2;
    int rep = 0;
    std::string cocycle_file;
    std::string target;
    std::string target_file;
    int target_ideal = -1;
    std::string images_file;
    std::string derivation_file;
    std::string scale;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AlgebraData algebra_from_flag(const std::string& a) {
    if (a.empty() || a == "idempotent") return AlgebraData::idempotent();
    if (a == "square-zero") return AlgebraData::square_zero();
    auto colon = a.find(':');
    if (colon != std::string::npos) {
        std::string kind = a.substr(0, colon);
        int d = std::stoi(a.substr(colon + 1));
        if (kind == "zero") return AlgebraData::zero(d);
        if (kind == "truncated") return AlgebraData::truncated(d);
    }
    if (!a.empty() && a.front() == '{') return AlgebraData::from_json(a);
    return AlgebraData::from_json(read_file(a));
}

// Where the operad came from, for the report.
struct Source {
    std::string name;
    json description;
    int window = 0;
};

template <class S>
struct Loaded {
    Operad<S> op;
    Source src;
};

int resolve_window(const Options& o, int def, int guard, const std::string& what) {
    int N = o.max_arity >= 0 ? o.max_arity : def;
    if (N > guard && !o.override_guard)
        throw DomainError("WindowTooLarge", what + " is guarded at N <= " + std::to_string(guard) +
                                                " (pass --override-window-guard to exceed)");
    return N;
}

template <class S>
Loaded<S> load_named(const Options& o, const std::string& name, const std::string& file, int mod_ideal, const Ring& ring) {
    Loaded<S> L;
    if (!file.empty() && !name.empty()) throw UsageError("give either --operad or --file, not both");
    if (!file.empty()) {
        std::string text = read_file(file);
        Presentation<S> pres = parse_presentation<S>(text, &ring);
        int N = resolve_window(o, kFileDefaultWindow, kFileMaxWindow, "a presentation file");
        std::string stem = std::filesystem::path(file).stem().string();
        L.op = quotient_truncation(pres, N, stem).op;
        L.src.name = stem;
        L.src.description = {{"source", "file"}, {"path", file}, {"generators", pres.gens.size()},
                             {"relations", pres.relations.size()}, {"caps", pres.caps.size()}};
    } else {
        if (name.empty()) throw UsageError("an operad is required (--operad NAME or --file PATH)");
        const auto& e = catalog_entry(name);
        int N = o.max_arity >= 0 ? o.max_arity : e.default_window;
        BuildOptions bo;
        bo.algebra = algebra_from_flag(o.algebra);
        bo.override_window_guard = o.override_guard;
        L.op = build<S>(e.name, ring, N, bo);
        L.src.name = e.name;
        L.src.description = {{"source", "catalog"}, {"name", e.name}};
        if (e.name == "da") L.src.description["algebra"] = bo.algebra.describe();
    }
    if (mod_ideal >= 0) {
        L.op = quotient(L.op, truncation_ideal(L.op, mod_ideal), L.op.name + "/I" + std::to_string(mod_ideal));
        L.src.description["modulo_truncation_ideal"] = mod_ideal;
        L.src.name += "/I" + std::to_string(mod_ideal);
    }
    L.src.window = L.op.N;
    return L;
}

// Elements named by label -> coefficient maps.
template <class S>
Element<S> element_from_json(const Operad<S>& P, const json& j) {
    int n = j.at("arity");
    if (n < 0 || n > P.N) throw DomainError("WindowExceeded", "element arity outside the window");
    std::map<std::string, S> coeffs;
    for (auto& [label, c] : j.at("terms").items())
        coeffs[label] = c.is_string() ? parse_scalar<S>(P.ring, c.template get<std::string>()) : from_int<S>(P.ring, c.template get<long>());
    return P.element(n, coeffs);
}

template <class S>
json element_json(const Operad<S>& P, const Element<S>& x) {
    json terms = json::object();
    for (auto& [i, c] : x.v) terms[P.labels[x.arity][i]] = scalar_text(c);
    return {{"arity", x.arity}, {"terms", terms}};
}

struct Report {
    json doc;
    std::string summary;
};

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <class S>
json derivation_images(const Operad<S>& P, const DerivationReport<S>& D, const std::vector<ArityMaps<S>>& maps) {
    json out = json::array();
    for (auto& d : maps) {
        json imgs = json::array();
        for (auto& g : D.generators)
            imgs.push_back({{"generator", element_json(P, g)}, {"image", element_json(P, Element<S>{g.arity, apply_map(d, g.arity, g.v)})}});
        out.push_back(imgs);
    }
    return out;
}

template <class S>
json subspace_json(const GradedSubspace<S>& G) {
    json dims = json::array(), bases = json::array();
    for (auto& sub : G) {
        dims.push_back(sub.dim());
        json b = json::array();
        for (auto& v : sub.basis()) b.push_back(vec_json(v));
        bases.push_back(b);
    }
    return {{"dims", dims}, {"bases", bases}};
}

template <class S>
ArityMaps<S> maps_from_generators(const Operad<S>& P, const Operad<S>& Q, const std::string& file, bool derivation) {
    json j = json::parse(read_file(file));
    std::vector<Element<S>> gens;
    std::vector<SVec<S>> imgs;
    for (auto& e : j.at("map")) {
        gens.push_back(element_from_json(P, e.at("source")));
        imgs.push_back(element_from_json(Q, e.at("image")).v);
    }
    auto g = build_generation(P, &gens);
    return derivation ? extend_derivation(P, g, imgs) : extend_morphism(P, Q, g, imgs);
}

template <class S>
Report run_field(const Options& o, const Ring& ring) {
    Report R;
    json& res = R.doc["result"];
    if (o.command == "lift") {
        if (ring.is_field()) throw UsageError("lift needs --ring Q-eps:<J> or Fp-eps:<p>:<J>");
        Ring field = ring.residue_field();
        int J = ring.order;
        Operad<S> P;
        Operad<TruncPoly<S>> D;
        Source src;
        if (!o.operad.empty() && catalog_entry(o.operad).name == "ll") {
            if constexpr (std::is_same_v<S, Rational>) {
                int N = o.max_arity >= 0 ? o.max_arity : catalog_entry("ll").default_window;
                BuildOptions bo;
                bo.override_window_guard = o.override_guard;
                D = build<TruncPoly<S>>("ll", ring, N, bo);
                P = reduce_mod_t(D, field);
                src = {"ll", {{"source", "catalog"}, {"name", "ll"}}, N};
            } else {
                throw DomainError("UnsupportedCharacteristic", "the LL operad is only built in characteristic zero");
            }
        } else {
            auto L = load_named<S>(o, o.operad, o.file, o.mod_ideal, field);
            P = L.op;
            src = L.src;
            if (!o.cocycle_file.empty()) {
                if (J != 2) throw UsageError("a starting cocycle gives a deformation over k[t]/(t^2); use --ring ...-eps:2");
                D = deform(P, cocycle_from_json(P, json::parse(read_file(o.cocycle_file))));
            } else {
                D = constant_extension(P, J);
            }
        }
        if (o.order < J - 1) throw UsageError("--order must be at least the starting order " + std::to_string(J - 1));
        json steps = json::array();
        bool ok = true;
        std::string obstruction;
        for (int cur = J - 1; cur < o.order; ++cur) {
            auto L = lift_order(P, D);
            steps.push_back({{"from_order", cur}, {"to_order", cur + 1}, {"lifted", L.lifted}, {"unknowns", L.unknowns},
                             {"equations", L.equations}});
            if (!L.lifted) {
                ok = false;
                obstruction = L.obstruction;
                break;
            }
            D = L.op;
        }
        auto check = validate_axioms(D);
        R.doc["operad"] = {{"name", src.name}, {"parameters", src.description}};
        R.doc["window"] = P.N;
        res = {{"lifted", ok}, {"target_order", o.order}, {"steps", steps}, {"final_ring", D.ring.spec()},
               {"final_validates", check.ok}};
        if (!ok) res["obstruction"] = obstruction;
        R.summary = "lift " + src.name + " to order " + std::to_string(o.order) + ": " + (ok ? "lifted" : "obstructed");
        return R;
    }

    auto L = load_named<S>(o, o.operad, o.file, o.mod_ideal, ring);
    const Operad<S>& P = L.op;
    R.doc["operad"] = {{"name", L.src.name}, {"display_name", P.name}, {"parameters", L.src.description}};
    R.doc["window"] = P.N;
    std::string head = o.command + " " + P.name + " over " + ring.name() + ", window N=" + std::to_string(P.N);

    if (o.command == "validate") {
        auto v = validate_axioms(P);
        json viol = json::array();
        for (auto& x : v.violations)
            viol.push_back({{"axiom", x.axiom}, {"instance", x.instance}, {"lhs", element_str(P, x.lhs)}, {"rhs", element_str(P, x.rhs)}});
        res = {{"ok", v.ok}, {"checked", v.checked}, {"violations", viol}, {"unitary", P.unitary()}, {"two_unitary", P.two_unitary()}};
        R.summary = head + ": " + (v.ok ? "all axioms hold" : std::to_string(v.violations.size()) + " violations");
    } else if (o.command == "dims") {
        res = operad_json(P);
        std::string d;
        for (int x : P.dims()) d += (d.empty() ? "" : ",") + std::to_string(x);
        R.summary = head + ": dims [" + d + "]";
    } else if (o.command == "h0") {
        auto b = h0(P);
        json basis = json::array();
        for (auto& v : b) basis.push_back(element_json(P, Element<S>{1, v}));
        res = {{"h0", b.size()}, {"basis", basis}};
        R.summary = head + ": dim H0 = " + std::to_string(b.size());
    } else if (o.command == "der" || o.command == "h1") {
        auto D = derivations(P);
        res = {{"der", D.dim}, {"sf", D.sf_dim}, {"ider", D.ider_dim}, {"h1", D.h1_dim}};
        if (o.command == "der") {
            res["basis"] = derivation_images(P, D, D.basis);
            R.summary = head + ": dim der = " + std::to_string(D.dim);
        } else {
            res["representatives"] = derivation_images(P, D, D.h1_reps);
            R.summary = head + ": dim H1 = " + std::to_string(D.h1_dim);
        }
    } else if (o.command == "z2" || o.command == "b2" || o.command == "h2") {
        Variant v = parse_variant(o.variant);
        CohomologyOptions opt;
        opt.stabilization = o.stabilization;
        opt.force_direct = o.force_direct;
        auto H = h2_window(P, v, opt);
        R.doc["variant"] = variant_name(v);
        res = {{"z2", H.z2_dim}, {"b2", H.b2_dim}, {"h2", H.h2_dim}, {"method", H.method},
               {"unknowns", H.unknowns}, {"equations", H.equations}, {"windowed", true}};
        if (!H.ext1_dims.empty()) res["ext1_dims"] = H.ext1_dims;
        if (o.command == "h2" && !o.no_reps) {
            json reps = json::array();
            for (auto& w : H.reps) reps.push_back(cocycle_json(P, w));
            res["representatives"] = reps;
        }
        json st = {{"computed", o.stabilization}};
        if (H.h2_previous) {
            st["previous_window"] = P.N - 1;
            st["previous_h2"] = *H.h2_previous;
            st["stabilized"] = H.stabilized();
        }
        R.doc["stabilization"] = st;
        int value = o.command == "z2" ? H.z2_dim : o.command == "b2" ? H.b2_dim : H.h2_dim;
        R.summary = head + ", variant " + variant_name(v) + ": dim " + (o.command == "z2" ? "Z2" : o.command == "b2" ? "B2" : "H2") +
                    " = " + std::to_string(value) + (H.h2_previous ? (H.stabilized() ? " (stable from N-1)" : " (differs at N-1)") : "");
    } else if (o.command == "truncate") {
        auto I = truncation_ideal(P, o.ideal_k);
        res = subspace_json(I);
        res["k"] = o.ideal_k;
        auto f = ideal_closure_failure(P, I);
        res["closed"] = !f.has_value();
        if (f) res["closure_failure"] = *f;
        R.summary = head + ": truncation ideal I" + std::to_string(o.ideal_k) + " dims " + res["dims"].dump();
    } else if (o.command == "quotient") {
        auto I = truncation_ideal(P, o.ideal_k);
        auto Qt = quotient(P, I, P.name + "/I" + std::to_string(o.ideal_k));
        auto v = validate_axioms(Qt);
        res = operad_json(Qt);
        res["ideal_dims"] = subspace_json(I)["dims"];
        res["validates"] = v.ok;
        R.summary = head + ": quotient by I" + std::to_string(o.ideal_k) + " has dims " + res["dims"].dump();
    } else if (o.command == "iso") {
        if (o.images_file.empty()) throw UsageError("iso needs --images FILE");
        Loaded<S> T = (o.target.empty() && o.target_file.empty())
                          ? L
                          : load_named<S>(o, o.target, o.target_file, o.target_ideal, ring);
        std::vector<Element<S>> gens;
        std::vector<SVec<S>> imgs;
        json j = json::parse(read_file(o.images_file));
        for (auto& e : j.at("map")) {
            gens.push_back(element_from_json(P, e.at("source")));
            imgs.push_back(element_from_json(T.op, e.at("image")).v);
        }
        auto M = check_morphism(P, T.op, gens, imgs);
        res = {{"target", T.src.name}, {"is_morphism", M.is_morphism}, {"iso_per_arity", M.iso_per_arity},
               {"rank_per_arity", M.rank_per_arity}, {"is_iso", M.is_iso()}};
        if (!M.failure.empty()) res["failure"] = M.failure;
        R.summary = head + ": " + (M.is_morphism ? (M.is_iso() ? "isomorphism" : "morphism, not an isomorphism") : "not a morphism: " + M.failure);
    } else if (o.command == "fixed") {
        ArityMaps<S> f;
        bool derivation = false;
        std::string what;
        if (!o.scale.empty()) {
            f = scaling_maps(P, parse_scalar<S>(ring, o.scale));
            what = "scaling by " + o.scale;
        } else if (!o.images_file.empty()) {
            f = maps_from_generators(P, P, o.images_file, false);
            what = "morphism";
        } else if (!o.derivation_file.empty()) {
            f = maps_from_generators(P, P, o.derivation_file, true);
            if (auto bad = derivation_failure(P, f)) throw DomainError("NotADerivation", *bad);
            derivation = true;
            what = "derivation";
        } else {
            f = identity_maps(P);
            what = "identity";
        }
        auto F = fixed_subspace(P, f, derivation);
        res = subspace_json(F.fixed);
        res["map"] = what;
        res["closed"] = F.closed;
        if (!F.closed) res["closure_failure"] = F.failure;
        R.summary = head + ": fixed subspace of the " + what + " has dims " + res["dims"].dump();
    } else if (o.command == "deform") {
        Cocycle<S> w;
        std::string origin;
        if (!o.cocycle_file.empty()) {
            w = cocycle_from_json(P, json::parse(read_file(o.cocycle_file)));
            origin = o.cocycle_file;
        } else {
            Variant v = parse_variant(o.variant);
            R.doc["variant"] = variant_name(v);
            auto H = h2_window(P, v);
            if (o.rep < 0 || o.rep >= static_cast<int>(H.reps.size()))
                throw DomainError("NoSuchRepresentative", "H2 has " + std::to_string(H.reps.size()) +
                                                              " representatives; --rep " + std::to_string(o.rep) + " requested");
            w = H.reps[o.rep];
            origin = "h2 representative " + std::to_string(o.rep);
        }
        auto fail = cocycle_failure(P, w);
        res = {{"cocycle_source", origin}, {"is_cocycle", !fail.has_value()}};
        if (fail) {
            res["cocycle_failure"] = *fail;
            res["validates"] = false;
        } else {
            auto D = deform(P, w);
            auto v = validate_axioms(D);
            res["deformed_ring"] = D.ring.spec();
            res["validates"] = v.ok;
            if (!v.ok) res["first_violation"] = v.violations.front().axiom + " at " + v.violations.front().instance;
            res["coboundary"] = is_coboundary(P, w);
        }
        res["cocycle"] = cocycle_json(P, w);
        R.summary = head + ": deformation " + (res["validates"].get<bool>() ? "validates" : "fails validation");
    } else if (o.command == "ext1") {
        json per = json::array();
        int lo = o.arity >= 0 ? o.arity : 2, hi = o.arity >= 0 ? o.arity : P.N;
        bool all_zero = true;
        for (int m = lo; m <= hi; ++m) {
            auto E = ext1(P, m, o.force_direct);
            per.push_back({{"arity", m}, {"dim", E.dim}, {"method", E.method}});
            all_zero = all_zero && E.trivial();
        }
        res = {{"per_arity", per}, {"all_vanish", all_zero}};
        R.summary = head + ": Ext1 " + (all_zero ? "vanishes" : "is nonzero somewhere") + " on arities " +
                    std::to_string(lo) + ".." + std::to_string(hi);
    } else if (o.command == "aut-eqs") {
        auto A = aut_equations(P, P.N);
        json eqs = json::array();
        for (size_t k = 0; k < A.equations.size(); ++k)
            eqs.push_back({{"equation", poly_str(A.equations[k], A.variables) + " = 0"}, {"origin", A.origins[k]}});
        res = {{"variables", A.variables}, {"equations", eqs}, {"count", A.equations.size()}};
        R.summary = head + ": " + std::to_string(A.equations.size()) + " polynomial equations in " +
                    std::to_string(A.variables.size()) + " variables";
    } else {
        throw UsageError("unknown subcommand '" + o.command + "'");
    }
    return R;
}

// dims and validate also work over k[t]/(t^J) for the LL operad.
template <class S>
Report run_truncated(const Options& o, const Ring& ring) {
    Report R;
    if (o.command != "dims" && o.command != "validate")
        throw UsageError(o.command + " works over a field; k[t]/(t^J) rings are for dims, validate, and lift");
    auto L = load_named<S>(o, o.operad, o.file, -1, ring);
    R.doc["operad"] = {{"name", L.src.name}, {"display_name", L.op.name}, {"parameters", L.src.description}};
    R.doc["window"] = L.op.N;
    std::string head = o.command + " " + L.op.name + " over " + ring.name() + ", window N=" + std::to_string(L.op.N);
    if (o.command == "dims") {
        R.doc["result"] = operad_json(L.op);
        R.summary = head + ": dims " + json(L.op.dims()).dump();
    } else {
        auto v = validate_axioms(L.op);
        R.doc["result"] = {{"ok", v.ok}, {"checked", v.checked}};
        R.summary = head + ": " + (v.ok ? "all axioms hold" : "violations found");
    }
    return R;
}

Report run(const Options& o) {
    if (o.command == "catalog") {
        Report R;
        json entries = json::array();
        for (auto& e : catalog())
            entries.push_back({{"name", e.name}, {"default_window", e.default_window}, {"max_window", e.max_window}, {"summary", e.summary}});
        R.doc["result"] = {{"operads", entries}};
        R.summary = "catalog: " + std::to_string(catalog().size()) + " operads";
        return R;
    }
    Ring ring;
    try {
        ring = Ring::parse(o.ring);
    } catch (const DomainError& e) {
        throw UsageError(std::string("--ring: ") + e.what());
    }
    Report R;
    if (o.command == "lift") {
        R = ring.base == Ring::Base::Q ? run_field<Rational>(o, ring) : run_field<Zp>(o, ring);
    } else if (ring.is_field()) {
        R = ring.base == Ring::Base::Q ? run_field<Rational>(o, ring) : run_field<Zp>(o, ring);
    } else {
        R = ring.base == Ring::Base::Q ? run_truncated<QEps>(o, ring) : run_truncated<FpEps>(o, ring);
    }
    R.doc["ring"] = ring.spec();
    R.doc["ring_name"] = ring.name();
    return R;
}

const char* const kCommands[][2] = {
    {"validate", "check the operad axioms on the window"},
    {"dims", "dimensions and basis labels per arity"},
    {"h0", "H0: elements of P(1) with vanishing inner derivation"},
    {"der", "derivations, superfluous and inner parts"},
    {"h1", "H1 = der / (sf + ider)"},
    {"z2", "windowed 2-cocycles"},
    {"b2", "windowed 2-coboundaries"},
    {"h2", "windowed second cohomology"},
    {"truncate", "truncation ideal ^kI"},
    {"quotient", "quotient by the truncation ideal ^kI"},
    {"iso", "check a generator-image map for morphism and isomorphism"},
    {"fixed", "fixed subspace of a morphism or derivation"},
    {"deform", "build and validate the infinitesimal deformation of a cocycle"},
    {"lift", "lift a deformation order by order"},
    {"ext1", "Ext^1 obstruction check per arity"},
    {"aut-eqs", "polynomial equations for automorphisms"},
    {"catalog", "list the builtin operads"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"opcoh: cohomology and deformations of truncated operads"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    for (auto& [name, help] : kCommands) {
        auto* sub = app.add_subcommand(name, help);
        sub->callback([&o, n = std::string(name)] { o.command = n; });
        if (std::string(name) == "catalog") {
            sub->add_flag("--no-timing", o.no_timing, "omit timing from the report");
            continue;
        }
        sub->add_option("--operad", o.operad, "catalog operad name");
        sub->add_option("--file", o.file, "presentation document (.opd)");
        sub->add_option("--ring", o.ring, "Q | Fp:<p> | Q-eps:<J> | Fp-eps:<p>:<J>");
        sub->add_option("--max-arity,-N", o.max_arity, "window N");
        sub->add_flag("--override-window-guard", o.override_guard, "allow windows beyond the default guard");
        sub->add_option("--algebra", o.algebra, "D_A algebra: idempotent | square-zero | zero:<d> | truncated:<d> | JSON");
        sub->add_option("--mod-ideal", o.mod_ideal, "replace P by P / ^kI before computing");
        sub->add_flag("--no-timing", o.no_timing, "omit timing from the report");
        std::string n = name;
        if (n == "z2" || n == "b2" || n == "h2" || n == "deform") {
            sub->add_option("--variant", o.variant, "full | S")->check(CLI::IsMember({"full", "S", "s"}));
        }
        if (n == "z2" || n == "b2" || n == "h2") {
            sub->add_flag("--stabilization", o.stabilization, "also compute at window N-1");
            sub->add_flag("--force-direct", o.force_direct, "solve the unreduced system in the full variant");
            sub->add_flag("--no-reps", o.no_reps, "omit representative cocycles");
        }
        if (n == "truncate" || n == "quotient") sub->add_option("-k,--ideal", o.ideal_k, "truncation ideal index k");
        if (n == "iso") {
            sub->add_option("--target", o.target, "target catalog operad (default: the source)");
            sub->add_option("--target-file", o.target_file, "target presentation document");
            sub->add_option("--target-ideal", o.target_ideal, "quotient the target by ^kI");
            sub->add_option("--images", o.images_file, "JSON generator images");
        }
        if (n == "fixed") {
            sub->add_option("--images", o.images_file, "JSON generator images of a morphism");
            sub->add_option("--derivation", o.derivation_file, "JSON generator images of a derivation");
            sub->add_option("--scale", o.scale, "the morphism theta -> c^(n-1) theta");
        }
        if (n == "deform" || n == "lift") sub->add_option("--cocycle", o.cocycle_file, "cocycle JSON (as in h2 reports)");
        if (n == "deform") sub->add_option("--rep", o.rep, "index of the H2 representative to use");
        if (n == "lift") sub->add_option("--order", o.order, "target t-order");
        if (n == "ext1") {
            sub->add_option("--arity", o.arity, "single arity m");
            sub->add_flag("--force", o.force_direct, "compute even when a certificate applies");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (o.variant == "s") o.variant = "S";

    json doc = {{"tool", "opcoh"}, {"version", kVersion}, {"command", o.command}};
    Clock clock;
    auto fail = [&](int code, const std::string& kind, const std::string& msg, const json& instance) {
        doc["error"] = {{"kind", kind}, {"message", msg}, {"instance", instance}};
        doc["ring"] = o.ring;
        doc["window"] = o.max_arity >= 0 ? json(o.max_arity) : json(nullptr);
        std::cout << doc.dump(2) << "\n";
        std::cerr << "error (" << kind << "): " << msg << "\n";
        return code;
    };
    try {
        Report R = run(o);
        for (auto& [k, v] : R.doc.items()) doc[k] = v;
        if (!doc.contains("variant")) doc["variant"] = nullptr;
        if (!doc.contains("window")) doc["window"] = nullptr;
        if (!doc.contains("stabilization")) doc["stabilization"] = {{"computed", false}};
        if (!o.no_timing) doc["timing_seconds"] = clock.seconds();
        std::cout << doc.dump(2) << "\n";
        std::cerr << R.summary << "\n";
        return 0;
    } catch (const DocumentError& e) {
        return fail(2, e.kind, e.what(), {{"line", e.line}, {"column", e.column}, {"expected", e.expected}});
    } catch (const UsageError& e) {
        return fail(2, "UsageError", e.what(), nullptr);
    } catch (const DomainError& e) {
        // Name lookups and ring spellings are usage mistakes.
        bool usage = e.kind == "UnknownOperad" || e.kind == "InvalidRing" || e.kind == "ParseError" ||
                     e.kind == "InconsistentSymmetry" || e.kind == "NullaryGeneratorUnsupported" ||
                     e.kind == "UnaryGeneratorUnsupported";
        return fail(usage ? 2 : 1, e.kind, e.what(), nullptr);
    } catch (const json::exception& e) {
        return fail(2, "ParseError", std::string("JSON input: ") + e.what(), nullptr);
    }
}
