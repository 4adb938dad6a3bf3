#include "opcoh/document.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace opcoh {

using nlohmann::json;

namespace {

const char* const kSections[] = {"ring", "generators", "relations", "caps"};
const char* const kReserved[] = {"ring", "generators", "relations", "caps", "comp", "act", "lin", "sym", "id", "t"};

bool is_section(const std::string& w) {
    for (auto* s : kSections)
        if (w == s) return true;
    return false;
}

bool is_reserved(const std::string& w) {
    for (auto* s : kReserved)
        if (w == s) return true;
    return false;
}

bool is_ident(const std::string& w) {
    if (w.empty() || !(std::isalpha(static_cast<unsigned char>(w[0])) || w[0] == '_')) return false;
    for (char c : w)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    return true;
}

struct Cursor {
    const std::string* src;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Cursor(const std::string& t) : src(&t) {}

    const std::string& text() const { return *src; }

    bool done() const { return pos >= text().size(); }
    char peek() const { return done() ? '\0' : text()[pos]; }
    char get() {
        char c = text()[pos++];
        if (c == '\n') { ++line; col = 1; }
        else ++col;
        return c;
    }
    // Skips blanks and comments; newlines only when asked.
    void skip(bool newlines) {
        while (!done()) {
            char c = peek();
            if (c == '#') {
                while (!done() && peek() != '\n') get();
            } else if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
                get();
            } else {
                break;
            }
        }
    }
    std::string word() {
        std::string w;
        while (!done()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '=' || c == '#') break;
            w += get();
        }
        return w;
    }
    std::string found() const {
        if (done()) return "end of document";
        if (peek() == '\n') return "end of line";
        size_t e = pos;
        while (e < text().size() && !std::isspace(static_cast<unsigned char>(text()[e])) && e - pos < 16) ++e;
        return "'" + text().substr(pos, std::max<size_t>(e - pos, 1)) + "'";
    }
    [[noreturn]] void fail(std::vector<std::string> expected) const {
        std::string msg = "line " + std::to_string(line) + ", column " + std::to_string(col) + ": expected ";
        for (size_t k = 0; k < expected.size(); ++k) msg += (k ? " or " : "") + expected[k];
        msg += ", found " + found();
        throw DocumentError("ParseError", msg, line, col, std::move(expected));
    }
    [[noreturn]] void fail_at(const std::string& kind, const std::string& what, int l, int c) const {
        throw DocumentError(kind, "line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + what, l, c);
    }
    void expect(char c) {
        if (peek() != c) fail({std::string("'") + c + "'"});
        get();
    }
    void end_line() {
        skip(false);
        if (!done() && peek() != '\n') fail({"end of line"});
        if (!done()) get();
    }
};

template <class S>
TreePoly<S> zero_poly(int arity) {
    TreePoly<S> p;
    p.arity = arity;
    return p;
}

template <class S>
class Parser {
public:
    Parser(const std::string& text, const Ring* ring) : cur_(text) {
        pres_.ring = ring ? *ring : document_ring(text);
        if (!scalar_traits<S>::accepts(pres_.ring))
            throw DomainError("RingMismatch", "scalar type does not match ring " + pres_.ring.name());
    }

    Presentation<S> run() {
        cur_.skip(true);
        std::string section;
        while (!cur_.done()) {
            int l = cur_.line, c = cur_.col;
            Cursor save = cur_;
            std::string w = cur_.word();
            if (is_section(w)) {
                section = w;
                if (w == "ring") {
                    cur_.skip(false);
                    std::string r = cur_.word();
                    if (r.empty()) cur_.fail({"ring name"});
                } else if (w == "caps") {
                    pres_.unital = true;
                }
                cur_.end_line();
            } else {
                cur_ = save;
                if (section == "generators") generator_line();
                else if (section == "relations") relation_line();
                else if (section == "caps") cap_line();
                else cur_.fail_at("ParseError", "expected a section header (ring, generators, relations, caps)", l, c);
            }
            cur_.skip(true);
        }
        check_symmetries();
        return std::move(pres_);
    }

private:
    Cursor cur_;
    Presentation<S> pres_;
    std::vector<std::pair<int, int>> gen_pos_;

    int integer(const char* what, bool newlines = false) {
        cur_.skip(newlines);
        int l = cur_.line, c = cur_.col;
        std::string w = cur_.word();
        if (w.empty() || w.find_first_not_of("0123456789") != std::string::npos) {
            throw DocumentError("ParseError",
                                "line " + std::to_string(l) + ", column " + std::to_string(c) + ": expected " + what +
                                    ", found '" + w + "'",
                                l, c, {what});
        }
        return std::stoi(w);
    }

    S coefficient() {
        cur_.skip(true);
        int l = cur_.line, c = cur_.col;
        std::string w = cur_.word();
        if (w.empty()) cur_.fail({"coefficient"});
        try {
            return parse_scalar<S>(pres_.ring, w);
        } catch (const DomainError& e) {
            cur_.fail_at("ParseError", "expected coefficient, found '" + w + "' (" + e.what() + ")", l, c);
        }
    }

    Perm permutation(int arity) {
        cur_.skip(true);
        int l = cur_.line, c = cur_.col;
        std::string raw;
        if (cur_.peek() == '(') {
            while (cur_.peek() == '(') {
                raw += cur_.get();
                while (!cur_.done() && cur_.peek() != ')' && cur_.peek() != '\n') {
                    char ch = cur_.peek();
                    if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != ',') cur_.fail({"cycle entry"});
                    raw += cur_.get();
                }
                cur_.expect(')');
                raw += ')';
            }
            if (cur_.peek() == '_') raw += cur_.word();
        } else {
            raw = cur_.word();
        }
        if (raw.empty()) cur_.fail({"permutation"});
        Perm p;
        try {
            p = Perm::parse(raw, arity);
        } catch (const DomainError& e) {
            cur_.fail_at("ParseError", std::string("bad permutation '") + raw + "': " + e.what(), l, c);
        }
        if (p.n() != arity)
            cur_.fail_at("ParseError", "permutation '" + raw + "' has degree " + std::to_string(p.n()) +
                                           " but acts on arity " + std::to_string(arity), l, c);
        return p;
    }

    // arity -1 marks the literal 0 whose arity comes from context.
    TreePoly<S> expression() {
        cur_.skip(true);
        int l = cur_.line, c = cur_.col;
        if (cur_.peek() == '(') {
            cur_.get();
            cur_.skip(true);
            std::string head = cur_.word();
            TreePoly<S> out;
            if (head == "comp") {
                TreePoly<S> a = expression();
                int al = cur_.line, ac = cur_.col;
                int slot = integer("slot", true);
                TreePoly<S> b = expression();
                if (a.arity < 0 || b.arity < 0) {
                    out = zero_poly<S>(-1);
                } else {
                    if (slot < 1 || slot > a.arity)
                        cur_.fail_at("ParseError", "slot " + std::to_string(slot) + " outside 1.." + std::to_string(a.arity), al, ac);
                    out = poly_compose(a, slot, b);
                }
            } else if (head == "act") {
                TreePoly<S> a = expression();
                if (a.arity < 0) cur_.fail_at("ParseError", "cannot act on the literal 0", l, c);
                out = poly_act(a, permutation(a.arity));
            } else if (head == "lin") {
                out.arity = -1;
                cur_.skip(true);
                while (cur_.peek() != ')') {
                    if (cur_.done()) cur_.fail({"')'"});
                    S k = coefficient();
                    int el = cur_.line, ec = cur_.col;
                    TreePoly<S> e = expression();
                    if (e.arity >= 0) {
                        if (out.arity >= 0 && out.arity != e.arity)
                            cur_.fail_at("InhomogeneousRelation", "term of arity " + std::to_string(e.arity) +
                                                                     " in a combination of arity " + std::to_string(out.arity), el, ec);
                        out.arity = e.arity;
                        for (auto& [ct, t] : e.terms) out.terms.emplace_back(k * ct, t);
                    }
                    cur_.skip(true);
                }
            } else {
                throw DocumentError("ParseError",
                                    "line " + std::to_string(l) + ", column " + std::to_string(c + 1) +
                                        ": expected comp or act or lin, found '" + head + "'",
                                    l, c + 1, {"comp", "act", "lin"});
            }
            cur_.skip(true);
            cur_.expect(')');
            return out;
        }
        std::string w = cur_.word();
        if (w == "0") return zero_poly<S>(-1);
        if (w == "id") {
            TreePoly<S> p;
            p.arity = 1;
            p.terms.emplace_back(one<S>(pres_.ring), Tree::make_leaf(1));
            return p;
        }
        if (w.empty()) cur_.fail({"expression"});
        int g = pres_.find_gen(w);
        if (g < 0) cur_.fail_at("ParseError", "unknown generator '" + w + "'", l, c);
        TreePoly<S> p;
        p.arity = pres_.gens[g].arity;
        p.terms.emplace_back(one<S>(pres_.ring), Tree::make_gen(g, p.arity));
        return p;
    }

    void generator_line() {
        int l = cur_.line, c = cur_.col;
        std::string name = cur_.word();
        if (!is_ident(name) || is_reserved(name)) cur_.fail_at("ParseError", "expected generator name, found '" + name + "'", l, c);
        if (pres_.find_gen(name) >= 0) cur_.fail_at("ParseError", "generator '" + name + "' declared twice", l, c);
        GeneratorDecl<S> g;
        g.name = name;
        g.arity = integer("arity");
        if (g.arity < 2)
            cur_.fail_at(g.arity == 0 ? "NullaryGeneratorUnsupported" : "UnaryGeneratorUnsupported",
                         "generator '" + name + "' must have arity at least 2", l, c);
        cur_.skip(false);
        while (!cur_.done() && cur_.peek() != '\n') {
            std::string kw = cur_.word();
            if (kw != "sym") cur_.fail({"sym", "end of line"});
            Perm p = permutation(g.arity);
            S k = coefficient();
            g.symmetries.emplace_back(p, k);
            cur_.skip(false);
        }
        pres_.gens.push_back(std::move(g));
        gen_pos_.emplace_back(l, c);
        cur_.end_line();
    }

    void relation_line() {
        int l = cur_.line, c = cur_.col;
        TreePoly<S> lhs = expression();
        cur_.skip(false);
        if (cur_.peek() == '=') {
            cur_.get();
            TreePoly<S> rhs = expression();
            if (lhs.arity >= 0 && rhs.arity >= 0 && lhs.arity != rhs.arity)
                cur_.fail_at("InhomogeneousRelation", "the two sides have arities " + std::to_string(lhs.arity) + " and " +
                                                          std::to_string(rhs.arity), l, c);
            if (lhs.arity < 0) lhs.arity = rhs.arity;
            S minus = -one<S>(pres_.ring);
            for (auto& [k, t] : rhs.terms) lhs.terms.emplace_back(minus * k, t);
        }
        if (lhs.arity < 0) cur_.fail_at("ParseError", "a relation needs at least one term", l, c);
        if (lhs.arity < 2) cur_.fail_at("InhomogeneousRelation", "relations must have arity at least 2", l, c);
        pres_.relations.push_back(std::move(lhs));
        cur_.end_line();
    }

    void cap_line() {
        int l = cur_.line, c = cur_.col;
        std::string name = cur_.word();
        int g = pres_.find_gen(name);
        if (g < 0) cur_.fail_at("ParseError", "expected generator name, found '" + name + "'", l, c);
        int sl = cur_.line, sc = cur_.col;
        int slot = integer("slot");
        int a = pres_.gens[g].arity;
        if (slot < 1 || slot > a) cur_.fail_at("ParseError", "slot " + std::to_string(slot) + " outside 1.." + std::to_string(a), sl, sc);
        cur_.skip(false);
        cur_.expect('=');
        int el = cur_.line, ec = cur_.col;
        TreePoly<S> e = expression();
        if (e.arity < 0) e.arity = a - 1;
        if (e.arity != a - 1)
            cur_.fail_at("InhomogeneousRelation", "cap of '" + name + "' must have arity " + std::to_string(a - 1), el, ec);
        if (pres_.caps.count({g, slot})) cur_.fail_at("ParseError", "cap given twice", l, c);
        pres_.caps[{g, slot}] = std::move(e);
        cur_.end_line();
    }

    void check_symmetries() {
        for (size_t gi = 0; gi < pres_.gens.size(); ++gi) {
            const auto& g = pres_.gens[gi];
            std::map<Perm, S> elems;
            std::vector<Perm> order{Perm::identity(g.arity)};
            elems[order[0]] = one<S>(pres_.ring);
            for (size_t q = 0; q < order.size(); ++q) {
                Perm p = order[q];
                S cp = elems[p];
                for (auto& [s, cs] : g.symmetries) {
                    Perm r = p * s;
                    S c = cp * cs;
                    auto it = elems.find(r);
                    if (it == elems.end()) {
                        elems[r] = c;
                        order.push_back(r);
                    } else if (it->second != c) {
                        cur_.fail_at("InconsistentSymmetry",
                                     "symmetries of " + g.name + " give " + r.str() + " both " +
                                         scalar_text(it->second) + " and " + scalar_text(c),
                                     gen_pos_[gi].first, gen_pos_[gi].second);
                    }
                }
            }
        }
    }
};

// (comp ...) nest for the planar shape, leaves numbered left to right.
std::string planar(const Tree& t, const std::vector<std::string>& names) {
    if (t.is_leaf()) return "id";
    std::string s = names[t.gen];
    // Highest slot first keeps the lower slot numbers valid.
    for (int k = static_cast<int>(t.kids.size()) - 1; k >= 0; --k) {
        if (t.kids[k].is_leaf()) continue;
        s = "(comp " + s + " " + std::to_string(k + 1) + " " + planar(t.kids[k], names) + ")";
    }
    return s;
}

std::string tree_text(const Tree& t, const std::vector<std::string>& names) {
    std::vector<int> w;
    t.leaves(w);
    std::string s = planar(t, names);
    Perm sigma = Perm::from_images1(w).inverse();
    if (sigma.is_identity()) return s;
    return "(act " + s + " " + sigma.str() + ")";
}

template <class S>
std::string poly_text(const TreePoly<S>& p, const std::vector<std::string>& names) {
    if (p.terms.empty()) return "0";
    if (p.terms.size() == 1 && p.terms[0].first.is_one()) return tree_text(p.terms[0].second, names);
    std::string s = "(lin";
    for (auto& [c, t] : p.terms) s += " " + scalar_text(c) + " " + tree_text(t, names);
    return s + ")";
}

template <class K>
std::string base_text(const K& k) {
    return k.str();
}

Rational parse_rational_token(const std::string& text) {
    return Rational::parse(text);
}

}  // namespace

Ring document_ring(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string w, r;
        if (!(ls >> w) || w != "ring") continue;
        ls >> r;
        try {
            return Ring::parse(r);
        } catch (const DomainError& e) {
            throw DocumentError("ParseError", "line " + std::to_string(lineno) + ": " + e.what(), lineno, 1, {"ring name"});
        }
    }
    return Ring::rationals();
}

template <class S>
S parse_scalar(const Ring& ring, const std::string& text) {
    if (text.empty()) throw DomainError("ParseError", "empty coefficient");
    // Split into signed monomials at top-level + and - (a sign right after '/' or '^' never occurs).
    std::vector<std::string> monos;
    size_t start = 0;
    for (size_t k = 1; k <= text.size(); ++k) {
        if (k == text.size() || ((text[k] == '+' || text[k] == '-') && text[k - 1] != '*')) {
            monos.push_back(text.substr(start, k - start));
            start = k;
        }
    }
    S total = from_int<S>(ring, 0);
    for (std::string m : monos) {
        bool neg = false;
        if (!m.empty() && (m[0] == '+' || m[0] == '-')) {
            neg = m[0] == '-';
            m = m.substr(1);
        }
        if (m.empty()) throw DomainError("ParseError", "dangling sign in '" + text + "'");
        int power = 0;
        std::string q = m;
        auto tpos = m.find('t');
        if (tpos != std::string::npos) {
            if constexpr (!scalar_traits<S>::truncated) {
                throw DomainError("ParseError", "t is only available over k[t]/(t^J)");
            } else {
                std::string tail = m.substr(tpos + 1);
                power = 1;
                if (!tail.empty()) {
                    if (tail[0] != '^' || tail.size() < 2 || tail.find_first_not_of("0123456789", 1) != std::string::npos)
                        throw DomainError("ParseError", "bad power of t in '" + text + "'");
                    power = std::stoi(tail.substr(1));
                }
                q = m.substr(0, tpos);
                if (!q.empty()) {
                    if (q.back() != '*') throw DomainError("ParseError", "expected '*' before t in '" + text + "'");
                    q.pop_back();
                }
                if (q.empty()) q = "1";
            }
        }
        S v = from_rational<S>(ring, parse_rational_token(q));
        if (neg) v = -v;
        if constexpr (scalar_traits<S>::truncated) v = v * t_power<typename scalar_traits<S>::base>(ring, power);
        total += v;
    }
    return total;
}

template <class S>
std::string scalar_text(const S& s) {
    if constexpr (scalar_traits<S>::truncated) {
        std::string out;
        for (int k = 0; k < s.order(); ++k) {
            const auto& c = s.coeffs()[k];
            if (c.is_zero()) continue;
            std::string cs = base_text(c);
            std::string mono;
            if (k == 0) mono = cs;
            else {
                std::string tp = k == 1 ? "t" : "t^" + std::to_string(k);
                if (c.is_one()) mono = tp;
                else if (cs == "-1") mono = "-" + tp;
                else mono = cs + "*" + tp;
            }
            if (!out.empty() && mono[0] != '-') out += "+";
            out += mono;
        }
        return out.empty() ? "0" : out;
    } else {
        return s.str();
    }
}

template <class S>
Presentation<S> parse_presentation(const std::string& text, const Ring* ring) {
    Parser<S> parser(text, ring);
    return parser.run();
}

template <class S>
std::string serialize_presentation(const Presentation<S>& p) {
    std::vector<std::string> names;
    for (auto& g : p.gens) names.push_back(g.name);
    std::ostringstream out;
    out << "ring " << p.ring.spec() << "\n\ngenerators\n";
    for (auto& g : p.gens) {
        out << "  " << g.name << " " << g.arity;
        for (auto& [perm, c] : g.symmetries) out << " sym " << perm.str() << " " << scalar_text(c);
        out << "\n";
    }
    out << "\nrelations\n";
    for (auto& r : p.relations) out << "  " << poly_text(r, names) << "\n";
    if (p.unital) {
        out << "\ncaps\n";
        for (auto& [key, poly] : p.caps) out << "  " << names[key.first] << " " << key.second << " = " << poly_text(poly, names) << "\n";
    }
    return out.str();
}

// ---- JSON -------------------------------------------------------------------

template <class S>
json vec_json(const SVec<S>& v) {
    json a = json::array();
    for (auto& [i, x] : v) a.push_back(json::array({i, scalar_text(x)}));
    return a;
}

template <class S>
SVec<S> vec_from_json(const Ring& ring, const json& j) {
    SVec<S> v;
    for (auto& e : j) {
        int i = e.at(0).get<int>();
        S x = e.at(1).is_string() ? parse_scalar<S>(ring, e.at(1).get<std::string>())
                                  : from_int<S>(ring, e.at(1).get<long>());
        if (!x.is_zero()) axpy(v, x, unit_vec<S>(ring, i));
    }
    return v;
}

template <class S>
json maps_json(const ArityMaps<S>& f) {
    json out = json::array();
    for (size_t n = 0; n < f.size(); ++n) {
        json col = json::array();
        for (auto& v : f[n]) col.push_back(vec_json(v));
        out.push_back(col);
    }
    return out;
}

template <class S>
json cocycle_json(const Operad<S>& P, const Cocycle<S>& w) {
    json wp = json::array(), vs = json::array();
    for (int m = 1; m <= P.N; ++m)
        for (int n = 0; n <= P.N; ++n) {
            if (!P.in_window(m, n)) continue;
            for (int i = 1; i <= m; ++i)
                for (int a = 0; a < P.dim(m); ++a)
                    for (int b = 0; b < P.dim(n); ++b) {
                        const auto& v = w.wp[m][n][i - 1][a * P.dim(n) + b];
                        if (v.empty()) continue;
                        wp.push_back({{"m", m}, {"n", n}, {"i", i}, {"a", P.labels[m][a]}, {"b", P.labels[n][b]}, {"value", vec_json(v)}});
                    }
        }
    for (int n = 2; n <= P.N && n < static_cast<int>(w.vs.size()); ++n)
        for (int k = 1; k < n; ++k)
            for (int a = 0; a < P.dim(n); ++a) {
                if (k - 1 >= static_cast<int>(w.vs[n].size())) continue;
                const auto& v = w.vs[n][k - 1][a];
                if (v.empty()) continue;
                vs.push_back({{"n", n}, {"k", k}, {"a", P.labels[n][a]}, {"value", vec_json(v)}});
            }
    return {{"window", P.N}, {"operad", P.name}, {"ring", P.ring.spec()}, {"wp", wp}, {"vs", vs}};
}

template <class S>
Cocycle<S> cocycle_from_json(const Operad<S>& P, const json& j) {
    Cocycle<S> w = zero_cocycle(P);
    auto label = [&](int n, const json& x) {
        if (x.is_number_integer()) return x.get<int>();
        int idx = P.find_label(n, x.get<std::string>());
        return idx;
    };
    for (auto& e : j.at("wp")) {
        int m = e.at("m"), n = e.at("n"), i = e.at("i");
        if (!P.in_window(m, n) || i < 1 || i > m)
            throw DomainError("WindowExceeded", "cocycle entry outside the window");
        int a = label(m, e.at("a")), b = label(n, e.at("b"));
        w.wp[m][n][i - 1][a * P.dim(n) + b] = vec_from_json<S>(P.ring, e.at("value"));
    }
    if (j.contains("vs"))
        for (auto& e : j.at("vs")) {
            int n = e.at("n"), k = e.at("k");
            if (n > P.N || k < 1 || k >= n) throw DomainError("WindowExceeded", "cocycle entry outside the window");
            int a = label(n, e.at("a"));
            w.vs[n][k - 1][a] = vec_from_json<S>(P.ring, e.at("value"));
        }
    return w;
}

template <class S>
json operad_json(const Operad<S>& P) {
    json labels = json::array();
    for (int n = 0; n <= P.N; ++n) labels.push_back(P.labels[n]);
    return {{"name", P.name}, {"ring", P.ring.spec()}, {"window", P.N}, {"dims", P.dims()},
            {"labels", labels}, {"unitary", P.unitary()}, {"two_unitary", P.two_unitary()}};
}

#define OPCOH_DOC_INST(S)                                                                  \
    template Presentation<S> parse_presentation<S>(const std::string&, const Ring*);        \
    template std::string serialize_presentation<S>(const Presentation<S>&);                 \
    template S parse_scalar<S>(const Ring&, const std::string&);                           \
    template std::string scalar_text<S>(const S&);                                          \
    template json vec_json<S>(const SVec<S>&);                                             \
    template SVec<S> vec_from_json<S>(const Ring&, const json&);                           \
    template json maps_json<S>(const ArityMaps<S>&);                                       \
    template json operad_json<S>(const Operad<S>&);

#define OPCOH_DOC_FIELD_INST(S)                                       \
    template json cocycle_json<S>(const Operad<S>&, const Cocycle<S>&); \
    template Cocycle<S> cocycle_from_json<S>(const Operad<S>&, const json&);

OPCOH_FOR_ALL_SCALARS(OPCOH_DOC_INST)
OPCOH_FOR_FIELDS(OPCOH_DOC_FIELD_INST)

}  // namespace opcoh
