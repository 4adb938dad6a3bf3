#include "opcoh/builtins.hpp"

#include "json.hpp"

#include <cctype>

namespace opcoh {

AlgebraData AlgebraData::idempotent() { return {1, {Rational(2)}}; }
AlgebraData AlgebraData::square_zero() { return {1, {Rational(0)}}; }
AlgebraData AlgebraData::zero(int d) {
    if (d < 0) throw DomainError("InvalidAlgebra", "negative dimension");
    return {d, std::vector<Rational>(static_cast<size_t>(d) * d * d)};
}
AlgebraData AlgebraData::truncated(int d) {
    AlgebraData a = zero(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i + j + 1 < d) a.omega[(static_cast<size_t>(i) * d + j) * d + (i + j + 1)] = Rational(1);
    return a;
}

AlgebraData AlgebraData::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError("ParseError", std::string("algebra file: ") + e.what());
    }
    if (!j.contains("d") || !j.contains("omega")) throw DomainError("ParseError", "algebra file needs 'd' and 'omega'");
    AlgebraData a = zero(j["d"].get<int>());
    auto rat = [](const nlohmann::json& v) {
        if (v.is_number_integer()) return Rational(v.get<long>());
        if (v.is_string()) return Rational::parse(v.get<std::string>());
        throw DomainError("ParseError", "algebra coefficients must be integers or strings");
    };
    const auto& om = j["omega"];
    if (om.is_array()) {
        if (static_cast<int>(om.size()) != a.d) throw DomainError("ParseError", "omega must be d x d x d");
        for (int i = 0; i < a.d; ++i)
            for (int k = 0; k < a.d; ++k)
                for (int l = 0; l < a.d; ++l) a.omega[(static_cast<size_t>(i) * a.d + k) * a.d + l] = rat(om.at(i).at(k).at(l));
    } else {
        throw DomainError("ParseError", "omega must be a nested array");
    }
    return a;
}

std::string AlgebraData::describe() const {
    std::string s = "dim " + std::to_string(d) + ";";
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            std::string t;
            for (int k = 0; k < d; ++k)
                if (!at(i, j, k).is_zero()) t += (t.empty() ? "" : "+") + at(i, j, k).str() + "*d" + std::to_string(k + 1);
            s += " d" + std::to_string(i + 1) + "*d" + std::to_string(j + 1) + "=" + (t.empty() ? "0" : t) + ";";
        }
    return s;
}

void AlgebraData::check_associative() const {
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int out = 0; out < d; ++out) {
                    Rational l, r;
                    for (int k = 0; k < d; ++k) {
                        l += at(a, b, k) * at(k, c, out);
                        r += at(b, c, k) * at(a, k, out);
                    }
                    if (l != r)
                        throw DomainError("NonAssociativeAlgebraData",
                                          "(d" + std::to_string(a + 1) + "d" + std::to_string(b + 1) + ")d" +
                                              std::to_string(c + 1) + " != d" + std::to_string(a + 1) + "(d" +
                                              std::to_string(b + 1) + "d" + std::to_string(c + 1) + ")");
                }
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"as", 5, 6, "associative operad, word model, unitary and 2-unitary"},
        {"com", 5, 6, "commutative operad, every component one-dimensional"},
        {"lie", 5, 6, "Lie operad from the bracket presentation (non-unital)"},
        {"pois", 5, 5, "unitary Poisson operad from its presentation with caps"},
        {"da", 5, 6, "2-unitary operad D_A built from an augmented algebra"},
        {"example44", 4, 6, "2-unitary operad with generating series 1/(1-t)+t/(1-t)^2+t^2/(1-t)^3"},
        {"example28", 3, 6, "k1 + k1_2 with all products of 1_2 zero (char 2 phenomena)"},
        {"ll", 4, 5, "LL operad over k[t]/(t^J), characteristic zero"},
    };
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
    std::string low;
    for (char c : name) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == "d_a") low = "da";
    for (auto& e : catalog())
        if (e.name == low) return e;
    throw DomainError("UnknownOperad", "no catalog operad named '" + name + "'");
}

// ---- explicit tables ------------------------------------------------------

template <class S>
static Operad<S> empty_operad(const Ring& ring, int N, std::vector<std::vector<std::string>> labels, const std::string& name) {
    labels.resize(N + 1);
    return Operad<S>(ring, N, std::move(labels), name);
}

static std::vector<int> word_of(const Perm& p) {
    std::vector<int> w(p.n());
    for (int k = 0; k < p.n(); ++k) w[k] = p.img[k] + 1;
    return w;
}

static int index_of_word(const std::vector<int>& w) {
    std::vector<int> img(w.size());
    for (size_t k = 0; k < w.size(); ++k) img[k] = w[k] - 1;
    return Perm(img).index();
}

template <class S>
Operad<S> build_as(const Ring& ring, int N) {
    std::vector<std::vector<std::string>> labels(N + 1);
    std::vector<std::vector<std::vector<int>>> words(N + 1);
    for (int n = 0; n <= N; ++n) {
        if (n == 0) {
            labels[0] = {"1_0"};
            words[0] = {{}};
            continue;
        }
        for (auto& p : all_perms(n)) {
            words[n].push_back(word_of(p));
            std::string s;
            for (int x : words[n].back()) s += (n > 9 && !s.empty() ? "," : "") + std::to_string(x);
            labels[n].push_back(s);
        }
    }
    Operad<S> P = empty_operad<S>(ring, N, labels, "As");
    S u = one<S>(ring);
    for (int n = 2; n <= N; ++n)
        for (int k = 1; k < n; ++k)
            for (int a = 0; a < P.dim(n); ++a) {
                auto w = words[n][a];
                for (auto& x : w)
                    if (x == k) x = k + 1;
                    else if (x == k + 1) x = k;
                P.act_tab[n][k - 1][a] = {{index_of_word(w), u}};
            }
    for (int m = 1; m <= N; ++m)
        for (int n = 0; n + m - 1 <= N; ++n)
            for (int i = 1; i <= m; ++i)
                for (int a = 0; a < P.dim(m); ++a)
                    for (int b = 0; b < P.dim(n); ++b) {
                        auto w = n == 0 ? word_cap(words[m][a], i) : word_compose(words[m][a], i, words[n][b]);
                        P.comp_ref(m, n, i, a, b) = {{w.empty() ? 0 : index_of_word(w), u}};
                    }
    P.identity = unit_vec<S>(ring, 0);
    P.identity_index = 0;
    if (N >= 2) P.two_unit = unit_vec<S>(ring, 0);
    certify(P);
    return P;
}

template <class S>
Operad<S> build_com(const Ring& ring, int N) {
    std::vector<std::vector<std::string>> labels(N + 1);
    for (int n = 0; n <= N; ++n) labels[n] = {"1_" + std::to_string(n)};
    labels[1] = {"1"};
    Operad<S> P = empty_operad<S>(ring, N, labels, "Com");
    S u = one<S>(ring);
    for (int n = 2; n <= N; ++n)
        for (int k = 1; k < n; ++k) P.act_tab[n][k - 1][0] = {{0, u}};
    for (int m = 1; m <= N; ++m)
        for (int n = 0; n + m - 1 <= N; ++n)
            for (int i = 1; i <= m; ++i) P.comp_ref(m, n, i, 0, 0) = {{0, u}};
    P.identity = unit_vec<S>(ring, 0);
    P.identity_index = 0;
    if (N >= 2) P.two_unit = unit_vec<S>(ring, 0);
    certify(P);
    return P;
}

// D_A: index 0 is 1_n, index 1 + (i-1) d + (j-1) is delta^n_{(i)j}.
template <class S>
Operad<S> build_da(const Ring& ring, int N, const AlgebraData& alg) {
    alg.check_associative();
    int d = alg.d;
    std::vector<std::vector<std::string>> labels(N + 1);
    labels[0] = {"1_0"};
    for (int n = 1; n <= N; ++n) {
        labels[n].push_back(n == 1 ? "1" : "1_" + std::to_string(n));
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= d; ++j)
                labels[n].push_back("d" + std::to_string(n) + "(" + std::to_string(i) + ")" + std::to_string(j));
    }
    Operad<S> P = empty_operad<S>(ring, N, labels, "D_A");
    S u = one<S>(ring);
    auto idx = [d](int i, int j) { return 1 + (i - 1) * d + (j - 1); };
    for (int n = 2; n <= N; ++n)
        for (int k = 1; k < n; ++k) {
            P.act_tab[n][k - 1][0] = {{0, u}};
            for (int i = 1; i <= n; ++i) {
                int si = i == k ? k + 1 : (i == k + 1 ? k : i);
                for (int j = 1; j <= d; ++j) P.act_tab[n][k - 1][idx(i, j)] = {{idx(si, j), u}};
            }
        }
    auto sorted = [](SVec<S> v) {
        std::sort(v.begin(), v.end(), [](auto& x, auto& y) { return x.first < y.first; });
        return v;
    };
    for (int m = 1; m <= N; ++m)
        for (int n = 0; n + m - 1 <= N; ++n) {
            int o = m + n - 1;
            for (int i = 1; i <= m; ++i) {
                P.comp_ref(m, n, i, 0, 0) = {{0, u}};
                for (int k = 1; k <= n; ++k)
                    for (int l = 1; l <= d; ++l) P.comp_ref(m, n, i, 0, idx(k, l)) = {{idx(k + i - 1, l), u}};
                for (int s = 1; s <= m; ++s)
                    for (int t = 1; t <= d; ++t) {
                        SVec<S> v;
                        if (s < i) v = {{idx(s, t), u}};
                        else if (s > i) v = {{idx(s + n - 1, t), u}};
                        else
                            for (int h = i; h <= i + n - 1; ++h) v.emplace_back(idx(h, t), u);
                        P.comp_ref(m, n, i, idx(s, t), 0) = sorted(v);
                        for (int k = 1; k <= n; ++k)
                            for (int l = 1; l <= d; ++l) {
                                SVec<S> w;
                                if (s == i)
                                    for (int vv = 1; vv <= d; ++vv) {
                                        S c = from_rational<S>(ring, alg.at(t - 1, l - 1, vv - 1));
                                        if (!c.is_zero()) w.emplace_back(idx(i + k - 1, vv), c);
                                    }
                                P.comp_ref(m, n, i, idx(s, t), idx(k, l)) = sorted(w);
                            }
                    }
                (void)o;
            }
        }
    P.identity = unit_vec<S>(ring, 0);
    P.identity_index = 0;
    if (N >= 2) P.two_unit = unit_vec<S>(ring, 0);
    certify(P);
    return P;
}

// Index 0: 1_n; 1..n: delta_(i); then delta_(kl), k < l, lexicographic.
template <class S>
Operad<S> build_example44(const Ring& ring, int N) {
    std::vector<std::vector<std::string>> labels(N + 1);
    std::vector<std::vector<std::vector<int>>> pair_idx(N + 1);
    labels[0] = {"1_0"};
    for (int n = 1; n <= N; ++n) {
        labels[n].push_back(n == 1 ? "1" : "1_" + std::to_string(n));
        for (int i = 1; i <= n; ++i) labels[n].push_back("d" + std::to_string(n) + "(" + std::to_string(i) + ")");
        pair_idx[n].assign(n + 1, std::vector<int>(n + 1, -1));
        for (int k = 1; k <= n; ++k)
            for (int l = k + 1; l <= n; ++l) {
                pair_idx[n][k][l] = pair_idx[n][l][k] = static_cast<int>(labels[n].size());
                labels[n].push_back("d" + std::to_string(n) + "(" + std::to_string(k) + std::to_string(l) + ")");
            }
    }
    Operad<S> P = empty_operad<S>(ring, N, labels, "Example44");
    S u = one<S>(ring), two = from_int<S>(ring, 2);
    for (int n = 2; n <= N; ++n)
        for (int k = 1; k < n; ++k) {
            auto sw = [k](int i) { return i == k ? k + 1 : (i == k + 1 ? k : i); };
            P.act_tab[n][k - 1][0] = {{0, u}};
            for (int i = 1; i <= n; ++i) P.act_tab[n][k - 1][i] = {{sw(i), u}};
            for (int a = 1; a <= n; ++a)
                for (int b = a + 1; b <= n; ++b)
                    P.act_tab[n][k - 1][pair_idx[n][a][b]] = {{pair_idx[n][sw(a)][sw(b)], u}};
        }
    auto sorted = [](SVec<S> v) {
        std::map<int, S> acc;
        for (auto& [i, x] : v) acc[i] += x;
        SVec<S> out;
        for (auto& [i, x] : acc)
            if (!x.is_zero()) out.emplace_back(i, x);
        return out;
    };
    for (int m = 1; m <= N; ++m)
        for (int n = 0; n + m - 1 <= N; ++n) {
            int o = m + n - 1;
            auto D = [&](int h) { return h; };
            auto DD = [&](int a, int b) { return pair_idx[o][a][b]; };
            for (int i = 1; i <= m; ++i) {
                // 1_m o_i x
                P.comp_ref(m, n, i, 0, 0) = {{0, u}};
                for (int k = 1; k <= n; ++k) P.comp_ref(m, n, i, 0, k) = {{D(k + i - 1), u}};
                for (int k = 1; k <= n; ++k)
                    for (int l = k + 1; l <= n; ++l)
                        P.comp_ref(m, n, i, 0, pair_idx[n][k][l]) = {{DD(k + i - 1, l + i - 1), u}};
                for (int s = 1; s <= m; ++s) {
                    // d(s) o_i 1_n and d(s) o_i d(k); d(s) o_i d(kl) vanishes
                    SVec<S> v;
                    if (s < i) v = {{D(s), u}};
                    else if (s > i) v = {{D(s + n - 1), u}};
                    else {
                        for (int h = i; h <= i + n - 1; ++h) v.emplace_back(D(h), u);
                        for (int k = i; k <= i + n - 1; ++k)
                            for (int l = k + 1; l <= i + n - 1; ++l) v.emplace_back(DD(k, l), -u);
                    }
                    P.comp_ref(m, n, i, s, 0) = sorted(v);
                                        for (int k = 1; k <= n; ++k) {
                        SVec<S> w;
                        if (s < i) w = {{DD(s, k + i - 1), u}};
                        else if (s > i) w = {{DD(k + i - 1, s + n - 1), u}};
                        else {
                            w.emplace_back(D(i + k - 1), two);
                            for (int h = i; h <= i + n - 1; ++h)
                                if (h != i + k - 1) w.emplace_back(DD(h, i + k - 1), -u);
                        }
                        P.comp_ref(m, n, i, s, k) = sorted(w);
                    }
                }
                for (int s = 1; s <= m; ++s)
                    for (int t = s + 1; t <= m; ++t) {
                        int a = pair_idx[m][s][t];
                        // d(st) o_i 1_n and d(st) o_i d(k); products of two pair elements vanish
                        SVec<S> v;
                        if (t < i) v = {{DD(s, t), u}};
                        else if (t == i)
                            for (int h = t; h <= t + n - 1; ++h) v.emplace_back(DD(s, h), u);
                        else if (s < i) v = {{DD(s, t + n - 1), u}};
                        else if (s == i)
                            for (int h = s; h <= s + n - 1; ++h) v.emplace_back(DD(h, t + n - 1), u);
                        else v = {{DD(s + n - 1, t + n - 1), u}};
                        P.comp_ref(m, n, i, a, 0) = sorted(v);
                                                for (int k = 1; k <= n; ++k) {
                            SVec<S> w;
                            if (i == t) w = {{DD(s, t + k - 1), two}};
                            else if (i == s) w = {{DD(s + k - 1, t + n - 1), two}};
                            P.comp_ref(m, n, i, a, k) = sorted(w);
                        }
                    }
            }
        }
    P.identity = unit_vec<S>(ring, 0);
    P.identity_index = 0;
    if (N >= 2) P.two_unit = unit_vec<S>(ring, 0);
    certify(P);
    return P;
}

template <class S>
Operad<S> build_example28(const Ring& ring, int N) {
    std::vector<std::vector<std::string>> labels(N + 1);
    if (N >= 1) labels[1] = {"1"};
    if (N >= 2) labels[2] = {"1_2"};
    Operad<S> P = empty_operad<S>(ring, N, labels, "Example28");
    S u = one<S>(ring);
    if (N >= 2) P.act_tab[2][0][0] = {{0, u}};
    if (N >= 1) P.comp_ref(1, 1, 1, 0, 0) = {{0, u}};
    if (N >= 2) {
        P.comp_ref(1, 2, 1, 0, 0) = {{0, u}};
        for (int i = 1; i <= 2; ++i) P.comp_ref(2, 1, i, 0, 0) = {{0, u}};
    }
    P.identity = unit_vec<S>(ring, 0);
    P.identity_index = 0;
    certify(P);
    return P;
}

// ---- presentations ---------------------------------------------------------

template <class S>
static TreePoly<S> mono(const Ring& ring, const Tree& t, long c = 1) {
    return {t.arity(), {{from_int<S>(ring, c), t}}};
}

template <class S>
static TreePoly<S> lin(std::initializer_list<std::pair<S, Tree>> terms) {
    TreePoly<S> p;
    for (auto& t : terms) p.terms.push_back(t);
    p.arity = p.terms.front().second.arity();
    return p;
}

static Tree comp(const Tree& a, int i, const Tree& b) { return tree_compose(a, i, b); }
static Tree act(const Tree& a, const char* perm) { return tree_act(a, Perm::parse(perm)); }

template <class S>
static void add_binary(Presentation<S>& p, const std::string& name, int sym) {
    GeneratorDecl<S> g;
    g.name = name;
    g.arity = 2;
    if (sym != 0) g.symmetries.emplace_back(Perm::adjacent(2, 1), from_int<S>(p.ring, sym));
    p.gens.push_back(g);
}

template <class S>
static void add_caps(Presentation<S>& p, int g, bool unit_cap) {
    for (int i = 1; i <= 2; ++i)
        p.caps[{g, i}] = unit_cap ? mono<S>(p.ring, Tree::make_leaf(1)) : TreePoly<S>{1, {}};
    p.unital = true;
}

template <class S>
Presentation<S> as_presentation(const Ring& ring, bool unital) {
    Presentation<S> p;
    p.ring = ring;
    add_binary(p, "m", 0);
    Tree m = Tree::make_gen(0, 2);
    S u = one<S>(ring);
    p.relations.push_back(lin<S>({{u, comp(m, 1, m)}, {-u, comp(m, 2, m)}}));
    if (unital) add_caps(p, 0, true);
    return p;
}

template <class S>
Presentation<S> com_presentation(const Ring& ring, bool unital) {
    Presentation<S> p;
    p.ring = ring;
    add_binary(p, "m", 1);
    Tree m = Tree::make_gen(0, 2);
    S u = one<S>(ring);
    p.relations.push_back(lin<S>({{u, comp(m, 1, m)}, {-u, comp(m, 2, m)}}));
    if (unital) add_caps(p, 0, true);
    return p;
}

template <class S>
Presentation<S> lie_presentation(const Ring& ring) {
    Presentation<S> p;
    p.ring = ring;
    add_binary(p, "br", -1);
    Tree b = Tree::make_gen(0, 2);
    S u = one<S>(ring);
    p.relations.push_back(lin<S>({{u, comp(b, 2, b)}, {-u, comp(b, 1, b)}, {-u, act(comp(b, 2, b), "(12)_3")}}));
    return p;
}

template <class S>
static void poisson_relations(Presentation<S>& p, const S& t) {
    Tree m = Tree::make_gen(0, 2), b = Tree::make_gen(1, 2);
    S u = one<S>(p.ring);
    // associativity, deformed by t[x2,[x1,x3]]
    TreePoly<S> assoc = lin<S>({{u, comp(m, 1, m)}, {-u, comp(m, 2, m)}});
    if (!t.is_zero()) assoc.terms.emplace_back(-t, act(comp(b, 2, b), "(12)_3"));
    p.relations.push_back(assoc);
    // Leibniz
    p.relations.push_back(lin<S>({{u, comp(b, 1, m)}, {-u, comp(m, 2, b)}, {-u, act(comp(m, 2, b), "(12)_3")}}));
    // Jacobi
    p.relations.push_back(lin<S>({{u, comp(b, 2, b)}, {-u, comp(b, 1, b)}, {-u, act(comp(b, 2, b), "(12)_3")}}));
}

template <class S>
Presentation<S> pois_presentation(const Ring& ring) {
    Presentation<S> p;
    p.ring = ring;
    add_binary(p, "mu", 1);
    add_binary(p, "br", -1);
    poisson_relations(p, S());
    add_caps(p, 0, true);
    add_caps(p, 1, false);
    return p;
}

template <class S>
Presentation<S> ll_presentation(const Ring& ring) {
    Presentation<S> p;
    p.ring = ring;
    add_binary(p, "mu", 1);
    add_binary(p, "br", -1);
    S t;
    if constexpr (scalar_traits<S>::truncated) {
        t = t_power<typename scalar_traits<S>::base>(ring, 1);
    } else {
        throw DomainError("InvalidRing", "the LL operad needs a ring k[t]/(t^J)");
    }
    poisson_relations(p, t);
    add_caps(p, 0, true);
    add_caps(p, 1, false);
    return p;
}

template <class S>
Operad<S> build_lie(const Ring& ring, int N) {
    auto q = quotient_truncation(lie_presentation<S>(ring), N, "Lie");
    return q.op;
}

template <class S>
Operad<S> build_pois(const Ring& ring, int N) {
    auto q = quotient_truncation(pois_presentation<S>(ring), N, "Pois");
    return q.op;
}

template <class S>
Operad<S> build_ll(const Ring& ring, int N) {
    if (ring.is_field()) throw DomainError("InvalidRing", "the LL operad needs a ring k[t]/(t^J)");
    if (ring.characteristic() != 0)
        throw DomainError("UnsupportedCharacteristic", "the LL operad is only built in characteristic zero");
    auto q = quotient_truncation(ll_presentation<S>(ring), N, "LL");
    return q.op;
}

template <class S>
Operad<S> build(const std::string& name, const Ring& ring, int N, const BuildOptions& opts) {
    const auto& e = catalog_entry(name);
    if (N < 0) throw DomainError("WindowTooLarge", "window must be non-negative");
    if (N > e.max_window && !opts.override_window_guard)
        throw DomainError("WindowTooLarge", e.name + " is guarded at N <= " + std::to_string(e.max_window) +
                                                " (pass --override-window-guard to exceed)");
    if (e.name != "ll" && !ring.is_field())
        throw DomainError("InvalidRing", e.name + " is built over a field; use deform/lift for k[t]/(t^J)");
    if constexpr (scalar_traits<S>::truncated) {
        if (e.name == "ll") return build_ll<S>(ring, N);
        throw DomainError("InvalidRing", e.name + " is built over a field");
    } else {
        if (e.name == "as") return build_as<S>(ring, N);
        if (e.name == "com") return build_com<S>(ring, N);
        if (e.name == "lie") return build_lie<S>(ring, N);
        if (e.name == "pois") return build_pois<S>(ring, N);
        if (e.name == "da") return build_da<S>(ring, N, opts.algebra);
        if (e.name == "example44") return build_example44<S>(ring, N);
        if (e.name == "example28") return build_example28<S>(ring, N);
        throw DomainError("InvalidRing", "the LL operad needs a ring k[t]/(t^J)");
    }
}

#define OPCOH_BUILTIN_INST(S)                                                          \
    template Operad<S> build_as<S>(const Ring&, int);                                  \
    template Operad<S> build_com<S>(const Ring&, int);                                 \
    template Operad<S> build_da<S>(const Ring&, int, const AlgebraData&);              \
    template Operad<S> build_example44<S>(const Ring&, int);                           \
    template Operad<S> build_example28<S>(const Ring&, int);                           \
    template Presentation<S> as_presentation<S>(const Ring&, bool);                    \
    template Presentation<S> com_presentation<S>(const Ring&, bool);                   \
    template Presentation<S> lie_presentation<S>(const Ring&);                         \
    template Presentation<S> pois_presentation<S>(const Ring&);                        \
    template Presentation<S> ll_presentation<S>(const Ring&);                          \
    template Operad<S> build_lie<S>(const Ring&, int);                                 \
    template Operad<S> build_pois<S>(const Ring&, int);                                \
    template Operad<S> build_ll<S>(const Ring&, int);                                  \
    template Operad<S> build<S>(const std::string&, const Ring&, int, const BuildOptions&);

OPCOH_FOR_ALL_SCALARS(OPCOH_BUILTIN_INST)

}  // namespace opcoh
