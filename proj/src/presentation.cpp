#include "opcoh/presentation.hpp"

#include <functional>

namespace opcoh {

Tree Tree::make_gen(int g, int arity) {
    Tree t;
    t.gen = g;
    for (int k = 1; k <= arity; ++k) t.kids.push_back(make_leaf(k));
    return t;
}

int Tree::arity() const {
    if (is_leaf()) return 1;
    int a = 0;
    for (auto& k : kids) a += k.arity();
    return a;
}

void Tree::leaves(std::vector<int>& out) const {
    if (is_leaf()) { out.push_back(leaf); return; }
    for (auto& k : kids) k.leaves(out);
}

static Tree relabel(const Tree& t, const std::function<int(int)>& f) {
    if (t.is_leaf()) return Tree::make_leaf(f(t.leaf));
    Tree r;
    r.gen = t.gen;
    for (auto& k : t.kids) r.kids.push_back(relabel(k, f));
    return r;
}

static Tree substitute(const Tree& a, int i, const Tree& b, int n) {
    if (a.is_leaf()) {
        if (a.leaf < i) return a;
        if (a.leaf > i) return Tree::make_leaf(a.leaf + n - 1);
        return relabel(b, [i](int l) { return l + i - 1; });
    }
    Tree r;
    r.gen = a.gen;
    for (auto& k : a.kids) r.kids.push_back(substitute(k, i, b, n));
    return r;
}

Tree tree_compose(const Tree& a, int i, const Tree& b) {
    int m = a.arity();
    if (i < 1 || i > m) throw DomainError("SlotOutOfRange", "tree slot out of range");
    return substitute(a, i, b, b.arity());
}

Tree tree_act(const Tree& t, const Perm& sigma) {
    Perm inv = sigma.inverse();
    return relabel(t, [&](int l) { return inv(l); });
}

std::string tree_str(const Tree& t, const std::vector<std::string>& names) {
    if (t.is_leaf()) return "x" + std::to_string(t.leaf);
    std::string s = names[t.gen] + "(";
    for (size_t k = 0; k < t.kids.size(); ++k) {
        if (k) s += ",";
        s += tree_str(t.kids[k], names);
    }
    return s + ")";
}

template <class S>
TreePoly<S> poly_compose(const TreePoly<S>& a, int i, const TreePoly<S>& b) {
    TreePoly<S> r;
    r.arity = a.arity + b.arity - 1;
    for (auto& [x, s] : a.terms)
        for (auto& [y, t] : b.terms) r.terms.emplace_back(x * y, tree_compose(s, i, t));
    return r;
}

template <class S>
TreePoly<S> poly_act(const TreePoly<S>& a, const Perm& sigma) {
    TreePoly<S> r;
    r.arity = a.arity;
    for (auto& [x, s] : a.terms) r.terms.emplace_back(x, tree_act(s, sigma));
    return r;
}

template <class S>
int Presentation<S>::find_gen(const std::string& name) const {
    for (size_t g = 0; g < gens.size(); ++g)
        if (gens[g].name == name) return static_cast<int>(g);
    return -1;
}

// ---------------------------------------------------------------------------

template <class S>
class PresentationEngine {
public:
    using K = typename scalar_traits<S>::base;

    struct WTree {
        int g = 0;
        std::vector<std::vector<int>> blocks;
        std::vector<int> kids;
    };
    struct Level {
        std::vector<WTree> w;
        std::map<std::vector<int>, int> index;
        std::vector<int> std_of_w, w_of_std, colbase;
        int nonstd = 0;
        Echelon<K> ech;
    };
    struct GenInfo {
        std::string name;
        int arity = 2;
        std::vector<std::pair<Perm, S>> group;
    };
    struct Labeled {
        SVec<S> v;
        std::vector<int> labels;
    };

    Ring ring;
    int N = 0, J = 1;
    bool unital = false;
    std::vector<GenInfo> gens;
    std::vector<TreePoly<S>> rels;
    std::map<std::pair<int, int>, TreePoly<S>> caps;
    std::vector<Level> levels;
    std::vector<std::vector<SVec<S>>> capval;
    Operad<S> op;

    PresentationEngine(const Presentation<S>& pres, int window, const std::string& name) {
        ring = pres.ring;
        N = window;
        J = ring.order == 0 ? 1 : ring.order;
        unital = pres.unital;
        caps = pres.caps;
        for (auto& g : pres.gens) {
            if (g.arity == 0) throw DomainError("NullaryGeneratorUnsupported", "generator " + g.name + " has arity 0");
            if (g.arity == 1) throw DomainError("UnaryGeneratorUnsupported", "generator " + g.name + " has arity 1");
            gens.push_back({g.name, g.arity, {}});
        }
        std::vector<std::vector<std::pair<Perm, S>>> syms(gens.size());
        for (size_t g = 0; g < gens.size(); ++g) syms[g] = pres.gens[g].symmetries;
        for (auto& r : pres.relations) {
            if (r.arity < 2) throw DomainError("InhomogeneousRelation", "relations must have arity at least 2");
            if (!fold_symmetry(r, syms)) rels.push_back(r);
        }
        for (size_t g = 0; g < gens.size(); ++g) gens[g].group = close_group(gens[g], syms[g]);
        build(name);
    }

    std::vector<std::pair<Perm, S>> close_group(const GenInfo& g, const std::vector<std::pair<Perm, S>>& sy) {
        std::map<Perm, S> elems;
        std::vector<Perm> order;
        Perm id = Perm::identity(g.arity);
        elems[id] = one<S>(ring);
        order.push_back(id);
        for (size_t q = 0; q < order.size(); ++q) {
            Perm p = order[q];
            S cp = elems[p];
            for (auto& [s, cs] : sy) {
                if (s.n() != g.arity)
                    throw DomainError("InconsistentSymmetry", "symmetry of " + g.name + " has the wrong degree");
                Perm r = p * s;
                S c = cp * cs;
                auto it = elems.find(r);
                if (it == elems.end()) {
                    elems[r] = c;
                    order.push_back(r);
                } else if (it->second != c) {
                    throw DomainError("InconsistentSymmetry", "symmetries of " + g.name + " do not define a character (" +
                                                                  r.str() + " gets " + it->second.str() + " and " +
                                                                  c.str() + ")");
                }
            }
        }
        std::vector<std::pair<Perm, S>> out;
        for (auto& p : order) {
            if (!is_unit(elems[p]))
                throw DomainError("InconsistentSymmetry", "symmetry scalar of " + g.name + " is not a unit");
            out.emplace_back(p, elems[p]);
        }
        return out;
    }

    // A two-term relation c1 g*s1 + c2 g*s2 becomes the symmetry g*(s1 s2^-1) = -(c2/c1) g.
    bool fold_symmetry(const TreePoly<S>& r, std::vector<std::vector<std::pair<Perm, S>>>& syms) {
        if (r.terms.size() != 2) return false;
        int g = -1;
        std::vector<Perm> ps;
        for (auto& [c, t] : r.terms) {
            if (t.is_leaf() || !is_unit(c)) return false;
            for (auto& k : t.kids)
                if (!k.is_leaf()) return false;
            if (g >= 0 && t.gen != g) return false;
            g = t.gen;
            std::vector<int> lab;
            t.leaves(lab);
            ps.push_back(Perm::from_word(lab));
        }
        S lambda = -(r.terms[1].first * r.terms[0].first.inverse());
        syms[g].emplace_back(ps[0] * ps[1].inverse(), lambda);
        return true;
    }

    // ---- W-trees -------------------------------------------------------------

    std::vector<int> key_of(int n, const WTree& w) const {
        std::vector<int> key(1 + n + w.kids.size());
        key[0] = w.g;
        for (size_t j = 0; j < w.blocks.size(); ++j)
            for (int l : w.blocks[j]) key[l] = static_cast<int>(j);
        for (size_t j = 0; j < w.kids.size(); ++j) key[1 + n + j] = w.kids[j];
        return key;
    }

    // Reorders blocks into canonical position; returns the scalar picked up.
    S canonicalize(WTree& w) const {
        const auto& grp = gens[w.g].group;
        int a = static_cast<int>(w.blocks.size());
        std::vector<int> best;
        int best_h = 0;
        for (size_t h = 0; h < grp.size(); ++h) {
            Perm inv = grp[h].first.inverse();
            std::vector<int> seq(a);
            for (int p = 1; p <= a; ++p) seq[p - 1] = w.blocks[inv(p) - 1].front();
            if (h == 0 || seq < best) { best = seq; best_h = static_cast<int>(h); }
        }
        if (best_h == 0) return one<S>(ring);
        Perm inv = grp[best_h].first.inverse();
        WTree r;
        r.g = w.g;
        for (int p = 1; p <= a; ++p) {
            r.blocks.push_back(w.blocks[inv(p) - 1]);
            r.kids.push_back(w.kids[inv(p) - 1]);
        }
        w = std::move(r);
        return grp[best_h].second.inverse();
    }

    std::pair<int, S> make_w(int n, WTree w) const {
        S f = canonicalize(w);
        auto it = levels[n].index.find(key_of(n, w));
        if (it == levels[n].index.end()) throw DomainError("Internal", "unknown tree shape");
        return {it->second, f};
    }

    void enumerate(int n) {
        Level& lv = levels[n];
        for (int g = 0; g < static_cast<int>(gens.size()); ++g) {
            int a = gens[g].arity;
            if (a > n) continue;
            std::vector<int> as(n, 0);
            while (true) {
                std::vector<std::vector<int>> blocks(a);
                for (int l = 0; l < n; ++l) blocks[as[l]].push_back(l + 1);
                bool ok = true;
                for (auto& b : blocks)
                    if (b.empty()) ok = false;
                if (ok) {
                    WTree probe{g, blocks, std::vector<int>(a, 0)};
                    WTree copy = probe;
                    canonicalize(copy);
                    if (copy.blocks == probe.blocks) {
                        std::vector<int> kids(a, 0);
                        while (true) {
                            WTree w{g, blocks, kids};
                            lv.index[key_of(n, w)] = static_cast<int>(lv.w.size());
                            lv.w.push_back(w);
                            int j = a - 1;
                            while (j >= 0 && ++kids[j] == op.dim(static_cast<int>(blocks[j].size()))) kids[j--] = 0;
                            if (j < 0) break;
                        }
                    }
                }
                int l = n - 1;
                while (l >= 0 && ++as[l] == a) as[l--] = 0;
                if (l < 0) break;
            }
        }
    }

    // ---- normal forms --------------------------------------------------------

    SVec<K> expand(const Level& lv, const SVec<S>& v, int shift = 0) const {
        SVec<K> e;
        for (auto& [w, s] : v)
            for (int u = 0; u + shift < J; ++u) {
                K x = level(s, u);
                if (!x.is_zero()) e.emplace_back(lv.colbase[w] + u + shift, x);
            }
        std::sort(e.begin(), e.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        return e;
    }

    SVec<S> nf(int n, const SVec<S>& v) const {
        if (n == 1) return v;
        const Level& lv = levels[n];
        auto res = lv.ech.reduce(expand(lv, v));
        std::map<int, S> acc;
        int off = lv.nonstd * J;
        for (auto& [col, x] : res) {
            if (col < off) throw DomainError("Internal", "normal form left a non-standard tree");
            acc[(col - off) / J] += lift_level<S>(ring, x, (col - off) % J);
        }
        SVec<S> out;
        for (auto& [b, s] : acc)
            if (!s.is_zero()) out.emplace_back(b, s);
        return out;
    }

    // ---- tree evaluation -----------------------------------------------------

    static void add_to(std::map<int, S>& acc, int idx, const S& x) {
        auto& t = acc[idx];
        t += x;
    }
    static SVec<S> from_map(const std::map<int, S>& acc) {
        SVec<S> out;
        for (auto& [i, s] : acc)
            if (!s.is_zero()) out.emplace_back(i, s);
        return out;
    }

    // W-expansion of g(kid values on label sets); returns the vector and the union of labels.
    std::pair<SVec<S>, std::vector<int>> w_of_children(int g, const std::vector<Labeled>& kv) const {
        std::vector<int> L;
        for (auto& k : kv) L.insert(L.end(), k.labels.begin(), k.labels.end());
        std::sort(L.begin(), L.end());
        int n = static_cast<int>(L.size());
        auto rank = [&](int l) { return static_cast<int>(std::lower_bound(L.begin(), L.end(), l) - L.begin()) + 1; };
        WTree w;
        w.g = g;
        for (auto& k : kv) {
            std::vector<int> b;
            for (int l : k.labels) b.push_back(rank(l));
            w.blocks.push_back(b);
        }
        w.kids.assign(kv.size(), 0);
        std::map<int, S> acc;
        std::function<void(size_t, S)> rec = [&](size_t j, S coef) {
            if (j == kv.size()) {
                auto [idx, f] = make_w(n, w);
                add_to(acc, idx, coef * f);
                return;
            }
            for (auto& [b, x] : kv[j].v) {
                w.kids[j] = b;
                rec(j + 1, coef * x);
            }
        };
        rec(0, one<S>(ring));
        return {from_map(acc), L};
    }

    Labeled eval_labeled(const Tree& t, const std::vector<Labeled>& leafmap) const {
        if (t.is_leaf()) return leafmap.at(t.leaf - 1);
        auto [v, L] = eval_w(t, leafmap);
        return {nf(static_cast<int>(L.size()), v), L};
    }

    std::pair<SVec<S>, std::vector<int>> eval_w(const Tree& t, const std::vector<Labeled>& leafmap) const {
        std::vector<Labeled> kv;
        for (auto& k : t.kids) kv.push_back(eval_labeled(k, leafmap));
        return w_of_children(t.gen, kv);
    }

    std::vector<Labeled> identity_leaves(int n) const {
        std::vector<Labeled> lm;
        for (int l = 1; l <= n; ++l) lm.push_back({unit_vec<S>(ring, 0), {l}});
        return lm;
    }

    SVec<S> evaluate(const TreePoly<S>& p) const {
        if (p.arity < 1 || p.arity > N) throw DomainError("WindowExceeded", "expression arity outside the window");
        auto lm = identity_leaves(p.arity);
        SVec<S> out;
        for (auto& [c, t] : p.terms) {
            if (t.arity() != p.arity) throw DomainError("InhomogeneousRelation", "term arity differs from expression arity");
            axpy(out, c, eval_labeled(t, lm).v);
        }
        return out;
    }

    // ---- structure on W-trees ------------------------------------------------

    static std::pair<int, int> locate(const WTree& w, int leaf) {
        for (size_t j = 0; j < w.blocks.size(); ++j) {
            auto& b = w.blocks[j];
            auto it = std::find(b.begin(), b.end(), leaf);
            if (it != b.end()) return {static_cast<int>(j), static_cast<int>(it - b.begin()) + 1};
        }
        throw DomainError("Internal", "leaf not found");
    }

    SVec<S> act_w(int n, const WTree& w, int k) const {
        auto [j1, r1] = locate(w, k);
        auto [j2, r2] = locate(w, k + 1);
        std::map<int, S> acc;
        if (j1 == j2) {
            int sz = static_cast<int>(w.blocks[j1].size());
            auto kid = op.act_adjacent(sz, unit_vec<S>(ring, w.kids[j1]), r1);
            for (auto& [b, x] : kid) {
                WTree v = w;
                v.kids[j1] = b;
                auto [idx, f] = make_w(n, v);
                add_to(acc, idx, x * f);
            }
        } else {
            WTree v = w;
            v.blocks[j1][r1 - 1] = k + 1;
            v.blocks[j2][r2 - 1] = k;
            auto [idx, f] = make_w(n, v);
            add_to(acc, idx, f);
        }
        return from_map(acc);
    }

    SVec<S> comp_w(int m, const WTree& w, int i, int n2, int b) const {
        int n = m + n2 - 1;
        auto [j, r] = locate(w, i);
        int sz = static_cast<int>(w.blocks[j].size());
        auto kid = op.compose(sz, unit_vec<S>(ring, w.kids[j]), r, n2, unit_vec<S>(ring, b));
        WTree v = w;
        for (size_t q = 0; q < v.blocks.size(); ++q) {
            std::vector<int> nb;
            for (int l : w.blocks[q]) {
                if (l < i) nb.push_back(l);
                else if (l > i) nb.push_back(l + n2 - 1);
                else
                    for (int t = 0; t < n2; ++t) nb.push_back(i + t);
            }
            v.blocks[q] = nb;
        }
        std::map<int, S> acc;
        for (auto& [c, x] : kid) {
            v.kids[j] = c;
            auto [idx, f] = make_w(n, v);
            add_to(acc, idx, x * f);
        }
        return from_map(acc);
    }

    // Capping leaf i of a W-tree with 1_0; result in P(m-1).
    SVec<S> cap_w(int m, const WTree& w, int i) const {
        auto [j, r] = locate(w, i);
        int sz = static_cast<int>(w.blocks[j].size());
        auto shift = [i](int l) { return l > i ? l - 1 : l; };
        if (sz >= 2) {
            auto kid = op.compose(sz, unit_vec<S>(ring, w.kids[j]), r, 0, unit_vec<S>(ring, 0));
            WTree v = w;
            for (size_t q = 0; q < v.blocks.size(); ++q) {
                std::vector<int> nb;
                for (int l : w.blocks[q])
                    if (l != i) nb.push_back(shift(l));
                v.blocks[q] = nb;
            }
            std::map<int, S> acc;
            for (auto& [c, x] : kid) {
                v.kids[j] = c;
                auto [idx, f] = make_w(m - 1, v);
                add_to(acc, idx, x * f);
            }
            return nf(m - 1, from_map(acc));
        }
        int a = static_cast<int>(w.blocks.size());
        SVec<S> v = capval[w.g][j];
        int cur = a - 1;
        std::vector<int> lab;
        std::vector<int> others;
        for (int q = 0; q < a; ++q)
            if (q != j) others.push_back(q);
        for (int p = a - 1; p >= 1; --p) {
            int q = others[p - 1];
            int bs = static_cast<int>(w.blocks[q].size());
            v = op.compose(cur, v, p, bs, unit_vec<S>(ring, w.kids[q]));
            cur += bs - 1;
        }
        for (int q : others)
            for (int l : w.blocks[q]) lab.push_back(shift(l));
        return op.act(m - 1, v, Perm::from_word(lab));
    }

    // ---- construction ----------------------------------------------------------

    std::string render(int n, int b, const std::vector<int>& lab) const {
        if (n == 1) return "x" + std::to_string(lab[0]);
        const WTree& w = levels[n].w[levels[n].w_of_std[b]];
        std::string s = gens[w.g].name + "(";
        for (size_t j = 0; j < w.blocks.size(); ++j) {
            if (j) s += ",";
            std::vector<int> sub;
            for (int l : w.blocks[j]) sub.push_back(lab[l - 1]);
            s += render(static_cast<int>(sub.size()), w.kids[j], sub);
        }
        return s + ")";
    }

    Tree tree_of(int n, int b) const {
        if (n == 1) return Tree::make_leaf(1);
        const WTree& w = levels[n].w[levels[n].w_of_std[b]];
        Tree t;
        t.gen = w.g;
        for (size_t j = 0; j < w.blocks.size(); ++j) {
            Tree k = tree_of(static_cast<int>(w.blocks[j].size()), w.kids[j]);
            const auto& blk = w.blocks[j];
            t.kids.push_back(relabel(k, [&](int l) { return blk[l - 1]; }));
        }
        return t;
    }

    void alloc_compositions(int n) {
        op.act_tab[n].assign(std::max(0, n - 1), std::vector<SVec<S>>(op.dim(n)));
        for (int m = 1; m <= n; ++m) {
            int n2 = n - m + 1;
            op.comp_tab[m][n2].assign(m, std::vector<SVec<S>>(static_cast<size_t>(op.dim(m)) * op.dim(n2)));
        }
    }

    void build_level(int n) {
        Level& lv = levels[n];
        enumerate(n);
        int W = static_cast<int>(lv.w.size());
        std::vector<SVec<S>> inst;
        for (auto& r : rels) {
            int k = r.arity;
            if (k > n) continue;
            std::vector<int> as(n, 0);
            while (true) {
                std::vector<std::vector<int>> blocks(k);
                for (int l = 0; l < n; ++l) blocks[as[l]].push_back(l + 1);
                bool ok = true;
                for (auto& b : blocks)
                    if (b.empty()) ok = false;
                if (ok) {
                    std::vector<int> kids(k, 0);
                    while (true) {
                        std::vector<Labeled> lm;
                        for (int j = 0; j < k; ++j) lm.push_back({unit_vec<S>(ring, kids[j]), blocks[j]});
                        SVec<S> v;
                        for (auto& [c, t] : r.terms) {
                            if (t.is_leaf()) throw DomainError("InhomogeneousRelation", "bare leaf inside a relation");
                            axpy(v, c, eval_w(t, lm).first);
                        }
                        if (!v.empty()) inst.push_back(std::move(v));
                        int j = k - 1;
                        while (j >= 0 && ++kids[j] == op.dim(static_cast<int>(blocks[j].size()))) kids[j--] = 0;
                        if (j < 0) break;
                    }
                }
                int l = n - 1;
                while (l >= 0 && ++as[l] == k) as[l--] = 0;
                if (l < 0) break;
            }
        }
        // Standard trees: non-pivots of the relations reduced mod t.
        Echelon<K> e0(W);
        for (auto& v : inst) {
            SVec<K> z;
            for (auto& [w, s] : v) {
                K x = level(s, 0);
                if (!x.is_zero()) z.emplace_back(w, x);
            }
            e0.insert(z);
        }
        std::vector<char> piv(W, 0);
        for (int p : e0.pivots()) piv[p] = 1;
        lv.std_of_w.assign(W, -1);
        lv.colbase.assign(W, 0);
        int ns = 0;
        for (int w = 0; w < W; ++w)
            if (piv[w]) lv.colbase[w] = J * ns++;
        lv.nonstd = ns;
        for (int w = 0; w < W; ++w)
            if (!piv[w]) {
                lv.std_of_w[w] = static_cast<int>(lv.w_of_std.size());
                lv.colbase[w] = J * (ns + static_cast<int>(lv.w_of_std.size()));
                lv.w_of_std.push_back(w);
            }
        lv.ech = Echelon<K>(J * W);
        for (auto& v : inst)
            for (int s = 0; s < J; ++s) lv.ech.insert(expand(lv, v, s));
        bool flat = lv.ech.rank() == J * ns;
        for (int p : lv.ech.pivots())
            if (p >= J * ns) flat = false;
        if (!flat)
            throw DomainError("NotFlat", "arity " + std::to_string(n) +
                                             " of the presented operad is not free over the coefficient ring");
        int d = static_cast<int>(lv.w_of_std.size());
        std::vector<int> ident(n);
        for (int l = 0; l < n; ++l) ident[l] = l + 1;
        op.labels[n].clear();
        for (int b = 0; b < d; ++b) op.labels[n].push_back(render(n, b, ident));
        alloc_compositions(n);
        for (int b = 0; b < d; ++b)
            for (int k = 1; k < n; ++k) op.act_tab[n][k - 1][b] = nf(n, act_w(n, lv.w[lv.w_of_std[b]], k));
        for (int m = 1; m <= n; ++m) {
            int n2 = n - m + 1;
            for (int a = 0; a < op.dim(m); ++a)
                for (int b = 0; b < op.dim(n2); ++b)
                    for (int i = 1; i <= m; ++i) {
                        SVec<S> v;
                        if (m == 1) v = unit_vec<S>(ring, b);
                        else if (n2 == 1) v = unit_vec<S>(ring, a);
                        else v = nf(n, comp_w(m, levels[m].w[levels[m].w_of_std[a]], i, n2, b));
                        op.comp_ref(m, n2, i, a, b) = std::move(v);
                    }
        }
    }

    void build_caps() {
        capval.assign(gens.size(), {});
        for (int g = 0; g < static_cast<int>(gens.size()); ++g) {
            int a = gens[g].arity;
            if (a - 1 > N) continue;
            for (int i = 1; i <= a; ++i) {
                auto it = caps.find({g, i});
                if (it == caps.end())
                    throw DomainError("CapInconsistent", "missing cap for " + gens[g].name + " slot " + std::to_string(i));
                const auto& p = it->second;
                SVec<S> v;
                if (!p.terms.empty()) {
                    if (p.arity != a - 1)
                        throw DomainError("CapInconsistent", "cap of " + gens[g].name + " has the wrong arity");
                    v = evaluate(p);
                }
                capval[g].push_back(v);
            }
        }
        for (int m = 1; m <= N; ++m) {
            op.comp_tab[m][0].assign(m, std::vector<SVec<S>>(op.dim(m)));
            for (int a = 0; a < op.dim(m); ++a)
                for (int i = 1; i <= m; ++i) {
                    SVec<S> v;
                    if (m == 1) v = unit_vec<S>(ring, 0);
                    else v = cap_w(m, levels[m].w[levels[m].w_of_std[a]], i);
                    op.comp_ref(m, 0, i, a, 0) = std::move(v);
                }
        }
        // Capped symmetries must agree with the characters.
        for (int g = 0; g < static_cast<int>(gens.size()); ++g) {
            int a = gens[g].arity;
            if (a - 1 > N) continue;
            for (auto& [h, c] : gens[g].group)
                for (int i = 1; i <= a; ++i) {
                    std::vector<int> lab;
                    Perm inv = h.inverse();
                    for (int p = 1; p <= a; ++p)
                        if (inv(p) != i) lab.push_back(inv(p) > i ? inv(p) - 1 : inv(p));
                    auto lhs = op.act(a - 1, capval[g][h(i) - 1], Perm::from_word(lab));
                    if (!vec_equal(lhs, scaled(capval[g][i - 1], c)))
                        throw DomainError("CapInconsistent", "caps of " + gens[g].name +
                                                                 " disagree with its symmetry " + h.str());
                }
        }
        // Every relation must vanish after capping any slot.
        for (size_t ri = 0; ri < rels.size(); ++ri) {
            const auto& r = rels[ri];
            if (r.arity > N) continue;
            auto lm = identity_leaves(r.arity);
            for (int i = 1; i <= r.arity; ++i) {
                SVec<S> total;
                for (auto& [c, t] : r.terms) {
                    auto wv = eval_w(t, lm).first;
                    for (auto& [w, x] : wv) axpy(total, c * x, cap_w(r.arity, levels[r.arity].w[w], i));
                }
                if (!total.empty())
                    throw DomainError("CapInconsistent", "relation #" + std::to_string(ri + 1) + " does not vanish when slot " +
                                                             std::to_string(i) + " is capped");
            }
        }
        if (N >= 2) {
            SVec<S> target = unit_vec<S>(ring, 0);
            for (int b = 0; b < op.dim(2); ++b)
                if (vec_equal(op.comp_basis(2, 0, 1, b, 0), target) && vec_equal(op.comp_basis(2, 0, 2, b, 0), target)) {
                    op.two_unit = unit_vec<S>(ring, b);
                    break;
                }
        }
    }

    void build(const std::string& name) {
        op.ring = ring;
        op.N = N;
        op.name = name;
        op.labels.assign(N + 1, {});
        if (N >= 1) op.labels[1] = {"1"};
        if (unital) op.labels[0] = {"1_0"};
        op.act_tab.assign(N + 1, {});
        op.comp_tab.assign(N + 1, std::vector<std::vector<std::vector<SVec<S>>>>(N + 1));
        op.identity = unit_vec<S>(ring, 0);
        op.identity_index = 0;
        levels.assign(N + 1, Level{});
        if (N >= 1) {
            alloc_compositions(1);
            op.comp_ref(1, 1, 1, 0, 0) = unit_vec<S>(ring, 0);
        }
        for (int n = 2; n <= N; ++n) build_level(n);
        if (unital) build_caps();
        certify(op);
    }
};

template <class S>
Element<S> PresentedOperad<S>::evaluate(const TreePoly<S>& p) const {
    return {p.arity, engine->evaluate(p)};
}

template <class S>
std::vector<Tree> PresentedOperad<S>::basis_trees(int n) const {
    std::vector<Tree> out;
    if (n < 1) return out;
    for (int b = 0; b < op.dim(n); ++b) out.push_back(engine->tree_of(n, b));
    return out;
}

template <class S>
PresentedOperad<S> quotient_truncation(const Presentation<S>& pres, int N, const std::string& name) {
    auto eng = std::make_shared<PresentationEngine<S>>(pres, N, name);
    return {eng->op, eng};
}

template <class S>
std::vector<Tree> free_basis(const Ring& ring, const std::vector<GeneratorDecl<S>>& gens, int n) {
    Presentation<S> p;
    p.ring = ring;
    p.gens = gens;
    auto q = quotient_truncation(p, std::max(n, 1), "free");
    return q.basis_trees(n);
}

template <class S>
IdealClosure<S> ideal_closure(const Presentation<S>& pres, int N) {
    Presentation<S> fp;
    fp.ring = pres.ring;
    fp.gens = pres.gens;
    auto F = quotient_truncation(fp, N, "free");
    auto Q = quotient_truncation(pres, N, "quotient");
    IdealClosure<S> out;
    out.free_trees.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        auto trees = F.basis_trees(n);
        out.free_trees[n] = trees;
        int d = static_cast<int>(trees.size());
        Matrix<S> M(pres.ring, Q.op.dim(n), d);
        for (int b = 0; b < d; ++b) {
            TreePoly<S> p{n, {{one<S>(pres.ring), trees[b]}}};
            for (auto& [row, x] : Q.evaluate(p).v) M.r[row].emplace_back(b, x);
        }
        out.ideal.push_back(Subspace<S>::span(d, rref(M).kernel));
    }
    return out;
}

#define OPCOH_PRES_INST(S)                                                                                  \
    template TreePoly<S> poly_compose<S>(const TreePoly<S>&, int, const TreePoly<S>&);                     \
    template TreePoly<S> poly_act<S>(const TreePoly<S>&, const Perm&);                                     \
    template struct Presentation<S>;                                                                        \
    template struct PresentedOperad<S>;                                                                     \
    template PresentedOperad<S> quotient_truncation<S>(const Presentation<S>&, int, const std::string&);   \
    template std::vector<Tree> free_basis<S>(const Ring&, const std::vector<GeneratorDecl<S>>&, int);

#define OPCOH_PRES_FIELD_INST(S) template IdealClosure<S> ideal_closure<S>(const Presentation<S>&, int);

OPCOH_FOR_ALL_SCALARS(OPCOH_PRES_INST)
OPCOH_FOR_FIELDS(OPCOH_PRES_FIELD_INST)

}  // namespace opcoh
