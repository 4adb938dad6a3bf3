#include "opcoh/operad.hpp"

#include <deque>
#include <sstream>

namespace opcoh {

template <class S>
Operad<S>::Operad(const Ring& r, int max_arity, std::vector<std::vector<std::string>> basis_labels, std::string nm)
    : ring(r), N(max_arity), name(std::move(nm)), labels(std::move(basis_labels)) {
    labels.resize(N + 1);
    act_tab.resize(N + 1);
    for (int n = 2; n <= N; ++n) act_tab[n].assign(n - 1, std::vector<SVec<S>>(dim(n)));
    comp_tab.resize(N + 1);
    for (int m = 1; m <= N; ++m) {
        comp_tab[m].resize(N + 1);
        for (int n = 0; n <= N; ++n) {
            if (!in_window(m, n)) continue;
            comp_tab[m][n].assign(m, std::vector<SVec<S>>(static_cast<size_t>(dim(m)) * dim(n)));
        }
    }
}

template <class S>
std::vector<int> Operad<S>::dims() const {
    std::vector<int> d;
    for (int n = 0; n <= N; ++n) d.push_back(dim(n));
    return d;
}

template <class S>
SVec<S> Operad<S>::compose(int m, const SVec<S>& x, int i, int n, const SVec<S>& y) const {
    if (!in_window(m, n))
        throw DomainError("WindowExceeded", "composition of arities " + std::to_string(m) + "," + std::to_string(n) +
                                                " leaves the window N=" + std::to_string(N));
    if (i < 1 || i > m) throw DomainError("SlotOutOfRange", "slot " + std::to_string(i) + " outside 1.." + std::to_string(m));
    if (n == 0 && !unitary()) throw DomainError("NotUnitary", "composition with arity 0 in a non-unitary operad");
    thread_local Accumulator<S> acc;
    acc.resize(dim(m + n - 1));
    for (auto& [a, xa] : x)
        for (auto& [b, yb] : y) acc.axpy(xa * yb, comp_basis(m, n, i, a, b));
    return acc.take();
}

template <class S>
Element<S> Operad<S>::compose(const Element<S>& x, int i, const Element<S>& y) const {
    return {x.arity + y.arity - 1, compose(x.arity, x.v, i, y.arity, y.v)};
}

template <class S>
SVec<S> Operad<S>::act_adjacent(int n, const SVec<S>& x, int k) const {
    thread_local Accumulator<S> acc;
    acc.resize(dim(n));
    for (auto& [a, xa] : x) acc.axpy(xa, act_basis(n, k, a));
    return acc.take();
}

template <class S>
SVec<S> Operad<S>::act(int n, const SVec<S>& x, const Perm& sigma) const {
    if (sigma.n() != n) throw DomainError("ArityMismatch", "permutation degree differs from arity");
    SVec<S> y = x;
    for (int k : sigma.coxeter_word()) y = act_adjacent(n, y, k);
    return y;
}

template <class S>
Element<S> Operad<S>::act(const Element<S>& x, const Perm& sigma) const {
    return {x.arity, act(x.arity, x.v, sigma)};
}

template <class S>
int Operad<S>::find_label(int n, const std::string& label) const {
    for (int a = 0; a < dim(n); ++a)
        if (labels[n][a] == label) return a;
    throw DomainError("UnknownLabel", "no basis element '" + label + "' in arity " + std::to_string(n));
}

template <class S>
Element<S> Operad<S>::element(int n, const std::map<std::string, S>& coeffs) const {
    Element<S> e{n, {}};
    for (auto& [lab, c] : coeffs) axpy(e.v, c, unit_vec<S>(ring, find_label(n, lab)));
    return e;
}

template <class S>
std::string element_str(const Operad<S>& P, const Element<S>& x) {
    if (x.v.empty()) return "0";
    std::string out;
    for (auto& [a, c] : x.v) {
        if (!out.empty()) out += " + ";
        out += "(" + c.str() + ")*" + (x.arity <= P.N && a < P.dim(x.arity) ? P.labels[x.arity][a] : std::to_string(a));
    }
    return out;
}

template <class S>
ValidationReport<S> validate_axioms(const Operad<S>& P, int max_violations) {
    ValidationReport<S> rep;
    const int N = P.N;
    auto record = [&](const std::string& axiom, const std::string& inst, int arity, const SVec<S>& l, const SVec<S>& r) {
        ++rep.checked;
        if (vec_equal(l, r)) return;
        rep.ok = false;
        if (static_cast<int>(rep.violations.size()) < max_violations)
            rep.violations.push_back({axiom, inst, {arity, l}, {arity, r}});
    };
    auto lab = [&](int n, int a) { return P.labels[n][a]; };
    // OP1'
    for (int m = 1; m <= N; ++m)
        for (int a = 0; a < P.dim(m); ++a)
            for (int i = 1; i <= m; ++i)
                record("OP1'", lab(m, a) + " o_" + std::to_string(i) + " 1", m,
                       P.compose(m, unit_vec<S>(P.ring, a), i, 1, P.identity), unit_vec<S>(P.ring, a));
    for (int n = 0; n <= N; ++n)
        for (int b = 0; b < P.dim(n); ++b)
            record("OP1'", "1 o_1 " + lab(n, b), n, P.compose(1, P.identity, 1, n, unit_vec<S>(P.ring, b)),
                   unit_vec<S>(P.ring, b));
    // OP2' both shapes
    for (int l = 1; l <= N; ++l)
        for (int m = 0; m <= N; ++m)
            for (int n = 0; n <= N; ++n) {
                int out = l + m + n - 2;
                if (out > N || out < 0) continue;
                bool shape1 = m >= 1 && l + m - 1 <= N && m + n - 1 <= N;
                bool shape2 = l >= 2 && l + m - 1 <= N && l + n - 1 <= N;
                if (!shape1 && !shape2) continue;
                for (int a = 0; a < P.dim(l); ++a)
                    for (int b = 0; b < P.dim(m); ++b)
                        for (int i = 1; i <= l; ++i) {
                            SVec<S> ab = P.comp_basis(l, m, i, a, b);
                            for (int c = 0; c < P.dim(n); ++c) {
                                SVec<S> ec = unit_vec<S>(P.ring, c);
                                if (shape1)
                                    for (int j = 1; j <= m; ++j) {
                                        auto lhs = P.compose(l + m - 1, ab, i - 1 + j, n, ec);
                                        auto rhs = P.compose(l, unit_vec<S>(P.ring, a), i, m + n - 1,
                                                             P.comp_basis(m, n, j, b, c));
                                        record("OP2'(1)",
                                               "(" + lab(l, a) + " o_" + std::to_string(i) + " " + lab(m, b) + ") o_" +
                                                   std::to_string(i - 1 + j) + " " + lab(n, c),
                                               out, lhs, rhs);
                                    }
                                if (shape2)
                                    for (int k = i + 1; k <= l; ++k) {
                                        auto lhs = P.compose(l + m - 1, ab, k - 1 + m, n, ec);
                                        auto rhs = P.compose(l + n - 1, P.comp_basis(l, n, k, a, c), i, m,
                                                             unit_vec<S>(P.ring, b));
                                        record("OP2'(2)",
                                               "(" + lab(l, a) + " o_" + std::to_string(i) + " " + lab(m, b) + ") o_" +
                                                   std::to_string(k - 1 + m) + " " + lab(n, c),
                                               out, lhs, rhs);
                                    }
                            }
                        }
            }
    // OP3'
    for (int m = 1; m <= N; ++m)
        for (int n = 0; n <= N; ++n) {
            if (!P.in_window(m, n)) continue;
            int out = m + n - 1;
            for (int a = 0; a < P.dim(m); ++a)
                for (int b = 0; b < P.dim(n); ++b)
                    for (int i = 1; i <= m; ++i) {
                        for (int k = 1; k < n; ++k) {
                            auto lhs = P.compose(m, unit_vec<S>(P.ring, a), i, n, P.act_basis(n, k, b));
                            auto rhs = P.act_adjacent(out, P.comp_basis(m, n, i, a, b), k + i - 1);
                            record("OP3'(1)", lab(m, a) + " o_" + std::to_string(i) + " (" + lab(n, b) + "*s" +
                                                  std::to_string(k) + ")", out, lhs, rhs);
                        }
                        for (int k = 1; k < m; ++k) {
                            Perm s = Perm::adjacent(m, k);
                            auto lhs = P.compose(m, P.act_basis(m, k, a), i, n, unit_vec<S>(P.ring, b));
                            auto rhs = P.act(out, P.comp_basis(m, n, s(i), a, b), compose_one(s, i, n));
                            record("OP3'(2)", "(" + lab(m, a) + "*s" + std::to_string(k) + ") o_" + std::to_string(i) +
                                                  " " + lab(n, b), out, lhs, rhs);
                        }
                    }
        }
    // Coxeter relations of the action
    for (int n = 2; n <= N; ++n)
        for (int a = 0; a < P.dim(n); ++a) {
            SVec<S> e = unit_vec<S>(P.ring, a);
            auto word = [&](std::vector<int> w) {
                SVec<S> x = e;
                for (int k : w) x = P.act_adjacent(n, x, k);
                return x;
            };
            for (int k = 1; k < n; ++k) {
                record("Coxeter", lab(n, a) + "*s" + std::to_string(k) + "^2", n, word({k, k}), e);
                if (k + 1 < n)
                    record("Coxeter", lab(n, a) + "*(s" + std::to_string(k) + "s" + std::to_string(k + 1) + ")^3", n,
                           word({k, k + 1, k, k + 1, k, k + 1}), e);
                for (int j = k + 2; j < n; ++j)
                    record("Coxeter", lab(n, a) + "*(s" + std::to_string(k) + "s" + std::to_string(j) + ")^2", n,
                           word({k, j, k, j}), e);
            }
        }
    return rep;
}

template <class S>
void certify(const Operad<S>& P) {
    auto rep = validate_axioms(P, 1);
    if (!rep.ok) {
        auto& v = rep.violations.front();
        throw DomainError("AxiomViolation", P.name + ": " + v.axiom + " fails at " + v.instance + ": " +
                                                element_str(P, v.lhs) + " != " + element_str(P, v.rhs));
    }
}

// ---- generation ------------------------------------------------------------

template <class S>
static std::vector<SVec<S>> invert_rows(const Ring& ring, const std::vector<SVec<S>>& rows, int d) {
    Echelon<S> e(2 * d);
    for (int c = 0; c < static_cast<int>(rows.size()); ++c) {
        SVec<S> v = rows[c];
        v.emplace_back(d + c, one<S>(ring));
        e.insert(v);
    }
    std::vector<SVec<S>> inv(d);
    for (auto& r : e.rref()) {
        int b = r.front().first;
        if (b >= d) throw DomainError("Internal", "generation items are not a basis");
        SVec<S> w;
        for (auto& [j, x] : r)
            if (j >= d) w.emplace_back(j - d, x);
        inv[b] = std::move(w);
    }
    return inv;
}

template <class S>
Generation<S> build_generation(const Operad<S>& P, const std::vector<Element<S>>* explicit_gens) {
    using Kind = typename GenItem<S>::Kind;
    Generation<S> g;
    if (explicit_gens) g.generators = *explicit_gens;
    g.items.resize(P.N + 1);
    g.coords.resize(P.N + 1);
    for (int n = 0; n <= P.N; ++n) {
        int d = P.dim(n);
        Echelon<S> E(d);
        auto& items = g.items[n];
        std::deque<int> queue;
        auto try_add = [&](GenItem<S> it) {
            if (E.rank() == d) return;
            if (E.insert(it.v) < 0) return;
            items.push_back(std::move(it));
            queue.push_back(static_cast<int>(items.size()) - 1);
        };
        auto close = [&]() {
            while (!queue.empty() && E.rank() < d) {
                int idx = queue.front();
                queue.pop_front();
                for (int k = 1; k < n && E.rank() < d; ++k) {
                    GenItem<S> it;
                    it.kind = Kind::Act;
                    it.left = {n, idx};
                    it.slot = k;
                    it.v = P.act_adjacent(n, items[idx].v, k);
                    try_add(std::move(it));
                }
                if (n == 0) continue;
                for (int l = 0; l < static_cast<int>(g.items[1].size()) && E.rank() < d; ++l) {
                    const SVec<S> lam = g.items[1][l].v;
                    const SVec<S> x = items[idx].v;
                    for (int i = 1; i <= n && E.rank() < d; ++i) {
                        GenItem<S> it;
                        it.kind = Kind::Compose;
                        it.left = {n, idx};
                        it.right = {1, l};
                        it.slot = i;
                        it.v = P.compose(n, x, i, 1, lam);
                        try_add(std::move(it));
                    }
                    GenItem<S> it;
                    it.kind = Kind::Compose;
                    it.left = {1, l};
                    it.right = {n, idx};
                    it.slot = 1;
                    it.v = P.compose(1, lam, 1, n, x);
                    try_add(std::move(it));
                }
            }
        };
        if (n == 1 && d > 0) {
            GenItem<S> it;
            it.kind = Kind::Identity;
            it.v = P.identity;
            try_add(std::move(it));
        }
        for (int gi = 0; gi < static_cast<int>(g.generators.size()); ++gi) {
            if (g.generators[gi].arity != n) continue;
            GenItem<S> it;
            it.kind = Kind::Generator;
            it.gen = gi;
            it.v = g.generators[gi].v;
            try_add(std::move(it));
        }
        for (int m = 2; m <= n - 1 && E.rank() < d; ++m) {
            int k = n - m + 1;
            for (int a = 0; a < static_cast<int>(g.items[m].size()) && E.rank() < d; ++a)
                for (int b = 0; b < static_cast<int>(g.items[k].size()) && E.rank() < d; ++b)
                    for (int i = 1; i <= m && E.rank() < d; ++i) {
                        GenItem<S> it;
                        it.kind = Kind::Compose;
                        it.left = {m, a};
                        it.right = {k, b};
                        it.slot = i;
                        it.v = P.compose(m, g.items[m][a].v, i, k, g.items[k][b].v);
                        try_add(std::move(it));
                    }
        }
        close();
        if (E.rank() < d) {
            if (explicit_gens)
                throw DomainError("GeneratorsDontGenerate",
                                  "generators span only " + std::to_string(E.rank()) + " of " + std::to_string(d) +
                                      " dimensions in arity " + std::to_string(n));
            for (int b = 0; b < d && E.rank() < d; ++b) {
                SVec<S> e = unit_vec<S>(P.ring, b);
                if (E.contains(e)) continue;
                g.generators.push_back({n, e});
                GenItem<S> it;
                it.kind = Kind::Generator;
                it.gen = static_cast<int>(g.generators.size()) - 1;
                it.v = e;
                try_add(std::move(it));
                close();
            }
        }
        std::vector<SVec<S>> rows;
        for (auto& it : items) rows.push_back(it.v);
        g.coords[n] = invert_rows(P.ring, rows, d);
    }
    return g;
}

template <class S>
static ArityMaps<S> combine_items(const Generation<S>& g, const std::vector<std::vector<SVec<S>>>& val, int N,
                                  const std::vector<int>& target_dims) {
    ArityMaps<S> out(N + 1);
    for (int n = 0; n <= N; ++n) {
        Accumulator<S> acc(target_dims[n]);
        for (auto& coord : g.coords[n]) {
            for (auto& [c, x] : coord) acc.axpy(x, val[n][c]);
            out[n].push_back(acc.take());
        }
    }
    return out;
}

template <class S>
ArityMaps<S> extend_morphism(const Operad<S>& P, const Operad<S>& Q, const Generation<S>& g,
                             const std::vector<SVec<S>>& images) {
    using Kind = typename GenItem<S>::Kind;
    std::vector<std::vector<SVec<S>>> val(P.N + 1);
    for (int n = 0; n <= P.N; ++n)
        for (auto& it : g.items[n]) {
            SVec<S> v;
            switch (it.kind) {
                case Kind::Identity: v = Q.identity; break;
                case Kind::Generator: v = images.at(it.gen); break;
                case Kind::Compose:
                    v = Q.compose(it.left.arity, val[it.left.arity][it.left.index], it.slot, it.right.arity,
                                  val[it.right.arity][it.right.index]);
                    break;
                case Kind::Act: v = Q.act_adjacent(n, val[n][it.left.index], it.slot); break;
            }
            val[n].push_back(std::move(v));
        }
    std::vector<int> dims;
    for (int n = 0; n <= P.N; ++n) dims.push_back(Q.dim(n));
    return combine_items(g, val, P.N, dims);
}

template <class S>
ArityMaps<S> extend_derivation(const Operad<S>& P, const Generation<S>& g, const std::vector<SVec<S>>& images) {
    using Kind = typename GenItem<S>::Kind;
    std::vector<std::vector<SVec<S>>> val(P.N + 1);
    for (int n = 0; n <= P.N; ++n)
        for (auto& it : g.items[n]) {
            SVec<S> v;
            switch (it.kind) {
                case Kind::Identity: break;
                case Kind::Generator: v = images.at(it.gen); break;
                case Kind::Compose: {
                    const auto& L = g.items[it.left.arity][it.left.index];
                    const auto& R = g.items[it.right.arity][it.right.index];
                    v = P.compose(it.left.arity, val[it.left.arity][it.left.index], it.slot, it.right.arity, R.v);
                    axpy(v, one<S>(P.ring),
                         P.compose(it.left.arity, L.v, it.slot, it.right.arity, val[it.right.arity][it.right.index]));
                    break;
                }
                case Kind::Act: v = P.act_adjacent(n, val[n][it.left.index], it.slot); break;
            }
            val[n].push_back(std::move(v));
        }
    return combine_items(g, val, P.N, P.dims());
}

template <class S>
SVec<S> apply_map(const ArityMaps<S>& f, int n, const SVec<S>& x) {
    SVec<S> out;
    for (auto& [a, c] : x) axpy(out, c, f[n][a]);
    return out;
}

// ---- restriction and ideals -----------------------------------------------

template <class S>
std::vector<SVec<S>> restriction(const Operad<S>& P, int n, const std::vector<int>& I) {
    if (!P.unitary()) throw DomainError("NotUnitary", "restriction requires a unitary operad");
    std::vector<char> keep(n + 1, 0);
    for (int x : I) {
        if (x < 1 || x > n) throw DomainError("SlotOutOfRange", "restriction index outside 1..n");
        keep[x] = 1;
    }
    SVec<S> cap = unit_vec<S>(P.ring, 0);
    std::vector<SVec<S>> out;
    for (int a = 0; a < P.dim(n); ++a) {
        SVec<S> x = unit_vec<S>(P.ring, a);
        int ar = n;
        for (int j = n; j >= 1; --j) {
            if (keep[j]) continue;
            x = P.compose(ar, x, j, 0, cap);
            --ar;
        }
        out.push_back(std::move(x));
    }
    return out;
}

static void subsets_rec(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == k) { out.push_back(cur); return; }
    for (int x = start; x <= n; ++x) {
        cur.push_back(x);
        subsets_rec(n, k, x + 1, cur, out);
        cur.pop_back();
    }
}

template <class S>
GradedSubspace<S> truncation_ideal(const Operad<S>& P, int k) {
    if (!P.unitary()) throw DomainError("NotUnitary", "truncation ideals require a unitary operad");
    GradedSubspace<S> I;
    for (int n = 0; n <= P.N; ++n) {
        int d = P.dim(n);
        if (n < k) { I.emplace_back(d); continue; }
        if (k == 0) { I.push_back(Subspace<S>::full(P.ring, d)); continue; }
        std::vector<std::vector<int>> subsets;
        std::vector<int> cur;
        subsets_rec(n, k - 1, 1, cur, subsets);
        Matrix<S> M(P.ring, 0, d);
        for (auto& sub : subsets) {
            auto imgs = restriction(P, n, sub);
            Matrix<S> block(P.ring, d, P.dim(k - 1));
            for (int a = 0; a < d; ++a) block.r[a] = imgs[a];
            auto t = block.transpose();
            for (auto& row : t.r) M.r.push_back(row);
        }
        M.rows = static_cast<int>(M.r.size());
        auto res = rref(M);
        I.push_back(Subspace<S>::span(d, res.kernel));
    }
    return I;
}

template <class S>
std::optional<std::string> ideal_closure_failure(const Operad<S>& P, const GradedSubspace<S>& I) {
    for (int n = 0; n <= P.N; ++n)
        for (auto& v : I[n].basis()) {
            for (int k = 1; k < n; ++k)
                if (!I[n].contains(P.act_adjacent(n, v, k)))
                    return "action by s" + std::to_string(k) + " in arity " + std::to_string(n);
            for (int m = 0; m <= P.N; ++m) {
                if (n >= 1 && P.in_window(n, m))
                    for (int b = 0; b < P.dim(m); ++b)
                        for (int i = 1; i <= n; ++i)
                            if (!I[n + m - 1].contains(P.compose(n, v, i, m, unit_vec<S>(P.ring, b))))
                                return "ideal(" + std::to_string(n) + ") o_" + std::to_string(i) + " " + P.labels[m][b];
                if (m >= 1 && P.in_window(m, n))
                    for (int a = 0; a < P.dim(m); ++a)
                        for (int i = 1; i <= m; ++i)
                            if (!I[m + n - 1].contains(P.compose(m, unit_vec<S>(P.ring, a), i, n, v)))
                                return P.labels[m][a] + " o_" + std::to_string(i) + " ideal(" + std::to_string(n) + ")";
            }
        }
    return std::nullopt;
}

template <class S>
Operad<S> quotient(const Operad<S>& P, const GradedSubspace<S>& I, const std::string& name) {
    if (auto f = ideal_closure_failure(P, I)) throw DomainError("NotAnIdeal", "not closed: " + *f);
    std::vector<std::vector<int>> keep(P.N + 1), newidx(P.N + 1);
    std::vector<std::vector<std::string>> labels(P.N + 1);
    for (int n = 0; n <= P.N; ++n) {
        newidx[n].assign(P.dim(n), -1);
        std::vector<char> piv(P.dim(n), 0);
        for (int p : I[n].pivots()) piv[p] = 1;
        for (int a = 0; a < P.dim(n); ++a)
            if (!piv[a]) {
                newidx[n][a] = static_cast<int>(keep[n].size());
                keep[n].push_back(a);
                labels[n].push_back(P.labels[n][a]);
            }
    }
    Operad<S> Q(P.ring, P.N, labels, name.empty() ? P.name + "/I" : name);
    auto proj = [&](int n, const SVec<S>& v) {
        SVec<S> out;
        for (auto& [a, x] : I[n].reduce(v)) out.emplace_back(newidx[n][a], x);
        return out;
    };
    for (int n = 2; n <= P.N; ++n)
        for (int k = 1; k < n; ++k)
            for (int a = 0; a < Q.dim(n); ++a) Q.act_tab[n][k - 1][a] = proj(n, P.act_basis(n, k, keep[n][a]));
    for (int m = 1; m <= P.N; ++m)
        for (int n = 0; n <= P.N; ++n) {
            if (!P.in_window(m, n)) continue;
            for (int i = 1; i <= m; ++i)
                for (int a = 0; a < Q.dim(m); ++a)
                    for (int b = 0; b < Q.dim(n); ++b)
                        Q.comp_ref(m, n, i, a, b) = proj(m + n - 1, P.comp_basis(m, n, i, keep[m][a], keep[n][b]));
        }
    Q.identity = proj(1, P.identity);
    if (Q.identity.size() == 1 && Q.identity[0].second.is_one()) Q.identity_index = Q.identity[0].first;
    if (P.two_unit) Q.two_unit = proj(2, *P.two_unit);
    certify(Q);
    return Q;
}

// ---- morphisms ---------------------------------------------------------------

template <class S>
MorphismReport<S> check_morphism(const Operad<S>& P, const Operad<S>& Q, const ArityMaps<S>& phi) {
    MorphismReport<S> rep;
    int N = std::min(P.N, Q.N);
    auto fail = [&](const std::string& what) {
        if (rep.is_morphism) rep.failure = what;
        rep.is_morphism = false;
    };
    if (!vec_equal(apply_map(phi, 1, P.identity), Q.identity)) fail("(1a) identity not preserved");
    for (int n = 2; n <= N && rep.is_morphism; ++n)
        for (int a = 0; a < P.dim(n) && rep.is_morphism; ++a)
            for (int k = 1; k < n; ++k)
                if (!vec_equal(apply_map(phi, n, P.act_basis(n, k, a)), Q.act_adjacent(n, phi[n][a], k))) {
                    fail("(1b) equivariance fails at " + P.labels[n][a] + "*s" + std::to_string(k));
                    break;
                }
    for (int m = 1; m <= N && rep.is_morphism; ++m)
        for (int n = 0; n <= N && rep.is_morphism; ++n) {
            if (m + n - 1 > N) continue;
            for (int a = 0; a < P.dim(m) && rep.is_morphism; ++a)
                for (int b = 0; b < P.dim(n) && rep.is_morphism; ++b)
                    for (int i = 1; i <= m; ++i) {
                        auto lhs = apply_map(phi, m + n - 1, P.comp_basis(m, n, i, a, b));
                        auto rhs = Q.compose(m, phi[m][a], i, n, phi[n][b]);
                        if (!vec_equal(lhs, rhs)) {
                            fail("(1c) multiplicativity fails at " + P.labels[m][a] + " o_" + std::to_string(i) + " " +
                                 P.labels[n][b]);
                            break;
                        }
                    }
        }
    for (int n = 0; n <= N; ++n) {
        int r = 0;
        if constexpr (!scalar_traits<S>::truncated) {
            Matrix<S> M(P.ring, P.dim(n), Q.dim(n));
            for (int a = 0; a < P.dim(n); ++a) M.r[a] = phi[n][a];
            r = rank(M);
        } else {
            // rank of the reduction mod t; a square map is invertible iff this is full
            using K = typename scalar_traits<S>::base;
            Matrix<K> M(P.ring.residue_field(), P.dim(n), Q.dim(n));
            for (int a = 0; a < P.dim(n); ++a)
                for (auto& [b, c] : phi[n][a])
                    if (!c.coeff(0).is_zero()) M.set(a, b, c.coeff(0));
            r = rank(M);
        }
        rep.rank_per_arity.push_back(r);
        rep.iso_per_arity.push_back(r == P.dim(n) && r == Q.dim(n));
    }
    return rep;
}

template <class S>
MorphismReport<S> check_morphism(const Operad<S>& P, const Operad<S>& Q, const std::vector<Element<S>>& gens,
                                 const std::vector<SVec<S>>& images) {
    auto g = build_generation(P, &gens);
    return check_morphism(P, Q, extend_morphism(P, Q, g, images));
}

template <class S>
ArityMaps<S> identity_maps(const Operad<S>& P) {
    ArityMaps<S> f(P.N + 1);
    for (int n = 0; n <= P.N; ++n)
        for (int a = 0; a < P.dim(n); ++a) f[n].push_back(unit_vec<S>(P.ring, a));
    return f;
}

template <class S>
ArityMaps<S> scaling_maps(const Operad<S>& P, const S& c) {
    ArityMaps<S> f(P.N + 1);
    for (int n = 0; n <= P.N; ++n) {
        S s = one<S>(P.ring);
        if (n == 0) s = c.inverse();
        for (int k = 1; k < n; ++k) s *= c;
        for (int a = 0; a < P.dim(n); ++a) f[n].push_back(scaled(unit_vec<S>(P.ring, a), s));
    }
    return f;
}

template <class S>
FixedReport<S> fixed_subspace(const Operad<S>& P, const ArityMaps<S>& f, bool derivation) {
    FixedReport<S> rep;
    for (int n = 0; n <= P.N; ++n) {
        int d = P.dim(n);
        Matrix<S> cols(P.ring, d, d);
        for (int a = 0; a < d; ++a) {
            SVec<S> v = f[n][a];
            if (!derivation) axpy(v, -one<S>(P.ring), unit_vec<S>(P.ring, a));
            cols.r[a] = v;
        }
        rep.fixed.push_back(Subspace<S>::span(d, rref(cols.transpose()).kernel));
    }
    auto fail = [&](const std::string& s) {
        if (rep.closed) rep.failure = s;
        rep.closed = false;
    };
    for (int n = 2; n <= P.N; ++n)
        for (auto& v : rep.fixed[n].basis())
            for (int k = 1; k < n; ++k)
                if (!rep.fixed[n].contains(P.act_adjacent(n, v, k))) fail("action in arity " + std::to_string(n));
    for (int m = 1; m <= P.N; ++m)
        for (int n = 0; n <= P.N; ++n) {
            if (!P.in_window(m, n)) continue;
            for (auto& u : rep.fixed[m].basis())
                for (auto& w : rep.fixed[n].basis())
                    for (int i = 1; i <= m; ++i)
                        if (!rep.fixed[m + n - 1].contains(P.compose(m, u, i, n, w)))
                            fail("composition " + std::to_string(m) + " o_" + std::to_string(i) + " " + std::to_string(n));
        }
    return rep;
}

// ---- polynomial systems -------------------------------------------------------

template <class S>
static void poly_add(Polynomial<S>& p, const Polynomial<S>& q, const S& c) {
    for (auto& [mono, x] : q.terms) {
        auto& t = p.terms[mono];
        t += c * x;
        if (t.is_zero()) p.terms.erase(mono);
    }
}

template <class S>
static Polynomial<S> poly_mul(const Polynomial<S>& p, const Polynomial<S>& q) {
    Polynomial<S> r;
    for (auto& [m1, a] : p.terms)
        for (auto& [m2, b] : q.terms) {
            std::vector<int> m(std::max(m1.size(), m2.size()), 0);
            for (size_t k = 0; k < m1.size(); ++k) m[k] += m1[k];
            for (size_t k = 0; k < m2.size(); ++k) m[k] += m2[k];
            while (!m.empty() && m.back() == 0) m.pop_back();
            auto& t = r.terms[m];
            t += a * b;
            if (t.is_zero()) r.terms.erase(m);
        }
    return r;
}

template <class S> using PolyVec = std::vector<Polynomial<S>>;

template <class S>
AutSystem<S> aut_equations(const Operad<S>& P0, int window) {
    using Kind = typename GenItem<S>::Kind;
    const Operad<S>& P = P0;
    int N = std::min(window, P.N);
    auto g = build_generation(P);
    AutSystem<S> sys;
    std::vector<std::vector<int>> var_of(g.generators.size());
    for (size_t gi = 0; gi < g.generators.size(); ++gi) {
        int n = g.generators[gi].arity;
        if (n > N) continue;
        for (int b = 0; b < P.dim(n); ++b) {
            var_of[gi].push_back(static_cast<int>(sys.variables.size()));
            sys.variables.push_back("m[g" + std::to_string(gi) + "," + P.labels[n][b] + "]");
        }
    }
    auto constant = [&](const SVec<S>& v, int n) {
        PolyVec<S> pv(P.dim(n));
        for (auto& [a, x] : v) pv[a].terms[{}] = x;
        return pv;
    };
    auto compose_pv = [&](int m, const PolyVec<S>& x, int i, int n, const PolyVec<S>& y) {
        PolyVec<S> out(P.dim(m + n - 1));
        for (int a = 0; a < P.dim(m); ++a) {
            if (x[a].is_zero()) continue;
            for (int b = 0; b < P.dim(n); ++b) {
                if (y[b].is_zero()) continue;
                auto prod = poly_mul(x[a], y[b]);
                for (auto& [c, s] : P.comp_basis(m, n, i, a, b)) poly_add(out[c], prod, s);
            }
        }
        return out;
    };
    auto act_pv = [&](int n, const PolyVec<S>& x, int k) {
        PolyVec<S> out(P.dim(n));
        for (int a = 0; a < P.dim(n); ++a) {
            if (x[a].is_zero()) continue;
            for (auto& [c, s] : P.act_basis(n, k, a)) poly_add(out[c], x[a], s);
        }
        return out;
    };
    std::vector<std::vector<PolyVec<S>>> val(N + 1);
    for (int n = 0; n <= N; ++n)
        for (auto& it : g.items[n]) {
            PolyVec<S> v;
            switch (it.kind) {
                case Kind::Identity: v = constant(P.identity, 1); break;
                case Kind::Generator: {
                    v.assign(P.dim(n), {});
                    for (int b = 0; b < P.dim(n); ++b) {
                        std::vector<int> mono(var_of[it.gen][b] + 1, 0);
                        mono.back() = 1;
                        v[b].terms[mono] = one<S>(P.ring);
                    }
                    break;
                }
                case Kind::Compose:
                    v = compose_pv(it.left.arity, val[it.left.arity][it.left.index], it.slot, it.right.arity,
                                   val[it.right.arity][it.right.index]);
                    break;
                case Kind::Act: v = act_pv(n, val[n][it.left.index], it.slot); break;
            }
            val[n].push_back(std::move(v));
        }
    std::vector<std::vector<PolyVec<S>>> phi(N + 1);
    for (int n = 0; n <= N; ++n)
        for (auto& coord : g.coords[n]) {
            PolyVec<S> v(P.dim(n));
            for (auto& [c, x] : coord)
                for (int a = 0; a < P.dim(n); ++a) poly_add(v[a], val[n][c][a], x);
            phi[n].push_back(std::move(v));
        }
    auto apply_pv = [&](int n, const SVec<S>& x) {
        PolyVec<S> out(P.dim(n));
        for (auto& [a, s] : x)
            for (int c = 0; c < P.dim(n); ++c) poly_add(out[c], phi[n][a][c], s);
        return out;
    };
    std::vector<std::map<std::vector<int>, S>> seen;
    auto emit = [&](const PolyVec<S>& l, const PolyVec<S>& r, const std::string& origin) {
        for (size_t c = 0; c < l.size(); ++c) {
            Polynomial<S> d = l[c];
            poly_add(d, r[c], -one<S>(P.ring));
            if (d.is_zero()) continue;
            bool dup = false;
            for (auto& s : seen)
                if (s.size() == d.terms.size() && std::equal(s.begin(), s.end(), d.terms.begin(), [](auto& x, auto& y) {
                        return x.first == y.first && x.second == y.second;
                    })) dup = true;
            if (dup) continue;
            seen.push_back(d.terms);
            sys.equations.push_back(d);
            sys.origins.push_back(origin + " coord " + std::to_string(c));
        }
    };
    emit(phi[1].empty() ? PolyVec<S>{} : apply_pv(1, P.identity), constant(P.identity, 1), "(1a) Phi(1) = 1");
    for (int n = 2; n <= N; ++n)
        for (int a = 0; a < P.dim(n); ++a)
            for (int k = 1; k < n; ++k)
                emit(apply_pv(n, P.act_basis(n, k, a)), act_pv(n, phi[n][a], k),
                     "(1b) " + P.labels[n][a] + "*s" + std::to_string(k));
    for (int m = 1; m <= N; ++m)
        for (int n = 0; n <= N; ++n) {
            if (m + n - 1 > N) continue;
            for (int a = 0; a < P.dim(m); ++a)
                for (int b = 0; b < P.dim(n); ++b)
                    for (int i = 1; i <= m; ++i)
                        emit(apply_pv(m + n - 1, P.comp_basis(m, n, i, a, b)), compose_pv(m, phi[m][a], i, n, phi[n][b]),
                             "(1c) " + P.labels[m][a] + " o_" + std::to_string(i) + " " + P.labels[n][b]);
        }
    return sys;
}

template <class S>
S evaluate(const Polynomial<S>& p, const std::vector<S>& values) {
    S total;
    for (auto& [mono, c] : p.terms) {
        S t = c;
        for (size_t k = 0; k < mono.size(); ++k)
            for (int e = 0; e < mono[k]; ++e) t *= values.at(k);
        total += t;
    }
    return total;
}

template <class S>
std::string poly_str(const Polynomial<S>& p, const std::vector<std::string>& vars) {
    if (p.terms.empty()) return "0";
    std::string out;
    for (auto& [mono, c] : p.terms) {
        if (!out.empty()) out += " + ";
        out += "(" + c.str() + ")";
        for (size_t k = 0; k < mono.size(); ++k) {
            if (!mono[k]) continue;
            out += "*" + vars[k];
            if (mono[k] > 1) out += "^" + std::to_string(mono[k]);
        }
    }
    return out;
}

#define OPCOH_OPERAD_INST(S)                                                                                      \
    template class Operad<S>;                                                                                     \
    template ValidationReport<S> validate_axioms<S>(const Operad<S>&, int);                                       \
    template void certify<S>(const Operad<S>&);                                                                   \
    template std::string element_str<S>(const Operad<S>&, const Element<S>&);                                     \
    template Generation<S> build_generation<S>(const Operad<S>&, const std::vector<Element<S>>*);                 \
    template ArityMaps<S> extend_morphism<S>(const Operad<S>&, const Operad<S>&, const Generation<S>&,            \
                                             const std::vector<SVec<S>>&);                                        \
    template ArityMaps<S> extend_derivation<S>(const Operad<S>&, const Generation<S>&, const std::vector<SVec<S>>&); \
    template SVec<S> apply_map<S>(const ArityMaps<S>&, int, const SVec<S>&);                                      \
    template std::vector<SVec<S>> restriction<S>(const Operad<S>&, int, const std::vector<int>&);                 \
    template MorphismReport<S> check_morphism<S>(const Operad<S>&, const Operad<S>&, const ArityMaps<S>&);        \
    template MorphismReport<S> check_morphism<S>(const Operad<S>&, const Operad<S>&,                              \
                                                 const std::vector<Element<S>>&, const std::vector<SVec<S>>&);    \
    template ArityMaps<S> identity_maps<S>(const Operad<S>&);                                                     \
    template ArityMaps<S> scaling_maps<S>(const Operad<S>&, const S&);

#define OPCOH_OPERAD_FIELD_INST(S)                                                                       \
    template GradedSubspace<S> truncation_ideal<S>(const Operad<S>&, int);                               \
    template std::optional<std::string> ideal_closure_failure<S>(const Operad<S>&, const GradedSubspace<S>&); \
    template Operad<S> quotient<S>(const Operad<S>&, const GradedSubspace<S>&, const std::string&);     \
    template FixedReport<S> fixed_subspace<S>(const Operad<S>&, const ArityMaps<S>&, bool);              \
    template AutSystem<S> aut_equations<S>(const Operad<S>&, int);                                       \
    template S evaluate<S>(const Polynomial<S>&, const std::vector<S>&);                                 \
    template std::string poly_str<S>(const Polynomial<S>&, const std::vector<std::string>&);

OPCOH_FOR_ALL_SCALARS(OPCOH_OPERAD_INST)
OPCOH_FOR_FIELDS(OPCOH_OPERAD_FIELD_INST)

}  // namespace opcoh
