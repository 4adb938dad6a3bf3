#include "opcoh/cohomology.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <map>
#include <memory>

namespace opcoh {

std::string variant_name(Variant v) { return v == Variant::Full ? "full" : "S"; }

Variant parse_variant(const std::string& text) {
    if (text == "full" || text == "Full" || text == "FULL") return Variant::Full;
    if (text == "S" || text == "s") return Variant::S;
    throw DomainError("ParseError", "variant must be 'full' or 'S', got '" + text + "'");
}

template <class S>
Operad<S> window(const Operad<S>& P, int n) {
    if (n > P.N) throw DomainError("WindowExceeded", "cannot widen a truncation");
    std::vector<std::vector<std::string>> labels(P.labels.begin(), P.labels.begin() + n + 1);
    Operad<S> Q(P.ring, n, labels, P.name);
    for (int k = 2; k <= n; ++k) Q.act_tab[k] = P.act_tab[k];
    for (int m = 1; m <= n; ++m)
        for (int k = 0; k <= n; ++k)
            if (Q.in_window(m, k)) Q.comp_tab[m][k] = P.comp_tab[m][k];
    Q.identity = P.identity;
    Q.identity_index = P.identity_index;
    if (n >= 2) Q.two_unit = P.two_unit;
    return Q;
}

// ---- maps -------------------------------------------------------------------

template <class S>
ArityMaps<S> sf_map(const Operad<S>& P, const S& c) {
    ArityMaps<S> f(P.N + 1);
    for (int n = 0; n <= P.N; ++n) {
        S s = from_int<S>(P.ring, n - 1) * c;
        for (int a = 0; a < P.dim(n); ++a) f[n].push_back(scaled(unit_vec<S>(P.ring, a), s));
    }
    return f;
}

template <class S>
ArityMaps<S> ad_map(const Operad<S>& P, const SVec<S>& lambda) {
    ArityMaps<S> f(P.N + 1);
    S minus = -one<S>(P.ring);
    for (int n = 0; n <= P.N; ++n)
        for (int a = 0; a < P.dim(n); ++a) {
            SVec<S> e = unit_vec<S>(P.ring, a);
            SVec<S> v = P.compose(1, lambda, 1, n, e);
            for (int i = 1; i <= n; ++i) axpy(v, minus, P.compose(n, e, i, 1, lambda));
            f[n].push_back(std::move(v));
        }
    return f;
}

template <class S>
ArityMaps<S> compose_maps(const ArityMaps<S>& f, const ArityMaps<S>& g) {
    ArityMaps<S> h(f.size());
    for (size_t n = 0; n < f.size(); ++n)
        for (auto& col : g[n]) h[n].push_back(apply_map(f, static_cast<int>(n), col));
    return h;
}

template <class S>
ArityMaps<S> add_maps(const ArityMaps<S>& f, const ArityMaps<S>& g, const S& c) {
    ArityMaps<S> h = f;
    for (size_t n = 0; n < f.size(); ++n)
        for (size_t a = 0; a < f[n].size(); ++a) axpy(h[n][a], c, g[n][a]);
    return h;
}

template <class S>
ArityMaps<S> commutator(const ArityMaps<S>& f, const ArityMaps<S>& g) {
    ArityMaps<S> fg = compose_maps(f, g);
    ArityMaps<S> gf = compose_maps(g, f);
    for (size_t n = 0; n < fg.size(); ++n)
        for (size_t a = 0; a < fg[n].size(); ++a) {
            SVec<S> neg;
            for (auto& [c, x] : gf[n][a]) neg.emplace_back(c, -x);
            SVec<S> merged = fg[n][a];
            merged.insert(merged.end(), neg.begin(), neg.end());
            std::sort(merged.begin(), merged.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
            SVec<S> out;
            for (auto& e : merged) {
                if (!out.empty() && out.back().first == e.first) out.back().second += e.second;
                else out.push_back(e);
            }
            fg[n][a].clear();
            for (auto& e : out)
                if (!e.second.is_zero()) fg[n][a].push_back(e);
        }
    return fg;
}

template <class S>
bool maps_equal(const ArityMaps<S>& f, const ArityMaps<S>& g) {
    if (f.size() != g.size()) return false;
    for (size_t n = 0; n < f.size(); ++n) {
        if (f[n].size() != g[n].size()) return false;
        for (size_t a = 0; a < f[n].size(); ++a)
            if (!vec_equal(f[n][a], g[n][a])) return false;
    }
    return true;
}

// Entry (n, a -> c) of a map sits at offset[n] + a*dim(n) + c.
template <class S>
SVec<S> flatten(const ArityMaps<S>& f) {
    SVec<S> out;
    long base = 0;
    for (size_t n = 0; n < f.size(); ++n) {
        long d = static_cast<long>(f[n].size());
        for (long a = 0; a < d; ++a)
            for (auto& [c, x] : f[n][a]) out.emplace_back(static_cast<int>(base + a * d + c), x);
        base += d * d;
    }
    return out;
}

template <class S>
static ArityMaps<S> unflatten(const Operad<S>& P, const SVec<S>& v) {
    ArityMaps<S> f(P.N + 1);
    std::vector<long> base(P.N + 2, 0);
    for (int n = 0; n <= P.N; ++n) {
        f[n].resize(P.dim(n));
        base[n + 1] = base[n] + static_cast<long>(P.dim(n)) * P.dim(n);
    }
    int n = 0;
    for (auto& [idx, x] : v) {
        while (idx >= base[n + 1]) ++n;
        long off = idx - base[n];
        int d = P.dim(n);
        f[n][off / d].emplace_back(static_cast<int>(off % d), x);
    }
    return f;
}

template <class S>
static ArityMaps<S> zero_maps(const Operad<S>& P) {
    ArityMaps<S> f(P.N + 1);
    for (int n = 0; n <= P.N; ++n) f[n].resize(P.dim(n));
    return f;
}

// ---- derivations --------------------------------------------------------------

// Leibniz and equivariance defects of a degree-preserving map, flattened.
template <class S>
static SVec<S> derivation_defect(const Operad<S>& P, const ArityMaps<S>& d) {
    SVec<S> out;
    long base = 0;
    S minus = -one<S>(P.ring);
    auto push = [&](const SVec<S>& v, int width) {
        for (auto& [i, x] : v) out.emplace_back(static_cast<int>(base + i), x);
        base += width;
    };
    for (int n = 2; n <= P.N; ++n)
        for (int a = 0; a < P.dim(n); ++a)
            for (int k = 1; k < n; ++k) {
                SVec<S> v = apply_map(d, n, P.act_basis(n, k, a));
                axpy(v, minus, P.act_adjacent(n, d[n][a], k));
                push(v, P.dim(n));
            }
    for (int m = 1; m <= P.N; ++m)
        for (int n = 0; n <= P.N; ++n) {
            if (!P.in_window(m, n)) continue;
            int out_ar = m + n - 1;
            for (int a = 0; a < P.dim(m); ++a)
                for (int b = 0; b < P.dim(n); ++b)
                    for (int i = 1; i <= m; ++i) {
                        SVec<S> v = apply_map(d, out_ar, P.comp_basis(m, n, i, a, b));
                        axpy(v, minus, P.compose(m, d[m][a], i, n, unit_vec<S>(P.ring, b)));
                        axpy(v, minus, P.compose(m, unit_vec<S>(P.ring, a), i, n, d[n][b]));
                        push(v, P.dim(out_ar));
                    }
        }
    return out;
}

template <class S>
std::optional<std::string> derivation_failure(const Operad<S>& P, const ArityMaps<S>& d) {
    S minus = -one<S>(P.ring);
    for (int n = 2; n <= P.N; ++n)
        for (int a = 0; a < P.dim(n); ++a)
            for (int k = 1; k < n; ++k) {
                SVec<S> v = apply_map(d, n, P.act_basis(n, k, a));
                axpy(v, minus, P.act_adjacent(n, d[n][a], k));
                if (!v.empty()) return "equivariance fails at " + P.labels[n][a] + "*s" + std::to_string(k);
            }
    for (int m = 1; m <= P.N; ++m)
        for (int n = 0; n <= P.N; ++n) {
            if (!P.in_window(m, n)) continue;
            for (int a = 0; a < P.dim(m); ++a)
                for (int b = 0; b < P.dim(n); ++b)
                    for (int i = 1; i <= m; ++i) {
                        SVec<S> v = apply_map(d, m + n - 1, P.comp_basis(m, n, i, a, b));
                        axpy(v, minus, P.compose(m, d[m][a], i, n, unit_vec<S>(P.ring, b)));
                        axpy(v, minus, P.compose(m, unit_vec<S>(P.ring, a), i, n, d[n][b]));
                        if (!v.empty())
                            return "Leibniz rule fails at " + P.labels[m][a] + " o_" + std::to_string(i) + " " +
                                   P.labels[n][b];
                    }
        }
    return std::nullopt;
}

// Kernel of the linear map whose columns are given.
template <class S>
static std::vector<SVec<S>> kernel_of_columns(const Ring& ring, const std::vector<SVec<S>>& cols) {
    int rows = 0;
    for (auto& c : cols)
        if (!c.empty()) rows = std::max(rows, c.back().first + 1);
    Matrix<S> M(ring, static_cast<int>(cols.size()), rows);
    for (size_t j = 0; j < cols.size(); ++j) M.r[j] = cols[j];
    return rref(M.transpose()).kernel;
}

template <class S>
std::vector<SVec<S>> h0(const Operad<S>& P) {
    std::vector<SVec<S>> cols;
    for (int a = 0; a < P.dim(1); ++a) cols.push_back(flatten(ad_map(P, unit_vec<S>(P.ring, a))));
    return kernel_of_columns(P.ring, cols);
}

template <class S>
DerivationReport<S> derivations(const Operad<S>& P) {
    DerivationReport<S> rep;
    Generation<S> gen = build_generation(P);
    rep.generators = gen.generators;
    std::vector<std::pair<int, int>> unknowns;  // (generator, coordinate)
    for (int g = 0; g < static_cast<int>(gen.generators.size()); ++g)
        for (int c = 0; c < P.dim(gen.generators[g].arity); ++c) unknowns.emplace_back(g, c);
    std::vector<ArityMaps<S>> elementary;
    std::vector<SVec<S>> cols;
    for (auto [g, c] : unknowns) {
        std::vector<SVec<S>> images(gen.generators.size());
        images[g] = unit_vec<S>(P.ring, c);
        elementary.push_back(extend_derivation(P, gen, images));
        cols.push_back(derivation_defect(P, elementary.back()));
    }
    Subspace<S> der(0);
    {
        long total = 0;
        for (int n = 0; n <= P.N; ++n) total += static_cast<long>(P.dim(n)) * P.dim(n);
        der = Subspace<S>(static_cast<int>(total));
    }
    for (auto& kv : kernel_of_columns(P.ring, cols)) {
        ArityMaps<S> d = zero_maps(P);
        for (auto& [u, x] : kv) d = add_maps(d, elementary[u], x);
        if (der.add(flatten(d))) rep.basis.push_back(d);
    }
    rep.dim = der.dim();
    Subspace<S> ider(der.ambient());
    Subspace<S> sf(der.ambient());
    SVec<S> sf1 = flatten(sf_map(P, one<S>(P.ring)));
    sf.add(sf1);
    ider.add(sf1);
    for (int a = 0; a < P.dim(1); ++a) ider.add(flatten(ad_map(P, unit_vec<S>(P.ring, a))));
    rep.sf_dim = sf.dim();
    rep.ider_dim = ider.dim();
    if (!der.contains(ider))
        throw DomainError("InternalError", "an inner derivation failed the derivation constraints");
    rep.h1_dim = rep.dim - rep.ider_dim;
    Subspace<S> span = ider;
    for (auto& d : rep.basis)
        if (span.add(flatten(d))) rep.h1_reps.push_back(d);
    return rep;
}

// ---- cocycles ----------------------------------------------------------------

template <class S>
bool Cocycle<S>::has_vs() const {
    for (auto& m : vs)
        for (auto& k : m)
            for (auto& v : k)
                if (!v.empty()) return true;
    return false;
}

template <class S>
bool Cocycle<S>::is_zero() const {
    if (has_vs()) return false;
    for (auto& m : wp)
        for (auto& n : m)
            for (auto& i : n)
                for (auto& v : i)
                    if (!v.empty()) return false;
    return true;
}

template <class S>
Cocycle<S> zero_cocycle(const Operad<S>& P) {
    Cocycle<S> w;
    w.N = P.N;
    w.wp.resize(P.N + 1);
    for (int m = 1; m <= P.N; ++m) {
        w.wp[m].resize(P.N + 1);
        for (int n = 0; n <= P.N; ++n)
            if (P.in_window(m, n)) w.wp[m][n].assign(m, std::vector<SVec<S>>(static_cast<size_t>(P.dim(m)) * P.dim(n)));
    }
    w.vs.resize(P.N + 1);
    for (int m = 2; m <= P.N; ++m) w.vs[m].assign(m - 1, std::vector<SVec<S>>(P.dim(m)));
    return w;
}

template <class S>
Cocycle<S> add_cocycles(const Cocycle<S>& a, const Cocycle<S>& b, const S& c) {
    Cocycle<S> r = a;
    for (size_t m = 0; m < r.wp.size(); ++m)
        for (size_t n = 0; n < r.wp[m].size(); ++n)
            for (size_t i = 0; i < r.wp[m][n].size(); ++i)
                for (size_t k = 0; k < r.wp[m][n][i].size(); ++k) axpy(r.wp[m][n][i][k], c, b.wp[m][n][i][k]);
    for (size_t m = 0; m < r.vs.size(); ++m)
        for (size_t k = 0; k < r.vs[m].size(); ++k)
            for (size_t a2 = 0; a2 < r.vs[m][k].size(); ++a2) axpy(r.vs[m][k][a2], c, b.vs[m][k][a2]);
    return r;
}

template <class S>
bool cocycles_equal(const Cocycle<S>& a, const Cocycle<S>& b) {
    if (a.wp.size() != b.wp.size() || a.vs.size() != b.vs.size()) return false;
    for (size_t m = 0; m < a.wp.size(); ++m)
        for (size_t n = 0; n < a.wp[m].size(); ++n)
            for (size_t i = 0; i < a.wp[m][n].size(); ++i)
                for (size_t k = 0; k < a.wp[m][n][i].size(); ++k)
                    if (!vec_equal(a.wp[m][n][i][k], b.wp[m][n][i][k])) return false;
    for (size_t m = 0; m < a.vs.size(); ++m)
        for (size_t k = 0; k < a.vs[m].size(); ++k)
            for (size_t x = 0; x < a.vs[m][k].size(); ++x)
                if (!vec_equal(a.vs[m][k][x], b.vs[m][k][x])) return false;
    return true;
}

template <class S>
SVec<S> wp_apply(const Operad<S>& P, const Cocycle<S>& w, int m, const SVec<S>& x, int i, int n, const SVec<S>& y) {
    Accumulator<S> acc(P.dim(m + n - 1));
    int dn = P.dim(n);
    for (auto& [a, xa] : x)
        for (auto& [b, yb] : y) acc.axpy(xa * yb, w.wp[m][n][i - 1][a * dn + b]);
    return acc.take();
}

static std::vector<int> word_of_perm(const Perm& sigma) { return sigma.coxeter_word(); }

// vs(x, s_{a1} ... s_{aL}) by vs(x, tau s) = vs(x*tau, s) + vs(x, tau)*s.
template <class S>
static SVec<S> vs_word(const Operad<S>& P, const Cocycle<S>& w, int m, const SVec<S>& x, const std::vector<int>& word) {
    SVec<S> cur = x, val;
    for (int k : word) {
        SVec<S> next = P.act_adjacent(m, val, k);
        for (auto& [a, c] : cur) axpy(next, c, w.vs[m][k - 1][a]);
        val = std::move(next);
        cur = P.act_adjacent(m, cur, k);
    }
    return val;
}

template <class S>
SVec<S> vs_apply(const Operad<S>& P, const Cocycle<S>& w, int m, const SVec<S>& x, const Perm& sigma) {
    if (m < 2) return {};
    return vs_word(P, w, m, x, word_of_perm(sigma));
}

template <class S>
Cocycle<S> coboundary(const Operad<S>& P, const ArityMaps<S>& d) {
    Cocycle<S> w = zero_cocycle(P);
    S minus = -one<S>(P.ring);
    for (int m = 1; m <= P.N; ++m)
        for (int n = 0; n <= P.N; ++n) {
            if (!P.in_window(m, n)) continue;
            for (int a = 0; a < P.dim(m); ++a)
                for (int b = 0; b < P.dim(n); ++b)
                    for (int i = 1; i <= m; ++i) {
                        SVec<S> v = apply_map(d, m + n - 1, P.comp_basis(m, n, i, a, b));
                        axpy(v, minus, P.compose(m, d[m][a], i, n, unit_vec<S>(P.ring, b)));
                        axpy(v, minus, P.compose(m, unit_vec<S>(P.ring, a), i, n, d[n][b]));
                        w.wp[m][n][i - 1][a * P.dim(n) + b] = std::move(v);
                    }
        }
    for (int m = 2; m <= P.N; ++m)
        for (int k = 1; k < m; ++k)
            for (int a = 0; a < P.dim(m); ++a) {
                SVec<S> v = apply_map(d, m, P.act_basis(m, k, a));
                axpy(v, minus, P.act_adjacent(m, d[m][a], k));
                w.vs[m][k - 1][a] = std::move(v);
            }
    return w;
}

template <class S>
std::optional<std::string> cocycle_failure(const Operad<S>& P, const Cocycle<S>& w) {
    const int N = P.N;
    S minus = -one<S>(P.ring);
    auto e = [&](int a) { return unit_vec<S>(P.ring, a); };
    auto lab = [&](int n, int a) { return P.labels[n][a]; };
    for (int l = 1; l <= N; ++l)
        for (int m = 0; m <= N; ++m)
            for (int n = 0; n <= N; ++n) {
                int out = l + m + n - 2;
                if (out > N || out < 0 || l + m - 1 > N) continue;
                bool shape1 = m >= 1 && m + n - 1 <= N;
                bool shape2 = l >= 2 && l + n - 1 <= N;
                for (int a = 0; a < P.dim(l); ++a)
                    for (int b = 0; b < P.dim(m); ++b)
                        for (int c = 0; c < P.dim(n); ++c)
                            for (int i = 1; i <= l; ++i) {
                                SVec<S> ab = P.comp_basis(l, m, i, a, b);
                                SVec<S> wab = w.wp[l][m][i - 1][a * P.dim(m) + b];
                                if (shape1)
                                    for (int j = 1; j <= m; ++j) {
                                        SVec<S> v = wp_apply(P, w, l + m - 1, ab, i - 1 + j, n, e(c));
                                        axpy(v, one<S>(P.ring), P.compose(l + m - 1, wab, i - 1 + j, n, e(c)));
                                        axpy(v, minus, wp_apply(P, w, l, e(a), i, m + n - 1, P.comp_basis(m, n, j, b, c)));
                                        axpy(v, minus, P.compose(l, e(a), i, m + n - 1, w.wp[m][n][j - 1][b * P.dim(n) + c]));
                                        if (!v.empty())
                                            return "sequential associativity fails at (" + lab(l, a) + "," + lab(m, b) + "," + lab(n, c) +
                                                   ") i=" + std::to_string(i) + " j=" + std::to_string(j);
                                    }
                                if (shape2)
                                    for (int k = i + 1; k <= l; ++k) {
                                        SVec<S> v = wp_apply(P, w, l + m - 1, ab, k - 1 + m, n, e(c));
                                        axpy(v, one<S>(P.ring), P.compose(l + m - 1, wab, k - 1 + m, n, e(c)));
                                        axpy(v, minus, wp_apply(P, w, l + n - 1, P.comp_basis(l, n, k, a, c), i, m, e(b)));
                                        axpy(v, minus,
                                             P.compose(l + n - 1, w.wp[l][n][k - 1][a * P.dim(n) + c], i, m, e(b)));
                                        if (!v.empty())
                                            return "parallel associativity fails at (" + lab(l, a) + "," + lab(m, b) + "," + lab(n, c) +
                                                   ") i=" + std::to_string(i) + " k=" + std::to_string(k);
                                    }
                            }
            }
    for (int m = 1; m <= N; ++m)
        for (int n = 0; n <= N; ++n) {
            if (!P.in_window(m, n)) continue;
            int out = m + n - 1;
            for (int a = 0; a < P.dim(m); ++a)
                for (int b = 0; b < P.dim(n); ++b)
                    for (int i = 1; i <= m; ++i) {
                        SVec<S> mn = P.comp_basis(m, n, i, a, b);
                        SVec<S> wmn = w.wp[m][n][i - 1][a * P.dim(n) + b];
                        for (int k = 1; k < n; ++k) {
                            Perm sp = Perm::adjacent(out, k + i - 1);
                            SVec<S> v = wp_apply(P, w, m, e(a), i, n, P.act_basis(n, k, b));
                            axpy(v, one<S>(P.ring), P.compose(m, e(a), i, n, w.vs[n][k - 1][b]));
                            axpy(v, minus, P.act_adjacent(out, wmn, k + i - 1));
                            axpy(v, minus, vs_apply(P, w, out, mn, sp));
                            if (!v.empty())
                                return "equivariance in the inner slot fails at (" + lab(m, a) + "," + lab(n, b) + ") i=" + std::to_string(i) +
                                       " s" + std::to_string(k);
                        }
                        for (int k = 1; k < m; ++k) {
                            Perm phi = Perm::adjacent(m, k);
                            Perm pp = compose_one(phi, i, n);
                            int j = phi(i);
                            SVec<S> v = wp_apply(P, w, m, P.act_basis(m, k, a), i, n, e(b));
                            axpy(v, one<S>(P.ring), P.compose(m, w.vs[m][k - 1][a], i, n, e(b)));
                            axpy(v, minus, P.act(out, w.wp[m][n][j - 1][a * P.dim(n) + b], pp));
                            axpy(v, minus, vs_apply(P, w, out, P.comp_basis(m, n, j, a, b), pp));
                            if (!v.empty())
                                return "equivariance in the outer slot fails at (" + lab(m, a) + "," + lab(n, b) + ") i=" + std::to_string(i) +
                                       " s" + std::to_string(k);
                        }
                    }
        }
    for (int m = 2; m <= N; ++m)
        for (int a = 0; a < P.dim(m); ++a)
            for (int k = 1; k < m; ++k) {
                std::vector<std::vector<int>> rels = {{k, k}};
                if (k + 1 < m) rels.push_back({k, k + 1, k, k + 1, k, k + 1});
                for (int j = k + 2; j < m; ++j) rels.push_back({k, j, k, j});
                for (auto& r : rels)
                    if (!vs_word(P, w, m, e(a), r).empty())
                        return "the action part fails at " + lab(m, a) + " on a Coxeter relation of s" + std::to_string(k);
            }
    return std::nullopt;
}

template <class S>
NormalizedCocycle<S> normalize_cocycle(const Operad<S>& P, const Cocycle<S>& w) {
    if (auto f = cocycle_failure(P, w)) throw DomainError("NotACocycle", *f);
    NormalizedCocycle<S> out;
    out.witness = zero_maps(P);
    if (P.N >= 1 && P.dim(1) > 0) {
        if (P.identity.size() != 1 || !P.identity.front().second.is_one())
            throw DomainError("UnsupportedBasis", "normalization needs the identity as a basis vector");
        int u = P.identity.front().first;
        const SVec<S>& w11 = w.wp[1][1][0][u * P.dim(1) + u];
        out.witness[1][u] = scaled(w11, -one<S>(P.ring));
    }
    out.cocycle = add_cocycles(w, coboundary(P, out.witness), -one<S>(P.ring));
    return out;
}


// ---- linear forms ----------------------------------------------------------------
//
// A form is a vector in some P(M) whose coordinates are linear in the unknowns:
// F[o] is the coefficient row of coordinate o.

template <class S> using Form = std::vector<SVec<S>>;

template <class S>
class FormAcc {
public:
    explicit FormAcc(int dim) : dim_(dim) {}
    void add(int o, int u, const S& c) {
        if (!c.is_zero()) t_.push_back({o, u, c});
    }
    void add_row(int o, const S& c, const SVec<S>& row) {
        if (c.is_zero()) return;
        for (auto& [u, x] : row) add(o, u, c * x);
    }
    // coordinate o of F contributes F[o] * v to the output
    void add_mapped(const Form<S>& F, const S& c, const std::function<const SVec<S>&(int)>& image) {
        for (int o = 0; o < static_cast<int>(F.size()); ++o) {
            if (F[o].empty()) continue;
            for (auto& [o2, x] : image(o)) add_row(o2, c * x, F[o]);
        }
    }
    void add_form(const Form<S>& F, const S& c) {
        for (int o = 0; o < static_cast<int>(F.size()); ++o) add_row(o, c, F[o]);
    }
    Form<S> take() {
        std::sort(t_.begin(), t_.end(), [](const T& a, const T& b) { return a.o != b.o ? a.o < b.o : a.u < b.u; });
        Form<S> F(dim_);
        for (size_t k = 0; k < t_.size();) {
            size_t e = k;
            S s = t_[k].c;
            while (++e < t_.size() && t_[e].o == t_[k].o && t_[e].u == t_[k].u) s += t_[e].c;
            if (!s.is_zero()) F[t_[k].o].emplace_back(t_[k].u, s);
            k = e;
        }
        t_.clear();
        return F;
    }

private:
    struct T {
        int o, u;
        S c;
    };
    int dim_;
    std::vector<T> t_;
};

// Right action of all permutations on basis vectors, filled lazily.
template <class S>
class ActCache {
public:
    explicit ActCache(const Operad<S>& P) : P_(P) {}
    const Ring& ring() const { return P_.ring; }
    const std::vector<SVec<S>>& images(int n, const Perm& sigma) {
        auto key = std::make_pair(n, sigma.index());
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::vector<SVec<S>> img;
        for (int a = 0; a < P_.dim(n); ++a) img.push_back(P_.act(n, unit_vec<S>(P_.ring, a), sigma));
        return cache_.emplace(key, std::move(img)).first->second;
    }
    SVec<S> act(int n, const SVec<S>& x, const Perm& sigma) {
        if (sigma.is_identity()) return x;
        const auto& img = images(n, sigma);
        Accumulator<S> acc(P_.dim(n));
        for (auto& [a, c] : x) acc.axpy(c, img[a]);
        return acc.take();
    }

private:
    const Operad<S>& P_;
    std::map<std::pair<int, int>, std::vector<SVec<S>>> cache_;
};

template <class S>
static Form<S> unit_form(int dim, int base, const Ring& r) {
    Form<S> F(dim);
    for (int o = 0; o < dim; ++o) F[o] = unit_vec<S>(r, base + o);
    return F;
}

template <class S>
static Form<S> act_form(ActCache<S>& cache, int M, const Form<S>& F, const Perm& sigma) {
    if (sigma.is_identity()) return F;
    const auto& img = cache.images(M, sigma);
    FormAcc<S> acc(static_cast<int>(F.size()));
    acc.add_mapped(F, one<S>(cache.ring()), [&](int o) -> const SVec<S>& { return img[o]; });
    return acc.take();
}

// vs(x, s_{w1} ... s_{wL}) with vs(e_a, s_k) given by unit blocks at vs_base(k, a).
template <class S>
static Form<S> vs_form(const Operad<S>& P, int M, const SVec<S>& x, const std::vector<int>& word,
                       const std::function<int(int, int)>& vs_base) {
    int d = P.dim(M);
    Form<S> val(d);
    SVec<S> cur = x;
    S one_ = one<S>(P.ring);
    for (int k : word) {
        FormAcc<S> acc(d);
        acc.add_mapped(val, one_, [&](int o) -> const SVec<S>& { return P.act_basis(M, k, o); });
        for (auto& [a, c] : cur) {
            int base = vs_base(k, a);
            for (int o = 0; o < d; ++o) acc.add(o, base + o, c);
        }
        val = acc.take();
        cur = P.act_adjacent(M, cur, k);
    }
    return val;
}

template <class S>
static bool form_zero(const Form<S>& F) {
    for (auto& r : F)
        if (!r.empty()) return false;
    return true;
}

// ---- orbit reduction --------------------------------------------------------------

template <class S>
class OrbitReduction {
public:
    struct Arity {
        std::vector<int> gens;           // basis indices whose orbits span P(m)
        std::vector<Perm> perms;         // S_m in lexicographic order
        std::vector<std::vector<int>> mult;  // mult[p][q] = index(perms[p] * perms[q])
        std::vector<SVec<S>> section;    // e_a in free coordinates g*m! + p
        std::vector<SVec<S>> kernel_gens;
        int free_dim = 0;
    };

    const Operad<S>& P;
    std::vector<Arity> ar;
    ActCache<S> cache;
    long unknowns = 0;
    long equations = 0;
    Echelon<S> eqs;
    std::vector<SVec<S>> z2;
    Subspace<S> z2_space, b2_space;
    std::vector<ArityMaps<S>> b2_maps;  // equivariant maps whose coboundaries span B2
    std::vector<SVec<S>> b2_vecs;

    explicit OrbitReduction(const Operad<S>& P_) : P(P_), cache(P_) {
        ar.resize(P.N + 1);
        for (int m = 0; m <= P.N; ++m) setup_arity(m);
        layout();
    }

    int block(int m, int gi, int n, int hi, int j) const {
        return base_[m][n] + ((gi * static_cast<int>(ar[n].gens.size()) + hi) * m + (j - 1)) * P.dim(m + n - 1);
    }

    // wp_i(e_a, e_b) as a form in the unknowns X.
    const Form<S>& wp_form(int m, int n, int i, int a, int b) {
        auto key = std::array<int, 5>{m, n, i, a, b};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        int out = m + n - 1;
        int fm = static_cast<int>(ar[m].perms.size()), fn = static_cast<int>(ar[n].perms.size());
        FormAcc<S> acc(P.dim(out));
        for (auto& [xa, ca] : ar[m].section[a]) {
            int gi = xa / fm, p = xa % fm;
            const Perm& phi = ar[m].perms[p];
            int j = phi(i);
            Perm phi2 = compose_one(phi, i, n);
            for (auto& [xb, cb] : ar[n].section[b]) {
                int hi = xb / fn, q = xb % fn;
                Perm tau = one_compose(m, j, ar[n].perms[q]) * phi2;
                int base = block(m, gi, n, hi, j);
                S c = ca * cb;
                if (tau.is_identity()) {
                    for (int o = 0; o < P.dim(out); ++o) acc.add(o, base + o, c);
                } else {
                    const auto& img = cache.images(out, tau);
                    for (int o = 0; o < P.dim(out); ++o)
                        for (auto& [o2, x] : img[o]) acc.add(o2, base + o, c * x);
                }
            }
        }
        return memo_.emplace(key, acc.take()).first->second;
    }

    void solve() {
        eqs = Echelon<S>(static_cast<int>(unknowns));
        build_equations();
        z2 = kernel_from_rref(P.ring, static_cast<int>(unknowns), eqs.rref());
        z2_space = Subspace<S>::span(static_cast<int>(unknowns), z2);
        build_coboundaries();
        if (!z2_space.contains(b2_space))
            throw DomainError("InternalError", "a coboundary failed the cocycle equations");
    }

    // X coordinates of a cocycle given in full form (values on generator pairs).
    SVec<S> restrict(const Cocycle<S>& w) const {
        SVec<S> x;
        for (int m = 1; m <= P.N; ++m)
            for (int n = 0; n <= P.N; ++n) {
                if (!P.in_window(m, n)) continue;
                for (int gi = 0; gi < static_cast<int>(ar[m].gens.size()); ++gi)
                    for (int hi = 0; hi < static_cast<int>(ar[n].gens.size()); ++hi)
                        for (int j = 1; j <= m; ++j) {
                            int base = block(m, gi, n, hi, j);
                            const auto& v = w.wp[m][n][j - 1][ar[m].gens[gi] * P.dim(n) + ar[n].gens[hi]];
                            for (auto& [o, c] : v) x.emplace_back(base + o, c);
                        }
            }
        return x;
    }

    Cocycle<S> to_cocycle(const SVec<S>& X) {
        Cocycle<S> w = zero_cocycle(P);
        std::vector<S> dense = to_dense(X, static_cast<int>(unknowns));
        for (int m = 1; m <= P.N; ++m)
            for (int n = 0; n <= P.N; ++n) {
                if (!P.in_window(m, n)) continue;
                int out = m + n - 1;
                for (int a = 0; a < P.dim(m); ++a)
                    for (int b = 0; b < P.dim(n); ++b)
                        for (int i = 1; i <= m; ++i)
                            w.wp[m][n][i - 1][a * P.dim(n) + b] = eval(X, dense, m, n, i, a, b, out);
            }
        return w;
    }

private:
    std::vector<std::vector<int>> base_;
    std::map<std::array<int, 5>, Form<S>> memo_;

    SVec<S> eval(const SVec<S>&, const std::vector<S>& dense, int m, int n, int i, int a, int b, int out) {
        int fm = static_cast<int>(ar[m].perms.size()), fn = static_cast<int>(ar[n].perms.size());
        Accumulator<S> acc(P.dim(out));
        for (auto& [xa, ca] : ar[m].section[a]) {
            int gi = xa / fm, p = xa % fm;
            const Perm& phi = ar[m].perms[p];
            int j = phi(i);
            Perm phi2 = compose_one(phi, i, n);
            for (auto& [xb, cb] : ar[n].section[b]) {
                int hi = xb / fn, q = xb % fn;
                int base = block(m, gi, n, hi, j);
                SVec<S> v;
                for (int o = 0; o < P.dim(out); ++o)
                    if (!dense[base + o].is_zero()) v.emplace_back(o, dense[base + o]);
                if (v.empty()) continue;
                Perm tau = one_compose(m, j, ar[n].perms[q]) * phi2;
                acc.axpy(ca * cb, cache.act(out, v, tau));
            }
        }
        return acc.take();
    }

    void setup_arity(int m) {
        Arity& A = ar[m];
        int d = P.dim(m);
        A.perms = all_perms(m);
        int f = static_cast<int>(A.perms.size());
        if (d == 0) return;
        A.mult.assign(f, std::vector<int>(f));
        for (int p = 0; p < f; ++p)
            for (int q = 0; q < f; ++q) A.mult[p][q] = (A.perms[p] * A.perms[q]).index();
        Subspace<S> span(d);
        for (int a = 0; a < d && span.dim() < d; ++a) {
            if (span.contains(unit_vec<S>(P.ring, a))) continue;
            A.gens.push_back(a);
            for (auto& sigma : A.perms) span.add(cache.act(m, unit_vec<S>(P.ring, a), sigma));
        }
        int G = static_cast<int>(A.gens.size());
        A.free_dim = G * f;
        std::vector<SVec<S>> image(A.free_dim);
        for (int gi = 0; gi < G; ++gi)
            for (int p = 0; p < f; ++p) image[gi * f + p] = cache.act(m, unit_vec<S>(P.ring, A.gens[gi]), A.perms[p]);

        // section: a basis of P(m) among the images, sparsest first
        std::vector<int> order(A.free_dim);
        for (int x = 0; x < A.free_dim; ++x) order[x] = x;
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
            bool ix = x % f == 0, iy = y % f == 0;
            if (ix != iy) return ix;
            return image[x].size() < image[y].size();
        });
        Echelon<S> E(d);
        std::vector<int> chosen;
        for (int x : order) {
            if (E.rank() == d) break;
            if (E.insert(image[x]) >= 0) chosen.push_back(x);
        }
        Echelon<S> inv(2 * d);
        for (int r = 0; r < d; ++r) {
            SVec<S> row = image[chosen[r]];
            row.emplace_back(d + r, one<S>(P.ring));
            inv.insert(row);
        }
        A.section.assign(d, {});
        for (auto& row : inv.rref()) {
            int a = row.front().first;
            SVec<S> s;
            for (auto& [c, x] : row)
                if (c >= d) s.emplace_back(chosen[c - d], x);
            std::sort(s.begin(), s.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
            A.section[a] = std::move(s);
        }

        // kernel of the free module onto P(m), as a submodule
        auto kernel = kernel_of_columns(P.ring, image);
        Subspace<S> K(A.free_dim);
        for (auto& v : kernel) {
            if (K.dim() == static_cast<int>(kernel.size())) break;
            if (K.contains(v)) continue;
            A.kernel_gens.push_back(v);
            for (int t = 0; t < f; ++t) {
                SVec<S> w;
                for (auto& [x, c] : v) w.emplace_back((x / f) * f + A.mult[x % f][t], c);
                std::sort(w.begin(), w.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
                K.add(w);
            }
        }
    }

    void layout() {
        base_.assign(P.N + 1, std::vector<int>(P.N + 1, -1));
        long u = 0;
        for (int m = 1; m <= P.N; ++m)
            for (int n = 0; n <= P.N; ++n) {
                if (!P.in_window(m, n)) continue;
                base_[m][n] = static_cast<int>(u);
                u += static_cast<long>(ar[m].gens.size()) * ar[n].gens.size() * m * P.dim(m + n - 1);
            }
        unknowns = u;
        if (u > std::numeric_limits<int>::max() / 2) throw DomainError("WindowTooLarge", "too many unknowns");
    }

    void emit(const Form<S>& F) {
        for (auto& row : F) {
            ++equations;
            if (!row.empty()) eqs.insert(row);
        }
    }

    void build_equations() {
        const int N = P.N;
        S one_ = one<S>(P.ring), minus = -one_;
        // well-definedness on kernel generators, left and right
        for (int m = 1; m <= N; ++m) {
            int fm = static_cast<int>(ar[m].perms.size());
            for (auto& kappa : ar[m].kernel_gens)
                for (int n = 0; n <= N; ++n) {
                    if (!P.in_window(m, n)) continue;
                    int out = m + n - 1;
                    for (int hi = 0; hi < static_cast<int>(ar[n].gens.size()); ++hi)
                        for (int i = 1; i <= m; ++i) {
                            FormAcc<S> acc(P.dim(out));
                            for (auto& [x, c] : kappa) {
                                const Perm& phi = ar[m].perms[x % fm];
                                int j = phi(i);
                                Form<S> F = unit_form<S>(P.dim(out), block(m, x / fm, n, hi, j), P.ring);
                                acc.add_form(act_form(cache, out, F, compose_one(phi, i, n)), c);
                            }
                            emit(acc.take());
                        }
                }
        }
        for (int n = 0; n <= N; ++n) {
            int fn = static_cast<int>(ar[n].perms.size());
            for (auto& kappa : ar[n].kernel_gens)
                for (int m = 1; m <= N; ++m) {
                    if (!P.in_window(m, n)) continue;
                    int out = m + n - 1;
                    for (int gi = 0; gi < static_cast<int>(ar[m].gens.size()); ++gi)
                        for (int i = 1; i <= m; ++i) {
                            FormAcc<S> acc(P.dim(out));
                            for (auto& [x, c] : kappa) {
                                Form<S> F = unit_form<S>(P.dim(out), block(m, gi, n, x / fn, i), P.ring);
                                acc.add_form(act_form(cache, out, F, one_compose(m, i, ar[n].perms[x % fn])), c);
                            }
                            emit(acc.take());
                        }
                }
        }
        // associativity on generator triples
        for (int l = 1; l <= N; ++l)
            for (int m = 0; m <= N; ++m)
                for (int n = 0; n <= N; ++n) {
                    int out = l + m + n - 2;
                    if (out < 0 || out > N || l + m - 1 > N) continue;
                    bool shape1 = m >= 1 && m + n - 1 <= N;
                    bool shape2 = l >= 2 && l + n - 1 <= N;
                    int M = l + m - 1;
                    for (int ga : ar[l].gens)
                        for (int gb : ar[m].gens)
                            for (int gc : ar[n].gens)
                                for (int i = 1; i <= l; ++i) {
                                    const SVec<S>& ab = P.comp_basis(l, m, i, ga, gb);
                                    if (shape1)
                                        for (int j = 1; j <= m; ++j) {
                                            FormAcc<S> acc(P.dim(out));
                                            for (auto& [d, x] : ab) acc.add_form(wp_form(M, n, i - 1 + j, d, gc), x);
                                            acc.add_mapped(wp_form(l, m, i, ga, gb), one_, [&](int o) -> const SVec<S>& {
                                                return P.comp_basis(M, n, i - 1 + j, o, gc);
                                            });
                                            int M2 = m + n - 1;
                                            for (auto& [d, x] : P.comp_basis(m, n, j, gb, gc))
                                                acc.add_form(wp_form(l, M2, i, ga, d), -x);
                                            acc.add_mapped(wp_form(m, n, j, gb, gc), minus, [&](int o) -> const SVec<S>& {
                                                return P.comp_basis(l, M2, i, ga, o);
                                            });
                                            emit(acc.take());
                                        }
                                    if (shape2)
                                        for (int k = i + 1; k <= l; ++k) {
                                            FormAcc<S> acc(P.dim(out));
                                            for (auto& [d, x] : ab) acc.add_form(wp_form(M, n, k - 1 + m, d, gc), x);
                                            acc.add_mapped(wp_form(l, m, i, ga, gb), one_, [&](int o) -> const SVec<S>& {
                                                return P.comp_basis(M, n, k - 1 + m, o, gc);
                                            });
                                            int L2 = l + n - 1;
                                            for (auto& [d, x] : P.comp_basis(l, n, k, ga, gc))
                                                acc.add_form(wp_form(L2, m, i, d, gb), -x);
                                            acc.add_mapped(wp_form(l, n, k, ga, gc), minus, [&](int o) -> const SVec<S>& {
                                                return P.comp_basis(L2, m, i, o, gb);
                                            });
                                            emit(acc.take());
                                        }
                                }
                }
    }

    // Equivariant endomorphisms are determined by the images Y(g) of generators
    // subject to the kernel relations.
    void build_coboundaries() {
        const int N = P.N;
        std::vector<int> ybase(N + 2, 0);
        std::vector<std::vector<int>> ygen(N + 1);
        int Y = 0;
        for (int m = 0; m <= N; ++m) {
            ygen[m].resize(ar[m].gens.size());
            for (size_t gi = 0; gi < ar[m].gens.size(); ++gi) {
                ygen[m][gi] = Y;
                Y += P.dim(m);
            }
        }
        Echelon<S> cons(std::max(Y, 1));
        for (int m = 0; m <= N; ++m) {
            int fm = static_cast<int>(ar[m].perms.size());
            for (auto& kappa : ar[m].kernel_gens) {
                FormAcc<S> acc(P.dim(m));
                for (auto& [x, c] : kappa)
                    acc.add_form(act_form(cache, m, unit_form<S>(P.dim(m), ygen[m][x / fm], P.ring), ar[m].perms[x % fm]), c);
                for (auto& row : acc.take())
                    if (!row.empty()) cons.insert(row);
            }
        }
        b2_space = Subspace<S>(static_cast<int>(unknowns));
        S minus = -one<S>(P.ring);
        for (auto& yv : kernel_from_rref(P.ring, Y, cons.rref())) {
            ArityMaps<S> phi = zero_maps(P);
            std::vector<S> dense = to_dense(yv, Y);
            for (int m = 0; m <= N; ++m) {
                int fm = static_cast<int>(ar[m].perms.size());
                for (int a = 0; a < P.dim(m); ++a) {
                    Accumulator<S> acc(P.dim(m));
                    for (auto& [x, c] : ar[m].section[a]) {
                        SVec<S> yg;
                        int base = ygen[m][x / fm];
                        for (int o = 0; o < P.dim(m); ++o)
                            if (!dense[base + o].is_zero()) yg.emplace_back(o, dense[base + o]);
                        acc.axpy(c, cache.act(m, yg, ar[m].perms[x % fm]));
                    }
                    phi[m][a] = acc.take();
                }
            }
            SVec<S> xv;
            for (int m = 1; m <= N; ++m)
                for (int n = 0; n <= N; ++n) {
                    if (!P.in_window(m, n)) continue;
                    for (int gi = 0; gi < static_cast<int>(ar[m].gens.size()); ++gi)
                        for (int hi = 0; hi < static_cast<int>(ar[n].gens.size()); ++hi)
                            for (int j = 1; j <= m; ++j) {
                                int g = ar[m].gens[gi], h = ar[n].gens[hi];
                                SVec<S> v = phi[m + n - 1].empty() ? SVec<S>{}
                                                                   : apply_map(phi, m + n - 1, P.comp_basis(m, n, j, g, h));
                                axpy(v, minus, P.compose(m, phi[m][g], j, n, unit_vec<S>(P.ring, h)));
                                axpy(v, minus, P.compose(m, unit_vec<S>(P.ring, g), j, n, phi[n][h]));
                                int base = block(m, gi, n, hi, j);
                                for (auto& [o, c] : v) xv.emplace_back(base + o, c);
                            }
                }
            b2_maps.push_back(phi);
            b2_vecs.push_back(xv);
            b2_space.add(xv);
        }
    }
};

// ---- unreduced system ---------------------------------------------------------------

template <class S>
struct DirectLayout {
    const Operad<S>& P;
    std::vector<std::vector<long>> wp_base;
    std::vector<long> vs_base;
    long total = 0;

    explicit DirectLayout(const Operad<S>& P_) : P(P_) {
        wp_base.assign(P.N + 1, std::vector<long>(P.N + 1, -1));
        vs_base.assign(P.N + 1, -1);
        for (int m = 1; m <= P.N; ++m)
            for (int n = 0; n <= P.N; ++n) {
                if (!P.in_window(m, n)) continue;
                wp_base[m][n] = total;
                total += static_cast<long>(m) * P.dim(m) * P.dim(n) * P.dim(m + n - 1);
            }
        for (int m = 2; m <= P.N; ++m) {
            vs_base[m] = total;
            total += static_cast<long>(m - 1) * P.dim(m) * P.dim(m);
        }
    }
    int wp(int m, int n, int i, int a, int b) const {
        return static_cast<int>(wp_base[m][n] + ((static_cast<long>(i - 1) * P.dim(m) + a) * P.dim(n) + b) * P.dim(m + n - 1));
    }
    int vs(int m, int k, int a) const {
        return static_cast<int>(vs_base[m] + (static_cast<long>(k - 1) * P.dim(m) + a) * P.dim(m));
    }
    SVec<S> flat(const Cocycle<S>& w) const {
        SVec<S> x;
        for (int m = 1; m <= P.N; ++m)
            for (int n = 0; n <= P.N; ++n) {
                if (!P.in_window(m, n)) continue;
                for (int i = 1; i <= m; ++i)
                    for (int a = 0; a < P.dim(m); ++a)
                        for (int b = 0; b < P.dim(n); ++b)
                            for (auto& [o, c] : w.wp[m][n][i - 1][a * P.dim(n) + b]) x.emplace_back(wp(m, n, i, a, b) + o, c);
            }
        for (int m = 2; m <= P.N; ++m)
            for (int k = 1; k < m; ++k)
                for (int a = 0; a < P.dim(m); ++a)
                    for (auto& [o, c] : w.vs[m][k - 1][a]) x.emplace_back(vs(m, k, a) + o, c);
        return x;
    }
    Cocycle<S> unflat(const SVec<S>& x) const {
        Cocycle<S> w = zero_cocycle(P);
        std::vector<S> d = to_dense(x, static_cast<int>(total));
        auto slice = [&](long base, int len) {
            SVec<S> v;
            for (int o = 0; o < len; ++o)
                if (!d[base + o].is_zero()) v.emplace_back(o, d[base + o]);
            return v;
        };
        for (int m = 1; m <= P.N; ++m)
            for (int n = 0; n <= P.N; ++n) {
                if (!P.in_window(m, n)) continue;
                for (int i = 1; i <= m; ++i)
                    for (int a = 0; a < P.dim(m); ++a)
                        for (int b = 0; b < P.dim(n); ++b)
                            w.wp[m][n][i - 1][a * P.dim(n) + b] = slice(wp(m, n, i, a, b), P.dim(m + n - 1));
            }
        for (int m = 2; m <= P.N; ++m)
            for (int k = 1; k < m; ++k)
                for (int a = 0; a < P.dim(m); ++a) w.vs[m][k - 1][a] = slice(vs(m, k, a), P.dim(m));
        return w;
    }
};

struct Instance {
    char kind = '1';  // '1','2' associativity, '3','4' equivariance, '5' Coxeter, 'R','L' unit
    int l = 0, m = 0, n = 0, a = 0, b = 0, c = 0, i = 0, j = 0;
    std::vector<int> word;
};

template <class S>
static void add_unit(FormAcc<S>& acc, int base, int dim, const S& c) {
    for (int o = 0; o < dim; ++o) acc.add(o, base + o, c);
}

template <class S, class Image>
static void add_unit_mapped(FormAcc<S>& acc, int base, int dim, const S& c, Image&& image) {
    for (int o = 0; o < dim; ++o)
        for (auto& [o2, x] : image(o)) acc.add(o2, base + o, c * x);
}

// Emits every linearized axiom instance as (form, output arity, instance).
template <class S, class Emit>
static void direct_system(const Operad<S>& P, const DirectLayout<S>& L, ActCache<S>& cache, bool unit_rows, Emit&& emit) {
    const int N = P.N;
    S one_ = one<S>(P.ring), minus = -one_;
    auto vsb = [&](int M) { return [&L, M](int k, int a) { return L.vs(M, k, a); }; };
    for (int l = 1; l <= N; ++l)
        for (int m = 0; m <= N; ++m)
            for (int n = 0; n <= N; ++n) {
                int out = l + m + n - 2;
                if (out < 0 || out > N || l + m - 1 > N) continue;
                bool shape1 = m >= 1 && m + n - 1 <= N;
                bool shape2 = l >= 2 && l + n - 1 <= N;
                int M = l + m - 1, dout = P.dim(out);
                for (int a = 0; a < P.dim(l); ++a)
                    for (int b = 0; b < P.dim(m); ++b)
                        for (int c = 0; c < P.dim(n); ++c)
                            for (int i = 1; i <= l; ++i) {
                                const SVec<S>& ab = P.comp_basis(l, m, i, a, b);
                                if (shape1)
                                    for (int j = 1; j <= m; ++j) {
                                        int M2 = m + n - 1;
                                        FormAcc<S> acc(dout);
                                        for (auto& [d, x] : ab) add_unit(acc, L.wp(M, n, i - 1 + j, d, c), dout, x);
                                        add_unit_mapped(acc, L.wp(l, m, i, a, b), P.dim(M), one_,
                                                        [&](int o) -> const SVec<S>& { return P.comp_basis(M, n, i - 1 + j, o, c); });
                                        for (auto& [d, x] : P.comp_basis(m, n, j, b, c)) add_unit(acc, L.wp(l, M2, i, a, d), dout, -x);
                                        add_unit_mapped(acc, L.wp(m, n, j, b, c), P.dim(M2), minus,
                                                        [&](int o) -> const SVec<S>& { return P.comp_basis(l, M2, i, a, o); });
                                        Instance in;
                                        in.kind = '1', in.l = l, in.m = m, in.n = n, in.a = a, in.b = b, in.c = c, in.i = i, in.j = j;
                                        emit(acc.take(), out, in);
                                    }
                                if (shape2)
                                    for (int k = i + 1; k <= l; ++k) {
                                        int L2 = l + n - 1;
                                        FormAcc<S> acc(dout);
                                        for (auto& [d, x] : ab) add_unit(acc, L.wp(M, n, k - 1 + m, d, c), dout, x);
                                        add_unit_mapped(acc, L.wp(l, m, i, a, b), P.dim(M), one_,
                                                        [&](int o) -> const SVec<S>& { return P.comp_basis(M, n, k - 1 + m, o, c); });
                                        for (auto& [d, x] : P.comp_basis(l, n, k, a, c)) add_unit(acc, L.wp(L2, m, i, d, b), dout, -x);
                                        add_unit_mapped(acc, L.wp(l, n, k, a, c), P.dim(L2), minus,
                                                        [&](int o) -> const SVec<S>& { return P.comp_basis(L2, m, i, o, b); });
                                        Instance in;
                                        in.kind = '2', in.l = l, in.m = m, in.n = n, in.a = a, in.b = b, in.c = c, in.i = i, in.j = k;
                                        emit(acc.take(), out, in);
                                    }
                            }
            }
    for (int m = 1; m <= N; ++m)
        for (int n = 0; n <= N; ++n) {
            if (!P.in_window(m, n)) continue;
            int out = m + n - 1, dout = P.dim(out);
            for (int a = 0; a < P.dim(m); ++a)
                for (int b = 0; b < P.dim(n); ++b)
                    for (int i = 1; i <= m; ++i) {
                        for (int k = 1; k < n; ++k) {
                            FormAcc<S> acc(dout);
                            for (auto& [d, x] : P.act_basis(n, k, b)) add_unit(acc, L.wp(m, n, i, a, d), dout, x);
                            add_unit_mapped(acc, L.vs(n, k, b), P.dim(n), one_,
                                            [&](int o) -> const SVec<S>& { return P.comp_basis(m, n, i, a, o); });
                            add_unit_mapped(acc, L.wp(m, n, i, a, b), dout, minus,
                                            [&](int o) -> const SVec<S>& { return P.act_basis(out, k + i - 1, o); });
                            acc.add_form(vs_form<S>(P, out, P.comp_basis(m, n, i, a, b), {k + i - 1}, vsb(out)), minus);
                            Instance in;
                            in.kind = '3', in.m = m, in.n = n, in.a = a, in.b = b, in.i = i, in.j = k;
                            emit(acc.take(), out, in);
                        }
                        for (int k = 1; k < m; ++k) {
                            Perm sk = Perm::adjacent(m, k);
                            int j = sk(i);
                            Perm pp = compose_one(sk, i, n);
                            FormAcc<S> acc(dout);
                            for (auto& [d, x] : P.act_basis(m, k, a)) add_unit(acc, L.wp(m, n, i, d, b), dout, x);
                            add_unit_mapped(acc, L.vs(m, k, a), P.dim(m), one_,
                                            [&](int o) -> const SVec<S>& { return P.comp_basis(m, n, i, o, b); });
                            if (pp.is_identity()) add_unit(acc, L.wp(m, n, j, a, b), dout, minus);
                            else {
                                const auto& img = cache.images(out, pp);
                                add_unit_mapped(acc, L.wp(m, n, j, a, b), dout, minus, [&](int o) -> const SVec<S>& { return img[o]; });
                            }
                            if (out >= 2)
                                acc.add_form(vs_form<S>(P, out, P.comp_basis(m, n, j, a, b), pp.coxeter_word(), vsb(out)), minus);
                            Instance in;
                            in.kind = '4', in.m = m, in.n = n, in.a = a, in.b = b, in.i = i, in.j = k;
                            emit(acc.take(), out, in);
                        }
                    }
        }
    for (int m = 2; m <= N; ++m)
        for (int a = 0; a < P.dim(m); ++a)
            for (int k = 1; k < m; ++k) {
                std::vector<std::vector<int>> rels = {{k, k}};
                if (k + 1 < m) rels.push_back({k, k + 1, k, k + 1, k, k + 1});
                for (int j = k + 2; j < m; ++j) rels.push_back({k, j, k, j});
                for (auto& r : rels) {
                    Instance in;
                    in.kind = '5', in.m = m, in.a = a, in.word = r;
                    emit(vs_form<S>(P, m, unit_vec<S>(P.ring, a), r, vsb(m)), m, in);
                }
            }
    if (!unit_rows || P.dim(1) == 0) return;
    for (int m = 0; m <= N; ++m)
        for (int a = 0; a < P.dim(m); ++a) {
            int dm = P.dim(m);
            for (int i = 1; i <= m; ++i) {
                FormAcc<S> acc(dm);
                for (auto& [u, x] : P.identity) add_unit(acc, L.wp(m, 1, i, a, u), dm, x);
                Instance in;
                in.kind = 'R', in.m = m, in.a = a, in.i = i;
                emit(acc.take(), m, in);
            }
            FormAcc<S> acc(dm);
            for (auto& [u, x] : P.identity) add_unit(acc, L.wp(1, m, 1, u, a), dm, x);
            Instance in;
            in.kind = 'L', in.m = m, in.a = a;
            emit(acc.take(), m, in);
        }
}

// lhs - rhs of the axiom behind an instance, evaluated in an operad.
template <class T>
static SVec<T> instance_defect(const Operad<T>& D, const Instance& in) {
    T minus = -one<T>(D.ring);
    auto e = [&](int a) { return unit_vec<T>(D.ring, a); };
    SVec<T> v;
    switch (in.kind) {
        case '1': {
            int M = in.l + in.m - 1, M2 = in.m + in.n - 1;
            v = D.compose(M, D.comp_basis(in.l, in.m, in.i, in.a, in.b), in.i - 1 + in.j, in.n, e(in.c));
            axpy(v, minus, D.compose(in.l, e(in.a), in.i, M2, D.comp_basis(in.m, in.n, in.j, in.b, in.c)));
            break;
        }
        case '2': {
            int M = in.l + in.m - 1, L2 = in.l + in.n - 1;
            v = D.compose(M, D.comp_basis(in.l, in.m, in.i, in.a, in.b), in.j - 1 + in.m, in.n, e(in.c));
            axpy(v, minus, D.compose(L2, D.comp_basis(in.l, in.n, in.j, in.a, in.c), in.i, in.m, e(in.b)));
            break;
        }
        case '3': {
            int out = in.m + in.n - 1;
            v = D.compose(in.m, e(in.a), in.i, in.n, D.act_basis(in.n, in.j, in.b));
            axpy(v, minus, D.act_adjacent(out, D.comp_basis(in.m, in.n, in.i, in.a, in.b), in.j + in.i - 1));
            break;
        }
        case '4': {
            int out = in.m + in.n - 1;
            Perm sk = Perm::adjacent(in.m, in.j);
            v = D.compose(in.m, D.act_basis(in.m, in.j, in.a), in.i, in.n, e(in.b));
            axpy(v, minus, D.act(out, D.comp_basis(in.m, in.n, sk(in.i), in.a, in.b), compose_one(sk, in.i, in.n)));
            break;
        }
        case '5': {
            v = e(in.a);
            for (int k : in.word) v = D.act_adjacent(in.m, v, k);
            axpy(v, minus, e(in.a));
            break;
        }
        case 'R':
            v = D.compose(in.m, e(in.a), in.i, 1, D.identity);
            axpy(v, minus, e(in.a));
            break;
        case 'L':
            v = D.compose(1, D.identity, 1, in.m, e(in.a));
            axpy(v, minus, e(in.a));
            break;
    }
    return v;
}

// Linear system with right-hand sides, solved by an augmented echelon form.
template <class S>
class AugmentedSystem {
public:
    explicit AugmentedSystem(int unknowns) : U_(unknowns), E_(unknowns + 1) {}
    void add(const SVec<S>& row, const S& rhs) {
        ++rows_;
        SVec<S> r = row;
        if (!rhs.is_zero()) r.emplace_back(U_, rhs);
        if (r.empty()) return;
        int idx = E_.insert(r);
        if (idx >= 0 && E_.pivot_of(idx) == U_) inconsistent_ = true;
    }
    long rows() const { return rows_; }
    bool consistent() const { return !inconsistent_; }
    std::optional<SVec<S>> solution() const {
        if (inconsistent_) return std::nullopt;
        SVec<S> x;
        for (auto& r : E_.rref()) {
            S v = entry(r, U_);
            if (!v.is_zero()) x.emplace_back(r.front().first, v);
        }
        std::sort(x.begin(), x.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
        return x;
    }

private:
    int U_;
    Echelon<S> E_;
    long rows_ = 0;
    bool inconsistent_ = false;
};

template <class S>
static ArityMaps<S> elementary_map(const Operad<S>& P, int n, int a, int c) {
    ArityMaps<S> f = zero_maps(P);
    f[n][a] = unit_vec<S>(P.ring, c);
    return f;
}

template <class S>
static CohomologyReport<S> h2_direct(const Operad<S>& P, const CohomologyOptions& opt) {
    DirectLayout<S> L(P);
    if (L.total > opt.direct_limit)
        throw DomainError("WindowTooLarge", "the unreduced system has " + std::to_string(L.total) +
                                                " unknowns, above the limit " + std::to_string(opt.direct_limit));
    CohomologyReport<S> rep;
    rep.variant = Variant::Full;
    rep.N = P.N;
    rep.method = "unreduced linear system";
    rep.unknowns = L.total;
    int U = static_cast<int>(L.total);
    Echelon<S> eqs(std::max(U, 1));
    ActCache<S> cache(P);
    direct_system(P, L, cache, false, [&](const Form<S>& F, int, const Instance&) {
        for (auto& row : F) {
            ++rep.equations;
            if (!row.empty()) eqs.insert(row);
        }
    });
    auto z2 = kernel_from_rref(P.ring, U, eqs.rref());
    Subspace<S> Z = Subspace<S>::span(U, z2), B(U);
    for (int n = 0; n <= P.N; ++n)
        for (int a = 0; a < P.dim(n); ++a)
            for (int c = 0; c < P.dim(n); ++c) B.add(L.flat(coboundary(P, elementary_map(P, n, a, c))));
    if (!Z.contains(B)) throw DomainError("InternalError", "a coboundary failed the cocycle equations");
    rep.z2_dim = Z.dim();
    rep.b2_dim = B.dim();
    rep.h2_dim = rep.z2_dim - rep.b2_dim;
    for (auto& z : z2)
        if (B.add(z)) rep.reps.push_back(L.unflat(z));
    return rep;
}

template <class S>
static CohomologyReport<S> h2_reduced(const Operad<S>& P) {
    OrbitReduction<S> R(P);
    R.solve();
    CohomologyReport<S> rep;
    rep.variant = Variant::S;
    rep.N = P.N;
    rep.method = "orbit-reduced equivariant system";
    rep.unknowns = R.unknowns;
    rep.equations = R.equations;
    rep.z2_dim = static_cast<int>(R.z2.size());
    rep.b2_dim = R.b2_space.dim();
    rep.h2_dim = rep.z2_dim - rep.b2_dim;
    Subspace<S> span = R.b2_space;
    for (auto& z : R.z2)
        if (span.add(z)) rep.reps.push_back(R.to_cocycle(z));
    return rep;
}

template <class S>
Ext1Report<S> ext1(const Operad<S>& P, int m, bool force_compute) {
    Ext1Report<S> rep;
    rep.m = m;
    uint32_t ch = P.ring.characteristic();
    int d = P.dim(m);
    if (m < 2 || d == 0) {
        rep.method = "trivial group or zero module";
        return rep;
    }
    if (!force_compute && (ch == 0 || ch > static_cast<uint32_t>(m))) {
        rep.method = "maschke";
        return rep;
    }
    rep.method = "coxeter presentation";
    int U = (m - 1) * d * d;
    auto base = [d](int k, int a) { return ((k - 1) * d + a) * d; };
    Echelon<S> cons(U);
    for (int a = 0; a < d; ++a)
        for (int k = 1; k < m; ++k) {
            std::vector<std::vector<int>> rels = {{k, k}};
            if (k + 1 < m) rels.push_back({k, k + 1, k, k + 1, k, k + 1});
            for (int j = k + 2; j < m; ++j) rels.push_back({k, j, k, j});
            for (auto& r : rels)
                for (auto& row : vs_form<S>(P, m, unit_vec<S>(P.ring, a), r, base))
                    if (!row.empty()) cons.insert(row);
        }
    int z1 = U - cons.rank();
    Subspace<S> B(U);
    for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c) {
            // phi = E_{a->c}; f_k(e_b) = phi(e_b * s_k) - phi(e_b) * s_k
            Accumulator<S> acc(U);
            for (int k = 1; k < m; ++k)
                for (int b = 0; b < d; ++b) {
                    S x = entry(P.act_basis(m, k, b), a);
                    if (!x.is_zero()) acc.add(base(k, b) + c, x);
                    if (b == a)
                        for (auto& [o, y] : P.act_basis(m, k, c)) acc.add(base(k, b) + o, -y);
                }
            B.add(acc.take());
        }
    rep.dim = z1 - B.dim();
    return rep;
}

template <class S>
CohomologyReport<S> h2_window(const Operad<S>& P, Variant v, const CohomologyOptions& opt) {
    CohomologyReport<S> rep;
    if (v == Variant::S) {
        rep = h2_reduced(P);
    } else {
        bool direct = opt.force_direct;
        std::vector<int> dims;
        std::string methods;
        if (!direct) {
            for (int m = 0; m <= P.N; ++m) {
                Ext1Report<S> e = ext1(P, m);
                dims.push_back(e.dim);
                if (!e.trivial()) direct = true;
                if (methods.find(e.method) == std::string::npos) methods += (methods.empty() ? "" : ", ") + e.method;
            }
        }
        if (direct) {
            rep = h2_direct(P, opt);
        } else {
            rep = h2_reduced(P);
            rep.variant = Variant::Full;
            rep.method = "orbit-reduced equivariant system; Ext1 vanishes in every arity (" + methods + ")";
        }
        rep.ext1_dims = dims;
    }
    if (opt.stabilization && P.N >= 1) {
        CohomologyOptions inner = opt;
        inner.stabilization = false;
        rep.h2_previous = h2_window(window(P, P.N - 1), v, inner).h2_dim;
    }
    return rep;
}

// ---- equivalence -------------------------------------------------------------------

// A map phi whose coboundary has the same vs part as w, if one exists.
template <class S>
static std::optional<ArityMaps<S>> kill_vs(const Operad<S>& P, const Cocycle<S>& w) {
    ArityMaps<S> phi = zero_maps(P);
    S one_ = one<S>(P.ring);
    for (int m = 2; m <= P.N; ++m) {
        int d = P.dim(m);
        if (d == 0) continue;
        bool any = false;
        for (auto& k : w.vs[m])
            for (auto& x : k)
                if (!x.empty()) any = true;
        if (!any) continue;
        AugmentedSystem<S> sys(d * d);
        for (int k = 1; k < m; ++k)
            for (int b = 0; b < d; ++b) {
                FormAcc<S> acc(d);
                for (auto& [x, c] : P.act_basis(m, k, b)) add_unit(acc, x * d, d, c);
                add_unit_mapped(acc, b * d, d, -one_, [&](int o) -> const SVec<S>& { return P.act_basis(m, k, o); });
                Form<S> F = acc.take();
                for (int o = 0; o < d; ++o) sys.add(F[o], entry(w.vs[m][k - 1][b], o));
            }
        auto sol = sys.solution();
        if (!sol) return std::nullopt;
        for (auto& [idx, x] : *sol) phi[m][idx / d].emplace_back(idx % d, x);
    }
    return phi;
}

template <class S>
bool is_coboundary(const Operad<S>& P, const Cocycle<S>& w) {
    auto phi0 = kill_vs(P, w);
    if (!phi0) return false;
    Cocycle<S> rest = add_cocycles(w, coboundary(P, *phi0), -one<S>(P.ring));
    OrbitReduction<S> R(P);
    R.solve();
    return R.b2_space.contains(R.restrict(rest));
}

template <class S>
Equivalence<S> cocycle_equivalent(const Operad<S>& P, const Cocycle<S>& w1, const Cocycle<S>& w2) {
    if (auto f = cocycle_failure(P, w1)) throw DomainError("NotACocycle", "first argument: " + *f);
    if (auto f = cocycle_failure(P, w2)) throw DomainError("NotACocycle", "second argument: " + *f);
    Equivalence<S> eq;
    S one_ = one<S>(P.ring);
    Cocycle<S> diff = add_cocycles(w1, w2, -one_);
    auto phi0 = kill_vs(P, diff);
    if (!phi0) {
        eq.certificate = "the vs part of w1 - w2 is not the vs part of any coboundary";
        return eq;
    }
    Cocycle<S> rest = add_cocycles(diff, coboundary(P, *phi0), -one_);
    OrbitReduction<S> R(P);
    R.solve();
    SVec<S> target = R.restrict(rest);
    Matrix<S> cols(P.ring, static_cast<int>(R.b2_vecs.size()), static_cast<int>(R.unknowns));
    for (size_t k = 0; k < R.b2_vecs.size(); ++k) cols.r[k] = R.b2_vecs[k];
    auto coeffs = solve(cols.transpose(), target);
    if (!coeffs) {
        eq.certificate = "w1 - w2 has a nonzero class in the windowed H^2 (N=" + std::to_string(P.N) + ")";
        return eq;
    }
    ArityMaps<S> witness = *phi0;
    for (auto& [k, c] : *coeffs) witness = add_maps(witness, R.b2_maps[k], c);
    if (!cocycles_equal(coboundary(P, witness), diff))
        throw DomainError("InternalError", "equivalence witness does not reproduce w1 - w2");
    eq.equivalent = true;
    eq.witness = witness;
    eq.certificate = "w1 - w2 is the coboundary of the witness";
    return eq;
}

// ---- deformations -------------------------------------------------------------------

template <class T>
static T pad_to(const T& x, int J) {
    std::vector<typename scalar_traits<T>::base> c(J);
    for (int k = 0; k < J && k < x.order(); ++k) c[k] = x.coeff(k);
    return T(std::move(c));
}

template <class T, class F>
static SVec<T> map_entries(const SVec<typename scalar_traits<T>::base>& v, F&& f) {
    SVec<T> out;
    for (auto& [i, x] : v) {
        T y = f(x);
        if (!y.is_zero()) out.emplace_back(i, std::move(y));
    }
    return out;
}

template <class S>
Operad<TruncPoly<S>> constant_extension(const Operad<S>& P, int J) {
    using T = TruncPoly<S>;
    Ring r = Ring::truncated(P.ring, J);
    Operad<T> D(r, P.N, P.labels, P.name);
    auto lift = [&](const SVec<S>& v) { return map_entries<T>(v, [&](const S& x) { return lift_level<T>(r, x, 0); }); };
    for (int m = 2; m <= P.N; ++m)
        for (int k = 1; k < m; ++k)
            for (int a = 0; a < P.dim(m); ++a) D.act_tab[m][k - 1][a] = lift(P.act_tab[m][k - 1][a]);
    for (int m = 1; m <= P.N; ++m)
        for (int n = 0; n <= P.N; ++n)
            if (P.in_window(m, n))
                for (int i = 0; i < m; ++i)
                    for (size_t x = 0; x < P.comp_tab[m][n][i].size(); ++x) D.comp_tab[m][n][i][x] = lift(P.comp_tab[m][n][i][x]);
    D.identity = lift(P.identity);
    D.identity_index = P.identity_index;
    if (P.two_unit) D.two_unit = lift(*P.two_unit);
    return D;
}

template <class S>
static SVec<S> level_vec(const SVec<TruncPoly<S>>& v, int j) {
    SVec<S> out;
    for (auto& [i, x] : v) {
        S y = x.coeff(j);
        if (!y.is_zero()) out.emplace_back(i, y);
    }
    return out;
}

template <class S>
Cocycle<S> level_part(const Operad<S>& P, const Operad<TruncPoly<S>>& D, int j) {
    if (D.dims() != P.dims()) throw DomainError("ArityMismatch", "deformation and operad have different dimensions");
    Cocycle<S> w = zero_cocycle(P);
    for (int m = 1; m <= P.N; ++m)
        for (int n = 0; n <= P.N; ++n)
            if (P.in_window(m, n))
                for (int i = 0; i < m; ++i)
                    for (size_t x = 0; x < w.wp[m][n][i].size(); ++x) w.wp[m][n][i][x] = level_vec(D.comp_tab[m][n][i][x], j);
    for (int m = 2; m <= P.N; ++m)
        for (int k = 0; k < m - 1; ++k)
            for (int a = 0; a < P.dim(m); ++a) w.vs[m][k][a] = level_vec(D.act_tab[m][k][a], j);
    return w;
}

template <class S>
Operad<S> reduce_mod_t(const Operad<TruncPoly<S>>& D, const Ring& field) {
    Operad<S> P(field, D.N, D.labels, D.name);
    for (int m = 2; m <= D.N; ++m)
        for (int k = 0; k < m - 1; ++k)
            for (int a = 0; a < D.dim(m); ++a) P.act_tab[m][k][a] = level_vec(D.act_tab[m][k][a], 0);
    for (int m = 1; m <= D.N; ++m)
        for (int n = 0; n <= D.N; ++n)
            if (D.in_window(m, n))
                for (int i = 0; i < m; ++i)
                    for (size_t x = 0; x < D.comp_tab[m][n][i].size(); ++x)
                        P.comp_tab[m][n][i][x] = level_vec(D.comp_tab[m][n][i][x], 0);
    P.identity = level_vec(D.identity, 0);
    P.identity_index = D.identity_index;
    if (D.two_unit) P.two_unit = level_vec(*D.two_unit, 0);
    return P;
}

// D + t^j * (wp, vs), with D already of sufficient order.
template <class S>
static void add_level(Operad<TruncPoly<S>>& D, const Cocycle<S>& w, int j) {
    using T = TruncPoly<S>;
    auto lift = [&](const SVec<S>& v) { return map_entries<T>(v, [&](const S& x) { return lift_level<T>(D.ring, x, j); }); };
    for (int m = 1; m <= D.N; ++m)
        for (int n = 0; n <= D.N; ++n)
            if (D.in_window(m, n))
                for (int i = 0; i < m; ++i)
                    for (size_t x = 0; x < D.comp_tab[m][n][i].size(); ++x)
                        axpy(D.comp_tab[m][n][i][x], one<T>(D.ring), lift(w.wp[m][n][i][x]));
    for (int m = 2; m <= D.N; ++m)
        for (int k = 0; k < m - 1; ++k)
            for (int a = 0; a < D.dim(m); ++a) axpy(D.act_tab[m][k][a], one<T>(D.ring), lift(w.vs[m][k][a]));
}

template <class S>
Operad<TruncPoly<S>> deform(const Operad<S>& P, const Cocycle<S>& w) {
    if (auto f = cocycle_failure(P, w)) throw DomainError("NotACocycle", *f);
    using T = TruncPoly<S>;
    Operad<T> D = constant_extension(P, 2);
    add_level(D, w, 1);
    if (P.dim(1) > 0) {
        SVec<S> z = wp_apply(P, w, 1, P.identity, 1, 1, P.identity);
        axpy(D.identity, -one<T>(D.ring), map_entries<T>(z, [&](const S& x) { return lift_level<T>(D.ring, x, 1); }));
    }
    D.two_unit.reset();
    D.name = P.name.empty() ? "deformation" : P.name + "[t]/(t^2)";
    return D;
}

template <class S>
LiftResult<S> lift_order(const Operad<S>& P, const Operad<TruncPoly<S>>& D) {
    using T = TruncPoly<S>;
    LiftResult<S> res;
    int J1 = D.ring.order;
    if (D.N != P.N || D.dims() != P.dims()) throw DomainError("ArityMismatch", "deformation and operad windows differ");
    Ring r2 = Ring::truncated(P.ring, J1 + 1);
    Operad<T> D2(r2, D.N, D.labels, D.name);
    auto padv = [&](const SVec<T>& v) {
        SVec<T> out;
        for (auto& [i, x] : v) out.emplace_back(i, pad_to(x, J1 + 1));
        return out;
    };
    for (int m = 2; m <= D.N; ++m)
        for (int k = 0; k < m - 1; ++k)
            for (int a = 0; a < D.dim(m); ++a) D2.act_tab[m][k][a] = padv(D.act_tab[m][k][a]);
    for (int m = 1; m <= D.N; ++m)
        for (int n = 0; n <= D.N; ++n)
            if (D.in_window(m, n))
                for (int i = 0; i < m; ++i)
                    for (size_t x = 0; x < D.comp_tab[m][n][i].size(); ++x) D2.comp_tab[m][n][i][x] = padv(D.comp_tab[m][n][i][x]);
    D2.identity = padv(D.identity);
    D2.identity_index = D.identity_index;

    DirectLayout<S> L(P);
    res.unknowns = L.total;
    AugmentedSystem<S> sys(static_cast<int>(L.total));
    ActCache<S> cache(P);
    direct_system(P, L, cache, true, [&](const Form<S>& F, int out, const Instance& in) {
        SVec<S> R = level_vec(instance_defect(D2, in), J1);
        for (int o = 0; o < P.dim(out); ++o) sys.add(F[o], -entry(R, o));
    });
    res.equations = sys.rows();
    auto sol = sys.solution();
    if (!sol) {
        res.obstruction = "the order-" + std::to_string(J1) + " defect is not a coboundary on the window N=" +
                          std::to_string(P.N);
        return res;
    }
    add_level(D2, L.unflat(*sol), J1);
    D2.name = D.name;
    auto check = validate_axioms(D2, 1);
    if (!check.ok)
        throw DomainError("DefectNotCocycle", "lifted structure fails " + check.violations.front().axiom + " at " +
                                                  check.violations.front().instance);
    res.lifted = true;
    res.op = std::move(D2);
    return res;
}

// ---- superfluous data and exponentials ------------------------------------------------

template <class S>
SuperfluousSolution<S> superfluous_solve(const SuperfluousInput<S>& in) {
    SuperfluousSolution<S> sol;
    const int N = in.N, n0 = in.n0;
    auto ok = [&](int m, int n) { return m >= 1 && n >= n0 && m + n - 1 <= N && m <= N && n <= N; };
    auto a = [&](int m, int n) { return in.a.at(m).at(n); };
    for (int l = 1; l <= N; ++l)
        for (int m = 1; m <= N; ++m)
            for (int n = n0; n <= N; ++n) {
                if (!ok(l + m - 1, n) || !ok(l, m) || !ok(l, m + n - 1) || !ok(m, n)) continue;
                if (a(l + m - 1, n) + a(l, m) != a(l, m + n - 1) + a(m, n)) {
                    sol.violation = "a(l+m-1,n) + a(l,m) = a(l,m+n-1) + a(m,n) fails at (l,m,n)=(" + std::to_string(l) + "," + std::to_string(m) + "," +
                                    std::to_string(n) + ")";
                    return sol;
                }
            }
    sol.c.assign(N + 1, S());
    if (n0 == 0 && N >= 2) sol.c[0] = -a(1, 0) - a(2, 0);
    if (N >= 1) sol.c[1] = -a(1, 1);
    for (int n = 3; n <= N; ++n)
        for (int i = 2; i <= n - 1; ++i) sol.c[n] += a(2, i);
    for (int m = 1; m <= N; ++m)
        for (int n = n0; n <= N; ++n) {
            if (!ok(m, n)) continue;
            if (a(m, n) != sol.c[m + n - 1] - sol.c[m] - sol.c[n]) {
                sol.violation = "a(m,n) = c(m+n-1) - c(m) - c(n) fails at (m,n)=(" + std::to_string(m) + "," + std::to_string(n) + ")";
                sol.c.clear();
                return sol;
            }
        }
    sol.ok = true;
    return sol;
}

template <class S>
ArityMaps<S> exp_derivation(const Operad<S>& P, const ArityMaps<S>& d) {
    if (P.ring.characteristic() != 0)
        throw DomainError("PositiveCharacteristic", "the exponential needs characteristic zero");
    ArityMaps<S> out(P.N + 1);
    for (int n = 0; n <= P.N; ++n) {
        int dim = P.dim(n);
        for (int a = 0; a < dim; ++a) {
            SVec<S> term = unit_vec<S>(P.ring, a), sum = term;
            int k = 1;
            for (; k <= dim + 1; ++k) {
                term = scaled(apply_map(d, n, term), from_frac<S>(P.ring, 1, k));
                if (term.empty()) break;
                axpy(sum, one<S>(P.ring), term);
            }
            if (!term.empty())
                throw DomainError("NotNilpotentOnWindow", "the derivation is not nilpotent on arity " + std::to_string(n));
            out[n].push_back(std::move(sum));
        }
    }
    return out;
}

#define OPCOH_COH_ALL(S) template Operad<S> window<S>(const Operad<S>&, int);

#define OPCOH_COH_FIELD(S)                                                                                     \
    template ArityMaps<S> sf_map<S>(const Operad<S>&, const S&);                                               \
    template ArityMaps<S> ad_map<S>(const Operad<S>&, const SVec<S>&);                                         \
    template ArityMaps<S> compose_maps<S>(const ArityMaps<S>&, const ArityMaps<S>&);                           \
    template ArityMaps<S> commutator<S>(const ArityMaps<S>&, const ArityMaps<S>&);                             \
    template ArityMaps<S> add_maps<S>(const ArityMaps<S>&, const ArityMaps<S>&, const S&);                     \
    template bool maps_equal<S>(const ArityMaps<S>&, const ArityMaps<S>&);                                     \
    template SVec<S> flatten<S>(const ArityMaps<S>&);                                                          \
    template std::optional<std::string> derivation_failure<S>(const Operad<S>&, const ArityMaps<S>&);          \
    template std::vector<SVec<S>> h0<S>(const Operad<S>&);                                                     \
    template DerivationReport<S> derivations<S>(const Operad<S>&);                                             \
    template struct Cocycle<S>;                                                                                \
    template Cocycle<S> zero_cocycle<S>(const Operad<S>&);                                                     \
    template Cocycle<S> add_cocycles<S>(const Cocycle<S>&, const Cocycle<S>&, const S&);                       \
    template bool cocycles_equal<S>(const Cocycle<S>&, const Cocycle<S>&);                                     \
    template SVec<S> wp_apply<S>(const Operad<S>&, const Cocycle<S>&, int, const SVec<S>&, int, int, const SVec<S>&); \
    template SVec<S> vs_apply<S>(const Operad<S>&, const Cocycle<S>&, int, const SVec<S>&, const Perm&);       \
    template Cocycle<S> coboundary<S>(const Operad<S>&, const ArityMaps<S>&);                                  \
    template std::optional<std::string> cocycle_failure<S>(const Operad<S>&, const Cocycle<S>&);               \
    template NormalizedCocycle<S> normalize_cocycle<S>(const Operad<S>&, const Cocycle<S>&);                   \
    template Equivalence<S> cocycle_equivalent<S>(const Operad<S>&, const Cocycle<S>&, const Cocycle<S>&);     \
    template Operad<TruncPoly<S>> deform<S>(const Operad<S>&, const Cocycle<S>&);                              \
    template CohomologyReport<S> h2_window<S>(const Operad<S>&, Variant, const CohomologyOptions&);            \
    template Ext1Report<S> ext1<S>(const Operad<S>&, int, bool);                                               \
    template bool is_coboundary<S>(const Operad<S>&, const Cocycle<S>&);                                       \
    template SuperfluousSolution<S> superfluous_solve<S>(const SuperfluousInput<S>&);                          \
    template ArityMaps<S> exp_derivation<S>(const Operad<S>&, const ArityMaps<S>&);                            \
    template LiftResult<S> lift_order<S>(const Operad<S>&, const Operad<TruncPoly<S>>&);                       \
    template Operad<TruncPoly<S>> constant_extension<S>(const Operad<S>&, int);                                \
    template Cocycle<S> level_part<S>(const Operad<S>&, const Operad<TruncPoly<S>>&, int);                     \
    template Operad<S> reduce_mod_t<S>(const Operad<TruncPoly<S>>&, const Ring&);

OPCOH_FOR_ALL_SCALARS(OPCOH_COH_ALL)
OPCOH_FOR_FIELDS(OPCOH_COH_FIELD)

}  // namespace opcoh
