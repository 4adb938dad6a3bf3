#pragma once

#include "opcoh/operad.hpp"

#include <optional>
#include <string>
#include <vector>

namespace opcoh {

enum class Variant { Full, S };
std::string variant_name(Variant v);
Variant parse_variant(const std::string& text);

// Restriction of P to arities 0..n.
template <class S>
Operad<S> window(const Operad<S>& P, int n);

// ---- derivations, H0, H1 -------------------------------------------------

template <class S> ArityMaps<S> sf_map(const Operad<S>& P, const S& c);
template <class S> ArityMaps<S> ad_map(const Operad<S>& P, const SVec<S>& lambda);
template <class S> ArityMaps<S> compose_maps(const ArityMaps<S>& f, const ArityMaps<S>& g);  // f after g
template <class S> ArityMaps<S> commutator(const ArityMaps<S>& f, const ArityMaps<S>& g);
template <class S> ArityMaps<S> add_maps(const ArityMaps<S>& f, const ArityMaps<S>& g, const S& c);
template <class S> bool maps_equal(const ArityMaps<S>& f, const ArityMaps<S>& g);
template <class S> SVec<S> flatten(const ArityMaps<S>& f);

// First failure of equivariance or the Leibniz rule on the window.
template <class S>
std::optional<std::string> derivation_failure(const Operad<S>& P, const ArityMaps<S>& d);

// Basis of {lambda in P(1) : ad_lambda = 0}.
template <class S>
std::vector<SVec<S>> h0(const Operad<S>& P);

template <class S>
struct DerivationReport {
    std::vector<Element<S>> generators;
    std::vector<ArityMaps<S>> basis;
    int dim = 0;
    int sf_dim = 0;
    int ider_dim = 0;
    int h1_dim = 0;
    std::vector<ArityMaps<S>> h1_reps;
};

template <class S>
DerivationReport<S> derivations(const Operad<S>& P);

// ---- 2-cocycles ----------------------------------------------------------

// wp[m][n][i-1][a*dim(n)+b] = wp_i(e_a, e_b); vs[m][k-1][a] = vs(e_a, s_k).
template <class S>
struct Cocycle {
    int N = 0;
    std::vector<std::vector<std::vector<std::vector<SVec<S>>>>> wp;
    std::vector<std::vector<std::vector<SVec<S>>>> vs;

    bool has_vs() const;
    bool is_zero() const;
};

template <class S> Cocycle<S> zero_cocycle(const Operad<S>& P);
template <class S> Cocycle<S> add_cocycles(const Cocycle<S>& a, const Cocycle<S>& b, const S& c);
template <class S> bool cocycles_equal(const Cocycle<S>& a, const Cocycle<S>& b);

template <class S>
SVec<S> wp_apply(const Operad<S>& P, const Cocycle<S>& w, int m, const SVec<S>& x, int i, int n, const SVec<S>& y);
template <class S>
SVec<S> vs_apply(const Operad<S>& P, const Cocycle<S>& w, int m, const SVec<S>& x, const Perm& sigma);

// The 2-coboundary of a degree-preserving linear map.
template <class S>
Cocycle<S> coboundary(const Operad<S>& P, const ArityMaps<S>& d);

// First violated linearized axiom, if any.
template <class S>
std::optional<std::string> cocycle_failure(const Operad<S>& P, const Cocycle<S>& w);

template <class S>
struct NormalizedCocycle {
    Cocycle<S> cocycle;
    ArityMaps<S> witness;  // original = normalized + coboundary(witness)
};

template <class S>
NormalizedCocycle<S> normalize_cocycle(const Operad<S>& P, const Cocycle<S>& w);

template <class S>
struct Equivalence {
    bool equivalent = false;
    std::optional<ArityMaps<S>> witness;  // w1 - w2 = coboundary(witness)
    std::string certificate;
};

template <class S>
Equivalence<S> cocycle_equivalent(const Operad<S>& P, const Cocycle<S>& w1, const Cocycle<S>& w2);

// The operad over k[t]/(t^2) with o + t*wp and * + t*vs.
template <class S>
Operad<TruncPoly<S>> deform(const Operad<S>& P, const Cocycle<S>& w);

// ---- windowed cohomology -------------------------------------------------

template <class S>
struct CohomologyReport {
    Variant variant = Variant::S;
    int N = 0;
    std::string method;
    long unknowns = 0;
    long equations = 0;
    int z2_dim = 0;
    int b2_dim = 0;
    int h2_dim = 0;
    std::vector<Cocycle<S>> reps;
    std::vector<int> ext1_dims;  // per arity, filled when the full variant consults Ext^1
    std::optional<int> h2_previous;  // h2 at window N-1
    bool stabilized() const { return h2_previous && *h2_previous == h2_dim; }
};

struct CohomologyOptions {
    bool stabilization = false;
    bool force_direct = false;  // full variant: solve the unreduced system even if Ext^1 vanishes
    long direct_limit = 400000;  // max unknowns for the unreduced system
};

template <class S>
CohomologyReport<S> h2_window(const Operad<S>& P, Variant v, const CohomologyOptions& opt = {});

// Orbit-reduced S-variant data: coordinates of S-cocycles and S-coboundaries.
template <class S>
class OrbitReduction;

template <class S>
struct Ext1Report {
    int m = 0;
    int dim = 0;
    bool trivial() const { return dim == 0; }
    std::string method;
};

template <class S>
Ext1Report<S> ext1(const Operad<S>& P, int m, bool force_compute = false);

// Class of an S-cocycle (or full cocycle, after removing vs) in the windowed H^2.
template <class S>
bool is_coboundary(const Operad<S>& P, const Cocycle<S>& w);

// ---- superfluous data, exponentials, lifting -----------------------------

// a[m][n] for m >= 1, n >= n0 (0 or 1), m+n-1 <= N; entries outside the window are ignored.
template <class S>
struct SuperfluousInput {
    int N = 0;
    int n0 = 0;
    std::vector<std::vector<S>> a;
};

template <class S>
struct SuperfluousSolution {
    bool ok = false;
    std::vector<S> c;
    std::string violation;
};

template <class S>
SuperfluousSolution<S> superfluous_solve(const SuperfluousInput<S>& in);

template <class S>
ArityMaps<S> exp_derivation(const Operad<S>& P, const ArityMaps<S>& d);

template <class S>
struct LiftResult {
    bool lifted = false;
    Operad<TruncPoly<S>> op;  // over k[t]/(t^{J+2}) when lifted
    long unknowns = 0;
    long equations = 0;
    std::string obstruction;
};

// D is an operad over k[t]/(t^{J+1}) reducing to P mod t; returns a structure mod t^{J+2}.
template <class S>
LiftResult<S> lift_order(const Operad<S>& P, const Operad<TruncPoly<S>>& D);

// The operad P over k[t]/(t^J) with t-independent structure.
template <class S>
Operad<TruncPoly<S>> constant_extension(const Operad<S>& P, int J);

// Level-j coefficients of a deformation as a cocycle-shaped collection.
template <class S>
Cocycle<S> level_part(const Operad<S>& P, const Operad<TruncPoly<S>>& D, int j);

// Reduction mod t.
template <class S>
Operad<S> reduce_mod_t(const Operad<TruncPoly<S>>& D, const Ring& field);

}  // namespace opcoh
