#pragma once

#include "opcoh/linalg.hpp"
#include "opcoh/perm.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace opcoh {

template <class S>
struct Element {
    int arity = -1;
    SVec<S> v;
    bool operator==(const Element& o) const { return arity == o.arity && vec_equal(v, o.v); }
};

// Per-arity linear maps given by images of basis vectors: maps[n][a] = f(e_a).
template <class S> using ArityMaps = std::vector<std::vector<SVec<S>>>;

template <class S>
class Operad {
public:
    Ring ring;
    int N = 0;
    std::string name;
    std::vector<std::vector<std::string>> labels;
    // act[n][k-1][a] = e_a * s_k
    std::vector<std::vector<std::vector<SVec<S>>>> act_tab;
    // comp_tab[m][n][i-1][a*dim(n)+b] = e_a o_i e_b
    std::vector<std::vector<std::vector<std::vector<SVec<S>>>>> comp_tab;
    SVec<S> identity;
    int identity_index = -1;
    std::optional<SVec<S>> two_unit;

    Operad() = default;
    Operad(const Ring& r, int max_arity, std::vector<std::vector<std::string>> basis_labels, std::string nm = "");

    int dim(int n) const { return n <= N && n >= 0 ? static_cast<int>(labels[n].size()) : 0; }
    std::vector<int> dims() const;
    bool unitary() const { return dim(0) == 1; }
    bool two_unitary() const { return two_unit.has_value(); }
    bool in_window(int m, int n) const { return m >= 1 && n >= 0 && m <= N && n <= N && m + n - 1 <= N; }

    const SVec<S>& comp_basis(int m, int n, int i, int a, int b) const { return comp_tab[m][n][i - 1][a * dim(n) + b]; }
    SVec<S>& comp_ref(int m, int n, int i, int a, int b) { return comp_tab[m][n][i - 1][a * dim(n) + b]; }
    const SVec<S>& act_basis(int n, int k, int a) const { return act_tab[n][k - 1][a]; }

    SVec<S> compose(int m, const SVec<S>& x, int i, int n, const SVec<S>& y) const;
    Element<S> compose(const Element<S>& x, int i, const Element<S>& y) const;
    SVec<S> act_adjacent(int n, const SVec<S>& x, int k) const;
    SVec<S> act(int n, const SVec<S>& x, const Perm& sigma) const;
    Element<S> act(const Element<S>& x, const Perm& sigma) const;

    Element<S> basis(int n, int a) const { return {n, unit_vec<S>(ring, a)}; }
    Element<S> unit() const { return {1, identity}; }
    int find_label(int n, const std::string& label) const;
    Element<S> element(int n, const std::map<std::string, S>& coeffs) const;
};

template <class S>
struct Violation {
    std::string axiom;
    std::string instance;
    Element<S> lhs, rhs;
};

template <class S>
struct ValidationReport {
    bool ok = true;
    long checked = 0;
    std::vector<Violation<S>> violations;
};

template <class S>
ValidationReport<S> validate_axioms(const Operad<S>& P, int max_violations = 20);

// Construction-time certification: throws AxiomViolation on failure.
template <class S>
void certify(const Operad<S>& P);

template <class S>
std::string element_str(const Operad<S>& P, const Element<S>& x);

// ---- generation recipes --------------------------------------------------

struct ItemRef {
    int arity = -1, index = -1;
};

template <class S>
struct GenItem {
    enum class Kind { Identity, Generator, Compose, Act } kind = Kind::Identity;
    int gen = -1;
    ItemRef left, right;
    int slot = 0;
    SVec<S> v;
};

template <class S>
struct Generation {
    std::vector<Element<S>> generators;
    std::vector<std::vector<GenItem<S>>> items;
    std::vector<std::vector<SVec<S>>> coords;  // coords[n][b]: e_b in terms of items[n]
};

// With explicit generators the closure must span every arity (else GeneratorsDontGenerate);
// without, basis vectors outside the span are promoted to generators.
template <class S>
Generation<S> build_generation(const Operad<S>& P, const std::vector<Element<S>>* explicit_gens = nullptr);

template <class S>
ArityMaps<S> extend_morphism(const Operad<S>& P, const Operad<S>& Q, const Generation<S>& g,
                             const std::vector<SVec<S>>& images);

template <class S>
ArityMaps<S> extend_derivation(const Operad<S>& P, const Generation<S>& g, const std::vector<SVec<S>>& images);

template <class S>
SVec<S> apply_map(const ArityMaps<S>& f, int n, const SVec<S>& x);

// ---- restriction, ideals, quotients --------------------------------------

template <class S> using GradedSubspace = std::vector<Subspace<S>>;

template <class S>
std::vector<SVec<S>> restriction(const Operad<S>& P, int n, const std::vector<int>& I);

template <class S>
GradedSubspace<S> truncation_ideal(const Operad<S>& P, int k);

// Returns a description of the first closure failure, if any.
template <class S>
std::optional<std::string> ideal_closure_failure(const Operad<S>& P, const GradedSubspace<S>& I);

template <class S>
Operad<S> quotient(const Operad<S>& P, const GradedSubspace<S>& I, const std::string& name = "");

// ---- morphisms -----------------------------------------------------------

template <class S>
struct MorphismReport {
    bool is_morphism = true;
    std::vector<bool> iso_per_arity;
    std::vector<int> rank_per_arity;
    std::string failure;
    bool is_iso() const {
        for (bool b : iso_per_arity)
            if (!b) return false;
        return is_morphism;
    }
};

template <class S>
MorphismReport<S> check_morphism(const Operad<S>& P, const Operad<S>& Q, const ArityMaps<S>& phi);

template <class S>
MorphismReport<S> check_morphism(const Operad<S>& P, const Operad<S>& Q, const std::vector<Element<S>>& gens,
                                 const std::vector<SVec<S>>& images);

template <class S>
struct FixedReport {
    GradedSubspace<S> fixed;
    bool closed = true;
    std::string failure;
};

template <class S>
FixedReport<S> fixed_subspace(const Operad<S>& P, const ArityMaps<S>& f, bool derivation);

template <class S>
ArityMaps<S> identity_maps(const Operad<S>& P);

template <class S>
ArityMaps<S> scaling_maps(const Operad<S>& P, const S& c);  // theta -> c^{n-1} theta

// ---- polynomial constraint emission --------------------------------------

template <class S>
struct Polynomial {
    std::map<std::vector<int>, S> terms;  // exponent vector -> coefficient
    bool is_zero() const { return terms.empty(); }
};

template <class S>
struct AutSystem {
    std::vector<std::string> variables;  // m[g,b]
    std::vector<Polynomial<S>> equations;
    std::vector<std::string> origins;
};

template <class S>
AutSystem<S> aut_equations(const Operad<S>& P, int window);

template <class S>
S evaluate(const Polynomial<S>& p, const std::vector<S>& values);

template <class S>
std::string poly_str(const Polynomial<S>& p, const std::vector<std::string>& vars);

}  // namespace opcoh
