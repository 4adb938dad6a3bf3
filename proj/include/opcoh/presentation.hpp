#pragma once

#include "opcoh/operad.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace opcoh {

// A leaf-labeled tree. gen < 0 marks a leaf carrying `leaf` (1-based).
struct Tree {
    int gen = -1;
    int leaf = 1;
    std::vector<Tree> kids;

    static Tree make_leaf(int label) { Tree t; t.leaf = label; return t; }
    static Tree make_gen(int g, int arity);
    bool is_leaf() const { return gen < 0; }
    int arity() const;
    void leaves(std::vector<int>& out) const;
    bool operator==(const Tree& o) const { return gen == o.gen && leaf == o.leaf && kids == o.kids; }
};

Tree tree_compose(const Tree& a, int i, const Tree& b);
Tree tree_act(const Tree& t, const Perm& sigma);  // leaf label l -> sigma^{-1}(l)
std::string tree_str(const Tree& t, const std::vector<std::string>& gen_names);

template <class S>
struct TreePoly {
    int arity = 0;
    std::vector<std::pair<S, Tree>> terms;
};

template <class S>
TreePoly<S> poly_compose(const TreePoly<S>& a, int i, const TreePoly<S>& b);
template <class S>
TreePoly<S> poly_act(const TreePoly<S>& a, const Perm& sigma);

template <class S>
struct GeneratorDecl {
    std::string name;
    int arity = 2;
    std::vector<std::pair<Perm, S>> symmetries;  // g * sigma = c g
};

template <class S>
struct Presentation {
    Ring ring;
    std::vector<GeneratorDecl<S>> gens;
    std::vector<TreePoly<S>> relations;
    std::map<std::pair<int, int>, TreePoly<S>> caps;  // (generator, slot) -> g o_slot 1_0
    bool unital = false;

    int find_gen(const std::string& name) const;
};

template <class S>
class PresentationEngine;

// The quotient operad together with the machinery to evaluate tree
// expressions in it.
template <class S>
struct PresentedOperad {
    Operad<S> op;
    std::shared_ptr<const PresentationEngine<S>> engine;

    Element<S> evaluate(const TreePoly<S>& p) const;
    // Standard basis trees in each arity.
    std::vector<Tree> basis_trees(int n) const;
};

template <class S>
PresentedOperad<S> quotient_truncation(const Presentation<S>& pres, int N, const std::string& name = "presented");

// Canonical leaf-labeled trees spanning the free operad in arity n.
template <class S>
std::vector<Tree> free_basis(const Ring& ring, const std::vector<GeneratorDecl<S>>& gens, int n);

template <class S>
struct IdealClosure {
    std::vector<std::vector<Tree>> free_trees;  // basis of the free operad per arity
    GradedSubspace<S> ideal;                   // inside the span of free_trees[n]
};

template <class S>
IdealClosure<S> ideal_closure(const Presentation<S>& pres, int N);

}  // namespace opcoh
