#pragma once

#include "opcoh/scalar.hpp"

#include <map>
#include <string>
#include <vector>

namespace opcoh {

// img[k] = sigma(k+1)-1. Composition (a*b)(k) = a(b(k)).
struct Perm {
    std::vector<int> img;

    Perm() = default;
    explicit Perm(std::vector<int> images) : img(std::move(images)) {}
    static Perm identity(int n);
    // adjacent transposition (k, k+1), k 1-based
    static Perm adjacent(int n, int k);
    static Perm from_images1(const std::vector<int>& one_based);
    static Perm from_word(const std::vector<int>& word);
    static Perm parse(const std::string& text, int n_hint = 0);

    int n() const { return static_cast<int>(img.size()); }
    int operator()(int k1) const { return img[k1 - 1] + 1; }  // 1-based evaluation
    bool is_identity() const;
    Perm inverse() const;
    std::vector<int> word() const;  // sigma^{-1}(1) ... sigma^{-1}(n), 1-based letters
    std::string str() const;        // cycle notation with arity subscript
    std::string word_str() const;
    int index() const;              // lexicographic rank among S_n
    static Perm from_index(int n, int idx);
    // Reduced word a_1..a_L (1-based adjacent indices) with sigma = s_{a_1} ... s_{a_L}.
    std::vector<int> coxeter_word() const;
    int inversions() const;

    bool operator==(const Perm& o) const { return img == o.img; }
    bool operator!=(const Perm& o) const { return img != o.img; }
    bool operator<(const Perm& o) const { return img < o.img; }
};

Perm operator*(const Perm& a, const Perm& b);

long factorial(int n);
std::vector<Perm> all_perms(int n);

std::vector<int> word_compose(const std::vector<int>& w1, int i, const std::vector<int>& w2);

struct BlockPair {
    Perm sigma_prime;  // 1_m o_i sigma
    Perm phi_dprime;   // phi o_i 1_n
};
BlockPair block_compose(const Perm& phi, int i, const Perm& sigma);
Perm one_compose(int m, int i, const Perm& sigma);
Perm compose_one(const Perm& phi, int i, int n);

// Deleting letter i from a word and standardizing: the As restriction by capping slot i.
std::vector<int> word_cap(const std::vector<int>& w, int i);

template <class S>
struct GroupAlgebraElement {
    int n = 0;
    std::map<Perm, S> terms;

    void add(const Perm& p, const S& c) {
        auto& t = terms[p];
        t += c;
        if (t.is_zero()) terms.erase(p);
    }
};

}  // namespace opcoh
