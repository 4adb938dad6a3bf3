#pragma once

#include "opcoh/presentation.hpp"

#include <string>
#include <vector>

namespace opcoh {

// Augmentation ideal of an augmented algebra: delta_i delta_j = sum_k omega(i,j,k) delta_k.
struct AlgebraData {
    int d = 0;
    std::vector<Rational> omega;  // index (i*d + j)*d + k, 0-based

    Rational at(int i, int j, int k) const { return omega[(static_cast<size_t>(i) * d + j) * d + k]; }
    static AlgebraData idempotent();      // k delta, delta^2 = 2 delta
    static AlgebraData square_zero();     // k x, x^2 = 0
    static AlgebraData zero(int d);       // all products zero
    static AlgebraData truncated(int d);  // span{x, ..., x^d} inside k[x]/(x^{d+1})
    static AlgebraData from_json(const std::string& text);
    std::string describe() const;
    void check_associative() const;  // throws NonAssociativeAlgebraData
};

struct BuildOptions {
    AlgebraData algebra = AlgebraData::idempotent();
    bool override_window_guard = false;
};

struct CatalogEntry {
    std::string name;
    int default_window;
    int max_window;
    std::string summary;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& name);  // case-insensitive; throws UnknownOperad

template <class S> Operad<S> build_as(const Ring& ring, int N);
template <class S> Operad<S> build_com(const Ring& ring, int N);
template <class S> Operad<S> build_da(const Ring& ring, int N, const AlgebraData& alg);
template <class S> Operad<S> build_example44(const Ring& ring, int N);
template <class S> Operad<S> build_example28(const Ring& ring, int N);

template <class S> Presentation<S> as_presentation(const Ring& ring, bool unital);
template <class S> Presentation<S> com_presentation(const Ring& ring, bool unital);
template <class S> Presentation<S> lie_presentation(const Ring& ring);
template <class S> Presentation<S> pois_presentation(const Ring& ring);
template <class S> Presentation<S> ll_presentation(const Ring& ring);

template <class S> Operad<S> build_lie(const Ring& ring, int N);
template <class S> Operad<S> build_pois(const Ring& ring, int N);
template <class S> Operad<S> build_ll(const Ring& ring, int N);

// Catalog dispatch with the window guard.
template <class S>
Operad<S> build(const std::string& name, const Ring& ring, int N, const BuildOptions& opts = {});

}  // namespace opcoh
