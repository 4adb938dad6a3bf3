#pragma once

#include "opcoh/builtins.hpp"
#include "opcoh/cohomology.hpp"

#include <random>

namespace testing {

using namespace opcoh;

inline Ring QQ() { return Ring::rationals(); }
inline Ring F(uint32_t p) { return Ring::prime_field(p); }

template <class S>
SVec<S> vec(const Ring& r, std::initializer_list<long> xs) {
    std::vector<S> d;
    for (long x : xs) d.push_back(from_int<S>(r, x));
    return from_dense(d);
}

// 1_n * sigma with 1_n = 1_2 o_1 1_2 o_1 ... (needs a 2-unit).
template <class S>
SVec<S> identity_times(const Operad<S>& P, int n, const std::string& cycles) {
    SVec<S> one_n;
    if (n == 1) one_n = P.identity;
    else {
        one_n = *P.two_unit;
        for (int m = 3; m <= n; ++m) one_n = P.compose(m - 1, one_n, 1, 2, *P.two_unit);
    }
    return P.act(n, one_n, Perm::parse(cycles, n));
}

inline std::mt19937& rng() {
    static std::mt19937 g(20240917);
    return g;
}

}  // namespace testing
