#include "helpers.hpp"

#include <doctest.h>

using namespace opcoh;
using namespace testing;

namespace {

std::vector<std::vector<int>> all_words(int n) {
    std::vector<std::vector<int>> out;
    for (auto& p : all_perms(n)) out.push_back(p.word());
    return out;
}

// The operation x_1..x_m -> x_{w(1)} ... x_{w(m)} as a sequence of variable
// names; composing substitutes a block of fresh variables for x_i.
std::vector<int> substitute_oracle(const std::vector<int>& w1, int i, const std::vector<int>& w2) {
    int n = static_cast<int>(w2.size());
    std::vector<std::string> vars;
    for (int x : w1) {
        if (x == i) {
            for (int y : w2) vars.push_back("y" + std::to_string(y));
        } else {
            vars.push_back("x" + std::to_string(x));
        }
    }
    // rename: x_j (j<i) -> j, y_k -> i+k-1, x_j (j>i) -> j+n-1
    std::vector<int> out;
    for (auto& v : vars) {
        int k = std::stoi(v.substr(1));
        if (v[0] == 'y') out.push_back(i + k - 1);
        else out.push_back(k < i ? k : k + n - 1);
    }
    return out;
}

}  // namespace

TEST_SUITE("symmetric") {

TEST_CASE("cycle notation round trip and the composition convention") {
    for (int n = 1; n <= 5; ++n)
        for (auto& p : all_perms(n)) {
            CHECK(Perm::parse(p.str()) == p);
            CHECK(Perm::from_word(p.word()) == p);
            CHECK(Perm::from_index(n, p.index()) == p);
            CHECK((p * p.inverse()).is_identity());
        }
    Perm a = Perm::parse("(12)_3"), b = Perm::parse("(23)_3");
    for (int k = 1; k <= 3; ++k) CHECK((a * b)(k) == a(b(k)));
    CHECK(Perm::parse("(123)(45)_5")(3) == 1);
    CHECK(Perm::parse("id_4").is_identity());
    CHECK(Perm::parse("(12)", 3).n() == 3);
    CHECK_THROWS_AS(Perm::parse("(14)_3"), DomainError);
}

TEST_CASE("coxeter words reproduce the permutation") {
    for (int n = 1; n <= 5; ++n)
        for (auto& p : all_perms(n)) {
            Perm q = Perm::identity(n);
            for (int k : p.coxeter_word()) q = q * Perm::adjacent(n, k);
            CHECK(q == p);
            CHECK(static_cast<int>(p.coxeter_word().size()) == p.inversions());
        }
}

TEST_CASE("word_compose matches variable substitution") {
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n)
            for (auto& w1 : all_words(m))
                for (auto& w2 : all_words(n))
                    for (int i = 1; i <= m; ++i) CHECK(word_compose(w1, i, w2) == substitute_oracle(w1, i, w2));
    CHECK(word_compose({2, 1}, 1, {1, 2}) == std::vector<int>{3, 1, 2});
    CHECK(word_compose({2, 1}, 2, {2, 1}) == std::vector<int>{3, 2, 1});
    CHECK_THROWS_AS(word_compose({1, 2}, 3, {1}), DomainError);
}

TEST_CASE("identity words compose to identity words") {
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n)
            for (int i = 1; i <= m; ++i)
                CHECK(word_compose(Perm::identity(m).word(), i, Perm::identity(n).word()) == Perm::identity(m + n - 1).word());
}

TEST_CASE("word_compose satisfies both associativity shapes") {
    for (int l = 1; l <= 3; ++l)
        for (int m = 1; m <= 3; ++m)
            for (int n = 1; n <= 3; ++n)
                for (auto& a : all_words(l))
                    for (auto& b : all_words(m))
                        for (auto& c : all_words(n))
                            for (int i = 1; i <= l; ++i) {
                                // sequential: (a o_i b) o_{i-1+j} c = a o_i (b o_j c)
                                for (int j = 1; j <= m; ++j)
                                    CHECK(word_compose(word_compose(a, i, b), i - 1 + j, c) ==
                                          word_compose(a, i, word_compose(b, j, c)));
                                // parallel: (a o_i b) o_{k-1+m} c = (a o_k c) o_i b for i < k
                                for (int k = i + 1; k <= l; ++k)
                                    CHECK(word_compose(word_compose(a, i, b), k - 1 + m, c) ==
                                          word_compose(word_compose(a, k, c), i, b));
                            }
}

TEST_CASE("block_compose outputs") {
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n)
            for (int i = 1; i <= m; ++i) {
                for (auto& sigma : all_perms(n)) {
                    auto bp = block_compose(Perm::identity(m), i, sigma);
                    CHECK(bp.phi_dprime.is_identity());
                    for (int k = 1; k <= m + n - 1; ++k)
                        if (k < i || k > i + n - 1) CHECK(bp.sigma_prime(k) == k);
                    CHECK(bp.sigma_prime.word() == word_compose(Perm::identity(m).word(), i, sigma.word()));
                    if (sigma.is_identity()) CHECK(bp.sigma_prime.is_identity());
                }
                for (auto& phi : all_perms(m)) {
                    auto bp = block_compose(phi, i, Perm::identity(n));
                    CHECK(bp.sigma_prime.is_identity());
                    CHECK(bp.phi_dprime.word() == word_compose(phi.word(), i, Perm::identity(n).word()));
                }
            }
    // (12) o_1 1_2: the block {1,2} moves past 3
    auto bp = block_compose(Perm::parse("(12)_2"), 1, Perm::identity(2));
    CHECK(bp.phi_dprime.word() == std::vector<int>{3, 1, 2});
}

TEST_CASE("block_compose realizes equivariance in the word model") {
    // (1_m*phi) o_i (1_n*sigma) = 1_{m+n-1} * (sigma' phi'') with sigma' = 1_m o_{phi(i)} sigma
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 3; ++n)
            for (auto& phi : all_perms(m))
                for (auto& sigma : all_perms(n))
                    for (int i = 1; i <= m; ++i) {
                        auto lhs = word_compose(phi.word(), i, sigma.word());
                        Perm rhs = one_compose(m, phi(i), sigma) * compose_one(phi, i, n);
                        CHECK(Perm::from_word(lhs) == rhs);
                    }
}

}  // TEST_SUITE
