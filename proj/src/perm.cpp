#include "opcoh/perm.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace opcoh {

Perm Perm::identity(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return Perm(std::move(v));
}

Perm Perm::adjacent(int n, int k) {
    if (k < 1 || k >= n) throw DomainError("SlotOutOfRange", "adjacent transposition out of range");
    Perm p = identity(n);
    std::swap(p.img[k - 1], p.img[k]);
    return p;
}

Perm Perm::from_images1(const std::vector<int>& one_based) {
    int n = static_cast<int>(one_based.size());
    std::vector<int> v(n);
    std::vector<char> seen(n, 0);
    for (int k = 0; k < n; ++k) {
        int x = one_based[k] - 1;
        if (x < 0 || x >= n || seen[x]) throw DomainError("NotAPermutation", "images do not form a bijection");
        seen[x] = 1;
        v[k] = x;
    }
    return Perm(std::move(v));
}

Perm Perm::from_word(const std::vector<int>& word) {
    // word[j] = sigma^{-1}(j+1), so sigma(word[j]) = j+1
    int n = static_cast<int>(word.size());
    std::vector<int> img(n, -1);
    for (int j = 0; j < n; ++j) {
        int letter = word[j] - 1;
        if (letter < 0 || letter >= n || img[letter] >= 0) throw DomainError("NotAPermutation", "invalid word");
        img[letter] = j;
    }
    return Perm(std::move(img));
}

bool Perm::is_identity() const {
    for (int k = 0; k < n(); ++k)
        if (img[k] != k) return false;
    return true;
}

Perm Perm::inverse() const {
    std::vector<int> v(n());
    for (int k = 0; k < n(); ++k) v[img[k]] = k;
    return Perm(std::move(v));
}

std::vector<int> Perm::word() const {
    Perm inv = inverse();
    std::vector<int> w(n());
    for (int j = 0; j < n(); ++j) w[j] = inv.img[j] + 1;
    return w;
}

std::string Perm::word_str() const {
    std::string s;
    for (int x : word()) {
        if (n() > 9 && !s.empty()) s += ",";
        s += std::to_string(x);
    }
    return s;
}

std::string Perm::str() const {
    if (is_identity()) return "id_" + std::to_string(n());
    std::string s;
    std::vector<char> seen(n(), 0);
    for (int k = 0; k < n(); ++k) {
        if (seen[k] || img[k] == k) continue;
        s += "(";
        int j = k;
        bool first = true;
        while (!seen[j]) {
            seen[j] = 1;
            if (!first && n() > 9) s += " ";
            s += std::to_string(j + 1);
            first = false;
            j = img[j];
        }
        s += ")";
    }
    return s + "_" + std::to_string(n());
}

Perm Perm::parse(const std::string& text, int n_hint) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    int n = n_hint;
    std::string body = t;
    auto us = t.rfind('_');
    if (us != std::string::npos) {
        std::string sub = t.substr(us + 1);
        if (sub.empty() || sub.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError("ParseError", "bad arity subscript in '" + text + "'");
        n = std::stoi(sub);
        body = t.substr(0, us);
    }
    if (body == "id" || body == "1" || body.empty()) {
        if (n <= 0) throw DomainError("ParseError", "identity needs an arity: '" + text + "'");
        return identity(n);
    }
    std::vector<std::vector<int>> cycles;
    int maxpt = 0;
    size_t pos = 0;
    while (pos < body.size()) {
        if (body[pos] != '(') throw DomainError("ParseError", "expected '(' in '" + text + "'");
        auto close = body.find(')', pos);
        if (close == std::string::npos) throw DomainError("ParseError", "unclosed cycle in '" + text + "'");
        std::string inner = body.substr(pos + 1, close - pos - 1);
        std::vector<int> cyc;
        if (inner.find(',') != std::string::npos) {
            size_t a = 0;
            while (a <= inner.size()) {
                auto b = inner.find(',', a);
                if (b == std::string::npos) b = inner.size();
                cyc.push_back(std::stoi(inner.substr(a, b - a)));
                a = b + 1;
            }
        } else {
            for (char c : inner) {
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    throw DomainError("ParseError", "bad cycle entry in '" + text + "'");
                cyc.push_back(c - '0');
            }
        }
        for (int x : cyc) {
            if (x < 1) throw DomainError("ParseError", "cycle entries start at 1");
            maxpt = std::max(maxpt, x);
        }
        cycles.push_back(cyc);
        pos = close + 1;
    }
    if (n <= 0) n = maxpt;
    if (maxpt > n) throw DomainError("ParseError", "cycle entry exceeds arity in '" + text + "'");
    Perm result = identity(n);
    // product of cycles, rightmost applied first
    for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
        Perm c = identity(n);
        const auto& cyc = *it;
        for (size_t k = 0; k < cyc.size(); ++k) c.img[cyc[k] - 1] = cyc[(k + 1) % cyc.size()] - 1;
        std::vector<char> hit(n, 0);
        for (int x : c.img) {
            if (hit[x]) throw DomainError("ParseError", "repeated entry in cycle '" + text + "'");
            hit[x] = 1;
        }
        result = c * result;
    }
    return result;
}

Perm operator*(const Perm& a, const Perm& b) {
    if (a.n() != b.n()) throw DomainError("ArityMismatch", "composing permutations of different degree");
    std::vector<int> v(a.n());
    for (int k = 0; k < a.n(); ++k) v[k] = a.img[b.img[k]];
    return Perm(std::move(v));
}

long factorial(int n) {
    long f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

int Perm::index() const {
    int idx = 0;
    for (int k = 0; k < n(); ++k) {
        int smaller = 0;
        for (int j = k + 1; j < n(); ++j)
            if (img[j] < img[k]) ++smaller;
        idx = idx * (n() - k) + smaller;
    }
    return idx;
}

Perm Perm::from_index(int n, int idx) {
    std::vector<int> digits(n);
    for (int k = n - 1; k >= 0; --k) {
        int base = n - k;
        digits[k] = idx % base;
        idx /= base;
    }
    std::vector<int> avail(n);
    std::iota(avail.begin(), avail.end(), 0);
    std::vector<int> v(n);
    for (int k = 0; k < n; ++k) {
        v[k] = avail[digits[k]];
        avail.erase(avail.begin() + digits[k]);
    }
    return Perm(std::move(v));
}

std::vector<Perm> all_perms(int n) {
    std::vector<Perm> out;
    Perm p = Perm::identity(n);
    do out.push_back(p);
    while (std::next_permutation(p.img.begin(), p.img.end()));
    return out;
}

int Perm::inversions() const {
    int c = 0;
    for (int a = 0; a < n(); ++a)
        for (int b = a + 1; b < n(); ++b)
            if (img[a] > img[b]) ++c;
    return c;
}

std::vector<int> Perm::coxeter_word() const {
    std::vector<int> rev;
    Perm s = *this;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int k = 0; k + 1 < n(); ++k) {
            if (s.img[k] > s.img[k + 1]) {
                // s = s' * s_k with s' = s * s_k
                std::swap(s.img[k], s.img[k + 1]);
                rev.push_back(k + 1);
                changed = true;
                break;
            }
        }
    }
    return std::vector<int>(rev.rbegin(), rev.rend());
}

std::vector<int> word_compose(const std::vector<int>& w1, int i, const std::vector<int>& w2) {
    int m = static_cast<int>(w1.size()), n = static_cast<int>(w2.size());
    if (i < 1 || i > m) throw DomainError("SlotOutOfRange", "slot " + std::to_string(i) + " outside 1.." + std::to_string(m));
    std::vector<int> out;
    out.reserve(m + n - 1);
    for (int letter : w1) {
        if (letter < i) out.push_back(letter);
        else if (letter == i)
            for (int x : w2) out.push_back(x + i - 1);
        else out.push_back(letter + n - 1);
    }
    return out;
}

std::vector<int> word_cap(const std::vector<int>& w, int i) {
    std::vector<int> out;
    for (int letter : w) {
        if (letter == i) continue;
        out.push_back(letter > i ? letter - 1 : letter);
    }
    return out;
}

Perm one_compose(int m, int i, const Perm& sigma) {
    return Perm::from_word(word_compose(Perm::identity(m).word(), i, sigma.word()));
}

Perm compose_one(const Perm& phi, int i, int n) {
    if (n == 0) return Perm::from_word(word_cap(phi.word(), i));
    return Perm::from_word(word_compose(phi.word(), i, Perm::identity(n).word()));
}

BlockPair block_compose(const Perm& phi, int i, const Perm& sigma) {
    return {one_compose(phi.n(), i, sigma), compose_one(phi, i, sigma.n())};
}

}  // namespace opcoh
