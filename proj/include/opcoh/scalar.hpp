#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace opcoh {

struct DomainError : std::runtime_error {
    std::string kind;
    DomainError(std::string k, const std::string& msg) : std::runtime_error(msg), kind(std::move(k)) {}
};

class Rational {
public:
    Rational() = default;
    Rational(long n) : v_(n) {}
    Rational(long n, long d) : v_(n, d) {
        if (d == 0) throw DomainError("DivisionByZero", "zero denominator");
        v_.canonicalize();
    }
    explicit Rational(mpq_class q) : v_(std::move(q)) {}

    const mpq_class& raw() const { return v_; }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }

    Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    bool operator==(const Rational& o) const { return v_ == o.v_; }
    bool operator!=(const Rational& o) const { return v_ != o.v_; }

    Rational inverse() const {
        if (is_zero()) throw DomainError("DivisionByZero", "inverse of zero");
        return Rational(mpq_class(1 / v_));
    }
    std::string str() const { return v_.get_str(); }
    static Rational parse(const std::string& text);

private:
    mpq_class v_;
};

// A default-constructed Zp is a zero that adopts the modulus of whatever it meets.
struct Zp {
    uint32_t v = 0;
    uint32_t p = 0;

    Zp() = default;
    Zp(long n, uint32_t mod) : p(mod) {
        long r = n % static_cast<long>(mod);
        if (r < 0) r += mod;
        v = static_cast<uint32_t>(r);
    }

    static uint32_t join(uint32_t a, uint32_t b) {
        if (a && b && a != b) throw DomainError("RingMismatch", "mixing different prime fields");
        return a ? a : b;
    }
    bool is_zero() const { return v == 0; }
    bool is_one() const { return v == 1; }

    Zp operator+(const Zp& o) const {
        Zp r; r.p = join(p, o.p);
        uint64_t s = uint64_t(v) + o.v;
        r.v = r.p ? uint32_t(s % r.p) : 0;
        return r;
    }
    Zp operator-(const Zp& o) const {
        Zp r; r.p = join(p, o.p);
        if (!r.p) return r;
        r.v = uint32_t((uint64_t(v) + r.p - o.v) % r.p);
        return r;
    }
    Zp operator*(const Zp& o) const {
        Zp r; r.p = join(p, o.p);
        if (!r.p) return r;
        r.v = uint32_t(uint64_t(v) * o.v % r.p);
        return r;
    }
    Zp operator-() const {
        Zp r = *this;
        if (v) r.v = p - v;
        return r;
    }
    Zp& operator+=(const Zp& o) { return *this = *this + o; }
    Zp& operator-=(const Zp& o) { return *this = *this - o; }
    Zp& operator*=(const Zp& o) { return *this = *this * o; }
    bool operator==(const Zp& o) const { return v == o.v; }
    bool operator!=(const Zp& o) const { return v != o.v; }

    Zp inverse() const {
        if (!v) throw DomainError("DivisionByZero", "inverse of zero in F_p");
        int64_t a = v, m = p, x0 = 1, x1 = 0;
        while (m) {
            int64_t q = a / m, t = a - q * m;
            a = m; m = t;
            t = x0 - q * x1;
            x0 = x1; x1 = t;
        }
        return Zp(x0, p);
    }
    std::string str() const { return std::to_string(v); }
};

// k[t]/(t^J); an empty coefficient list is a zero of unspecified order.
template <class K>
class TruncPoly {
public:
    TruncPoly() = default;
    explicit TruncPoly(std::vector<K> c) : c_(std::move(c)) {}

    int order() const { return static_cast<int>(c_.size()); }
    const std::vector<K>& coeffs() const { return c_; }
    K coeff(int k) const { return k < order() ? c_[k] : K(); }

    bool is_zero() const {
        for (auto& x : c_)
            if (!x.is_zero()) return false;
        return true;
    }
    bool is_one() const {
        if (c_.empty() || !c_[0].is_one()) return false;
        for (size_t k = 1; k < c_.size(); ++k)
            if (!c_[k].is_zero()) return false;
        return true;
    }
    bool is_unit() const { return !c_.empty() && !c_[0].is_zero(); }
    int valuation() const {
        for (int k = 0; k < order(); ++k)
            if (!c_[k].is_zero()) return k;
        return order();
    }

    TruncPoly operator+(const TruncPoly& o) const {
        int J = std::max(order(), o.order());
        std::vector<K> r(J);
        for (int k = 0; k < J; ++k) r[k] = coeff(k) + o.coeff(k);
        return TruncPoly(std::move(r));
    }
    TruncPoly operator-(const TruncPoly& o) const {
        int J = std::max(order(), o.order());
        std::vector<K> r(J);
        for (int k = 0; k < J; ++k) r[k] = coeff(k) - o.coeff(k);
        return TruncPoly(std::move(r));
    }
    TruncPoly operator*(const TruncPoly& o) const {
        int J = std::max(order(), o.order());
        std::vector<K> r(J);
        for (int a = 0; a < order(); ++a) {
            if (c_[a].is_zero()) continue;
            for (int b = 0; a + b < J && b < o.order(); ++b) r[a + b] += c_[a] * o.c_[b];
        }
        return TruncPoly(std::move(r));
    }
    TruncPoly operator-() const {
        std::vector<K> r(c_.size());
        for (size_t k = 0; k < c_.size(); ++k) r[k] = -c_[k];
        return TruncPoly(std::move(r));
    }
    TruncPoly& operator+=(const TruncPoly& o) { return *this = *this + o; }
    TruncPoly& operator-=(const TruncPoly& o) { return *this = *this - o; }
    TruncPoly& operator*=(const TruncPoly& o) { return *this = *this * o; }
    bool operator==(const TruncPoly& o) const {
        int J = std::max(order(), o.order());
        for (int k = 0; k < J; ++k)
            if (coeff(k) != o.coeff(k)) return false;
        return true;
    }
    bool operator!=(const TruncPoly& o) const { return !(*this == o); }

    TruncPoly inverse() const {
        if (!is_unit()) throw DomainError("NonUnitPivot", "inverse of a non-unit in k[t]/(t^J)");
        int J = order();
        std::vector<K> b(J);
        K a0inv = c_[0].inverse();
        b[0] = a0inv;
        for (int k = 1; k < J; ++k) {
            K s;
            for (int i = 1; i <= k; ++i) s += c_[i] * b[k - i];
            b[k] = -(a0inv * s);
        }
        return TruncPoly(std::move(b));
    }
    TruncPoly shift(int s) const {
        std::vector<K> r(c_.size());
        for (int k = 0; k + s < order(); ++k) r[k + s] = c_[k];
        return TruncPoly(std::move(r));
    }
    std::string str() const {
        std::string out;
        for (int k = 0; k < order(); ++k) {
            if (c_[k].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + c_[k].str() + ")";
            if (k == 1) out += "t";
            if (k > 1) out += "t^" + std::to_string(k);
        }
        return out.empty() ? "0" : out;
    }

private:
    std::vector<K> c_;
};

struct Ring {
    enum class Base { Q, Fp };
    Base base = Base::Q;
    uint32_t p = 0;
    int order = 0;  // 0: the base field itself; J >= 1: k[t]/(t^J)

    static Ring rationals() { return {}; }
    static Ring prime_field(uint32_t p);
    static Ring truncated(const Ring& field, int J);
    static Ring parse(const std::string& text);

    bool is_field() const { return order == 0; }
    uint32_t characteristic() const { return base == Base::Q ? 0 : p; }
    Ring residue_field() const { Ring r = *this; r.order = 0; return r; }
    std::string name() const;
    std::string spec() const;
    bool operator==(const Ring& o) const { return base == o.base && p == o.p && order == o.order; }
};

bool is_prime(uint64_t n);

inline Ring Ring::prime_field(uint32_t p) {
    if (!is_prime(p)) throw DomainError("InvalidRing", std::to_string(p) + " is not prime");
    Ring r; r.base = Base::Fp; r.p = p;
    return r;
}

inline Ring Ring::truncated(const Ring& field, int J) {
    if (!field.is_field()) throw DomainError("InvalidRing", "TruncatedPoly over TruncatedPoly");
    if (J < 1) throw DomainError("InvalidRing", "order J must be >= 1");
    Ring r = field; r.order = J;
    return r;
}

template <class S> struct scalar_traits;

template <> struct scalar_traits<Rational> {
    using base = Rational;
    static constexpr bool truncated = false;
    static Rational from_int(const Ring&, long n) { return Rational(n); }
    static Rational from_frac(const Ring&, long n, long d) { return Rational(n, d); }
    static bool accepts(const Ring& r) { return r.base == Ring::Base::Q && r.order == 0; }
};

template <> struct scalar_traits<Zp> {
    using base = Zp;
    static constexpr bool truncated = false;
    static Zp from_int(const Ring& r, long n) { return Zp(n, r.p); }
    static Zp from_frac(const Ring& r, long n, long d) {
        Zp den(d, r.p);
        if (den.is_zero()) throw DomainError("DivisionByZero", "denominator vanishes in F_" + std::to_string(r.p));
        return Zp(n, r.p) * den.inverse();
    }
    static bool accepts(const Ring& r) { return r.base == Ring::Base::Fp && r.order == 0; }
};

template <class K> struct scalar_traits<TruncPoly<K>> {
    using base = K;
    static constexpr bool truncated = true;
    static TruncPoly<K> from_int(const Ring& r, long n) {
        std::vector<K> c(r.order);
        c[0] = scalar_traits<K>::from_int(r.residue_field(), n);
        return TruncPoly<K>(std::move(c));
    }
    static TruncPoly<K> from_frac(const Ring& r, long n, long d) {
        std::vector<K> c(r.order);
        c[0] = scalar_traits<K>::from_frac(r.residue_field(), n, d);
        return TruncPoly<K>(std::move(c));
    }
    static bool accepts(const Ring& r) { return r.order > 0 && scalar_traits<K>::accepts(r.residue_field()); }
};

template <class S> S from_int(const Ring& r, long n) { return scalar_traits<S>::from_int(r, n); }
template <class S> S from_frac(const Ring& r, long n, long d) { return scalar_traits<S>::from_frac(r, n, d); }
template <class S> S one(const Ring& r) { return from_int<S>(r, 1); }

// Image of an exact rational in the scalar ring (level 0 for truncated rings).
template <class S> S from_rational(const Ring& r, const Rational& q) {
    if constexpr (scalar_traits<S>::truncated) {
        using K = typename scalar_traits<S>::base;
        std::vector<K> c(r.order);
        c[0] = from_rational<K>(r.residue_field(), q);
        return S(std::move(c));
    } else if constexpr (std::is_same_v<S, Rational>) {
        return q;
    } else {
        unsigned long p = r.p;
        unsigned long num = mpz_fdiv_ui(q.raw().get_num_mpz_t(), p);
        unsigned long den = mpz_fdiv_ui(q.raw().get_den_mpz_t(), p);
        if (den == 0) throw DomainError("DivisionByZero", "denominator vanishes in F_" + std::to_string(p));
        return Zp(static_cast<long>(num), r.p) * Zp(static_cast<long>(den), r.p).inverse();
    }
}

// t^k in k[t]/(t^J); only meaningful for truncated scalars.
template <class K>
TruncPoly<K> t_power(const Ring& r, int k) {
    std::vector<K> c(r.order);
    if (k < r.order) c[k] = scalar_traits<K>::from_int(r.residue_field(), 1);
    return TruncPoly<K>(std::move(c));
}

template <class S> bool is_unit(const S& s) { return !s.is_zero(); }
template <class K> bool is_unit(const TruncPoly<K>& s) { return s.is_unit(); }

// Level-j coefficient of a scalar: for field scalars only level 0 exists.
template <class S> typename scalar_traits<S>::base level(const S& s, int j) {
    if constexpr (scalar_traits<S>::truncated) return s.coeff(j);
    else return j == 0 ? s : S();
}

template <class S> S lift_level(const Ring& r, const typename scalar_traits<S>::base& x, int j) {
    if constexpr (scalar_traits<S>::truncated) {
        std::vector<typename scalar_traits<S>::base> c(r.order);
        if (j < r.order) c[j] = x;
        return S(std::move(c));
    } else {
        return j == 0 ? x : S();
    }
}

using Q = Rational;
using Fp = Zp;
using QEps = TruncPoly<Rational>;
using FpEps = TruncPoly<Zp>;

#define OPCOH_FOR_ALL_SCALARS(X) X(::opcoh::Rational) X(::opcoh::Zp) X(::opcoh::QEps) X(::opcoh::FpEps)
#define OPCOH_FOR_FIELDS(X) X(::opcoh::Rational) X(::opcoh::Zp)

// Calls f(S{}) with the scalar type matching the ring.
template <class F>
decltype(auto) dispatch_ring(const Ring& r, F&& f) {
    if (r.order == 0) {
        if (r.base == Ring::Base::Q) return f(Rational());
        return f(Zp());
    }
    if (r.base == Ring::Base::Q) return f(QEps());
    return f(FpEps());
}

}  // namespace opcoh
