#include "opcoh/scalar.hpp"

namespace opcoh {

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Rational Rational::parse(const std::string& text) {
    std::string t = text;
    if (!t.empty() && t[0] == '+') t = t.substr(1);
    if (t.empty() || t.find_first_not_of("-0123456789/") != std::string::npos)
        throw DomainError("ParseError", "not a rational number: '" + text + "'");
    try {
        mpq_class q(t, 10);
        if (q.get_den() == 0) throw DomainError("DivisionByZero", "zero denominator in '" + text + "'");
        q.canonicalize();
        return Rational(q);
    } catch (const std::invalid_argument&) {
        throw DomainError("ParseError", "not a rational number: '" + text + "'");
    }
}

static uint32_t parse_uint(const std::string& s, const std::string& whole) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw DomainError("InvalidRing", "cannot parse ring '" + whole + "'");
    return static_cast<uint32_t>(std::stoul(s));
}

Ring Ring::parse(const std::string& text) {
    if (text == "Q") return rationals();
    if (text.rfind("Q-eps:", 0) == 0) return truncated(rationals(), static_cast<int>(parse_uint(text.substr(6), text)));
    if (text.rfind("Fp-eps:", 0) == 0) {
        auto rest = text.substr(7);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw DomainError("InvalidRing", "expected Fp-eps:<p>:<J>");
        return truncated(prime_field(parse_uint(rest.substr(0, colon), text)),
                         static_cast<int>(parse_uint(rest.substr(colon + 1), text)));
    }
    if (text.rfind("Fp:", 0) == 0) return prime_field(parse_uint(text.substr(3), text));
    if (text.size() > 1 && text[0] == 'F') return prime_field(parse_uint(text.substr(1), text));
    throw DomainError("InvalidRing", "unknown ring '" + text + "'");
}

std::string Ring::name() const {
    std::string k = base == Base::Q ? "Q" : "F" + std::to_string(p);
    if (order == 0) return k;
    return k + "[t]/(t^" + std::to_string(order) + ")";
}

std::string Ring::spec() const {
    if (order == 0) return base == Base::Q ? "Q" : "Fp:" + std::to_string(p);
    if (base == Base::Q) return "Q-eps:" + std::to_string(order);
    return "Fp-eps:" + std::to_string(p) + ":" + std::to_string(order);
}

}  // namespace opcoh
