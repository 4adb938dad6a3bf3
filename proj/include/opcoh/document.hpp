#pragma once

#include "opcoh/cohomology.hpp"
#include "opcoh/presentation.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace opcoh {

struct DocumentError : DomainError {
    int line = 0;
    int column = 0;
    std::vector<std::string> expected;
    DocumentError(std::string kind, const std::string& msg, int l, int c, std::vector<std::string> exp = {})
        : DomainError(std::move(kind), msg), line(l), column(c), expected(std::move(exp)) {}
};

// The ring named in the document's `ring` section (Q when absent).
Ring document_ring(const std::string& text);

// Parses a presentation document. When `ring` is given it overrides the document's ring line.
template <class S>
Presentation<S> parse_presentation(const std::string& text, const Ring* ring = nullptr);

template <class S>
std::string serialize_presentation(const Presentation<S>& p);

// Coefficients: rationals, and for truncated rings sums of q*t^k.
template <class S>
S parse_scalar(const Ring& ring, const std::string& text);
template <class S>
std::string scalar_text(const S& s);

// ---- JSON payloads ----------------------------------------------------------

template <class S>
nlohmann::json vec_json(const SVec<S>& v);
template <class S>
SVec<S> vec_from_json(const Ring& ring, const nlohmann::json& j);

template <class S>
nlohmann::json maps_json(const ArityMaps<S>& f);

template <class S>
nlohmann::json cocycle_json(const Operad<S>& P, const Cocycle<S>& w);
template <class S>
Cocycle<S> cocycle_from_json(const Operad<S>& P, const nlohmann::json& j);

template <class S>
nlohmann::json operad_json(const Operad<S>& P);

}  // namespace opcoh
