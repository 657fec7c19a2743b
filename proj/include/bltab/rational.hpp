#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bltab {

// Exact rational number. All endpoint and model arithmetic is exact; the
// open/closed distinctions of interval endpoints do not survive rounding.
//
// mpq_class leaves two-argument constructions like mpq_class(2, 4) in
// non-canonical form, and equality comparisons silently misbehave on such
// values. This thin wrapper canonicalizes numerator/denominator
// constructions and is otherwise a plain mpq_class.
class Rat : public mpq_class {
  public:
    Rat() = default;
    Rat(const mpq_class& v) : mpq_class(v) {}
    Rat(mpq_class&& v) : mpq_class(std::move(v)) {}
    template <class T, class U>
    Rat(const __gmp_expr<T, U>& e) : mpq_class(e) {}
    Rat(int v) : mpq_class(v) {}
    Rat(long v) : mpq_class(v) {}
    Rat(unsigned long v) : mpq_class(v) {}
    Rat(const mpz_class& v) : mpq_class(v) {}
    explicit Rat(const std::string& text) : mpq_class(text) {}
    Rat(long n, long d) : mpq_class(n, d) { canonicalize(); }
    Rat(const mpz_class& n, const mpz_class& d) : mpq_class(n, d) { canonicalize(); }
};

// Parses "p", "p/q" or a decimal like "0.75". Throws std::invalid_argument
// on malformed input or q == 0.
Rat rat_from_string(const std::string& text);

// Canonical text form: "p/q", or "p" when the denominator is 1.
std::string rat_to_string(const Rat& q);

std::size_t rat_hash(const Rat& q);

inline bool rat_in_unit(const Rat& q) { return q >= 0 && q <= 1; }

}  // namespace bltab
