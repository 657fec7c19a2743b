#include "bltab/rational.hpp"

#include <functional>

namespace bltab {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace

Rat rat_from_string(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s = s.substr(1);
    }
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    Rat value;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw std::invalid_argument("malformed rational literal: " + text);
        mpz_class n(num), d(den);
        if (d == 0) throw std::invalid_argument("zero denominator: " + text);
        value = Rat(n, d);
        value.canonicalize();
    } else if (dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
            throw std::invalid_argument("malformed decimal literal: " + text);
        mpz_class scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        mpz_class n = mpz_class(whole) * scale + (frac.empty() ? mpz_class(0) : mpz_class(frac));
        value = Rat(n, scale);
        value.canonicalize();
    } else {
        if (!all_digits(s)) throw std::invalid_argument("malformed rational literal: " + text);
        value = Rat(mpz_class(s));
    }
    if (negative) value = -value;
    return value;
}

std::string rat_to_string(const Rat& q) {
    return q.get_str();
}

std::size_t rat_hash(const Rat& q) {
    return std::hash<std::string>{}(q.get_str());
}

}  // namespace bltab
