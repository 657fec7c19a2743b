#include "bltab/kset.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace bltab {

bool Interval::contains(const Rat& v) const {
    if (v < lo || v > hi) return false;
    if (v == lo && !lo_closed) return false;
    if (v == hi && !hi_closed) return false;
    return true;
}

bool Interval::operator==(const Interval& other) const {
    return lo == other.lo && hi == other.hi && lo_closed == other.lo_closed &&
           hi_closed == other.hi_closed;
}

Interval make_interval(Rat lo, Rat hi, bool lo_closed, bool hi_closed) {
    if (!rat_in_unit(lo) || !rat_in_unit(hi))
        throw std::invalid_argument("interval endpoint outside [0,1]");
    if (lo > hi || (lo == hi && !(lo_closed && hi_closed)))
        throw std::invalid_argument("empty interval");
    return Interval{std::move(lo), std::move(hi), lo_closed, hi_closed};
}

std::string render_interval(const Interval& iv) {
    if (iv.is_singleton()) return "{" + rat_to_string(iv.lo) + "}";
    std::string s;
    s += iv.lo_closed ? '[' : '(';
    s += rat_to_string(iv.lo) + "," + rat_to_string(iv.hi);
    s += iv.hi_closed ? ']' : ')';
    return s;
}

namespace {

// True when a ∪ b is itself an interval, assuming a.lo <= b.lo.
bool joinable(const Interval& a, const Interval& b) {
    if (a.hi > b.lo) return true;
    if (a.hi == b.lo) return a.hi_closed || b.lo_closed;
    return false;
}

}  // namespace

KSet::KSet(std::vector<Interval> parts) {
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        if (a.lo_closed != b.lo_closed) return a.lo_closed;
        return a.hi < b.hi;
    });
    for (auto& iv : parts) {
        if (parts_.empty() || !joinable(parts_.back(), iv)) {
            parts_.push_back(iv);
            continue;
        }
        Interval& last = parts_.back();
        if (iv.hi > last.hi) {
            last.hi = iv.hi;
            last.hi_closed = iv.hi_closed;
        } else if (iv.hi == last.hi) {
            last.hi_closed = last.hi_closed || iv.hi_closed;
        }
        if (iv.lo == last.lo) last.lo_closed = last.lo_closed || iv.lo_closed;
    }
}

bool KSet::contains(const Rat& v) const {
    if (!rat_in_unit(v)) throw std::out_of_range("value outside [0,1]");
    for (const auto& iv : parts_)
        if (iv.contains(v)) return true;
    return false;
}

std::vector<Interval> KSet::complement_intervals() const {
    std::vector<Interval> gaps;
    Rat cursor = 0;
    bool cursor_in_gap = true;  // whether `cursor` itself is missing from the set
    for (const auto& iv : parts_) {
        if (iv.lo > cursor || (iv.lo == cursor && cursor_in_gap && !iv.lo_closed)) {
            // A gap ends where this part begins.
            bool hi_closed = !iv.lo_closed;
            if (iv.lo > cursor || hi_closed)
                gaps.push_back(Interval{cursor, iv.lo, cursor_in_gap, hi_closed});
        }
        cursor = iv.hi;
        cursor_in_gap = !iv.hi_closed;
    }
    if (cursor < 1 || (cursor == 1 && cursor_in_gap))
        gaps.push_back(Interval{cursor, Rat(1), cursor_in_gap, true});
    return gaps;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct KParser {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
    }

    char peek() {
        skip_ws();
        if (pos >= text.size()) throw ParseFail("unexpected end of input");
        return text[pos];
    }

    bool done() {
        skip_ws();
        return pos >= text.size();
    }

    void expect(char c) {
        if (peek() != c) throw ParseFail(std::string("expected '") + c + "'");
        pos++;
    }

    [[noreturn]] static void throw_at(const std::string& msg, std::size_t p) {
        throw std::invalid_argument(msg + " (at position " + std::to_string(p) + ")");
    }

    std::invalid_argument ParseFail(const std::string& msg) {
        return std::invalid_argument(msg + " (at position " + std::to_string(pos) + ")");
    }

    Rat rational() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/' ||
                text[pos] == '.'))
            pos++;
        if (start == pos) throw ParseFail("expected a rational");
        Rat v;
        try {
            v = rat_from_string(text.substr(start, pos - start));
        } catch (const std::invalid_argument& e) {
            throw_at(e.what(), start);
        }
        if (!rat_in_unit(v)) throw_at("endpoint outside [0,1]", start);
        return v;
    }

    Interval item() {
        char c = peek();
        if (c == '{') {
            pos++;
            Rat v = rational();
            expect('}');
            return Interval{v, v, true, true};
        }
        if (c != '[' && c != '(') throw ParseFail("expected '{', '[' or '('");
        bool lo_closed = c == '[';
        pos++;
        Rat lo = rational();
        expect(',');
        Rat hi = rational();
        char close = peek();
        if (close != ']' && close != ')') throw ParseFail("expected ']' or ')'");
        bool hi_closed = close == ']';
        std::size_t at = pos;
        pos++;
        if (lo > hi || (lo == hi && !(lo_closed && hi_closed))) throw_at("empty interval", at);
        return Interval{lo, hi, lo_closed, hi_closed};
    }

    KSet parse() {
        skip_ws();
        if (pos + 1 < text.size() && text[pos] == '{' && text[pos + 1] == '}') {
            pos += 2;
            if (!done()) throw ParseFail("trailing input after '{}'");
            return KSet{};
        }
        std::vector<Interval> items;
        items.push_back(item());
        while (!done()) {
            char c = peek();
            if (c != 'u' && c != 'U') throw ParseFail("expected 'u' between intervals");
            pos++;
            items.push_back(item());
        }
        return KSet(std::move(items));
    }
};

}  // namespace

KSet parse_kset(const std::string& text) {
    KParser p{text};
    return p.parse();
}

std::string render_kset(const KSet& k) {
    if (k.empty()) return "{}";
    std::string out;
    for (std::size_t i = 0; i < k.parts().size(); ++i) {
        if (i) out += " u ";
        out += render_interval(k.parts()[i]);
    }
    return out;
}

}  // namespace bltab
