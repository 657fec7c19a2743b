#pragma once

#include "bltab/rational.hpp"

#include <string>
#include <vector>

namespace bltab {

// Nonempty subinterval of [0,1] with rational endpoints and open/closed flags.
// A singleton {x} is stored as [x,x] with both ends closed.
struct Interval {
    Rat lo, hi;
    bool lo_closed = true;
    bool hi_closed = true;

    bool contains(const Rat& v) const;
    bool is_singleton() const { return lo == hi; }
    bool operator==(const Interval& other) const;
};

// Validates the Interval invariants (bounds in [0,1], nonempty). Throws
// std::invalid_argument on violation.
Interval make_interval(Rat lo, Rat hi, bool lo_closed, bool hi_closed);

std::string render_interval(const Interval& iv);

// Truth-value set: a finite union of intervals, kept canonical — parts
// pairwise disjoint, sorted ascending, and never adjacent (two parts whose
// union is itself an interval get merged).
class KSet {
  public:
    KSet() = default;
    explicit KSet(std::vector<Interval> parts);  // canonicalizes

    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }

    // Membership respecting open/closed flags. v must lie in [0,1].
    bool contains(const Rat& v) const;

    // The pairwise disjoint maximal subintervals covering [0,1] minus this
    // set, sorted ascending. Empty gaps are dropped; point gaps appear as
    // singletons.
    std::vector<Interval> complement_intervals() const;

    bool operator==(const KSet& other) const { return parts_ == other.parts_; }

  private:
    std::vector<Interval> parts_;
};

// Grammar: kset := "{}" | item ("u" item)* ;
//          item := "{" rat "}" | ("["|"(") rat "," rat ("]"|")") ;
//          rat  := int ("/" int)? | decimal
KSet parse_kset(const std::string& text);

std::string render_kset(const KSet& k);

}  // namespace bltab
