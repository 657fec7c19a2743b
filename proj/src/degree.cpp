#include "bltab/degree.hpp"

#include <stdexcept>

namespace bltab {

namespace {

KSet upper_set(const Rat& r) { return KSet({make_interval(r, 1, true, true)}); }
KSet point_set(const Rat& r) { return KSet({make_interval(r, r, true, true)}); }

}  // namespace

Verdict weak_r_sat(const std::vector<FormulaPtr>& psis, const Rat& r,
                   const ExploreConfig& config) {
    if (!rat_in_unit(r)) throw std::invalid_argument("r must lie in [0,1]");
    return explore(psis, upper_set(r), config);
}

Verdict strong_r_sat(const std::vector<FormulaPtr>& psis, const Rat& r,
                     const ExploreConfig& config) {
    if (!rat_in_unit(r)) throw std::invalid_argument("r must lie in [0,1]");
    return explore(psis, point_set(r), config);
}

DegreeBracket consistency_degree(const std::vector<FormulaPtr>& psis, DegreeMode mode,
                                 const Rat& tol, const ExploreConfig& config) {
    if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
    const bool weak = mode == DegreeMode::Weak;
    auto sat_at = [&](const Rat& r) { return weak ? weak_r_sat(psis, r, config)
                                                  : strong_r_sat(psis, r, config); };

    DegreeBracket out;

    // Anchor the bracket at the ends before bisecting.
    Verdict at1 = sat_at(Rat(1));
    if (at1.status == VerdictStatus::Satisfiable) {
        out.lo = out.hi = 1;
        out.attained = Attained::Yes;
        out.complete = true;
        return out;
    }
    if (at1.status == VerdictStatus::Unknown && weak) {
        out.note = "r = 1 undecided; bracket incomplete";
        return out;  // [0,1], incomplete
    }
    Verdict at0 = sat_at(Rat(0));
    if (at0.status == VerdictStatus::Unsatisfiable) {
        if (weak) {
            // Weak 0-satisfiability is K = [0,1]-satisfiability, which only
            // an empty Psi... cannot even fail; treat as a degenerate zero.
            out.lo = out.hi = 0;
            out.attained = Attained::No;
            out.complete = true;
            out.note = "not satisfiable at r = 0";
            return out;
        }
        out.note = "not strongly satisfiable at r = 0; the satisfiable set may be "
                   "empty or interior";
    } else if (at0.status == VerdictStatus::Unknown) {
        out.note = "r = 0 undecided";
        if (weak) return out;  // no confirmed anchor at all
    }

    while (out.hi - out.lo > tol) {
        Rat mid = (out.lo + out.hi) / 2;
        Verdict v = sat_at(mid);
        if (v.status == VerdictStatus::Satisfiable) {
            out.lo = mid;
            continue;
        }
        if (weak) {
            if (v.status == VerdictStatus::Unsatisfiable) {
                out.hi = mid;
                continue;
            }
            out.note = "r = " + rat_to_string(mid) + " undecided; bracket incomplete";
            return out;
        }
        // Strong mode: only a weak refutation soundly caps the supremum.
        Verdict wv = weak_r_sat(psis, mid, config);
        if (wv.status == VerdictStatus::Unsatisfiable) {
            out.hi = mid;
            continue;
        }
        out.note = "r = " + rat_to_string(mid) +
                   " neither strongly satisfiable nor weakly refuted; bracket incomplete";
        return out;
    }
    out.complete = true;

    // One extra probe: if the upper end itself is satisfiable it is the
    // supremum (nothing above it is), so the bracket collapses.
    Verdict top = sat_at(out.hi);
    if (top.status == VerdictStatus::Satisfiable) {
        out.lo = out.hi;
        out.attained = Attained::Yes;
    } else if (top.status == VerdictStatus::Unsatisfiable && out.hi == out.lo) {
        out.attained = Attained::No;
    }
    return out;
}

}  // namespace bltab
