#pragma once

#include "bltab/formula.hpp"
#include "bltab/rational.hpp"
#include "bltab/tableau.hpp"

#include <string>
#include <vector>

namespace bltab {

// Weak r-satisfiability is K-satisfiability for K = [r,1]; strong for K = {r}.
Verdict weak_r_sat(const std::vector<FormulaPtr>& psis, const Rat& r,
                   const ExploreConfig& config);
Verdict strong_r_sat(const std::vector<FormulaPtr>& psis, const Rat& r,
                     const ExploreConfig& config);

enum class Attained { Yes, No, Unknown };

enum class DegreeMode { Weak, Strong };

// Bracket around the consistency degree (the supremum of the r-satisfiable
// set). `complete` is false when an Unknown verdict stopped the bisection
// before the bracket reached the requested width; `attained` says whether
// the supremum itself was confirmed satisfiable.
struct DegreeBracket {
    Rat lo = 0, hi = 1;
    Attained attained = Attained::Unknown;
    bool complete = false;
    std::string note;
};

// Bisection over r. Weak satisfiability is monotone (K = [r,1] shrinks as r
// grows), so Satisfiable raises lo and Unsatisfiable lowers hi. The strongly
// satisfiable set need not be an interval; there the upper bound moves only
// on a weak refutation (all values = r >= u would make [u,1] satisfiable),
// and a midpoint that is neither strongly satisfiable nor weakly refuted
// stops the search with a partial bracket.
DegreeBracket consistency_degree(const std::vector<FormulaPtr>& psis, DegreeMode mode,
                                 const Rat& tol, const ExploreConfig& config);

}  // namespace bltab
