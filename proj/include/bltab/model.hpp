#pragma once

#include "bltab/formula.hpp"
#include "bltab/kset.hpp"
#include "bltab/rational.hpp"
#include "bltab/solver.hpp"
#include "bltab/term.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bltab {

enum class CompKind { Lukasiewicz, Product };

struct Component {
    Rat lo, hi;
    CompKind kind;

    bool operator==(const Component& o) const {
        return lo == o.lo && hi == o.hi && kind == o.kind;
    }
};

// A continuous t-norm given as an ordinal sum: Lukasiewicz or Product
// behaviour on each listed interval, minimum everywhere else.
struct OrdinalSum {
    std::vector<Component> components;  // sorted by lo; open interiors disjoint
};

// Validates 0 <= lo < hi <= 1 and pairwise disjoint interiors, sorts by lo
// and drops duplicate entries. Throws std::invalid_argument on violation.
OrdinalSum make_ordinal_sum(std::vector<Component> components);

// Ordinal-sum application: the component formula when both arguments lie
// in a common component, minimum otherwise. Arguments must lie in [0,1].
Rat tnorm_apply(const OrdinalSum& t, const Rat& x, const Rat& y);

// The residuum of the ordinal sum: 1 when x <= y, the component co-formula
// when x > y inside a shared component, y otherwise.
Rat residuum_apply(const OrdinalSum& t, const Rat& x, const Rat& y);

struct ExtractedModel {
    OrdinalSum tnorm;
    std::map<std::string, Rat> valuation;  // atom name -> value in [0,1]
    bool exact = true;
    Rat precision = 0;  // radius of the value intervals when not exact
};

// Evaluates a formula in the model with exact rational arithmetic.
// Throws std::invalid_argument when an atom is missing from the valuation.
Rat evaluate(const FormulaPtr& f, const ExtractedModel& m);

// The parameter-name skeleton of the t-norm built along a branch.
struct ChainEntry {
    std::string a, b;
    CompKind kind;

    bool operator==(const ChainEntry& o) const {
        return a == o.a && b == o.b && kind == o.kind;
    }
};
using ComponentChain = std::vector<ChainEntry>;

// Builds the standard model induced by a leaf solution: V(p) = sigma(mu_p) and
// one component per chain entry under rho, with identical entries merged.
// A variable the solution never constrained defaults to 0 (any value would
// do; verification remains mandatory). Missing chain parameters, collapsed
// components (rho(a) >= rho(b)) and interior overlaps throw InternalError:
// the chain constraints make them impossible for a genuine leaf solution.
ExtractedModel extract_model(const Solution& sol, const ComponentChain& chain,
                             const TranslationMap& m);

// True iff every formula evaluates into k. Exact models use rational
// arithmetic; approximate models use interval arithmetic at the declared
// precision and fail closed on undecidable boundary cases. When `why` is
// given it receives the first offending formula and value.
bool verify_model(const std::vector<FormulaPtr>& psis, const KSet& k, const ExtractedModel& m,
                  std::string* why = nullptr);

// The fixed t-norm pool used by the brute-force oracle: pure minimum, L and
// P on [0,1], L on [0,1/2], P on [1/2,1], and the L-P two-component sum.
std::vector<OrdinalSum> default_pool();

// Test oracle: every valuation on the d-grid against every pooled t-norm,
// first verified model wins. Returns nothing when the search space holds no
// witness (which decides nothing).
std::optional<ExtractedModel> grid_oracle(const std::vector<FormulaPtr>& psis, const KSet& k,
                                          unsigned denominator,
                                          const std::vector<OrdinalSum>& pool);

// {"components":[{"lo","hi","kind"}], "valuation":{atom:"p/q"}, "exact":bool}
// with rationals rendered as strings; approximate models add "precision".
nlohmann::ordered_json model_json(const ExtractedModel& m);

}  // namespace bltab
