#pragma once

#include "bltab/kset.hpp"
#include "bltab/rational.hpp"
#include "bltab/term.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bltab {

// A pure-L0 comparison system over [0,1]-valued variables and parameters.
// Endpoint constants are already inlined as rationals.
struct ConstraintSet {
    std::vector<Cmp> atoms;
    std::vector<std::string> vars;    // first-occurrence order
    std::vector<std::string> params;  // first-occurrence order

    // Rejects disjunct and non-L0 formulas; inlines c_i± using `complement`.
    static ConstraintSet from_formulas(const std::vector<TableauFormula>& fs,
                                       const std::vector<Interval>& complement);
};

struct Solution {
    std::map<std::string, Rat> sigma;  // variables
    std::map<std::string, Rat> rho;    // parameters
    bool exact = true;
    Rat precision = 0;  // half-width of the value intervals when not exact
};

enum class SolveStatus { Sat, Unsat, Unknown };

struct SolverResult {
    SolveStatus status;
    std::optional<Solution> solution;
    std::string reason;
};

enum class Backend { Smt, Grid };

struct SolverConfig {
    Backend backend = Backend::Grid;
    std::string smt_cmd;  // external solver command line, e.g. "z3 -in"
    int timeout_ms = 10000;
    unsigned grid_denominator = 4;
    std::uint64_t grid_budget = 200000;  // partial-assignment extensions
};

// Decides the system. Sat answers carry a solution that has been re-checked;
// Unsat is returned only on a sound proof (ground evaluation, bound
// propagation, or the external backend); otherwise Unknown.
SolverResult check_constraints(const ConstraintSet& e, const SolverConfig& config);

// Deterministic SMT-LIB 2 (QF_NRA) rendering of the system: [0,1] bounds on
// every symbol, min/max as ite, each division replaced by a guarded fresh
// quotient so that u/0 = 0.
std::string encode(const ConstraintSet& e);

// Exhaustive search over the d-grid {0, 1/d, ..., 1}, parameters first,
// pruning partial assignments. Sat-only: failure to find a hit is Unknown.
SolverResult grid_search(const ConstraintSet& e, unsigned denominator, std::uint64_t budget);

// ---------------------------------------------------------------------------
// Interval bound propagation (the sound Unsat screen; exposed for tests)
// ---------------------------------------------------------------------------

// One-sided bound. `inf` marks −∞ for lows / +∞ for highs; `open` marks a
// strict bound.
struct BoundVal {
    bool inf = false;
    Rat v = 0;
    bool open = false;
};

struct SymRange {
    BoundVal lo, hi;  // lo.inf means unbounded below, hi.inf unbounded above
};

struct Propagation {
    bool contradiction = false;
    std::string culprit;  // rendered comparison that emptied a range
    // Kept separate: a variable and a parameter may share a name.
    std::map<std::string, SymRange> var_ranges;
    std::map<std::string, SymRange> param_ranges;
};

// Fixpoint forward/backward interval propagation over the comparisons,
// starting from [0,1] for every symbol. A contradiction is a sound Unsat.
Propagation propagate_bounds(const ConstraintSet& e);

}  // namespace bltab
