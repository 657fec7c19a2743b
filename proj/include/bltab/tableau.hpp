#pragma once

#include "bltab/formula.hpp"
#include "bltab/kset.hpp"
#include "bltab/model.hpp"
#include "bltab/solver.hpp"
#include "bltab/term.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bltab {

// One input formula's outstanding Split Rule application: its translated
// term and the eta-disjunctions still sitting in the node, each tagged with
// its 1-based complement-interval index.
struct PendingSplit {
    std::size_t psi_index;  // position of psi in the input list
    TermPtr tau;
    std::vector<std::pair<TableauFormula, std::size_t>> etas;
};

// How a node was produced from its parent; feeds the trace output.
struct Provenance {
    std::string rule;      // split | star.L | star.P | star.min |
                           // impl.all | impl.L | impl.P | impl.min |
                           // delta.1 | delta.2
    std::string case_tag;  // "1".."11", "S={...}", or "" when caseless
    std::string active;    // rendered active term (the split formula for splits)
    std::vector<std::string> added;  // rendered constraints this step added
};

struct Node {
    std::vector<TableauFormula> formulas;  // deduplicated, order-preserving
    ComponentChain chain;
    std::vector<PendingSplit> pending;
    unsigned fresh_counter = 0;  // next component-parameter index on this branch
    std::string id;              // dot path from the root ("1", "1.2", ...)
    std::optional<Provenance> via;
};

// Leaf: nothing left to split and every formula is a pure L0 comparison.
bool is_leaf(const Node& n);

// Root node {eta_{J_i}(tau(psi)) : i in I, psi in Psi} in psi-major order,
// with one pending split per distinct psi (input order). Registers every
// atom in `m` even when the complement is empty.
Node build_root(const std::vector<FormulaPtr>& psis, const KSet& k, TranslationMap& m);

// The 2^|I| Split Rule children for the first pending formula, ordered from
// S = I down to S = {} (descending bitmask; bit k-1 stands for interval k).
// Each chosen comparison replaces its eta-disjunction in place.
// Throws std::logic_error when nothing is pending.
std::vector<Node> split_children(const Node& n);

// Leftmost-outermost interpreted subterm of the first formula that has one:
// formulas in node order, each comparison left side then right side, terms
// in in-order traversal with the crispness symbol visited before its
// argument. Null iff the node is a leaf.
TermPtr select_active(const Node& n);

// One way of placing a fresh (or reused) component of the given label into
// the chain; `constraints` is the case's I^K, already decomposed into
// adjacent atomic comparisons.
struct ComponentCase {
    std::string case_tag;  // "1", "2", "3", "4" or "10"
    std::string a, b;      // parameter names (fresh, or reused for Case 2)
    std::vector<Cmp> constraints;
    ComponentChain chain_after;
    unsigned counter_after;
};

// Cases 1 / 2-per-matching-component / 3-per-gap / 4, or 10 for an empty
// chain, in that order. Case 2 reuses the existing parameter pair of each
// component with the same label. Fresh names are a<k>L/b<k>L or a<k>P/b<k>P
// with k = fresh_counter; alternative cases may share the fresh pair since
// at most one of them survives on any branch.
std::vector<ComponentCase> component_cases(const ComponentChain& chain, CompKind label,
                                           unsigned fresh_counter);

// The placements that force min-behaviour: Cases 5 / 6-per-component /
// 7-per-component / 8-per-gap / 9, or 11 for an empty chain.
struct SeparationCase {
    std::string case_tag;  // "5".."9" or "11"
    std::vector<Cmp> constraints;
};

std::vector<SeparationCase> separation_cases(const ComponentChain& chain, const TermPtr& x,
                                             const TermPtr& y);

// All children of a non-leaf node with no pending splits, in rule-then-case
// order (star: L cases, P cases, min cases; impl: All, L, P, min; delta: 1
// then 2). Each child substitutes the rule's replacement for the active term
// everywhere and appends the rule's constraints. Throws std::logic_error on
// a leaf; throws InternalError when an internal invariant breaks.
std::vector<Node> expand(const Node& n);

enum class VerdictStatus { Satisfiable, Unsatisfiable, Unknown };

struct Verdict {
    VerdictStatus status;
    std::optional<ExtractedModel> model;  // verified, for Satisfiable
    std::optional<Node> leaf;             // the open leaf, for Satisfiable
    std::vector<Provenance> trace;        // root-to-leaf steps, for Satisfiable
    std::vector<std::string> undecided;   // leaf ids + reasons, for Unknown
};

struct ExploreStats {
    std::uint64_t nodes = 0;
    std::uint64_t leaves = 0;
    std::uint64_t solver_calls = 0;
};

struct ExploreConfig {
    SolverConfig solver;
    bool prune = false;               // cut interior nodes with unsolvable L0 part
    std::uint64_t max_nodes = 200000;  // generation cap; exceeding it gives Unknown
    std::ostream* trace = nullptr;    // one structured record per generated edge
    ExploreStats* stats = nullptr;    // counters accumulate here across repeated runs
};

// Depth-first search: splits first, then expansion children in case order.
// The first leaf whose L0 set is solvable and whose extracted model verifies
// wins. Unsatisfiable only when every branch is refuted; any undecided leaf
// (backend Unknown, or a solvable leaf whose extracted model cannot be
// verified) downgrades the answer to Unknown. Verdicts are therefore always
// certified: Satisfiable by the verified model, Unsatisfiable by refutation
// of every leaf.
Verdict explore(const std::vector<FormulaPtr>& psis, const KSet& k, const ExploreConfig& config,
                ExploreStats* stats = nullptr);

}  // namespace bltab
