#pragma once

#include "bltab/formula.hpp"
#include "bltab/kset.hpp"
#include "bltab/rational.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace bltab {

// Constraint-language terms. Var/Param/constants plus {+,-,*,/,min,max} form
// the solvable fragment; TNorm, Resid and DeltaFn are the uninterpreted
// function symbols that tableau expansion eliminates. Terms are immutable and
// compared structurally; no normalization ever reorders arguments, since
// rule substitution is purely syntactic.
enum class TermKind {
    Var,
    Param,
    RatConst,
    Endpoint,  // left/right endpoint constant of a complement interval
    Add,
    Sub,
    Mul,
    Div,
    Min,
    Max,
    TNorm,
    Resid,
    DeltaFn,
};

enum class EndpointSide { Minus, Plus };

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
  public:
    static TermPtr var(const std::string& name);
    static TermPtr param(const std::string& name);
    static TermPtr rat(Rat value);
    static TermPtr rat(long value) { return rat(Rat(value)); }
    // `index` is 1-based, matching the complement interval numbering J_1, J_2, ...
    static TermPtr endpoint(EndpointSide side, std::size_t index);
    static TermPtr add(TermPtr l, TermPtr r);
    static TermPtr sub(TermPtr l, TermPtr r);
    static TermPtr mul(TermPtr l, TermPtr r);
    static TermPtr div(TermPtr l, TermPtr r);
    static TermPtr min(TermPtr l, TermPtr r);
    static TermPtr max(TermPtr l, TermPtr r);
    static TermPtr tnorm(TermPtr l, TermPtr r);
    static TermPtr resid(TermPtr l, TermPtr r);
    static TermPtr delta(TermPtr t);

    TermKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const Rat& value() const { return value_; }
    EndpointSide side() const { return side_; }
    std::size_t endpoint_index() const { return index_; }
    const TermPtr& lhs() const { return lhs_; }
    const TermPtr& rhs() const { return rhs_; }
    std::size_t hash() const { return hash_; }

    bool equals(const Term& other) const;

    // No TNorm/Resid/DeltaFn anywhere below (Endpoint constants are allowed).
    bool is_l0() const { return l0_; }
    bool is_interpreted() const {
        return kind_ == TermKind::TNorm || kind_ == TermKind::Resid || kind_ == TermKind::DeltaFn;
    }
    bool is_binary() const { return static_cast<int>(kind_) >= static_cast<int>(TermKind::Add); }

  private:
    Term() = default;

    TermKind kind_ = TermKind::RatConst;
    std::string name_;
    Rat value_;
    EndpointSide side_ = EndpointSide::Minus;
    std::size_t index_ = 0;
    TermPtr lhs_, rhs_;
    std::size_t hash_ = 0;
    bool l0_ = true;

    static TermPtr make(Term t);
};

bool term_eq(const TermPtr& a, const TermPtr& b);

struct TermHash {
    std::size_t operator()(const TermPtr& t) const { return t ? t->hash() : 0; }
};
struct TermEq {
    bool operator()(const TermPtr& a, const TermPtr& b) const { return term_eq(a, b); }
};
using TermSet = std::unordered_set<TermPtr, TermHash, TermEq>;

// Text form used in traces: * for the t-norm symbol, => for its residuum,
// D for the crispness function; min/max functional, c<i>-/c<i>+ for
// complement endpoints.
std::string render_term(const TermPtr& t);

// ---------------------------------------------------------------------------
// Tableau formulas
// ---------------------------------------------------------------------------

enum class CmpOp { Le, Lt, Eq };

struct Cmp {
    CmpOp op;
    TermPtr lhs, rhs;

    bool is_l0() const { return lhs->is_l0() && rhs->is_l0(); }
    std::size_t hash() const;
    bool operator==(const Cmp& other) const;
};

// Either an atomic comparison or the two-way disjunction produced by the
// root construction (x outside a complement interval). Disjunctions only
// survive until the split phase consumes them.
class TableauFormula {
  public:
    static TableauFormula cmp(CmpOp op, TermPtr lhs, TermPtr rhs);
    static TableauFormula disjunct(Cmp left, Cmp right);

    bool is_disjunct() const { return is_disjunct_; }
    const Cmp& comparison() const { return first_; }
    const Cmp& left() const { return first_; }
    const Cmp& right() const { return second_; }

    bool is_l0() const;
    std::size_t hash() const { return hash_; }
    bool operator==(const TableauFormula& other) const;

  private:
    TableauFormula(bool d, Cmp a, Cmp b);

    bool is_disjunct_;
    Cmp first_, second_;
    std::size_t hash_;
};

struct TableauFormulaHash {
    std::size_t operator()(const TableauFormula& f) const { return f.hash(); }
};

std::string render_cmp(const Cmp& c);
std::string render_tableau_formula(const TableauFormula& f);

// ---------------------------------------------------------------------------
// Translation
// ---------------------------------------------------------------------------

// Stable one-to-one map from atom names to variable names. Kept as an
// explicit object so one solver run shares a single mapping.
class TranslationMap {
  public:
    // Registers the atom if unseen and returns its variable name.
    const std::string& var_for(const std::string& atom);
    std::optional<std::string> atom_for(const std::string& var) const;
    const std::map<std::string, std::string>& atom_to_var() const { return atom_to_var_; }

  private:
    std::map<std::string, std::string> atom_to_var_;
    std::map<std::string, std::string> var_to_atom_;
};

// Structural translation of a formula into a constraint term: constants map
// to 0/1, atoms to their variables, & to TNorm, -> to Resid, \/ and /\ to
// max/min, D to DeltaFn and ~x to 1 - x.
TermPtr translate(const FormulaPtr& f, TranslationMap& m);

// The two-comparison formula stating that `x` lies outside the i-th
// complement interval `j`: (x <left> c_i-) v (c_i+ <right> x), where an end
// of `j` being closed makes the adjacent comparison strict. `index` is the
// 1-based position of `j` in the complement decomposition.
TableauFormula eta(const TermPtr& x, const Interval& j, std::size_t index);

// Replaces every occurrence of the whole subterm `target` by `replacement`.
TermPtr substitute_term(const TermPtr& t, const TermPtr& replacement, const TermPtr& target);
TableauFormula substitute(const TableauFormula& g, const TermPtr& replacement,
                          const TermPtr& target);

// Distinct subterms rooted at TNorm, Resid or DeltaFn.
TermSet interpreted_subterms(const std::vector<TableauFormula>& fs);

// ---------------------------------------------------------------------------
// Ground evaluation
// ---------------------------------------------------------------------------

struct TermEnv {
    const std::map<std::string, Rat>* vars = nullptr;
    const std::map<std::string, Rat>* params = nullptr;
    const std::vector<Interval>* complement = nullptr;  // interprets endpoint constants
};

// Exact evaluation of a solvable-fragment term. Division by zero yields zero,
// matching the standard-structure convention. Throws std::invalid_argument on
// an unbound symbol or an uninterpreted function symbol.
Rat eval_term(const TermPtr& t, const TermEnv& env);

bool eval_cmp(const Cmp& c, const TermEnv& env);
bool eval_tableau_formula(const TableauFormula& f, const TermEnv& env);

}  // namespace bltab
