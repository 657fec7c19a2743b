#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bltab {

// Propositional connectives of the input logic: strong conjunction (&),
// implication (->), lattice join/meet (\/, /\), the crispness operator D and
// the involutive negation ~, plus the constants 0 and 1.
enum class Conn {
    Atom,
    Falsum,
    Verum,
    Strong,
    Impl,
    Or,
    And,
    Delta,
    Inv,
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable formula tree. Structural equality; shared subtrees are fine.
class Formula {
  public:
    static FormulaPtr atom(const std::string& name);
    static FormulaPtr falsum();
    static FormulaPtr verum();
    static FormulaPtr strong(FormulaPtr l, FormulaPtr r);
    static FormulaPtr impl(FormulaPtr l, FormulaPtr r);
    static FormulaPtr disj(FormulaPtr l, FormulaPtr r);
    static FormulaPtr conj(FormulaPtr l, FormulaPtr r);
    static FormulaPtr delta(FormulaPtr f);
    static FormulaPtr inv(FormulaPtr f);

    Conn kind() const { return kind_; }
    const std::string& atom_name() const { return name_; }
    const FormulaPtr& lhs() const { return lhs_; }
    const FormulaPtr& rhs() const { return rhs_; }
    std::size_t hash() const { return hash_; }

    bool equals(const Formula& other) const;

    // Collects atom names in first-occurrence order, without duplicates.
    void atoms(std::vector<std::string>& out) const;

  private:
    Formula(Conn k, std::string name, FormulaPtr l, FormulaPtr r);

    Conn kind_;
    std::string name_;
    FormulaPtr lhs_, rhs_;
    std::size_t hash_;
};

inline bool operator==(const Formula& a, const Formula& b) { return a.equals(b); }
inline bool operator!=(const Formula& a, const Formula& b) { return !a.equals(b); }
bool formula_eq(const FormulaPtr& a, const FormulaPtr& b);

// Parse failure, with a 0-based character offset into the input.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

// Grammar (whitespace insignificant):
//   formula := impl
//   impl    := disj ("->" impl)?
//   disj    := conj ("\/" conj)*
//   conj    := strong ("/\" strong)*
//   strong  := unary ("&" unary)*
//   unary   := ("~"|"D") unary | ident | "0" | "1" | "(" formula ")"
//   ident   := [a-z][a-zA-Z0-9_]*
FormulaPtr parse_formula(const std::string& text);

// Minimal-parentheses text; parse_formula(render_formula(f)) == f.
std::string render_formula(const FormulaPtr& f);

}  // namespace bltab
