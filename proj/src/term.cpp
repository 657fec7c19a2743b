#include "bltab/term.hpp"

#include <stdexcept>

namespace bltab {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t kind_salt(TermKind k) {
    return 0x51ed2700u + static_cast<std::size_t>(k) * 0x9e3779b9u;
}

}  // namespace

TermPtr Term::make(Term t) {
    std::size_t h = kind_salt(t.kind_);
    bool l0 = true;
    switch (t.kind_) {
        case TermKind::Var:
        case TermKind::Param:
            h = mix(h, std::hash<std::string>{}(t.name_));
            break;
        case TermKind::RatConst:
            h = mix(h, rat_hash(t.value_));
            break;
        case TermKind::Endpoint:
            h = mix(h, t.side_ == EndpointSide::Minus ? 1u : 2u);
            h = mix(h, t.index_);
            break;
        case TermKind::DeltaFn:
            h = mix(h, t.lhs_->hash());
            l0 = false;
            break;
        default:
            h = mix(h, t.lhs_->hash());
            h = mix(h, t.rhs_->hash());
            l0 = t.lhs_->is_l0() && t.rhs_->is_l0() &&
                 t.kind_ != TermKind::TNorm && t.kind_ != TermKind::Resid;
            break;
    }
    t.hash_ = h;
    t.l0_ = l0;
    return TermPtr(new Term(std::move(t)));
}

TermPtr Term::var(const std::string& name) {
    Term t;
    t.kind_ = TermKind::Var;
    t.name_ = name;
    return make(std::move(t));
}

TermPtr Term::param(const std::string& name) {
    Term t;
    t.kind_ = TermKind::Param;
    t.name_ = name;
    return make(std::move(t));
}

TermPtr Term::rat(Rat value) {
    Term t;
    t.kind_ = TermKind::RatConst;
    t.value_ = std::move(value);
    return make(std::move(t));
}

TermPtr Term::endpoint(EndpointSide side, std::size_t index) {
    Term t;
    t.kind_ = TermKind::Endpoint;
    t.side_ = side;
    t.index_ = index;
    return make(std::move(t));
}

#define BLTAB_BINARY_FACTORY(fn, K)                        \
    TermPtr Term::fn(TermPtr l, TermPtr r) {               \
        if (!l || !r)                                      \
            throw std::invalid_argument("null operand");   \
        Term t;                                            \
        t.kind_ = TermKind::K;                             \
        t.lhs_ = std::move(l);                             \
        t.rhs_ = std::move(r);                             \
        return make(std::move(t));                         \
    }

BLTAB_BINARY_FACTORY(add, Add)
BLTAB_BINARY_FACTORY(sub, Sub)
BLTAB_BINARY_FACTORY(mul, Mul)
BLTAB_BINARY_FACTORY(div, Div)
BLTAB_BINARY_FACTORY(min, Min)
BLTAB_BINARY_FACTORY(max, Max)
BLTAB_BINARY_FACTORY(tnorm, TNorm)
BLTAB_BINARY_FACTORY(resid, Resid)
#undef BLTAB_BINARY_FACTORY

TermPtr Term::delta(TermPtr t) {
    if (!t) throw std::invalid_argument("null operand");
    Term d;
    d.kind_ = TermKind::DeltaFn;
    d.lhs_ = std::move(t);
    return make(std::move(d));
}

bool Term::equals(const Term& other) const {
    if (this == &other) return true;
    if (kind_ != other.kind_ || hash_ != other.hash_) return false;
    switch (kind_) {
        case TermKind::Var:
        case TermKind::Param:
            return name_ == other.name_;
        case TermKind::RatConst:
            return value_ == other.value_;
        case TermKind::Endpoint:
            return side_ == other.side_ && index_ == other.index_;
        case TermKind::DeltaFn:
            return term_eq(lhs_, other.lhs_);
        default:
            return term_eq(lhs_, other.lhs_) && term_eq(rhs_, other.rhs_);
    }
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->equals(*b);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

// => binds loosest and associates right; * covers both the t-norm and plain
// multiplication, matching the trace notation.
int term_prec(TermKind k) {
    switch (k) {
        case TermKind::Resid: return 1;
        case TermKind::Add:
        case TermKind::Sub: return 2;
        case TermKind::Mul:
        case TermKind::Div:
        case TermKind::TNorm: return 3;
        case TermKind::DeltaFn: return 4;
        default: return 5;
    }
}

void render_into(const TermPtr& t, int min_prec, std::string& out) {
    const int prec = term_prec(t->kind());
    switch (t->kind()) {
        case TermKind::Var:
        case TermKind::Param:
            out += t->name();
            return;
        case TermKind::RatConst:
            out += rat_to_string(t->value());
            return;
        case TermKind::Endpoint:
            out += 'c';
            out += std::to_string(t->endpoint_index());
            out += t->side() == EndpointSide::Minus ? '-' : '+';
            return;
        case TermKind::Min:
        case TermKind::Max:
            out += t->kind() == TermKind::Min ? "min(" : "max(";
            render_into(t->lhs(), 0, out);
            out += ", ";
            render_into(t->rhs(), 0, out);
            out += ')';
            return;
        case TermKind::DeltaFn: {
            const bool paren = prec < min_prec;
            if (paren) out += '(';
            out += "D ";
            render_into(t->lhs(), prec, out);
            if (paren) out += ')';
            return;
        }
        default: {
            const char* op = nullptr;
            switch (t->kind()) {
                case TermKind::Add: op = " + "; break;
                case TermKind::Sub: op = " - "; break;
                case TermKind::Mul:
                case TermKind::TNorm: op = " * "; break;
                case TermKind::Div: op = " / "; break;
                case TermKind::Resid: op = " => "; break;
                default: break;
            }
            const bool paren = prec < min_prec;
            const bool right_assoc = t->kind() == TermKind::Resid;
            if (paren) out += '(';
            render_into(t->lhs(), right_assoc ? prec + 1 : prec, out);
            out += op;
            render_into(t->rhs(), right_assoc ? prec : prec + 1, out);
            if (paren) out += ')';
            return;
        }
    }
}

}  // namespace

std::string render_term(const TermPtr& t) {
    std::string out;
    render_into(t, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Tableau formulas
// ---------------------------------------------------------------------------

std::size_t Cmp::hash() const {
    std::size_t h = 0x7ab1e500u + static_cast<std::size_t>(op);
    h = mix(h, lhs ? lhs->hash() : 0);
    h = mix(h, rhs ? rhs->hash() : 0);
    return h;
}

bool Cmp::operator==(const Cmp& other) const {
    return op == other.op && term_eq(lhs, other.lhs) && term_eq(rhs, other.rhs);
}

TableauFormula::TableauFormula(bool d, Cmp a, Cmp b)
    : is_disjunct_(d), first_(std::move(a)), second_(std::move(b)) {
    hash_ = mix(is_disjunct_ ? 0xd15ca7e5u : 0xc03b1a7eu, first_.hash());
    if (is_disjunct_) hash_ = mix(hash_, second_.hash());
}

TableauFormula TableauFormula::cmp(CmpOp op, TermPtr lhs, TermPtr rhs) {
    if (!lhs || !rhs) throw std::invalid_argument("null comparison operand");
    Cmp c{op, std::move(lhs), std::move(rhs)};
    return TableauFormula(false, c, Cmp{CmpOp::Le, nullptr, nullptr});
}

TableauFormula TableauFormula::disjunct(Cmp left, Cmp right) {
    return TableauFormula(true, std::move(left), std::move(right));
}

bool TableauFormula::is_l0() const {
    if (!first_.is_l0()) return false;
    return !is_disjunct_ || second_.is_l0();
}

bool TableauFormula::operator==(const TableauFormula& other) const {
    if (is_disjunct_ != other.is_disjunct_ || hash_ != other.hash_) return false;
    if (!(first_ == other.first_)) return false;
    return !is_disjunct_ || second_ == other.second_;
}

namespace {
const char* cmp_op_text(CmpOp op) {
    switch (op) {
        case CmpOp::Le: return " <= ";
        case CmpOp::Lt: return " < ";
        default: return " = ";
    }
}
}  // namespace

std::string render_cmp(const Cmp& c) {
    return render_term(c.lhs) + cmp_op_text(c.op) + render_term(c.rhs);
}

std::string render_tableau_formula(const TableauFormula& f) {
    if (!f.is_disjunct()) return render_cmp(f.comparison());
    return render_cmp(f.left()) + " v " + render_cmp(f.right());
}

// ---------------------------------------------------------------------------
// Translation
// ---------------------------------------------------------------------------

const std::string& TranslationMap::var_for(const std::string& atom) {
    auto it = atom_to_var_.find(atom);
    if (it != atom_to_var_.end()) return it->second;
    // Identity naming keeps traces readable; injectivity is inherited.
    auto [pos, inserted] = atom_to_var_.emplace(atom, atom);
    var_to_atom_.emplace(pos->second, atom);
    return pos->second;
}

std::optional<std::string> TranslationMap::atom_for(const std::string& var) const {
    auto it = var_to_atom_.find(var);
    if (it == var_to_atom_.end()) return std::nullopt;
    return it->second;
}

TermPtr translate(const FormulaPtr& f, TranslationMap& m) {
    switch (f->kind()) {
        case Conn::Atom: return Term::var(m.var_for(f->atom_name()));
        case Conn::Falsum: return Term::rat(0);
        case Conn::Verum: return Term::rat(1);
        case Conn::Strong: return Term::tnorm(translate(f->lhs(), m), translate(f->rhs(), m));
        case Conn::Impl: return Term::resid(translate(f->lhs(), m), translate(f->rhs(), m));
        case Conn::Or: return Term::max(translate(f->lhs(), m), translate(f->rhs(), m));
        case Conn::And: return Term::min(translate(f->lhs(), m), translate(f->rhs(), m));
        case Conn::Delta: return Term::delta(translate(f->lhs(), m));
        case Conn::Inv: return Term::sub(Term::rat(1), translate(f->lhs(), m));
    }
    throw std::logic_error("unreachable connective");
}

TableauFormula eta(const TermPtr& x, const Interval& j, std::size_t index) {
    // A closed end of the complement interval must be excluded strictly.
    Cmp below{j.lo_closed ? CmpOp::Lt : CmpOp::Le, x, Term::endpoint(EndpointSide::Minus, index)};
    Cmp above{j.hi_closed ? CmpOp::Lt : CmpOp::Le, Term::endpoint(EndpointSide::Plus, index), x};
    return TableauFormula::disjunct(std::move(below), std::move(above));
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

TermPtr substitute_term(const TermPtr& t, const TermPtr& replacement, const TermPtr& target) {
    if (term_eq(t, target)) return replacement;
    switch (t->kind()) {
        case TermKind::Var:
        case TermKind::Param:
        case TermKind::RatConst:
        case TermKind::Endpoint:
            return t;
        case TermKind::DeltaFn: {
            TermPtr sub = substitute_term(t->lhs(), replacement, target);
            return sub == t->lhs() ? t : Term::delta(std::move(sub));
        }
        default: {
            TermPtr l = substitute_term(t->lhs(), replacement, target);
            TermPtr r = substitute_term(t->rhs(), replacement, target);
            if (l == t->lhs() && r == t->rhs()) return t;
            switch (t->kind()) {
                case TermKind::Add: return Term::add(std::move(l), std::move(r));
                case TermKind::Sub: return Term::sub(std::move(l), std::move(r));
                case TermKind::Mul: return Term::mul(std::move(l), std::move(r));
                case TermKind::Div: return Term::div(std::move(l), std::move(r));
                case TermKind::Min: return Term::min(std::move(l), std::move(r));
                case TermKind::Max: return Term::max(std::move(l), std::move(r));
                case TermKind::TNorm: return Term::tnorm(std::move(l), std::move(r));
                default: return Term::resid(std::move(l), std::move(r));
            }
        }
    }
}

namespace {
Cmp substitute_cmp(const Cmp& c, const TermPtr& replacement, const TermPtr& target) {
    return Cmp{c.op, substitute_term(c.lhs, replacement, target),
               substitute_term(c.rhs, replacement, target)};
}
}  // namespace

TableauFormula substitute(const TableauFormula& g, const TermPtr& replacement,
                          const TermPtr& target) {
    if (g.is_disjunct()) {
        return TableauFormula::disjunct(substitute_cmp(g.left(), replacement, target),
                                        substitute_cmp(g.right(), replacement, target));
    }
    Cmp c = substitute_cmp(g.comparison(), replacement, target);
    return TableauFormula::cmp(c.op, std::move(c.lhs), std::move(c.rhs));
}

// ---------------------------------------------------------------------------
// Interpreted subterms
// ---------------------------------------------------------------------------

namespace {
void collect_interpreted(const TermPtr& t, TermSet& out) {
    if (t->is_interpreted()) out.insert(t);
    switch (t->kind()) {
        case TermKind::Var:
        case TermKind::Param:
        case TermKind::RatConst:
        case TermKind::Endpoint:
            return;
        case TermKind::DeltaFn:
            collect_interpreted(t->lhs(), out);
            return;
        default:
            collect_interpreted(t->lhs(), out);
            collect_interpreted(t->rhs(), out);
            return;
    }
}
}  // namespace

TermSet interpreted_subterms(const std::vector<TableauFormula>& fs) {
    TermSet out;
    for (const auto& f : fs) {
        if (f.is_disjunct()) {
            collect_interpreted(f.left().lhs, out);
            collect_interpreted(f.left().rhs, out);
            collect_interpreted(f.right().lhs, out);
            collect_interpreted(f.right().rhs, out);
        } else {
            collect_interpreted(f.comparison().lhs, out);
            collect_interpreted(f.comparison().rhs, out);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ground evaluation
// ---------------------------------------------------------------------------

namespace {
[[noreturn]] void eval_fail(const std::string& what) { throw std::invalid_argument(what); }
}  // namespace

Rat eval_term(const TermPtr& t, const TermEnv& env) {
    switch (t->kind()) {
        case TermKind::Var: {
            if (env.vars) {
                auto it = env.vars->find(t->name());
                if (it != env.vars->end()) return it->second;
            }
            eval_fail("unbound variable " + t->name());
        }
        case TermKind::Param: {
            if (env.params) {
                auto it = env.params->find(t->name());
                if (it != env.params->end()) return it->second;
            }
            eval_fail("unbound parameter " + t->name());
        }
        case TermKind::RatConst:
            return t->value();
        case TermKind::Endpoint: {
            if (!env.complement || t->endpoint_index() == 0 ||
                t->endpoint_index() > env.complement->size()) {
                eval_fail("endpoint constant c" + std::to_string(t->endpoint_index()) +
                          " has no interval");
            }
            const Interval& j = (*env.complement)[t->endpoint_index() - 1];
            return t->side() == EndpointSide::Minus ? j.lo : j.hi;
        }
        case TermKind::Add: return eval_term(t->lhs(), env) + eval_term(t->rhs(), env);
        case TermKind::Sub: return eval_term(t->lhs(), env) - eval_term(t->rhs(), env);
        case TermKind::Mul: return eval_term(t->lhs(), env) * eval_term(t->rhs(), env);
        case TermKind::Div: {
            Rat num = eval_term(t->lhs(), env);
            Rat den = eval_term(t->rhs(), env);
            if (den == 0) return Rat(0);  // x / 0 = 0 by convention
            return num / den;
        }
        case TermKind::Min: {
            Rat a = eval_term(t->lhs(), env), b = eval_term(t->rhs(), env);
            return a <= b ? a : b;
        }
        case TermKind::Max: {
            Rat a = eval_term(t->lhs(), env), b = eval_term(t->rhs(), env);
            return a >= b ? a : b;
        }
        default:
            eval_fail("uninterpreted function symbol in ground evaluation: " + render_term(t));
    }
}

bool eval_cmp(const Cmp& c, const TermEnv& env) {
    Rat l = eval_term(c.lhs, env);
    Rat r = eval_term(c.rhs, env);
    switch (c.op) {
        case CmpOp::Le: return l <= r;
        case CmpOp::Lt: return l < r;
        default: return l == r;
    }
}

bool eval_tableau_formula(const TableauFormula& f, const TermEnv& env) {
    if (!f.is_disjunct()) return eval_cmp(f.comparison(), env);
    return eval_cmp(f.left(), env) || eval_cmp(f.right(), env);
}

}  // namespace bltab
