#include "bltab/solver.hpp"

#include "bltab/error.hpp"
#include "bltab/smt_client.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace bltab {

namespace {

// ---------------------------------------------------------------------------
// Extended-value interval arithmetic.
//
// Bounds carry an infinity class (-1/0/+1), a rational value and an openness
// flag. Openness is propagated exactly through +, -, min and max; products
// and quotients fall back to closed bounds, which only widens the enclosure
// and therefore keeps every refutation sound.
// ---------------------------------------------------------------------------

struct Ext {
    int cls = 0;  // -1: -infinity, 0: finite, +1: +infinity
    Rat v = 0;
    bool open = false;
};

Ext ext_ninf() { return {-1, 0, false}; }
Ext ext_pinf() { return {1, 0, false}; }
Ext ext_fin(Rat v, bool open = false) { return {0, std::move(v), open}; }

// Orders by magnitude only; openness is not part of the order.
int ext_cmp(const Ext& a, const Ext& b) {
    if (a.cls != b.cls) return a.cls < b.cls ? -1 : 1;
    if (a.cls != 0) return 0;
    return cmp(a.v, b.v);
}

bool ext_same(const Ext& a, const Ext& b) {
    return a.cls == b.cls && a.open == b.open && (a.cls != 0 || a.v == b.v);
}

struct IV {
    Ext lo, hi;
};

IV iv_point(Rat v) { return {ext_fin(v), ext_fin(v)}; }
IV iv_unit() { return {ext_fin(0), ext_fin(1)}; }
IV iv_top() { return {ext_ninf(), ext_pinf()}; }

bool iv_empty(const IV& a) {
    int c = ext_cmp(a.lo, a.hi);
    return c > 0 || (c == 0 && (a.lo.open || a.hi.open));
}

bool iv_same(const IV& a, const IV& b) { return ext_same(a.lo, b.lo) && ext_same(a.hi, b.hi); }

IV iv_intersect(const IV& a, const IV& b) {
    IV r;
    int cl = ext_cmp(a.lo, b.lo);
    r.lo = cl > 0 ? a.lo : cl < 0 ? b.lo : Ext{a.lo.cls, a.lo.v, a.lo.open || b.lo.open};
    int ch = ext_cmp(a.hi, b.hi);
    r.hi = ch < 0 ? a.hi : ch > 0 ? b.hi : Ext{a.hi.cls, a.hi.v, a.hi.open || b.hi.open};
    return r;
}

IV iv_hull(const IV& a, const IV& b) {
    IV r;
    int cl = ext_cmp(a.lo, b.lo);
    r.lo = cl < 0 ? a.lo : cl > 0 ? b.lo : Ext{a.lo.cls, a.lo.v, a.lo.open && b.lo.open};
    int ch = ext_cmp(a.hi, b.hi);
    r.hi = ch > 0 ? a.hi : ch < 0 ? b.hi : Ext{a.hi.cls, a.hi.v, a.hi.open && b.hi.open};
    return r;
}

Ext ext_add(const Ext& a, const Ext& b) {
    if (a.cls != 0) return {a.cls, 0, false};
    if (b.cls != 0) return {b.cls, 0, false};
    return {0, a.v + b.v, a.open || b.open};
}

Ext ext_neg(const Ext& a) { return {-a.cls, -a.v, a.open}; }

IV iv_add(const IV& a, const IV& b) { return {ext_add(a.lo, b.lo), ext_add(a.hi, b.hi)}; }
IV iv_sub(const IV& a, const IV& b) {
    return {ext_add(a.lo, ext_neg(b.hi)), ext_add(a.hi, ext_neg(b.lo))};
}

int ext_sign(const Ext& a) {
    if (a.cls != 0) return a.cls;
    return sgn(a.v);
}

// Corner product with the 0 * inf = 0 convention used for interval bounds.
Ext ext_mul(const Ext& a, const Ext& b) {
    int sa = ext_sign(a), sb = ext_sign(b);
    if (a.cls != 0 || b.cls != 0) {
        if (sa == 0 || sb == 0) return ext_fin(0);
        return sa * sb > 0 ? ext_pinf() : ext_ninf();
    }
    return ext_fin(a.v * b.v);
}

IV iv_mul(const IV& a, const IV& b) {
    Ext c[4] = {ext_mul(a.lo, b.lo), ext_mul(a.lo, b.hi), ext_mul(a.hi, b.lo),
                ext_mul(a.hi, b.hi)};
    IV r{c[0], c[0]};
    for (int i = 1; i < 4; ++i) {
        if (ext_cmp(c[i], r.lo) < 0) r.lo = c[i];
        if (ext_cmp(c[i], r.hi) > 0) r.hi = c[i];
    }
    return r;
}

bool iv_contains_zero(const IV& a) {
    bool lo_ok = a.lo.cls == -1 || (a.lo.cls == 0 && (a.lo.v < 0 || (a.lo.v == 0 && !a.lo.open)));
    bool hi_ok = a.hi.cls == 1 || (a.hi.cls == 0 && (a.hi.v > 0 || (a.hi.v == 0 && !a.hi.open)));
    return lo_ok && hi_ok;
}

// x / y under the convention that a zero denominator gives quotient 0: the
// usual sign-split division, hulled with {0} whenever 0 lies in y's range.
IV iv_div(const IV& x, const IV& y) {
    bool have = false;
    IV acc;
    auto put = [&](const IV& part) {
        acc = have ? iv_hull(acc, part) : part;
        have = true;
    };
    if (y.hi.cls == 1 || (y.hi.cls == 0 && y.hi.v > 0)) {  // positive slice of y
        Ext rlo = y.hi.cls == 1 ? ext_fin(0) : ext_fin(Rat(1) / y.hi.v);
        Ext rhi = (y.lo.cls == 0 && y.lo.v > 0) ? ext_fin(Rat(1) / y.lo.v) : ext_pinf();
        put(iv_mul(x, IV{rlo, rhi}));
    }
    if (y.lo.cls == -1 || (y.lo.cls == 0 && y.lo.v < 0)) {  // negative slice of y
        Ext rhi = y.lo.cls == -1 ? ext_fin(0) : ext_fin(Rat(1) / y.lo.v);
        Ext rlo = (y.hi.cls == 0 && y.hi.v < 0) ? ext_fin(Rat(1) / y.hi.v) : ext_ninf();
        put(iv_mul(x, IV{rlo, rhi}));
    }
    if (iv_contains_zero(y)) put(iv_point(0));
    if (!have) return iv_point(0);
    return acc;
}

IV iv_min(const IV& a, const IV& b) {
    IV r;
    int cl = ext_cmp(a.lo, b.lo);
    r.lo = cl < 0 ? a.lo : cl > 0 ? b.lo : Ext{a.lo.cls, a.lo.v, a.lo.open && b.lo.open};
    int ch = ext_cmp(a.hi, b.hi);
    r.hi = ch < 0 ? a.hi : ch > 0 ? b.hi : Ext{a.hi.cls, a.hi.v, a.hi.open || b.hi.open};
    return r;
}

IV iv_max(const IV& a, const IV& b) {
    IV r;
    int cl = ext_cmp(a.lo, b.lo);
    r.lo = cl > 0 ? a.lo : cl < 0 ? b.lo : Ext{a.lo.cls, a.lo.v, a.lo.open || b.lo.open};
    int ch = ext_cmp(a.hi, b.hi);
    r.hi = ch > 0 ? a.hi : ch < 0 ? b.hi : Ext{a.hi.cls, a.hi.v, a.hi.open && b.hi.open};
    return r;
}

// `a` provably exceeds `b`: every value >= a is greater than every value <= b.
bool ext_above(const Ext& a, const Ext& b) {
    int c = ext_cmp(a, b);
    return c > 0 || (c == 0 && (a.open || b.open));
}

// ---------------------------------------------------------------------------
// Propagation state
// ---------------------------------------------------------------------------

struct PropState {
    std::map<std::string, IV> vr;  // variable ranges
    std::map<std::string, IV> pr;  // parameter ranges
    bool changed = false;
    bool contradiction = false;
    std::string culprit;
};

IV feval(const TermPtr& t, const PropState& st) {
    switch (t->kind()) {
        case TermKind::Var:
            return st.vr.at(t->name());
        case TermKind::Param:
            return st.pr.at(t->name());
        case TermKind::RatConst:
            return iv_point(t->value());
        case TermKind::Add:
            return iv_add(feval(t->lhs(), st), feval(t->rhs(), st));
        case TermKind::Sub:
            return iv_sub(feval(t->lhs(), st), feval(t->rhs(), st));
        case TermKind::Mul:
            return iv_mul(feval(t->lhs(), st), feval(t->rhs(), st));
        case TermKind::Div:
            return iv_div(feval(t->lhs(), st), feval(t->rhs(), st));
        case TermKind::Min:
            return iv_min(feval(t->lhs(), st), feval(t->rhs(), st));
        case TermKind::Max:
            return iv_max(feval(t->lhs(), st), feval(t->rhs(), st));
        default:
            throw InternalError("interval evaluation reached a non-L0 term: " + render_term(t));
    }
}

// Caps the size of a stored bound endpoint. Repeated narrowing through
// products and quotients can square the endpoint's numerator and denominator
// every sweep; beyond ~128 bits the bound is rounded outward onto the 2^-64
// dyadic grid, trading a little tightness for guaranteed termination.
Ext ext_cap(const Ext& e, bool is_lo) {
    if (e.cls != 0) return e;
    std::size_t bits = mpz_sizeinbase(e.v.get_num().get_mpz_t(), 2) +
                       mpz_sizeinbase(e.v.get_den().get_mpz_t(), 2);
    if (bits <= 128) return e;
    static const mpz_class kScale = mpz_class(1) << 64;
    mpz_class num = e.v.get_num() * kScale, q;
    if (is_lo)
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), e.v.get_den().get_mpz_t());
    else
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), e.v.get_den().get_mpz_t());
    return ext_fin(Rat(q, kScale), false);  // closed: never tighter than `e`
}

// Narrows the range of `t` to `target`. Only +, -, min and max push bounds
// down to their arguments; products and quotients stop the descent, which is
// sound because it merely keeps the children's enclosures wider.
void backward(const TermPtr& t, const IV& target, PropState& st) {
    if (st.contradiction) return;
    IV cur = feval(t, st);
    IV nw = iv_intersect(cur, target);
    if (iv_empty(nw)) {
        st.contradiction = true;
        return;
    }
    switch (t->kind()) {
        case TermKind::Var:
        case TermKind::Param: {
            auto& slot = t->kind() == TermKind::Var ? st.vr.at(t->name()) : st.pr.at(t->name());
            // Round oversized endpoints outward, then re-intersect with the
            // stored range so narrowing stays monotone.
            IV capped = iv_intersect(slot, IV{ext_cap(nw.lo, true), ext_cap(nw.hi, false)});
            if (!iv_same(slot, capped)) {
                slot = capped;
                st.changed = true;
            }
            return;
        }
        case TermKind::RatConst:
            return;  // emptiness was already checked above
        case TermKind::Add: {
            IV fl = feval(t->lhs(), st), fr = feval(t->rhs(), st);
            backward(t->lhs(), iv_sub(nw, fr), st);
            backward(t->rhs(), iv_sub(nw, fl), st);
            return;
        }
        case TermKind::Sub: {
            IV fl = feval(t->lhs(), st), fr = feval(t->rhs(), st);
            backward(t->lhs(), iv_add(nw, fr), st);
            backward(t->rhs(), iv_sub(fl, nw), st);
            return;
        }
        case TermKind::Min: {
            IV fo = feval(t->rhs(), st);
            IV tgt{nw.lo, ext_pinf()};
            if (ext_above(fo.lo, nw.hi)) tgt.hi = nw.hi;  // the other arg is too big
            backward(t->lhs(), tgt, st);
            fo = feval(t->lhs(), st);
            tgt = IV{nw.lo, ext_pinf()};
            if (ext_above(fo.lo, nw.hi)) tgt.hi = nw.hi;
            backward(t->rhs(), tgt, st);
            return;
        }
        case TermKind::Max: {
            IV fo = feval(t->rhs(), st);
            IV tgt{ext_ninf(), nw.hi};
            if (ext_above(nw.lo, fo.hi)) tgt.lo = nw.lo;  // the other arg is too small
            backward(t->lhs(), tgt, st);
            fo = feval(t->lhs(), st);
            tgt = IV{ext_ninf(), nw.hi};
            if (ext_above(nw.lo, fo.hi)) tgt.lo = nw.lo;
            backward(t->rhs(), tgt, st);
            return;
        }
        case TermKind::Mul:
        case TermKind::Div:
            return;
        default:
            throw InternalError("interval narrowing reached a non-L0 term: " + render_term(t));
    }
}

// Enclosures prove the comparison false for every point in them.
bool refuted(CmpOp op, const IV& l, const IV& r) {
    switch (op) {
        case CmpOp::Le:
            return ext_above(l.lo, r.hi);
        case CmpOp::Lt:
            return ext_cmp(l.lo, r.hi) >= 0;
        case CmpOp::Eq:
            return ext_above(l.lo, r.hi) || ext_above(r.lo, l.hi);
    }
    return false;
}

PropState run_propagation(const ConstraintSet& e) {
    PropState st;
    for (const auto& v : e.vars) st.vr.emplace(v, iv_unit());
    for (const auto& p : e.params) st.pr.emplace(p, iv_unit());
    const int kMaxSweeps = 30;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        st.changed = false;
        for (const Cmp& c : e.atoms) {
            IV l = feval(c.lhs, st), r = feval(c.rhs, st);
            if (refuted(c.op, l, r)) {
                st.contradiction = true;
                st.culprit = render_cmp(c);
                return st;
            }
            switch (c.op) {
                case CmpOp::Le:
                    backward(c.lhs, IV{ext_ninf(), r.hi}, st);
                    backward(c.rhs, IV{l.lo, ext_pinf()}, st);
                    break;
                case CmpOp::Lt: {
                    Ext hi = r.hi, lo = l.lo;
                    if (hi.cls == 0) hi.open = true;
                    if (lo.cls == 0) lo.open = true;
                    backward(c.lhs, IV{ext_ninf(), hi}, st);
                    backward(c.rhs, IV{lo, ext_pinf()}, st);
                    break;
                }
                case CmpOp::Eq: {
                    IV both = iv_intersect(l, r);
                    backward(c.lhs, both, st);
                    backward(c.rhs, both, st);
                    break;
                }
            }
            if (st.contradiction) {
                st.culprit = render_cmp(c);
                return st;
            }
        }
        if (!st.changed) break;
    }
    return st;
}

BoundVal to_bound(const Ext& e) { return {e.cls != 0, e.v, e.open}; }

// ---------------------------------------------------------------------------
// Helpers on terms
// ---------------------------------------------------------------------------

bool term_ground(const TermPtr& t) {
    switch (t->kind()) {
        case TermKind::Var:
        case TermKind::Param:
            return false;
        case TermKind::RatConst:
        case TermKind::Endpoint:
            return true;
        default:
            return term_ground(t->lhs()) && (!t->rhs() || term_ground(t->rhs()));
    }
}

void collect_symbols(const TermPtr& t, ConstraintSet& e, std::set<std::string>& sv,
                     std::set<std::string>& sp) {
    switch (t->kind()) {
        case TermKind::Var:
            if (sv.insert(t->name()).second) e.vars.push_back(t->name());
            return;
        case TermKind::Param:
            if (sp.insert(t->name()).second) e.params.push_back(t->name());
            return;
        case TermKind::RatConst:
        case TermKind::Endpoint:
            return;
        default:
            collect_symbols(t->lhs(), e, sv, sp);
            if (t->rhs()) collect_symbols(t->rhs(), e, sv, sp);
    }
}

TermPtr inline_endpoints(const TermPtr& t, const std::vector<Interval>& complement) {
    switch (t->kind()) {
        case TermKind::Var:
        case TermKind::Param:
        case TermKind::RatConst:
            return t;
        case TermKind::Endpoint: {
            std::size_t i = t->endpoint_index();
            if (i < 1 || i > complement.size())
                throw std::invalid_argument(
                    "endpoint constant outside the complement decomposition");
            const Interval& j = complement[i - 1];
            return Term::rat(t->side() == EndpointSide::Minus ? j.lo : j.hi);
        }
        default: {
            TermPtr l = inline_endpoints(t->lhs(), complement);
            TermPtr r = t->rhs() ? inline_endpoints(t->rhs(), complement) : nullptr;
            if (l == t->lhs() && r == t->rhs()) return t;
            switch (t->kind()) {
                case TermKind::Add:
                    return Term::add(l, r);
                case TermKind::Sub:
                    return Term::sub(l, r);
                case TermKind::Mul:
                    return Term::mul(l, r);
                case TermKind::Div:
                    return Term::div(l, r);
                case TermKind::Min:
                    return Term::min(l, r);
                case TermKind::Max:
                    return Term::max(l, r);
                default:
                    throw std::invalid_argument("non-L0 term in a constraint set");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Self-check of Sat answers
// ---------------------------------------------------------------------------

void self_check(const ConstraintSet& e, const Solution& s) {
    if (s.exact) {
        TermEnv env{&s.sigma, &s.rho, nullptr};
        for (const Cmp& c : e.atoms)
            if (!eval_cmp(c, env))
                throw InternalError("solution fails self-check on: " + render_cmp(c));
        return;
    }
    // Approximate values: wrap every symbol in a closed interval of radius
    // `precision` and require that no comparison is refuted outright.
    PropState st;
    auto widen = [&](const Rat& v) {
        return IV{ext_fin(v - s.precision), ext_fin(v + s.precision)};
    };
    for (const auto& [k, v] : s.sigma) st.vr.emplace(k, widen(v));
    for (const auto& [k, v] : s.rho) st.pr.emplace(k, widen(v));
    for (const Cmp& c : e.atoms) {
        IV l = feval(c.lhs, st), r = feval(c.rhs, st);
        if (refuted(c.op, l, r))
            throw InternalError("approximate solution fails self-check on: " + render_cmp(c));
    }
}

// ---------------------------------------------------------------------------
// Grid backend
// ---------------------------------------------------------------------------

struct GridSym {
    std::string name;
    bool is_param;
    std::vector<Rat> values;
};

SolverResult grid_impl(const ConstraintSet& e, unsigned d, std::uint64_t budget,
                       const PropState& prop) {
    if (d < 1) throw std::invalid_argument("grid denominator must be at least 1");

    // Ground comparisons: one failure means no assignment can ever work.
    TermEnv ground_env{nullptr, nullptr, nullptr};
    for (const Cmp& c : e.atoms)
        if (term_ground(c.lhs) && term_ground(c.rhs) && !eval_cmp(c, ground_env))
            return {SolveStatus::Unknown, std::nullopt,
                    "ground comparison fails: " + render_cmp(c)};

    // Parameters first (they gate the chain-order constraints), then
    // variables, both in first-occurrence order; candidate values are the
    // grid points inside the propagated range.
    std::vector<GridSym> syms;
    auto admit = [&](const Rat& q, const IV& range) {
        Ext p = ext_fin(q);
        if (ext_cmp(p, range.lo) < 0 || (ext_cmp(p, range.lo) == 0 && range.lo.open)) return false;
        if (ext_cmp(p, range.hi) > 0 || (ext_cmp(p, range.hi) == 0 && range.hi.open)) return false;
        return true;
    };
    auto add_sym = [&](const std::string& name, bool is_param) {
        IV range = prop.contradiction
                       ? iv_unit()
                       : (is_param ? prop.pr.at(name) : prop.vr.at(name));
        GridSym g{name, is_param, {}};
        for (unsigned k = 0; k <= d; ++k) {
            Rat q(k, d);
            q.canonicalize();
            if (admit(q, range)) g.values.push_back(q);
        }
        syms.push_back(std::move(g));
    };
    for (const auto& p : e.params) add_sym(p, true);
    for (const auto& v : e.vars) add_sym(v, false);

    // A comparison is checkable once the last symbol it mentions is set.
    std::unordered_map<std::string, std::size_t> pos_v, pos_p;
    for (std::size_t i = 0; i < syms.size(); ++i)
        (syms[i].is_param ? pos_p : pos_v)[syms[i].name] = i;
    std::function<std::size_t(const TermPtr&)> last_pos = [&](const TermPtr& t) -> std::size_t {
        switch (t->kind()) {
            case TermKind::Var:
                return pos_v.at(t->name()) + 1;
            case TermKind::Param:
                return pos_p.at(t->name()) + 1;
            case TermKind::RatConst:
                return 0;
            default:
                return std::max(last_pos(t->lhs()), t->rhs() ? last_pos(t->rhs()) : 0);
        }
    };
    std::vector<std::vector<const Cmp*>> due(syms.size() + 1);
    for (const Cmp& c : e.atoms)
        due[std::max(last_pos(c.lhs), last_pos(c.rhs))].push_back(&c);

    std::map<std::string, Rat> mv, mp;
    TermEnv env{&mv, &mp, nullptr};
    std::uint64_t attempts = 0;
    std::function<SolveStatus(std::size_t)> dive = [&](std::size_t depth) -> SolveStatus {
        if (depth == syms.size()) return SolveStatus::Sat;
        for (const Rat& q : syms[depth].values) {
            if (++attempts > budget) return SolveStatus::Unknown;
            auto& slot = syms[depth].is_param ? mp : mv;
            slot[syms[depth].name] = q;
            bool ok = true;
            for (const Cmp* c : due[depth + 1])
                if (!eval_cmp(*c, env)) {
                    ok = false;
                    break;
                }
            if (ok) {
                SolveStatus s = dive(depth + 1);
                if (s != SolveStatus::Unsat) return s;  // Sat or budget Unknown
            }
            slot.erase(syms[depth].name);
        }
        return SolveStatus::Unsat;  // internal marker: this subtree is exhausted
    };

    // With no symbols at all the (already screened) ground set is satisfied
    // by the empty assignment.
    SolveStatus s = syms.empty() ? SolveStatus::Sat : dive(0);
    if (s == SolveStatus::Sat) {
        Solution sol;
        sol.sigma = mv;
        sol.rho = mp;
        sol.exact = true;
        return {SolveStatus::Sat, sol, ""};
    }
    if (attempts > budget)
        return {SolveStatus::Unknown, std::nullopt, "grid budget exhausted"};
    return {SolveStatus::Unknown, std::nullopt, "grid exhausted without a satisfying point"};
}

// ---------------------------------------------------------------------------
// SMT-LIB 2 encoding
// ---------------------------------------------------------------------------

std::string smt_rat(const Rat& q) {
    if (q < 0) return "(- " + smt_rat(Rat(-q)) + ")";
    std::string num = q.get_num().get_str();
    if (q.get_den() == 1) return num + ".0";
    return "(/ " + num + ".0 " + q.get_den().get_str() + ".0)";
}

struct DivTable {
    std::vector<TermPtr> order;  // creation order, inner divisions first
    std::unordered_map<TermPtr, std::size_t, TermHash, TermEq> index;
};

void collect_divs(const TermPtr& t, DivTable& dt) {
    switch (t->kind()) {
        case TermKind::Var:
        case TermKind::Param:
        case TermKind::RatConst:
            return;
        case TermKind::Endpoint:
            throw InternalError("endpoint constant survived into an encoding");
        default:
            collect_divs(t->lhs(), dt);
            if (t->rhs()) collect_divs(t->rhs(), dt);
            if (t->kind() == TermKind::Div && !dt.index.count(t)) {
                dt.index.emplace(t, dt.order.size());
                dt.order.push_back(t);
            }
    }
}

std::string smt_term(const TermPtr& t, const DivTable& dt) {
    switch (t->kind()) {
        case TermKind::Var:
            return "v_" + t->name();
        case TermKind::Param:
            return "p_" + t->name();
        case TermKind::RatConst:
            return smt_rat(t->value());
        case TermKind::Add:
            return "(+ " + smt_term(t->lhs(), dt) + " " + smt_term(t->rhs(), dt) + ")";
        case TermKind::Sub:
            return "(- " + smt_term(t->lhs(), dt) + " " + smt_term(t->rhs(), dt) + ")";
        case TermKind::Mul:
            return "(* " + smt_term(t->lhs(), dt) + " " + smt_term(t->rhs(), dt) + ")";
        case TermKind::Div:
            return "q_" + std::to_string(dt.index.at(t));
        case TermKind::Min: {
            std::string l = smt_term(t->lhs(), dt), r = smt_term(t->rhs(), dt);
            return "(ite (<= " + l + " " + r + ") " + l + " " + r + ")";
        }
        case TermKind::Max: {
            std::string l = smt_term(t->lhs(), dt), r = smt_term(t->rhs(), dt);
            return "(ite (<= " + l + " " + r + ") " + r + " " + l + ")";
        }
        default:
            throw InternalError("non-L0 term in an encoding: " + render_term(t));
    }
}

// ---------------------------------------------------------------------------
// SMT backend dispatch
// ---------------------------------------------------------------------------

SolverResult smt_backend(const ConstraintSet& e, const SolverConfig& config) {
    if (config.smt_cmd.empty())
        return {SolveStatus::Unknown, std::nullopt, "no external solver command configured"};
    SmtResult sr = run_smt(encode(e), config.smt_cmd, config.timeout_ms);
    switch (sr.status) {
        case SmtStatus::Unsat:
            return {SolveStatus::Unsat, std::nullopt, "external solver proved unsatisfiability"};
        case SmtStatus::Unknown:
            return {SolveStatus::Unknown, std::nullopt,
                    sr.diagnostics.empty() ? "external solver returned unknown" : sr.diagnostics};
        case SmtStatus::Error:
            return {SolveStatus::Unknown, std::nullopt,
                    sr.diagnostics.empty() ? "external solver failed" : sr.diagnostics};
        case SmtStatus::Sat:
            break;
    }
    Solution sol;
    std::string bad;
    auto take = [&](const std::string& prefix, const std::vector<std::string>& names,
                    std::map<std::string, Rat>& into) -> bool {
        for (const auto& n : names) {
            auto it = sr.values.find(prefix + n);
            if (it == sr.values.end()) {
                bad = "external solver omitted a model value for " + n;
                return false;
            }
            Rat v = it->second.value;
            if (it->second.exact) {
                if (!rat_in_unit(v)) {
                    bad = "external solver value out of range for " + n;
                    return false;
                }
            } else {
                // Approximations may stick out of [0,1] by less than their
                // own precision; clamping moves them toward the true value.
                if (v < 0) v = 0;
                if (v > 1) v = 1;
                sol.exact = false;
                if (it->second.precision > sol.precision) sol.precision = it->second.precision;
            }
            into[n] = v;
        }
        return true;
    };
    if (!take("v_", e.vars, sol.sigma) || !take("p_", e.params, sol.rho))
        return {SolveStatus::Unknown, std::nullopt, bad};
    return {SolveStatus::Sat, sol, ""};
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

ConstraintSet ConstraintSet::from_formulas(const std::vector<TableauFormula>& fs,
                                           const std::vector<Interval>& complement) {
    ConstraintSet e;
    std::set<std::string> sv, sp;
    for (const TableauFormula& f : fs) {
        if (f.is_disjunct())
            throw std::invalid_argument("disjunction reached the constraint solver");
        if (!f.is_l0())
            throw std::invalid_argument("non-L0 formula reached the constraint solver");
        const Cmp& c = f.comparison();
        Cmp ic{c.op, inline_endpoints(c.lhs, complement), inline_endpoints(c.rhs, complement)};
        collect_symbols(ic.lhs, e, sv, sp);
        collect_symbols(ic.rhs, e, sv, sp);
        e.atoms.push_back(std::move(ic));
    }
    return e;
}

Propagation propagate_bounds(const ConstraintSet& e) {
    PropState st = run_propagation(e);
    Propagation out;
    out.contradiction = st.contradiction;
    out.culprit = st.culprit;
    for (const auto& [k, iv] : st.vr) out.var_ranges[k] = {to_bound(iv.lo), to_bound(iv.hi)};
    for (const auto& [k, iv] : st.pr) out.param_ranges[k] = {to_bound(iv.lo), to_bound(iv.hi)};
    return out;
}

SolverResult grid_search(const ConstraintSet& e, unsigned denominator, std::uint64_t budget) {
    PropState prop = run_propagation(e);
    if (prop.contradiction)
        return {SolveStatus::Unknown, std::nullopt,
                "no grid point can satisfy the set (bound propagation refuted it)"};
    SolverResult r = grid_impl(e, denominator, budget, prop);
    if (r.status == SolveStatus::Sat) self_check(e, *r.solution);
    return r;
}

std::string encode(const ConstraintSet& e) {
    DivTable dt;
    for (const Cmp& c : e.atoms) {
        collect_divs(c.lhs, dt);
        collect_divs(c.rhs, dt);
    }
    std::vector<std::string> vs(e.vars.begin(), e.vars.end());
    std::vector<std::string> ps(e.params.begin(), e.params.end());
    std::sort(vs.begin(), vs.end());
    std::sort(ps.begin(), ps.end());

    std::ostringstream out;
    out << "(set-option :produce-models true)\n";
    out << "(set-logic QF_NRA)\n";
    auto declare = [&](const std::string& sym) {
        out << "(declare-fun " << sym << " () Real)\n";
        out << "(assert (and (<= 0.0 " << sym << ") (<= " << sym << " 1.0)))\n";
    };
    for (const auto& v : vs) declare("v_" + v);
    for (const auto& p : ps) declare("p_" + p);
    for (std::size_t i = 0; i < dt.order.size(); ++i)
        out << "(declare-fun q_" << i << " () Real)\n";
    for (std::size_t i = 0; i < dt.order.size(); ++i) {
        std::string num = smt_term(dt.order[i]->lhs(), dt);
        std::string den = smt_term(dt.order[i]->rhs(), dt);
        out << "(assert (=> (not (= " << den << " 0.0)) (= (* q_" << i << " " << den << ") "
            << num << ")))\n";
        out << "(assert (=> (= " << den << " 0.0) (= q_" << i << " 0.0)))\n";
    }
    for (const Cmp& c : e.atoms) {
        const char* op = c.op == CmpOp::Le ? "<=" : c.op == CmpOp::Lt ? "<" : "=";
        out << "(assert (" << op << " " << smt_term(c.lhs, dt) << " " << smt_term(c.rhs, dt)
            << "))\n";
    }
    out << "(check-sat)\n";
    if (!vs.empty() || !ps.empty()) {
        out << "(get-value (";
        bool first = true;
        for (const auto& v : vs) {
            out << (first ? "" : " ") << "v_" << v;
            first = false;
        }
        for (const auto& p : ps) {
            out << (first ? "" : " ") << "p_" << p;
            first = false;
        }
        out << "))\n";
    }
    return out.str();
}

SolverResult check_constraints(const ConstraintSet& e, const SolverConfig& config) {
    // Cheap exact screens first: a false ground comparison or a strict
    // comparison between structurally identical sides is already Unsat.
    TermEnv ground_env{nullptr, nullptr, nullptr};
    for (const Cmp& c : e.atoms) {
        if (term_eq(c.lhs, c.rhs) && c.op == CmpOp::Lt)
            return {SolveStatus::Unsat, std::nullopt,
                    "strict comparison between identical terms: " + render_cmp(c)};
        if (term_ground(c.lhs) && term_ground(c.rhs) && !eval_cmp(c, ground_env))
            return {SolveStatus::Unsat, std::nullopt,
                    "ground comparison is false: " + render_cmp(c)};
    }

    PropState prop = run_propagation(e);
    if (prop.contradiction)
        return {SolveStatus::Unsat, std::nullopt,
                "bound propagation found a contradiction at: " + prop.culprit};

    SolverResult r = config.backend == Backend::Grid
                         ? grid_impl(e, config.grid_denominator, config.grid_budget, prop)
                         : smt_backend(e, config);
    if (r.status == SolveStatus::Sat) self_check(e, *r.solution);
    return r;
}

}  // namespace bltab
