#include "bltab/model.hpp"

#include "bltab/error.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bltab {

namespace {

const char* kind_tag(CompKind k) { return k == CompKind::Lukasiewicz ? "L" : "P"; }

void require_unit(const Rat& v, const char* who) {
    if (!rat_in_unit(v)) throw std::invalid_argument(std::string(who) + " argument outside [0,1]");
}

const Component* shared_component(const OrdinalSum& t, const Rat& x, const Rat& y) {
    for (const Component& c : t.components)
        if (c.lo <= x && x <= c.hi && c.lo <= y && y <= c.hi) return &c;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Closed rational intervals for approximate verification
// ---------------------------------------------------------------------------

struct RI {
    Rat lo, hi;
};

RI ri_point(const Rat& v) { return {v, v}; }

RI ri_clamp01(RI a) {
    if (a.lo < 0) a.lo = 0;
    if (a.hi > 1) a.hi = 1;
    return a;
}

RI ri_widen(const Rat& v, const Rat& eps) { return ri_clamp01({v - eps, v + eps}); }

RI ri_add(const RI& a, const RI& b) { return {a.lo + b.lo, a.hi + b.hi}; }
RI ri_sub(const RI& a, const RI& b) { return {a.lo - b.hi, a.hi - b.lo}; }
RI ri_min(const RI& a, const RI& b) { return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)}; }
RI ri_max(const RI& a, const RI& b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }

RI ri_mul(const RI& a, const RI& b) {
    Rat c1 = a.lo * b.lo, c2 = a.lo * b.hi, c3 = a.hi * b.lo, c4 = a.hi * b.hi;
    return {std::min(std::min(c1, c2), std::min(c3, c4)),
            std::max(std::max(c1, c2), std::max(c3, c4))};
}

RI ri_intersect(const RI& a, const RI& b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

RI ri_hull(const RI& a, const RI& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

enum class Where { In, Out, Maybe };

// Does the set of possible positions of `x` lie inside / outside the
// component whose endpoints are only known to the intervals la, lb?
Where member(const RI& x, const RI& la, const RI& lb) {
    if (x.lo >= la.hi && x.hi <= lb.lo) return Where::In;
    if (x.hi < la.lo || x.lo > lb.hi) return Where::Out;
    return Where::Maybe;
}

struct FuzzyComp {
    RI a, b;
    CompKind kind;
};

RI tnorm_iv(const std::vector<FuzzyComp>& comps, const RI& x, const RI& y) {
    std::vector<RI> cands;
    bool certain = false;
    for (const FuzzyComp& c : comps) {
        Where wx = member(x, c.a, c.b), wy = member(y, c.a, c.b);
        if (wx == Where::Out || wy == Where::Out) continue;
        RI val;
        if (c.kind == CompKind::Lukasiewicz) {
            val = ri_max(c.a, ri_sub(ri_add(x, y), c.b));
        } else {
            RI num = ri_mul(ri_intersect(ri_sub(x, c.a), {0, 1}),
                            ri_intersect(ri_sub(y, c.a), {0, 1}));
            RI den = ri_sub(c.b, c.a);
            if (den.lo <= 0) {
                val = {c.a.lo, c.b.hi};  // only the containment bound survives
            } else {
                val = ri_add(c.a, RI{num.lo / den.hi, num.hi / den.lo});
            }
            val = ri_intersect(val, {c.a.lo, c.b.hi});
        }
        if (wx == Where::In && wy == Where::In) {
            cands.assign(1, val);  // the true component is pinned down
            certain = true;
            break;
        }
        cands.push_back(val);
    }
    if (!certain) cands.push_back(ri_min(x, y));  // the minimum fallback branch
    RI out = cands[0];
    for (std::size_t i = 1; i < cands.size(); ++i) out = ri_hull(out, cands[i]);
    out = ri_intersect(out, {Rat(0), std::min(x.hi, y.hi)});  // t(x,y) <= min(x,y)
    return ri_clamp01(out);
}

RI resid_iv(const std::vector<FuzzyComp>& comps, const RI& x, const RI& y) {
    std::vector<RI> cands;
    if (x.lo <= y.hi) cands.push_back(ri_point(1));  // the x <= y branch
    if (x.hi > y.lo) {                               // some x > y is possible
        bool certain = false;
        std::vector<RI> below;
        for (const FuzzyComp& c : comps) {
            Where wx = member(x, c.a, c.b), wy = member(y, c.a, c.b);
            if (wx == Where::Out || wy == Where::Out) continue;
            RI val;
            if (c.kind == CompKind::Lukasiewicz) {
                val = ri_add(ri_sub(c.b, x), y);
            } else {
                RI num = ri_mul(ri_intersect(ri_sub(y, c.a), {0, 1}),
                                ri_intersect(ri_sub(c.b, c.a), {0, 1}));
                RI den = ri_sub(x, c.a);
                if (den.lo <= 0) {
                    val = {y.lo, Rat(1)};  // fall back to y <= result <= 1
                } else {
                    val = ri_add(c.a, RI{num.lo / den.hi, num.hi / den.lo});
                }
            }
            if (wx == Where::In && wy == Where::In) {
                below.assign(1, val);
                certain = true;
                break;
            }
            below.push_back(val);
        }
        if (!certain) below.push_back(y);  // no shared component: value is y
        for (const RI& v : below) cands.push_back(v);
    }
    RI out = cands[0];
    for (std::size_t i = 1; i < cands.size(); ++i) out = ri_hull(out, cands[i]);
    out = ri_intersect(out, {y.lo, Rat(1)});  // x => y is always at least y
    return ri_clamp01(out);
}

RI eval_iv(const FormulaPtr& f, const ExtractedModel& m, const std::vector<FuzzyComp>& comps) {
    switch (f->kind()) {
        case Conn::Atom: {
            auto it = m.valuation.find(f->atom_name());
            if (it == m.valuation.end())
                throw std::invalid_argument("atom missing from valuation: " + f->atom_name());
            return ri_widen(it->second, m.precision);
        }
        case Conn::Falsum:
            return ri_point(0);
        case Conn::Verum:
            return ri_point(1);
        case Conn::Strong:
            return tnorm_iv(comps, eval_iv(f->lhs(), m, comps), eval_iv(f->rhs(), m, comps));
        case Conn::Impl:
            return resid_iv(comps, eval_iv(f->lhs(), m, comps), eval_iv(f->rhs(), m, comps));
        case Conn::Or:
            return ri_max(eval_iv(f->lhs(), m, comps), eval_iv(f->rhs(), m, comps));
        case Conn::And:
            return ri_min(eval_iv(f->lhs(), m, comps), eval_iv(f->rhs(), m, comps));
        case Conn::Delta: {
            RI v = eval_iv(f->lhs(), m, comps);
            if (v.lo >= 1) return ri_point(1);
            if (v.hi < 1) return ri_point(0);
            return {Rat(0), Rat(1)};
        }
        case Conn::Inv: {
            RI v = eval_iv(f->lhs(), m, comps);
            return {1 - v.hi, 1 - v.lo};
        }
    }
    throw std::invalid_argument("unhandled connective");
}

// Containment of a value interval in a canonical KSet: a connected interval
// fits iff a single part holds it (parts are separated by real gaps).
Where kset_member(const KSet& k, const RI& v) {
    for (const Interval& p : k.parts()) {
        bool lo_in = v.lo > p.lo || (v.lo == p.lo && p.lo_closed);
        bool hi_in = v.hi < p.hi || (v.hi == p.hi && p.hi_closed);
        if (lo_in && hi_in) return Where::In;
    }
    for (const Interval& p : k.parts()) {
        bool left = v.hi < p.lo || (v.hi == p.lo && !p.lo_closed);
        bool right = v.lo > p.hi || (v.lo == p.hi && !p.hi_closed);
        if (!left && !right) return Where::Maybe;  // overlaps this part partly
    }
    return Where::Out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ordinal sums
// ---------------------------------------------------------------------------

OrdinalSum make_ordinal_sum(std::vector<Component> components) {
    for (const Component& c : components) {
        if (!(Rat(0) <= c.lo && c.lo < c.hi && c.hi <= Rat(1)))
            throw std::invalid_argument("component must satisfy 0 <= lo < hi <= 1: [" +
                                        rat_to_string(c.lo) + ", " + rat_to_string(c.hi) + "]");
    }
    std::sort(components.begin(), components.end(), [](const Component& a, const Component& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        if (a.hi != b.hi) return a.hi < b.hi;
        return a.kind < b.kind;
    });
    components.erase(std::unique(components.begin(), components.end()), components.end());
    for (std::size_t i = 1; i < components.size(); ++i)
        if (components[i].lo < components[i - 1].hi)
            throw std::invalid_argument("component interiors overlap: [" +
                                        rat_to_string(components[i - 1].lo) + ", " +
                                        rat_to_string(components[i - 1].hi) + "] and [" +
                                        rat_to_string(components[i].lo) + ", " +
                                        rat_to_string(components[i].hi) + "]");
    return OrdinalSum{std::move(components)};
}

Rat tnorm_apply(const OrdinalSum& t, const Rat& x, const Rat& y) {
    require_unit(x, "tnorm");
    require_unit(y, "tnorm");
    if (const Component* c = shared_component(t, x, y)) {
        if (c->kind == CompKind::Lukasiewicz) return std::max(c->lo, Rat(x + y - c->hi));
        return c->lo + (x - c->lo) * (y - c->lo) / (c->hi - c->lo);
    }
    return std::min(x, y);
}

Rat residuum_apply(const OrdinalSum& t, const Rat& x, const Rat& y) {
    require_unit(x, "residuum");
    require_unit(y, "residuum");
    if (x <= y) return 1;
    if (const Component* c = shared_component(t, x, y)) {
        if (c->kind == CompKind::Lukasiewicz) return c->hi - x + y;
        return c->lo + (y - c->lo) * (c->hi - c->lo) / (x - c->lo);
    }
    return y;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

Rat evaluate(const FormulaPtr& f, const ExtractedModel& m) {
    switch (f->kind()) {
        case Conn::Atom: {
            auto it = m.valuation.find(f->atom_name());
            if (it == m.valuation.end())
                throw std::invalid_argument("atom missing from valuation: " + f->atom_name());
            return it->second;
        }
        case Conn::Falsum:
            return 0;
        case Conn::Verum:
            return 1;
        case Conn::Strong:
            return tnorm_apply(m.tnorm, evaluate(f->lhs(), m), evaluate(f->rhs(), m));
        case Conn::Impl:
            return residuum_apply(m.tnorm, evaluate(f->lhs(), m), evaluate(f->rhs(), m));
        case Conn::Or:
            return std::max(evaluate(f->lhs(), m), evaluate(f->rhs(), m));
        case Conn::And:
            return std::min(evaluate(f->lhs(), m), evaluate(f->rhs(), m));
        case Conn::Delta:
            return evaluate(f->lhs(), m) == 1 ? 1 : 0;
        case Conn::Inv:
            return Rat(1) - evaluate(f->lhs(), m);
    }
    throw std::invalid_argument("unhandled connective");
}

// ---------------------------------------------------------------------------
// Extraction and verification
// ---------------------------------------------------------------------------

ExtractedModel extract_model(const Solution& sol, const ComponentChain& chain,
                             const TranslationMap& m) {
    ExtractedModel out;
    out.exact = sol.exact;
    out.precision = sol.precision;
    for (const auto& [atom, var] : m.atom_to_var()) {
        auto it = sol.sigma.find(var);
        out.valuation[atom] = it == sol.sigma.end() ? Rat(0) : it->second;
    }
    std::vector<Component> comps;
    for (const ChainEntry& e : chain) {
        auto ia = sol.rho.find(e.a), ib = sol.rho.find(e.b);
        if (ia == sol.rho.end() || ib == sol.rho.end())
            throw InternalError("chain parameter missing from solution: " +
                                (ia == sol.rho.end() ? e.a : e.b));
        if (ia->second >= ib->second)
            throw InternalError("collapsed component: " + e.a + " = " +
                                rat_to_string(ia->second) + " >= " + e.b + " = " +
                                rat_to_string(ib->second));
        comps.push_back({ia->second, ib->second, e.kind});
    }
    try {
        out.tnorm = make_ordinal_sum(std::move(comps));
    } catch (const std::invalid_argument& ex) {
        throw InternalError(std::string("extracted components violate the ordinal-sum "
                                        "invariants: ") +
                            ex.what());
    }
    return out;
}

bool verify_model(const std::vector<FormulaPtr>& psis, const KSet& k, const ExtractedModel& m,
                  std::string* why) {
    if (m.exact) {
        for (const FormulaPtr& psi : psis) {
            Rat v = evaluate(psi, m);
            if (!k.contains(v)) {
                if (why)
                    *why = render_formula(psi) + " evaluates to " + rat_to_string(v) +
                           ", which lies outside K";
                return false;
            }
        }
        return true;
    }
    std::vector<FuzzyComp> comps;
    for (const Component& c : m.tnorm.components)
        comps.push_back({ri_widen(c.lo, m.precision), ri_widen(c.hi, m.precision), c.kind});
    for (const FormulaPtr& psi : psis) {
        RI v = eval_iv(psi, m, comps);
        Where w = kset_member(k, v);
        if (w == Where::In) continue;
        if (why) {
            std::string verdict = w == Where::Out ? "lies outside K"
                                                  : "cannot be decided at precision " +
                                                        rat_to_string(m.precision);
            *why = render_formula(psi) + " evaluates into [" + rat_to_string(v.lo) + ", " +
                   rat_to_string(v.hi) + "], which " + verdict;
        }
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

std::vector<OrdinalSum> default_pool() {
    Rat h(1, 2);
    return {
        make_ordinal_sum({}),
        make_ordinal_sum({{0, 1, CompKind::Lukasiewicz}}),
        make_ordinal_sum({{0, 1, CompKind::Product}}),
        make_ordinal_sum({{0, h, CompKind::Lukasiewicz}}),
        make_ordinal_sum({{h, 1, CompKind::Product}}),
        make_ordinal_sum({{0, h, CompKind::Lukasiewicz}, {h, 1, CompKind::Product}}),
    };
}

namespace {
void collect_atoms(const FormulaPtr& f, std::set<std::string>& into) {
    switch (f->kind()) {
        case Conn::Atom:
            into.insert(f->atom_name());
            return;
        case Conn::Falsum:
        case Conn::Verum:
            return;
        case Conn::Delta:
        case Conn::Inv:
            collect_atoms(f->lhs(), into);
            return;
        default:
            collect_atoms(f->lhs(), into);
            collect_atoms(f->rhs(), into);
    }
}
}  // namespace

std::optional<ExtractedModel> grid_oracle(const std::vector<FormulaPtr>& psis, const KSet& k,
                                          unsigned denominator,
                                          const std::vector<OrdinalSum>& pool) {
    if (denominator < 1) throw std::invalid_argument("denominator must be at least 1");
    std::set<std::string> atom_set;
    for (const FormulaPtr& psi : psis) collect_atoms(psi, atom_set);
    std::vector<std::string> atoms(atom_set.begin(), atom_set.end());

    std::vector<unsigned> odo(atoms.size(), 0);
    while (true) {
        ExtractedModel m;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            Rat q(odo[i], denominator);
            q.canonicalize();
            m.valuation[atoms[i]] = q;
        }
        for (const OrdinalSum& t : pool) {
            m.tnorm = t;
            if (verify_model(psis, k, m)) return m;
        }
        std::size_t i = atoms.size();
        while (i > 0 && odo[i - 1] == denominator) odo[--i] = 0;
        if (i == 0) return std::nullopt;
        ++odo[i - 1];
    }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

nlohmann::ordered_json model_json(const ExtractedModel& m) {
    nlohmann::ordered_json j;
    j["components"] = nlohmann::ordered_json::array();
    for (const Component& c : m.tnorm.components)
        j["components"].push_back({{"lo", rat_to_string(c.lo)},
                                   {"hi", rat_to_string(c.hi)},
                                   {"kind", kind_tag(c.kind)}});
    j["valuation"] = nlohmann::ordered_json::object();
    for (const auto& [atom, v] : m.valuation) j["valuation"][atom] = rat_to_string(v);
    j["exact"] = m.exact;
    if (!m.exact) j["precision"] = rat_to_string(m.precision);
    return j;
}

}  // namespace bltab
