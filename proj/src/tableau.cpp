#include "bltab/tableau.hpp"

#include "bltab/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace bltab {

namespace {

using FormulaSet = std::unordered_set<TableauFormula, TableauFormulaHash>;

void push_unique(std::vector<TableauFormula>& into, FormulaSet& seen, TableauFormula f) {
    if (seen.insert(f).second) into.push_back(std::move(f));
}

std::string comp_suffix(CompKind k) { return k == CompKind::Lukasiewicz ? "L" : "P"; }

// ---------------------------------------------------------------------------
// Active-term selection
// ---------------------------------------------------------------------------

// In-order walk (left subtree, node, right subtree; the crispness symbol
// before its argument). This is what makes the residuum win over a t-norm
// nested in its right argument while a t-norm wins over the residuum it sits
// under on the left-hand side.
TermPtr leftmost_interpreted(const TermPtr& t) {
    switch (t->kind()) {
        case TermKind::Var:
        case TermKind::Param:
        case TermKind::RatConst:
        case TermKind::Endpoint:
            return nullptr;
        case TermKind::DeltaFn:
            return t;
        default: {
            if (TermPtr l = leftmost_interpreted(t->lhs())) return l;
            if (t->is_interpreted()) return t;
            return leftmost_interpreted(t->rhs());
        }
    }
}

TermPtr first_interpreted(const TableauFormula& f) {
    const Cmp& c = f.comparison();  // expansion nodes hold no disjunctions
    if (TermPtr t = leftmost_interpreted(c.lhs)) return t;
    return leftmost_interpreted(c.rhs);
}

// ---------------------------------------------------------------------------
// Child assembly
// ---------------------------------------------------------------------------

std::size_t count_interpreted(const Node& n) { return interpreted_subterms(n.formulas).size(); }

Node make_expansion_child(const Node& parent, const TermPtr& active, const TermPtr& replacement,
                          const std::vector<Cmp>& constraints, ComponentChain chain_after,
                          unsigned counter_after, std::string rule, std::string case_tag) {
    Node child;
    child.chain = std::move(chain_after);
    child.pending = parent.pending;
    child.fresh_counter = counter_after;
    FormulaSet seen;
    for (const TableauFormula& f : parent.formulas)
        push_unique(child.formulas, seen, substitute(f, replacement, active));
    Provenance via{std::move(rule), std::move(case_tag), render_term(active), {}};
    for (const Cmp& c : constraints) {
        via.added.push_back(render_cmp(c));
        push_unique(child.formulas, seen, TableauFormula::cmp(c.op, c.lhs, c.rhs));
    }
    child.via = std::move(via);

    // The active term must vanish everywhere, so the count of distinct
    // interpreted subterms strictly drops on every expansion edge.
    std::size_t before = count_interpreted(parent), after = count_interpreted(child);
    if (after >= before)
        throw InternalError("expansion did not reduce the interpreted-subterm count (" +
                            std::to_string(before) + " -> " + std::to_string(after) + ")");
    // Monotone accumulation: L0 comparisons survive into every child.
    for (const TableauFormula& f : parent.formulas)
        if (!f.is_disjunct() && f.is_l0() && !seen.count(f))
            throw InternalError("an L0 formula vanished on an expansion edge: " +
                                render_tableau_formula(f));
    return child;
}

}  // namespace

// ---------------------------------------------------------------------------
// Leaves and roots
// ---------------------------------------------------------------------------

bool is_leaf(const Node& n) {
    if (!n.pending.empty()) return false;
    for (const TableauFormula& f : n.formulas)
        if (f.is_disjunct() || !f.is_l0()) return false;
    return true;
}

Node build_root(const std::vector<FormulaPtr>& psis, const KSet& k, TranslationMap& m) {
    Node root;
    root.id = "1";
    std::vector<Interval> complement = k.complement_intervals();
    FormulaSet seen;
    std::vector<TermPtr> taus;  // distinct inputs only: the root is a set
    TermSet tau_seen;
    for (const FormulaPtr& psi : psis) {
        TermPtr tau = translate(psi, m);  // registers atoms even when I is empty
        if (tau_seen.insert(tau).second) taus.push_back(tau);
    }
    for (std::size_t pi = 0; pi < taus.size(); ++pi) {
        PendingSplit sp{pi, taus[pi], {}};
        for (std::size_t i = 0; i < complement.size(); ++i) {
            TableauFormula h = eta(taus[pi], complement[i], i + 1);
            push_unique(root.formulas, seen, h);
            sp.etas.emplace_back(std::move(h), i + 1);
        }
        if (!sp.etas.empty()) root.pending.push_back(std::move(sp));
    }
    return root;
}

// ---------------------------------------------------------------------------
// Split Rule
// ---------------------------------------------------------------------------

std::vector<Node> split_children(const Node& n) {
    if (n.pending.empty()) throw std::logic_error("split_children: nothing pending");
    const PendingSplit& sp = n.pending.front();
    std::size_t m = sp.etas.size();
    std::vector<Node> children;

    for (std::uint64_t mask = (std::uint64_t{1} << m); mask-- > 0;) {
        Node child;
        child.chain = n.chain;
        child.fresh_counter = n.fresh_counter;
        child.pending.assign(n.pending.begin() + 1, n.pending.end());

        // The chosen comparison for interval i replaces eta_{J_i} in place.
        std::vector<std::pair<TableauFormula, TableauFormula>> swap;
        std::vector<std::size_t> chosen;
        for (std::size_t j = 0; j < m; ++j) {
            bool in_s = (mask >> (sp.etas[j].second - 1)) & 1;
            if (in_s) chosen.push_back(sp.etas[j].second);
            const TableauFormula& h = sp.etas[j].first;
            const Cmp& pick = in_s ? h.left() : h.right();
            swap.emplace_back(h, TableauFormula::cmp(pick.op, pick.lhs, pick.rhs));
        }
        FormulaSet seen;
        Provenance via{"split", "", render_term(sp.tau), {}};
        for (const TableauFormula& f : n.formulas) {
            const TableauFormula* rep = &f;
            for (const auto& [from, to] : swap)
                if (f == from) {
                    rep = &to;
                    via.added.push_back(render_tableau_formula(to));
                    break;
                }
            push_unique(child.formulas, seen, *rep);
        }
        std::string tag = "S={";
        for (std::size_t i = 0; i < chosen.size(); ++i)
            tag += (i ? "," : "") + std::to_string(chosen[i]);
        tag += "}";
        via.case_tag = std::move(tag);
        child.via = std::move(via);
        child.id = n.id + "." + std::to_string(children.size() + 1);
        children.push_back(std::move(child));
    }
    return children;
}

// ---------------------------------------------------------------------------
// Selection
// ---------------------------------------------------------------------------

TermPtr select_active(const Node& n) {
    for (const TableauFormula& f : n.formulas)
        if (!f.is_disjunct())
            if (TermPtr t = first_interpreted(f)) return t;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Case enumeration
// ---------------------------------------------------------------------------

std::vector<ComponentCase> component_cases(const ComponentChain& chain, CompKind label,
                                           unsigned fresh_counter) {
    std::vector<ComponentCase> out;
    std::string an = "a" + std::to_string(fresh_counter) + comp_suffix(label);
    std::string bn = "b" + std::to_string(fresh_counter) + comp_suffix(label);
    TermPtr a = Term::param(an), b = Term::param(bn);
    TermPtr zero = Term::rat(0), one = Term::rat(1);
    auto between = [&](TermPtr lo, TermPtr hi) {
        return std::vector<Cmp>{{CmpOp::Le, lo, a}, {CmpOp::Lt, a, b}, {CmpOp::Le, b, hi}};
    };
    auto insert_at = [&](std::size_t pos) {
        ComponentChain c = chain;
        c.insert(c.begin() + pos, ChainEntry{an, bn, label});
        return c;
    };

    if (chain.empty()) {
        out.push_back({"10", an, bn, between(zero, one), insert_at(0), fresh_counter + 1});
        return out;
    }
    out.push_back({"1", an, bn, between(zero, Term::param(chain.front().a)), insert_at(0),
                   fresh_counter + 1});
    for (const ChainEntry& e : chain)
        if (e.kind == label) out.push_back({"2", e.a, e.b, {}, chain, fresh_counter});
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        out.push_back({"3", an, bn,
                       between(Term::param(chain[i].b), Term::param(chain[i + 1].a)),
                       insert_at(i + 1), fresh_counter + 1});
    out.push_back({"4", an, bn, between(Term::param(chain.back().b), one), insert_at(chain.size()),
                   fresh_counter + 1});
    return out;
}

std::vector<SeparationCase> separation_cases(const ComponentChain& chain, const TermPtr& x,
                                             const TermPtr& y) {
    std::vector<SeparationCase> out;
    TermPtr zero = Term::rat(0), one = Term::rat(1);
    if (chain.empty()) {
        out.push_back({"11", {}});
        return out;
    }
    out.push_back({"5", {{CmpOp::Le, zero, x}, {CmpOp::Le, x, Term::param(chain.front().a)}}});
    for (const ChainEntry& e : chain) {
        TermPtr a = Term::param(e.a), b = Term::param(e.b);
        out.push_back({"6", {{CmpOp::Le, a, x}, {CmpOp::Le, x, b}, {CmpOp::Le, y, a}}});
    }
    for (const ChainEntry& e : chain) {
        TermPtr a = Term::param(e.a), b = Term::param(e.b);
        out.push_back({"7", {{CmpOp::Le, a, x}, {CmpOp::Le, x, b}, {CmpOp::Le, b, y}}});
    }
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        out.push_back({"8",
                       {{CmpOp::Le, Term::param(chain[i].b), x},
                        {CmpOp::Le, x, Term::param(chain[i + 1].a)}}});
    out.push_back({"9", {{CmpOp::Le, Term::param(chain.back().b), x}, {CmpOp::Le, x, one}}});
    return out;
}

// ---------------------------------------------------------------------------
// Expansion
// ---------------------------------------------------------------------------

std::vector<Node> expand(const Node& n) {
    if (!n.pending.empty()) throw std::logic_error("expand: splits still pending");
    TermPtr t = select_active(n);
    if (!t) throw std::logic_error("expand: node is a leaf");

    std::vector<Node> children;
    auto emit = [&](const TermPtr& replacement, std::vector<Cmp> constraints,
                    ComponentChain chain_after, unsigned counter_after, std::string rule,
                    std::string case_tag) {
        children.push_back(make_expansion_child(n, t, replacement, constraints,
                                                std::move(chain_after), counter_after,
                                                std::move(rule), std::move(case_tag)));
        children.back().id = n.id + "." + std::to_string(children.size());
    };
    TermPtr one = Term::rat(1), zero = Term::rat(0);

    switch (t->kind()) {
        case TermKind::TNorm: {
            const TermPtr &x = t->lhs(), &y = t->rhs();
            for (const ComponentCase& cc :
                 component_cases(n.chain, CompKind::Lukasiewicz, n.fresh_counter)) {
                TermPtr a = Term::param(cc.a), b = Term::param(cc.b);
                std::vector<Cmp> cs = cc.constraints;
                cs.push_back({CmpOp::Le, a, x});
                cs.push_back({CmpOp::Le, x, b});
                cs.push_back({CmpOp::Le, a, y});
                cs.push_back({CmpOp::Le, y, b});
                TermPtr repl = Term::max(a, Term::sub(Term::add(x, y), b));
                emit(repl, std::move(cs), cc.chain_after, cc.counter_after, "star.L",
                     cc.case_tag);
            }
            for (const ComponentCase& cc :
                 component_cases(n.chain, CompKind::Product, n.fresh_counter)) {
                TermPtr a = Term::param(cc.a), b = Term::param(cc.b);
                std::vector<Cmp> cs = cc.constraints;
                cs.push_back({CmpOp::Le, a, x});
                cs.push_back({CmpOp::Le, x, b});
                cs.push_back({CmpOp::Le, a, y});
                cs.push_back({CmpOp::Le, y, b});
                TermPtr repl = Term::add(
                    a, Term::div(Term::mul(Term::sub(x, a), Term::sub(y, a)), Term::sub(b, a)));
                emit(repl, std::move(cs), cc.chain_after, cc.counter_after, "star.P",
                     cc.case_tag);
            }
            for (const SeparationCase& sc : separation_cases(n.chain, x, y))
                emit(Term::min(x, y), sc.constraints, n.chain, n.fresh_counter, "star.min",
                     sc.case_tag);
            break;
        }
        case TermKind::Resid: {
            const TermPtr &x = t->lhs(), &y = t->rhs();
            emit(one, {{CmpOp::Le, x, y}}, n.chain, n.fresh_counter, "impl.all", "");
            for (const ComponentCase& cc :
                 component_cases(n.chain, CompKind::Lukasiewicz, n.fresh_counter)) {
                TermPtr a = Term::param(cc.a), b = Term::param(cc.b);
                std::vector<Cmp> cs = cc.constraints;
                cs.push_back({CmpOp::Le, a, y});
                cs.push_back({CmpOp::Lt, y, x});
                cs.push_back({CmpOp::Le, x, b});
                emit(Term::add(Term::sub(b, x), y), std::move(cs), cc.chain_after,
                     cc.counter_after, "impl.L", cc.case_tag);
            }
            for (const ComponentCase& cc :
                 component_cases(n.chain, CompKind::Product, n.fresh_counter)) {
                TermPtr a = Term::param(cc.a), b = Term::param(cc.b);
                std::vector<Cmp> cs = cc.constraints;
                cs.push_back({CmpOp::Le, a, y});
                cs.push_back({CmpOp::Lt, y, x});
                cs.push_back({CmpOp::Le, x, b});
                TermPtr repl = Term::add(
                    a, Term::div(Term::mul(Term::sub(y, a), Term::sub(b, a)), Term::sub(x, a)));
                emit(repl, std::move(cs), cc.chain_after, cc.counter_after, "impl.P",
                     cc.case_tag);
            }
            for (const SeparationCase& sc : separation_cases(n.chain, x, y)) {
                std::vector<Cmp> cs = sc.constraints;
                cs.push_back({CmpOp::Lt, y, x});
                emit(y, std::move(cs), n.chain, n.fresh_counter, "impl.min", sc.case_tag);
            }
            break;
        }
        case TermKind::DeltaFn: {
            const TermPtr& x = t->lhs();
            emit(one, {{CmpOp::Le, one, x}}, n.chain, n.fresh_counter, "delta.1", "");
            emit(zero, {{CmpOp::Lt, x, one}}, n.chain, n.fresh_counter, "delta.2", "");
            break;
        }
        default:
            throw InternalError("active term with uninterpreted head: " + render_term(t));
    }
    return children;
}

// ---------------------------------------------------------------------------
// Exploration
// ---------------------------------------------------------------------------

namespace {

enum class Walk { Found, NotFound, Aborted };

struct Explorer {
    const std::vector<FormulaPtr>& psis;
    const KSet& k;
    const ExploreConfig& cfg;
    const TranslationMap& m;
    std::vector<Interval> complement;
    ExploreStats& stats;
    Verdict& verdict;
    std::vector<Provenance> path;
    std::vector<std::string> undecided;

    void trace_edge(const Node& parent, const Node& child) {
        if (!cfg.trace) return;
        const Provenance& via = *child.via;
        nlohmann::ordered_json rec;
        rec["parent"] = parent.id;
        rec["child"] = child.id;
        rec["rule"] = via.rule;
        rec["case"] = via.case_tag;
        rec["active"] = via.active;
        rec["added"] = via.added;
        (*cfg.trace) << rec.dump() << "\n";
    }

    Walk leaf_check(const Node& n) {
        ++stats.leaves;
        ++stats.solver_calls;
        ConstraintSet e = ConstraintSet::from_formulas(n.formulas, complement);
        SolverResult r = check_constraints(e, cfg.solver);
        if (r.status == SolveStatus::Unsat) return Walk::NotFound;
        if (r.status == SolveStatus::Unknown) {
            undecided.push_back(n.id + ": " + r.reason);
            return Walk::NotFound;
        }
        ExtractedModel model = extract_model(*r.solution, n.chain, m);
        std::string why;
        if (!verify_model(psis, k, model, &why)) {
            // A solvable leaf whose extracted model fails verification: the
            // separation cases (5-9, 11) only pin the active term's arguments
            // against the components existing at that step, so a later
            // component can capture them and change the real value. Such a
            // leaf certifies nothing either way; record it and keep looking.
            undecided.push_back(n.id + ": solvable leaf whose extracted model fails " +
                                "verification: " + why);
            return Walk::NotFound;
        }
        verdict.model = std::move(model);
        verdict.leaf = n;
        verdict.trace = path;
        return Walk::Found;
    }

    // Sound cut: the L0 comparisons only accumulate along a branch, so a
    // refuted L0 restriction refutes the whole subtree.
    bool prunable(const Node& n) {
        std::vector<TableauFormula> l0;
        for (const TableauFormula& f : n.formulas)
            if (!f.is_disjunct() && f.is_l0()) l0.push_back(f);
        if (l0.empty()) return false;
        ++stats.solver_calls;
        ConstraintSet e = ConstraintSet::from_formulas(l0, complement);
        return check_constraints(e, cfg.solver).status == SolveStatus::Unsat;
    }

    Walk visit(const Node& n) {
        if (++stats.nodes > cfg.max_nodes) return Walk::Aborted;
        if (is_leaf(n)) return leaf_check(n);
        if (cfg.prune && n.pending.empty() && prunable(n)) return Walk::NotFound;
        std::vector<Node> children = n.pending.empty() ? expand(n) : split_children(n);
        for (const Node& child : children) {
            trace_edge(n, child);
            path.push_back(*child.via);
            Walk w = visit(child);
            path.pop_back();
            if (w != Walk::NotFound) return w;
        }
        return Walk::NotFound;
    }
};

}  // namespace

Verdict explore(const std::vector<FormulaPtr>& psis, const KSet& k, const ExploreConfig& config,
                ExploreStats* stats) {
    ExploreStats local;
    ExploreStats& st = stats ? *stats : (config.stats ? *config.stats : local);
    Verdict verdict{VerdictStatus::Unknown, std::nullopt, std::nullopt, {}, {}};
    TranslationMap m;
    Node root = build_root(psis, k, m);
    Explorer ex{psis, k, config, m, k.complement_intervals(), st, verdict, {}, {}};
    Walk w = ex.visit(root);
    if (w == Walk::Found) {
        verdict.status = VerdictStatus::Satisfiable;
        return verdict;
    }
    if (w == Walk::Aborted) {
        verdict.status = VerdictStatus::Unknown;
        verdict.undecided = std::move(ex.undecided);
        verdict.undecided.push_back("search stopped: node budget (" +
                                    std::to_string(config.max_nodes) + ") exhausted");
        return verdict;
    }
    if (!ex.undecided.empty()) {
        verdict.status = VerdictStatus::Unknown;
        verdict.undecided = std::move(ex.undecided);
        return verdict;
    }
    verdict.status = VerdictStatus::Unsatisfiable;
    return verdict;
}

}  // namespace bltab
