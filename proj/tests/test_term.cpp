#include "bltab/term.hpp"

#include <doctest.h>

#include <map>
#include <random>
#include <stdexcept>
#include <vector>

using namespace bltab;

namespace {

TermPtr tau(const char* text, TranslationMap& m) { return translate(parse_formula(text), m); }

}  // namespace

TEST_CASE("translation is the structural map from the worked example") {
    TranslationMap m;
    TermPtr t1 = tau("1 -> p & r", m);
    REQUIRE(t1->kind() == TermKind::Resid);
    CHECK(t1->lhs()->kind() == TermKind::RatConst);
    CHECK(t1->lhs()->value() == Rat(1));
    REQUIRE(t1->rhs()->kind() == TermKind::TNorm);
    CHECK(t1->rhs()->lhs()->kind() == TermKind::Var);
    CHECK(t1->rhs()->lhs()->name() == m.var_for("p"));
    CHECK(t1->rhs()->rhs()->name() == m.var_for("r"));

    TermPtr t2 = tau("D r -> p \\/ q", m);
    REQUIRE(t2->kind() == TermKind::Resid);
    CHECK(t2->lhs()->kind() == TermKind::DeltaFn);
    CHECK(t2->lhs()->lhs()->name() == m.var_for("r"));
    CHECK(t2->rhs()->kind() == TermKind::Max);

    TermPtr t3 = tau("~p", m);
    REQUIRE(t3->kind() == TermKind::Sub);
    CHECK(t3->lhs()->value() == Rat(1));
    CHECK(t3->rhs()->name() == m.var_for("p"));

    CHECK(tau("0", m)->value() == Rat(0));
    CHECK(tau("p /\\ q", m)->kind() == TermKind::Min);
}

TEST_CASE("translation naming is injective and stable") {
    TranslationMap m;
    std::string vp = m.var_for("p");
    std::string vq = m.var_for("q");
    CHECK(vp != vq);
    CHECK(m.var_for("p") == vp);  // stable on repeat
    CHECK(m.atom_for(vp).value() == "p");
    CHECK_FALSE(m.atom_for("no_such_var").has_value());
    // Same atom in two formulas shares one variable: tau is injective.
    CHECK(term_eq(tau("p", m), tau("p", m)));
    CHECK_FALSE(term_eq(tau("p", m), tau("q", m)));
}

TEST_CASE("eta builds the out-of-interval disjunction with dual strictness") {
    TermPtr t = Term::var("t");

    // J1 = [0,1/2): closed left end -> strict <; open right end -> <=.
    TableauFormula e1 = eta(t, make_interval(Rat(0), Rat(1, 2), true, false), 1);
    REQUIRE(e1.is_disjunct());
    CHECK(e1.left().op == CmpOp::Lt);
    CHECK(term_eq(e1.left().lhs, t));
    CHECK(e1.left().rhs->kind() == TermKind::Endpoint);
    CHECK(e1.left().rhs->side() == EndpointSide::Minus);
    CHECK(e1.left().rhs->endpoint_index() == 1);
    CHECK(e1.right().op == CmpOp::Le);
    CHECK(e1.right().lhs->side() == EndpointSide::Plus);
    CHECK(term_eq(e1.right().rhs, t));
    CHECK(render_tableau_formula(e1) == "t < c1- v c1+ <= t");

    // J2 = (3/4,1): open ends -> both <=.
    TableauFormula e2 = eta(t, make_interval(Rat(3, 4), Rat(1), false, false), 2);
    CHECK(e2.left().op == CmpOp::Le);
    CHECK(e2.right().op == CmpOp::Le);
    CHECK(e2.right().lhs->endpoint_index() == 2);

    // Closed-closed J -> both strict.
    TableauFormula e3 = eta(t, make_interval(Rat(1, 4), Rat(1, 2), true, true), 3);
    CHECK(e3.left().op == CmpOp::Lt);
    CHECK(e3.right().op == CmpOp::Lt);
}

TEST_CASE("eta correctness: the formula holds exactly off the interval") {
    std::mt19937 rng(90125u);
    std::uniform_int_distribution<int> num24(0, 24);
    std::uniform_int_distribution<int> num48(0, 48);
    std::uniform_int_distribution<int> flag(0, 1);
    for (int i = 0; i < 500; ++i) {
        Rat a(num24(rng), 24), b(num24(rng), 24);
        if (a > b) std::swap(a, b);
        bool lc = flag(rng), hc = flag(rng);
        if (a == b) lc = hc = true;
        Interval j = make_interval(a, b, lc, hc);
        Rat v(num48(rng), 48);

        std::vector<Interval> complement = {j};
        TermEnv env;
        env.complement = &complement;
        bool holds = eval_tableau_formula(eta(Term::rat(v), j, 1), env);
        CHECK(holds == !j.contains(v));
    }
}

TEST_CASE("substitution replaces whole-subterm occurrences only") {
    TranslationMap m;
    TermPtr t1 = tau("1 -> p & r", m);                    // 1 => p * r
    TermPtr inner = t1->rhs();                            // p * r
    TableauFormula g = TableauFormula::cmp(CmpOp::Le, t1, Term::rat(Rat(3, 4)));

    // Replacing the whole implication by 1 gives the ground comparison.
    TableauFormula g1 = substitute(g, Term::rat(1L), t1);
    CHECK(g1 == TableauFormula::cmp(CmpOp::Le, Term::rat(1L), Term::rat(Rat(3, 4))));

    // Replacing the inner t-norm keeps the surrounding structure.
    TermPtr a0 = Term::param("a0L");
    TermPtr b0 = Term::param("b0L");
    TermPtr repl = Term::max(a0, Term::sub(Term::add(t1->rhs()->lhs(), t1->rhs()->rhs()), b0));
    TableauFormula g2 = substitute(TableauFormula::cmp(CmpOp::Le, a0, inner), repl, inner);
    CHECK(g2 == TableauFormula::cmp(CmpOp::Le, a0, repl));
    CHECK(render_tableau_formula(g2) == "a0L <= max(a0L, p + r - b0L)");

    // Absent target: unchanged.
    TableauFormula g3 = TableauFormula::cmp(CmpOp::Le, tau("q", m), Term::rat(1L));
    CHECK(substitute(g3, Term::rat(1L), inner) == g3);
}

TEST_CASE("interpreted subterm collection") {
    TranslationMap m;
    TermPtr t1 = tau("1 -> p & r", m);
    TermPtr t2 = tau("D r -> p \\/ q", m);

    // The worked example's root carries four distinct interpreted subterms.
    Interval j1 = make_interval(Rat(0), Rat(1, 2), true, false);
    Interval j2 = make_interval(Rat(3, 4), Rat(1), false, false);
    std::vector<TableauFormula> root = {eta(t1, j1, 1), eta(t1, j2, 2), eta(t2, j1, 1),
                                        eta(t2, j2, 2)};
    TermSet s = interpreted_subterms(root);
    CHECK(s.size() == 4);
    CHECK(s.count(t1) == 1);
    CHECK(s.count(t1->rhs()) == 1);      // p * r
    CHECK(s.count(t2) == 1);
    CHECK(s.count(t2->lhs()) == 1);      // D r

    // Pure L0 formulas carry none.
    std::vector<TableauFormula> l0 = {
        TableauFormula::cmp(CmpOp::Le, Term::var("x"), Term::rat(1L))};
    CHECK(interpreted_subterms(l0).empty());

    // Distinctness: both sides of x*y <= x*y are one subterm.
    TermPtr xy = Term::tnorm(Term::var("x"), Term::var("y"));
    std::vector<TableauFormula> dup = {TableauFormula::cmp(CmpOp::Le, xy, xy)};
    CHECK(interpreted_subterms(dup).size() == 1);
}

TEST_CASE("substitution removes the target from the interpreted set") {
    TranslationMap m;
    TermPtr t1 = tau("1 -> p & r", m);
    TermPtr inner = t1->rhs();
    TableauFormula g = TableauFormula::cmp(CmpOp::Le, t1, Term::rat(1L));
    TableauFormula h = substitute(g, Term::min(inner->lhs(), inner->rhs()), inner);
    TermSet s = interpreted_subterms({h});
    CHECK(s.count(inner) == 0);
}

TEST_CASE("ground evaluation follows the standard structure") {
    std::map<std::string, Rat> vars = {{"x", Rat(3, 4)}, {"y", Rat(1, 2)}};
    std::map<std::string, Rat> params = {{"a0L", Rat(1, 4)}};
    TermEnv env;
    env.vars = &vars;
    env.params = &params;

    TermPtr x = Term::var("x");
    TermPtr y = Term::var("y");
    CHECK(eval_term(Term::add(x, y), env) == Rat(5, 4));
    CHECK(eval_term(Term::sub(y, x), env) == Rat(-1, 4));
    CHECK(eval_term(Term::mul(x, y), env) == Rat(3, 8));
    CHECK(eval_term(Term::min(x, y), env) == Rat(1, 2));
    CHECK(eval_term(Term::max(x, y), env) == Rat(3, 4));
    CHECK(eval_term(Term::param("a0L"), env) == Rat(1, 4));
    CHECK(eval_term(Term::div(x, y), env) == Rat(3, 2));

    // Division by zero is zero by convention.
    CHECK(eval_term(Term::div(Term::rat(1L), Term::sub(y, y)), env) == Rat(0));

    CHECK(eval_cmp(Cmp{CmpOp::Lt, y, x}, env));
    CHECK_FALSE(eval_cmp(Cmp{CmpOp::Lt, x, x}, env));
    CHECK(eval_cmp(Cmp{CmpOp::Eq, x, x}, env));

    CHECK_THROWS_AS(eval_term(Term::var("unbound"), env), std::invalid_argument);
    CHECK_THROWS_AS(eval_term(Term::tnorm(x, y), env), std::invalid_argument);
}

TEST_CASE("term rendering matches the trace notation") {
    TranslationMap m;
    CHECK(render_term(tau("1 -> p & r", m)) == "1 => p * r");
    CHECK(render_term(tau("D r -> p \\/ q", m)) == "D r => max(p, q)");
    CHECK(render_term(tau("~p", m)) == "1 - p");
    CHECK(render_term(Term::endpoint(EndpointSide::Plus, 2)) == "c2+");
    CHECK(render_cmp(Cmp{CmpOp::Lt, Term::var("p"), Term::rat(Rat(1, 2))}) == "p < 1/2");
}

TEST_CASE("terms compare structurally without normalization") {
    TermPtr pq = Term::add(Term::var("p"), Term::var("q"));
    TermPtr qp = Term::add(Term::var("q"), Term::var("p"));
    CHECK_FALSE(term_eq(pq, qp));  // no argument reordering
    CHECK(term_eq(pq, Term::add(Term::var("p"), Term::var("q"))));
    CHECK(pq->is_l0());
    CHECK_FALSE(Term::tnorm(pq, qp)->is_l0());
    CHECK(Term::endpoint(EndpointSide::Minus, 1)->is_l0());
}
