#include "bltab/solver.hpp"

#include "bltab/error.hpp"
#include "bltab/smt_client.hpp"

#include <doctest.h>

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

using namespace bltab;

namespace {

std::string mock_cmd(const char* script) {
    const char* root = std::getenv("BLTAB_ROOT");
    REQUIRE(root != nullptr);
    return std::string("python3 ") + root + "/tests/mock/" + script;
}

std::vector<Interval> half_complement() {
    return {make_interval(Rat(0), Rat(1, 2), true, false),
            make_interval(Rat(3, 4), Rat(1), false, false)};
}

TableauFormula cmpf(CmpOp op, TermPtr l, TermPtr r) { return TableauFormula::cmp(op, l, r); }

}  // namespace

TEST_CASE("from_formulas inlines endpoint constants and orders symbols") {
    TermPtr p = Term::var("p");
    TermPtr a0 = Term::param("a0L");
    std::vector<TableauFormula> fs = {
        cmpf(CmpOp::Lt, p, Term::endpoint(EndpointSide::Minus, 1)),
        cmpf(CmpOp::Le, Term::endpoint(EndpointSide::Plus, 2), Term::add(a0, Term::var("q"))),
        cmpf(CmpOp::Le, Term::var("q"), p),
    };
    ConstraintSet e = ConstraintSet::from_formulas(fs, half_complement());
    REQUIRE(e.atoms.size() == 3);
    CHECK(e.atoms[0].rhs->kind() == TermKind::RatConst);
    CHECK(e.atoms[0].rhs->value() == Rat(0));       // c1- of [0,1/2)
    CHECK(e.atoms[1].lhs->value() == Rat(1));       // c2+ of (3/4,1)
    CHECK(e.vars == std::vector<std::string>{"p", "q"});
    CHECK(e.params == std::vector<std::string>{"a0L"});

    // Disjunctions and non-L0 formulas never reach the solver.
    TableauFormula d = TableauFormula::disjunct(Cmp{CmpOp::Lt, p, Term::rat(0L)},
                                                Cmp{CmpOp::Le, Term::rat(1L), p});
    CHECK_THROWS_AS(ConstraintSet::from_formulas({d}, {}), std::invalid_argument);
    TableauFormula bad = cmpf(CmpOp::Le, Term::tnorm(p, p), Term::rat(1L));
    CHECK_THROWS_AS(ConstraintSet::from_formulas({bad}, {}), std::invalid_argument);
    TableauFormula oob = cmpf(CmpOp::Lt, p, Term::endpoint(EndpointSide::Minus, 3));
    CHECK_THROWS_AS(ConstraintSet::from_formulas({oob}, half_complement()),
                    std::invalid_argument);
}

TEST_CASE("exact screens refute without any search") {
    SolverConfig cfg;  // grid backend

    // Strict comparison between identical terms.
    TermPtr p = Term::var("p");
    ConstraintSet e1 = ConstraintSet::from_formulas({cmpf(CmpOp::Lt, p, p)}, {});
    SolverResult r1 = check_constraints(e1, cfg);
    CHECK(r1.status == SolveStatus::Unsat);
    CHECK(r1.reason.find("identical terms") != std::string::npos);

    // False ground comparison (the closed branch of the worked example).
    ConstraintSet e2 = ConstraintSet::from_formulas(
        {cmpf(CmpOp::Le, Term::rat(1L), Term::rat(Rat(3, 4)))}, {});
    SolverResult r2 = check_constraints(e2, cfg);
    CHECK(r2.status == SolveStatus::Unsat);
    CHECK(r2.reason.find("ground comparison is false") != std::string::npos);

    // grid_search alone never reports Unsat, even here.
    CHECK(grid_search(e2, 4, 1000).status == SolveStatus::Unknown);
}

TEST_CASE("bound propagation refutes pinned-parameter conflicts") {
    // 1 <= b0, b0 <= 1 pins b0 = 1; then b0 - 1 + max(a0, p + r - b0) < 0
    // is impossible because the max is nonnegative.
    TermPtr a0 = Term::param("a0L");
    TermPtr b0 = Term::param("b0L");
    TermPtr p = Term::var("p");
    TermPtr r = Term::var("r");
    TermPtr m = Term::max(a0, Term::sub(Term::add(p, r), b0));
    std::vector<TableauFormula> fs = {
        cmpf(CmpOp::Le, Term::rat(1L), b0),
        cmpf(CmpOp::Le, b0, Term::rat(1L)),
        cmpf(CmpOp::Lt, Term::add(Term::sub(b0, Term::rat(1L)), m), Term::rat(0L)),
    };
    ConstraintSet e = ConstraintSet::from_formulas(fs, {});

    Propagation prop = propagate_bounds(e);
    CHECK(prop.contradiction);
    CHECK_FALSE(prop.culprit.empty());

    SolverResult r1 = check_constraints(e, SolverConfig{});
    CHECK(r1.status == SolveStatus::Unsat);
    CHECK(r1.reason.find("bound propagation") != std::string::npos);
}

TEST_CASE("bound propagation narrows ranges soundly") {
    TermPtr p = Term::var("p");
    TermPtr q = Term::var("q");
    std::vector<TableauFormula> fs = {
        cmpf(CmpOp::Le, Term::rat(Rat(1, 2)), p),
        cmpf(CmpOp::Lt, q, Term::rat(Rat(1, 4))),
        cmpf(CmpOp::Le, p, q),  // forces p <= q < 1/4: contradiction with 1/2 <= p
    };
    ConstraintSet e = ConstraintSet::from_formulas(fs, {});
    Propagation prop = propagate_bounds(e);
    CHECK(prop.contradiction);

    ConstraintSet e2 = ConstraintSet::from_formulas(
        {cmpf(CmpOp::Le, Term::rat(Rat(1, 2)), p), cmpf(CmpOp::Lt, p, Term::rat(Rat(3, 4)))}, {});
    Propagation p2 = propagate_bounds(e2);
    CHECK_FALSE(p2.contradiction);
    REQUIRE(p2.var_ranges.count("p") == 1);
    CHECK(p2.var_ranges["p"].lo.v == Rat(1, 2));
    CHECK_FALSE(p2.var_ranges["p"].lo.open);
    CHECK(p2.var_ranges["p"].hi.v == Rat(3, 4));
    CHECK(p2.var_ranges["p"].hi.open);
}

TEST_CASE("grid search is Sat-only and exact") {
    TermPtr x = Term::var("x");

    // x*x = 1/2 has no rational solution, so no grid hits it: Unknown.
    ConstraintSet e1 =
        ConstraintSet::from_formulas({cmpf(CmpOp::Eq, Term::mul(x, x), Term::rat(Rat(1, 2)))}, {});
    SolverResult r1 = grid_search(e1, 4, 100000);
    CHECK(r1.status == SolveStatus::Unknown);

    // Trivial Sat with a symbol.
    ConstraintSet e2 = ConstraintSet::from_formulas({cmpf(CmpOp::Le, x, x)}, {});
    SolverResult r2 = grid_search(e2, 4, 100000);
    REQUIRE(r2.status == SolveStatus::Sat);
    REQUIRE(r2.solution.has_value());
    CHECK(r2.solution->exact);
    CHECK(r2.solution->sigma.count("x") == 1);

    // No symbols and ground-true: Sat with the empty solution.
    ConstraintSet e3 = ConstraintSet::from_formulas(
        {cmpf(CmpOp::Le, Term::rat(0L), Term::rat(1L))}, {});
    SolverResult r3 = grid_search(e3, 4, 100000);
    REQUIRE(r3.status == SolveStatus::Sat);
    CHECK(r3.solution->sigma.empty());
    CHECK(r3.solution->rho.empty());

    // Budget exhaustion is reported as such.
    TermPtr y = Term::var("y");
    TermPtr z = Term::var("z");
    ConstraintSet e4 = ConstraintSet::from_formulas(
        {cmpf(CmpOp::Eq, Term::mul(Term::mul(x, y), z), Term::rat(Rat(1, 3)))}, {});
    SolverResult r4 = grid_search(e4, 16, 5);
    CHECK(r4.status == SolveStatus::Unknown);
    CHECK(r4.reason.find("budget") != std::string::npos);

    CHECK_THROWS_AS(grid_search(e2, 0, 10), std::invalid_argument);
}

TEST_CASE("grid search finds the first point in enumeration order") {
    // Parameters before variables, each counting 0, 1/d, ..., 1.
    TermPtr a = Term::param("a");
    TermPtr x = Term::var("x");
    ConstraintSet e = ConstraintSet::from_formulas(
        {cmpf(CmpOp::Le, Term::rat(Rat(1, 4)), a), cmpf(CmpOp::Lt, a, x)}, {});
    SolverResult r = grid_search(e, 4, 100000);
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.solution->rho.at("a") == Rat(1, 4));
    CHECK(r.solution->sigma.at("x") == Rat(1, 2));
}

TEST_CASE("encoding is deterministic and carries the range and division guards") {
    TermPtr x = Term::var("x");
    TermPtr b = Term::param("b0L");
    std::vector<TableauFormula> fs = {
        cmpf(CmpOp::Lt, Term::div(x, b), Term::rat(Rat(1, 3))),
        cmpf(CmpOp::Le, Term::min(x, b), Term::max(x, b)),
    };
    ConstraintSet e = ConstraintSet::from_formulas(fs, {});
    std::string s1 = encode(e);
    std::string s2 = encode(e);
    CHECK(s1 == s2);  // byte-for-byte deterministic

    CHECK(s1.find("(set-logic QF_NRA)") != std::string::npos);
    CHECK(s1.find("(declare-fun v_x () Real)") != std::string::npos);
    CHECK(s1.find("(declare-fun p_b0L () Real)") != std::string::npos);
    CHECK(s1.find("(assert (and (<= 0.0 v_x) (<= v_x 1.0)))") != std::string::npos);
    // Division becomes a guarded quotient symbol with u/0 = 0.
    CHECK(s1.find("(declare-fun q_0 () Real)") != std::string::npos);
    CHECK(s1.find("(assert (=> (not (= p_b0L 0.0)) (= (* q_0 p_b0L) v_x)))") != std::string::npos);
    CHECK(s1.find("(assert (=> (= p_b0L 0.0) (= q_0 0.0)))") != std::string::npos);
    // min/max are if-then-else.
    CHECK(s1.find("(ite (<= v_x p_b0L) v_x p_b0L)") != std::string::npos);
    CHECK(s1.find("(check-sat)") != std::string::npos);
    CHECK(s1.find("(get-value (v_x p_b0L))") != std::string::npos);

    // Without symbols there is nothing to ask a value for.
    ConstraintSet g = ConstraintSet::from_formulas(
        {cmpf(CmpOp::Le, Term::rat(0L), Term::rat(1L))}, {});
    CHECK(encode(g).find("(get-value") == std::string::npos);
}

TEST_CASE("smt client round-trips a rational sat answer") {
    std::string out = "(get-value (v_p p_a0L))";
    SmtResult r = run_smt("(check-sat)\n" + out + "\n", mock_cmd("mock_sat.py"), 10000);
    REQUIRE(r.status == SmtStatus::Sat);
    REQUIRE(r.values.count("v_p") == 1);
    CHECK(r.values["v_p"].value == Rat(1, 2));
    CHECK(r.values["v_p"].exact);
    CHECK(r.values.count("p_a0L") == 1);
}

TEST_CASE("smt client reports unsat, timeout, garbage and launch failures") {
    SmtResult u = run_smt("(check-sat)\n", mock_cmd("mock_unsat.py"), 10000);
    CHECK(u.status == SmtStatus::Unsat);

    SmtResult t = run_smt("(check-sat)\n", mock_cmd("mock_timeout.py"), 300);
    CHECK(t.status == SmtStatus::Unknown);
    CHECK(t.diagnostics.find("timeout") != std::string::npos);

    SmtResult g = run_smt("(check-sat)\n", mock_cmd("mock_garbage.py"), 10000);
    CHECK(g.status == SmtStatus::Error);
    CHECK(g.diagnostics.find("no verdict") != std::string::npos);

    SmtResult l = run_smt("(check-sat)\n", "surely-not-a-real-binary-7b2f", 1000);
    CHECK(l.status == SmtStatus::Error);
    CHECK(l.diagnostics.find("failed to launch") != std::string::npos);
}

TEST_CASE("smt client narrows algebraic root objects and decimal approximations") {
    // mock_root_obj answers sqrt(1/2) as (root-obj (+ (* 2 (^ x 2)) (- 1)) 2)
    // for plain symbols and as the decimal 0.7071067811? for *_dec names.
    std::string out = "(get-value (v_p v_p_dec))";
    SmtResult r = run_smt("(check-sat)\n" + out + "\n", mock_cmd("mock_root_obj.py"), 10000);
    REQUIRE(r.status == SmtStatus::Sat);

    REQUIRE(r.values.count("v_p") == 1);
    const SmtValue& root = r.values["v_p"];
    CHECK_FALSE(root.exact);
    CHECK(root.precision <= Rat(1, 1000000000000L));
    Rat err = root.value * root.value - Rat(1, 2);
    if (err < 0) err = -err;
    CHECK(err < Rat(1, 100000000000L));  // |v^2 - 1/2| tiny for v near sqrt(1/2)

    REQUIRE(r.values.count("v_p_dec") == 1);
    const SmtValue& dec = r.values["v_p_dec"];
    CHECK_FALSE(dec.exact);
    CHECK(dec.value == Rat(7071067811L, 10000000000L));
    CHECK(dec.precision == Rat(1, 10000000000L));
}

TEST_CASE("check_constraints drives the external backend end to end") {
    TermPtr p = Term::var("p");
    SolverConfig cfg;
    cfg.backend = Backend::Smt;

    // Sat answer whose value satisfies the set: accepted after self-check.
    cfg.smt_cmd = mock_cmd("mock_sat.py");
    ConstraintSet ok = ConstraintSet::from_formulas({cmpf(CmpOp::Le, p, Term::rat(Rat(1, 2)))}, {});
    SolverResult r1 = check_constraints(ok, cfg);
    REQUIRE(r1.status == SolveStatus::Sat);
    CHECK(r1.solution->sigma.at("p") == Rat(1, 2));

    // Sat answer that violates the set: the mandatory self-check refuses it.
    ConstraintSet lie = ConstraintSet::from_formulas({cmpf(CmpOp::Lt, p, Term::rat(Rat(1, 2)))}, {});
    CHECK_THROWS_AS(check_constraints(lie, cfg), InternalError);

    cfg.smt_cmd = mock_cmd("mock_unsat.py");
    SolverResult r2 = check_constraints(ok, cfg);
    CHECK(r2.status == SolveStatus::Unsat);

    cfg.smt_cmd.clear();
    SolverResult r3 = check_constraints(ok, cfg);
    CHECK(r3.status == SolveStatus::Unknown);
    CHECK(r3.reason.find("no external solver command") != std::string::npos);
}
