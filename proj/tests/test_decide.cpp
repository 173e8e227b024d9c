#include <doctest.h>

#include "gen.hpp"
#include "histnec/decide.hpp"
#include "histnec/reduce.hpp"
#include "histnec/semantics.hpp"

using namespace histnec;
using histnec::testing::Gen;

namespace {

OracleBounds bounds(std::size_t depth = 3, std::size_t branch = 2, ContextMode mode = ContextMode::SingleRule) {
    OracleBounds b;
    b.max_depth = depth;
    b.max_branch = branch;
    b.context_mode = mode;
    return b;
}

CoreFormula core(const char* h, std::vector<const char*> is, const char* l) {
    CoreFormula cf;
    cf.h = parse(h);
    cf.i.clear();
    for (const char* i : is) cf.i.push_back(parse(i));
    cf.l = parse(l);
    return cf;
}

// The subtree spanned by the timelines in `keep`.
std::shared_ptr<const Model> restrict(const Model& m, const TimelineSet& keep) {
    std::vector<bool> used(m.state_count(), false);
    keep.for_each([&](std::size_t t) {
        for (StateIndex s : m.timelines()[t].path) used[s] = true;
    });
    ModelSpec spec = m.spec();
    std::vector<StateSpec> states;
    for (const auto& s : spec.states)
        if (used[*m.find_state(s.id)]) states.push_back(s);
    spec.states = std::move(states);
    return std::make_shared<const Model>(Model::build(spec));
}

}  // namespace

TEST_CASE("cores") {
    auto cores = to_cores(parse("box (Y #f | X p) & ~box X p"));
    REQUIRE(cores.size() == 1);
    CHECK(cores[0].h == parse("Y #f | X p"));
    CHECK(cores[0].i == std::vector<Formula>{parse("~X p")});
    CHECK(is_top(cores[0].l));

    cores = to_cores(parse("p"));
    REQUIRE(cores.size() == 1);
    CHECK(is_top(cores[0].h));
    CHECK(cores[0].i.size() == 1);
    CHECK(is_top(cores[0].i[0]));
    CHECK(cores[0].l == parse("p"));

    cores = to_cores(parse("box p & box q & r"));
    REQUIRE(cores.size() == 1);
    CHECK(cores[0].h == parse("p & q"));
    CHECK(cores[0].l == parse("r"));

    CHECK_THROWS_AS(to_cores(parse("[p] q")), ReduceError);
}

TEST_CASE("basic sequences") {
    const auto bs = basic_sequence(core("p", {"q"}, "r"));
    CHECK(bs == std::vector<Formula>{parse("p & q"), parse("p & r")});
    const auto trivial = basic_sequence(CoreFormula{});
    CHECK(trivial == std::vector<Formula>{Formula::conjunction(top(), top()), Formula::conjunction(top(), top())});
}

TEST_CASE("core satisfiability") {
    const auto lav = sat_core(core("Y #f | X p", {"~X p"}, "#t"));
    REQUIRE(lav);
    CHECK(lav->instant == 0);
    CHECK(eval(lav->point(), to_formula(core("Y #f | X p", {"~X p"}, "#t"))).value);

    CHECK_FALSE(sat_core(core("#t", {"p & Y q & Y Y #f", "~p & Y ~q & Y Y #f"}, "#t")));
    CHECK_FALSE(sat_core(core("p", {"~p"}, "#t")));
    CHECK_FALSE(satisfiable(parse("p & ~p")));
    const auto w = satisfiable(parse("~([X l] X ~a)"));
    REQUIRE(w);
    CHECK_FALSE(eval(w->point(), parse("[X l] X ~a")).value);
    CHECK(satisfiable(parse("~(box X p | box X ~p)")));
}

TEST_CASE("the separating core needs no deeper tree") {
    const Formula f = to_formula(core("#t", {"p & Y q & Y Y #f", "~p & Y ~q & Y Y #f"}, "#t"));
    OracleBounds b = bounds(3, 3, ContextMode::Empty);
    b.atoms = {"p", "q"};
    CHECK_FALSE(brute_force(Formula::negation(f), b).counterexample);
}

TEST_CASE("validity") {
    CHECK(valid(parse("[X p] X p")).valid);
    const auto r = valid(parse("p -> box p"));
    CHECK_FALSE(r.valid);
    REQUIRE(r.countermodel);
    CHECK_FALSE(eval(r.countermodel->point(), parse("p -> box p")).value);
    CHECK_FALSE(valid(parse("[p] box p <-> box (p -> box p)")).valid);
    CHECK(valid(parse("X p | X ~p")).valid);
    CHECK_FALSE(valid(parse("box X p | box X ~p")).valid);
    CHECK_FALSE(valid(parse("[#f] <#t> #t <-> <#f & #t> #t")).valid);
    CHECK(valid(parse("[#f] <#t> #t <-> [#f] #f | <#f & #t> #t")).valid);
}

TEST_CASE("oracle examples") {
    OracleBounds b = bounds(2, 2);
    b.atoms = {"p"};
    CHECK_FALSE(brute_force(parse("X p | X ~p"), b).counterexample);
    CHECK(brute_force(parse("box X p | box X ~p"), b).counterexample);
    const auto mono = brute_force(parse("[#t] dia ~p -> [#t & p] dia ~p"), bounds());
    REQUIRE(mono.counterexample);
    CHECK_FALSE(eval(mono.counterexample->point(), parse("[#t] dia ~p -> [#t & p] dia ~p")).value);
    CHECK_THROWS_AS(brute_force(parse("p"), bounds(4, 3)), DecideError);
    CHECK_THROWS_AS(brute_force(parse("[[p] q] r"), bounds()), SemanticError);
}

TEST_CASE("oracle budget") {
    OracleBounds b = bounds(3, 2);
    b.budget = 10;
    CHECK_THROWS_AS(brute_force(parse("X X X p | ~X X X p"), b), DecideError);
}

TEST_CASE("a single rule acts like the empty context on its subtree") {
    Gen g(51);
    for (int k = 0; k < 300; ++k) {
        const Formula f = g.bounded(2, [&] { return g.any(1 + g.below(6), 2); });
        const Point pt = g.point(horizon(f));
        const TimelineSet at = acceptable(*pt.model, pt.context);
        auto sub = restrict(*pt.model, at);
        std::size_t t_sub = 0;
        at.for_each([&](std::size_t t) {
            const bool full = eval(Point{pt.model, pt.context, t, pt.instant}, f).value;
            const bool local = eval(Point{sub, Context{}, t_sub++, pt.instant}, f).value;
            REQUIRE(full == local);
        });
    }
}

TEST_CASE("cores imply their basic sequences") {
    Gen g(52);
    for (int k = 0; k < 60; ++k) {
        CoreFormula cf;
        cf.h = kappa(g.xy(g.below(3)));
        cf.i = {kappa(g.xy(g.below(3)))};
        if (g.coin()) cf.i.push_back(kappa(g.xy(g.below(3))));
        cf.l = kappa(g.xy(g.below(3)));
        if (horizon(to_formula(cf)) > 2) continue;
        std::vector<Formula> dia;
        for (const auto& b : basic_sequence(cf)) dia.push_back(diamond(b));
        REQUIRE_FALSE(brute_force(implies(to_formula(cf), conjoin(dia)), bounds()).counterexample);
    }
}

TEST_CASE("validity agrees with the oracle") {
    Gen g(53);
    for (int k = 0; k < 150; ++k) {
        const Formula f = g.bounded(2, [&] { return g.any(1 + g.below(8), 1); });
        const ValidityResult v = valid(f);
        if (v.valid) {
            REQUIRE_FALSE(brute_force(f, bounds()).counterexample);
        } else {
            REQUIRE(v.countermodel);
            REQUIRE_FALSE(eval(v.countermodel->point(), f).value);
        }
    }
}

TEST_CASE("stronger antecedents weaken conditionals") {
    Gen g(54);
    int tried = 0;
    while (tried < 60) {
        const Formula a = g.xy(g.below(3)), b = g.xy(g.below(3)), c = g.any(g.below(3), 1);
        if (!valid(implies(a, b)).valid) continue;
        ++tried;
        REQUIRE(valid(implies(Formula::con(b, c), Formula::con(a, c))).valid);
    }
}

TEST_CASE("dual is the negated conditional") {
    Gen g(55);
    for (int k = 0; k < 60; ++k) {
        const Formula a = g.xy(g.below(3)), phi = g.any(g.below(3), 1);
        REQUIRE(valid(iff(dual(a, phi), Formula::negation(Formula::con(a, Formula::negation(phi))))).valid);
    }
}
