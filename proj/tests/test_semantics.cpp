#include <doctest.h>

#include <fstream>

#include "identities.hpp"

using namespace histnec;
using namespace histnec::testing;

namespace {

std::string corpus(const std::string& f) { return std::string(HISTNEC_CORPUS_DIR) + "/" + f; }

struct Tiger {
    std::shared_ptr<const Model> m = std::make_shared<const Model>(load_model_file(corpus("tiger.json")));
    Context c = load_context_file(*m, corpus("tiger-ctx.json"));

    bool at(std::size_t i, const char* f) const { return eval(make_point(m, c, "w1_5", i), parse(f)).value; }
};

std::vector<std::size_t> members(const TimelineSet& s) { return s.members(); }

}  // namespace

TEST_CASE("tiger claims") {
    const Tiger t;
    CHECK(t.at(0, "box X (l | r)"));
    CHECK(t.at(0, "[X l] X ~a"));
    CHECK(t.at(0, "[X r] X a"));
    CHECK(t.at(1, "box (l | r)"));
    CHECK(t.at(1, "[l] ~a"));
    CHECK(t.at(1, "[r] a"));
    CHECK_FALSE(t.at(0, "#f"));
}

TEST_CASE("tiger rules and updates") {
    const Tiger t;
    CHECK(members(generated_rule(*t.m, t.c, parse("X l"), 0).members) == std::vector<std::size_t>{2, 3});
    CHECK(members(generated_rule(*t.m, t.c, parse("l"), 1).members) == std::vector<std::size_t>{2, 3});
    const Context u = update_context(*t.m, t.c, parse("X l"), 0);
    REQUIRE(u.rules.size() == 5);
    CHECK(u.rules[0].name == "[X l]^0");
    CHECK(members(acceptable(*t.m, u)) == std::vector<std::size_t>{2});
    CHECK(acceptable(*t.m, update_context(*t.m, t.c, top(), 1)) == acceptable(*t.m, t.c));
    CHECK(generated_rule(*t.m, t.c, top(), 0).members.count() == 6);
}

TEST_CASE("small countermodels") {
    auto material = std::make_shared<const Model>(load_model_file(corpus("material.json")));
    const Point f2 = make_point(material, Context{}, "w1_1", 1);
    CHECK(eval(f2, parse("[p] box p")).value);
    CHECK_FALSE(eval(f2, parse("box (p -> box p)")).value);

    auto cases = std::make_shared<const Model>(load_model_file(corpus("cases.json")));
    const Point c = make_point(cases, Context{}, "w1_1", 1);
    CHECK(eval(c, parse("[p] p")).value);
    CHECK(eval(c, parse("[~p] ~p")).value);
    CHECK_FALSE(eval(c, parse("box p | box ~p")).value);
}

TEST_CASE("corpus entries replay") {
    const Json doc = Json::parse(std::ifstream(corpus("entries.json")));
    std::size_t checks = 0;
    for (const auto& e : doc.at("entries")) {
        auto m = std::make_shared<const Model>(load_model_file(corpus(e.at("model"))));
        const Context c = load_context_file(*m, corpus(e.at("context")));
        for (const auto& chk : e.at("checks")) {
            const Point pt = make_point(m, c, chk.at("leaf"), chk.at("instant"));
            CHECK_MESSAGE(eval(pt, parse(chk.at("formula").get<std::string>())).value == chk.at("expected").get<bool>(),
                          chk.at("formula").get<std::string>());
            ++checks;
        }
    }
    CHECK(checks >= 17);
}

TEST_CASE("Y holds vacuously at the root") {
    Gen g(30);
    for (int k = 0; k < 50; ++k) {
        auto m = g.model(2, 2);
        const Point pt{m, Context{}, 0, 0};
        CHECK(eval(pt, parse("Y #f")).value);
        CHECK(eval(pt, parse("Y p & Y ~p")).value);
        CHECK_FALSE(eval(Point{m, Context{}, 0, 1}, parse("Y #f")).value);
    }
}

TEST_CASE("errors") {
    const Tiger t;
    try {
        eval(make_point(t.m, t.c, "w1_5", 0), parse("X X p"));
        FAIL("expected HorizonExceeded");
    } catch (const SemanticError& e) {
        CHECK(e.kind() == SemanticErrorKind::HorizonExceeded);
    }
    try {
        eval(make_point(t.m, t.c, "w1_5", 0), parse("[[l] a] a"));
        FAIL("expected NonXYAntecedent");
    } catch (const SemanticError& e) {
        CHECK(e.kind() == SemanticErrorKind::NonXYAntecedent);
    }
}

TEST_CASE("trace lists visits in pre-order") {
    const Tiger t;
    const Verdict v = eval(make_point(t.m, t.c, "w1_5", 1), parse("[l] ~a"), EvalOptions{true});
    REQUIRE(v.trace);
    REQUIRE_FALSE(v.trace->empty());
    CHECK(v.trace->front().subformula == parse("[l] ~a"));
    CHECK(v.trace->front().value);
    CHECK(format_trace(*t.m, *v.trace).find("w1_5") != std::string::npos);
}

TEST_CASE("X and Y distribute over the connectives") {
    for (const auto& id : shift_identities()) {
        Gen g(31);
        CHECK_MESSAGE(pointwise(g, id.draw, 200).empty(), id.name);
    }
}

TEST_CASE("conditionals distribute and flatten") {
    for (const auto& id : conditional_identities()) {
        Gen g(32);
        CHECK_MESSAGE(pointwise(g, id.draw, 200).empty(), id.name);
    }
}

TEST_CASE("printed form of the fourth identity fails when the update empties AT") {
    const Formula printed = parse("[#f] <#t> #t <-> <#f & #t> #t");
    Gen g(33);
    const Point pt = g.point(0);
    CHECK_FALSE(eval(pt, printed).value);
}

TEST_CASE("update is intersection with the generated rule") {
    Gen g(34);
    for (int k = 0; k < 300; ++k) {
        const Formula a = g.xy(g.below(4));
        const Point pt = g.point(horizon(a));
        const Model& m = *pt.model;
        const TimelineSet direct = acceptable(m, pt.context) & generated_rule(m, Context{}, a, pt.instant).members;
        REQUIRE(acceptable(m, update_context(m, pt.context, a, pt.instant)) == direct);
        REQUIRE(generated_rule(m, pt.context, a, pt.instant).members == generated_rule(m, Context{}, a, pt.instant).members);
    }
}

TEST_CASE("two updates at one instant equal the conjoined update") {
    Gen g(35);
    for (int k = 0; k < 300; ++k) {
        const Formula a = g.xy(g.below(3)), b = g.xy(g.below(3));
        const Point pt = g.point(std::max(horizon(a), horizon(b)));
        const Model& m = *pt.model;
        const Context twice = update_context(m, update_context(m, pt.context, a, pt.instant), b, pt.instant);
        const Context once = update_context(m, pt.context, Formula::conjunction(a, b), pt.instant);
        REQUIRE(acceptable(m, twice) == acceptable(m, once));
    }
}

TEST_CASE("closed formulas do not depend on the timeline") {
    Gen g(36);
    for (int k = 0; k < 300; ++k) {
        const Formula chi = closed(g);
        const Point pt = g.point(horizon(chi));
        const bool here = eval(pt, chi).value;
        acceptable(*pt.model, pt.context).for_each([&](std::size_t t) {
            REQUIRE(eval(Point{pt.model, pt.context, t, pt.instant}, chi).value == here);
        });
    }
}

TEST_CASE("facts on conditional-free antecedents") {
    Gen g(37);
    for (int k = 0; k < 300; ++k) {
        const Formula a = g.xy(g.below(4)), b = g.xy(g.below(4));
        const Formula reflexive = Formula::con(a, a);
        const Formula lowered = iff(Formula::con(a, b), box(implies(a, b)));
        REQUIRE(eval(g.point(horizon(reflexive)), reflexive).value);
        REQUIRE(eval(g.point(horizon(lowered)), lowered).value);
    }
}

TEST_CASE("derived operators match their clauses") {
    Gen g(38);
    for (int k = 0; k < 300; ++k) {
        const Formula phi = g.any(g.below(4), 1);
        const Formula a = g.xy(g.below(3));
        const Point pt = g.point(std::max(horizon(phi), horizon(a)));
        REQUIRE(eval(pt, box(phi)).value == box_clause(pt, phi));
        REQUIRE(eval(pt, diamond(phi)).value == diamond_clause(pt, phi));
        REQUIRE(eval(pt, dual(a, phi)).value == dual_clause(pt, a, phi));
    }
}

TEST_CASE("conditional-free truth ignores the context") {
    Gen g(39);
    for (int k = 0; k < 300; ++k) {
        const Formula a = g.xy(g.below(5));
        const Point pt = g.point(horizon(a));
        REQUIRE(eval(pt, a).value == eval(Point{pt.model, Context{}, pt.timeline, pt.instant}, a).value);
    }
}
