#include <doctest.h>

#include <algorithm>

#include "gen.hpp"
#include "histnec/model.hpp"

using namespace histnec;
using histnec::testing::Gen;

namespace {

std::string corpus(const std::string& f) { return std::string(HISTNEC_CORPUS_DIR) + "/" + f; }

Json chain(std::size_t depth) {
    Json states = Json::array();
    states.push_back({{"id", "s0"}, {"parent", nullptr}, {"atoms", Json::array()}});
    for (std::size_t k = 1; k <= depth; ++k)
        states.push_back({{"id", "s" + std::to_string(k)}, {"parent", "s" + std::to_string(k - 1)}, {"atoms", Json::array()}});
    return {{"depth", depth}, {"root", "s0"}, {"states", states}};
}

ModelErrorKind error_of(const Json& doc) {
    try {
        load_model(doc);
    } catch (const ModelError& e) {
        return e.kind();
    }
    FAIL("expected ModelError");
    return ModelErrorKind::BadDocument;
}

}  // namespace

TEST_CASE("tiger model loads") {
    const Model m = load_model_file(corpus("tiger.json"));
    CHECK(m.state_count() == 7);
    CHECK(m.depth() == 1);
    CHECK(m.timeline_count() == 6);
    CHECK(acceptable(m, Context{}).count() == 6);
    const Context c = load_context_file(m, corpus("tiger-ctx.json"));
    CHECK(acceptable(m, c).members() == std::vector<std::size_t>{2, 4});
}

TEST_CASE("two-level tree and its context") {
    const Model branching = load_model_file(corpus("branching.json"));
    CHECK(branching.state_count() == 7);
    CHECK(branching.depth() == 2);
    CHECK(branching.timeline_count() == 4);
    const Model ruled = load_model_file(corpus("rules.json"));
    CHECK(acceptable(ruled, load_context_file(ruled, corpus("rules-ctx.json"))).members() == std::vector<std::size_t>{1, 2});
}

TEST_CASE("chains have one timeline") {
    const Model m = load_model(chain(3));
    CHECK(m.timeline_count() == 1);
    CHECK(m.timelines()[0].path.size() == 4);
}

TEST_CASE("invalid documents") {
    Json two_roots = chain(1);
    two_roots["states"].push_back({{"id", "x"}, {"parent", nullptr}, {"atoms", Json::array()}});
    CHECK(error_of(two_roots) == ModelErrorKind::NonTree);

    Json ragged = chain(2);
    ragged["states"].push_back({{"id", "x"}, {"parent", "s0"}, {"atoms", Json::array()}});
    CHECK(error_of(ragged) == ModelErrorKind::RaggedDepth);

    Json orphan = chain(1);
    orphan["states"].push_back({{"id", "x"}, {"parent", "nowhere"}, {"atoms", Json::array()}});
    CHECK(error_of(orphan) == ModelErrorKind::UnknownState);

    Json dup = chain(1);
    dup["states"].push_back({{"id", "s1"}, {"parent", "s0"}, {"atoms", Json::array()}});
    CHECK(error_of(dup) == ModelErrorKind::NonTree);

    CHECK(error_of(Json{{"depth", -1}}) == ModelErrorKind::BadDocument);
}

TEST_CASE("points") {
    auto m = std::make_shared<const Model>(load_model_file(corpus("tiger.json")));
    const Context c = load_context_file(*m, corpus("tiger-ctx.json"));
    const Point ok = make_point(m, c, "w1_5", 0);
    CHECK(ok.timeline == 4);
    auto kind = [&](const std::string& leaf, std::size_t i, const Context& ctx) {
        try {
            make_point(m, ctx, leaf, i);
        } catch (const ModelError& e) {
            return e.kind();
        }
        return ModelErrorKind::BadDocument;
    };
    CHECK(kind("w1_2", 0, c) == ModelErrorKind::TimelineNotAcceptable);
    CHECK(kind("w1_1", 2, Context{}) == ModelErrorKind::InstantOutOfRange);
    CHECK(kind("nope", 0, Context{}) == ModelErrorKind::UnknownState);
}

TEST_CASE("documents round-trip") {
    Gen g(21);
    for (int k = 0; k < 50; ++k) {
        auto m = g.model(1 + g.below(3), 3);
        const Context c = g.context(*m, 3);
        const Model back = load_model(model_to_json(*m));
        CHECK(model_to_json(back) == model_to_json(*m));
        const Context cb = load_context(back, context_to_json(*m, c));
        CHECK(acceptable(back, cb) == acceptable(*m, c));
    }
}

TEST_CASE("acceptable sets are intersections") {
    Gen g(22);
    for (int k = 0; k < 200; ++k) {
        auto m = g.model(1 + g.below(3), 3);
        Context c = g.context(*m, 3);
        const TimelineSet before = acceptable(*m, c);
        const TimelineSet r = g.subset(*m);
        c.rules.push_back({"extra", r});
        const TimelineSet after = acceptable(*m, c);
        CHECK(after == (before & r));
        Context shuffled = c;
        std::reverse(shuffled.rules.begin(), shuffled.rules.end());
        for (std::size_t n = 0; n < shuffled.rules.size(); ++n) shuffled.rules[n].name = "S" + std::to_string(n);
        CHECK(acceptable(*m, shuffled) == after);
    }
}

TEST_CASE("paths are unique per leaf") {
    Gen g(23);
    auto m = g.model(3, 3);
    for (std::size_t t = 0; t < m->timeline_count(); ++t) {
        const auto& path = m->timelines()[t].path;
        CHECK(path.front() == m->root());
        CHECK(path.back() == m->timelines()[t].leaf);
        for (std::size_t k = 1; k < path.size(); ++k) CHECK(m->parent(path[k]) == path[k - 1]);
    }
}
