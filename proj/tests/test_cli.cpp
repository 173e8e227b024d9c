#include <doctest.h>

#include <array>
#include <cstdio>
#include <sstream>

#include "histnec/cli.hpp"

using namespace histnec;

namespace {

struct Out {
    int code;
    std::string out;
    std::string err;
};

Out cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string corpus(const std::string& f) { return std::string(HISTNEC_CORPUS_DIR) + "/" + f; }

std::string shell(const std::string& args) {
    std::string cmd = std::string("\"") + HISTNEC_CLI_PATH + "\" " + args + " 2>&1";
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    pclose(p);
    return out;
}

}  // namespace

TEST_CASE("eval") {
    const auto r = cli({"eval", "--model", corpus("tiger.json"), "--context", corpus("tiger-ctx.json"), "--leaf", "w1_5", "--instant", "0",
                        "[X l] X ~a"});
    CHECK(r.code == 0);
    CHECK(r.out == "true\n");
    const auto f = cli({"eval", "--model", corpus("tiger.json"), "--leaf", "w1_1", "a"});
    CHECK(f.code == 1);
    CHECK(f.out == "false\n");
    const auto t = cli({"--trace", "eval", "--model", corpus("tiger.json"), "--leaf", "w1_1", "~a"});
    CHECK(t.out.find("w1_1") != std::string::npos);
}

TEST_CASE("validity and reduction") {
    const auto v = cli({"valid", "[X p] X p"});
    CHECK(v.code == 0);
    CHECK(v.out == "VALID\n");
    const auto inv = cli({"valid", "p -> box p"});
    CHECK(inv.code == 1);
    CHECK(inv.out.rfind("INVALID\n", 0) == 0);
    CHECK(inv.out.find("countermodel") != std::string::npos);
    CHECK(cli({"reduce", "--stage", "mu", "[p][q]r"}).out == "box ((p & q) -> r)\n");
    CHECK(cli({"reduce", "--stage", "kappa", "X Y p"}).out == "p\n");
    CHECK(cli({"sat", "p & ~p"}).out == "UNSAT\n");
    CHECK(cli({"sat", "p & ~p"}).code == 1);
    CHECK(cli({"oracle", "--max-depth", "2", "box X p | box X ~p"}).code == 1);
}

TEST_CASE("json output") {
    const auto r = cli({"--format", "json", "valid", "box X p | box X ~p"});
    const Json doc = Json::parse(r.out);
    CHECK(doc.at("verdict") == "INVALID");
    CHECK(doc.at("countermodel").contains("model"));
    const Json p = Json::parse(cli({"--format", "json", "parse", "X X p"}).out);
    CHECK(p.at("horizon") == 2);
}

TEST_CASE("rules and updates") {
    const auto r = cli({"rule", "--model", corpus("tiger.json"), "--context", corpus("tiger-ctx.json"), "--instant", "0", "X l"});
    CHECK(r.out == "[X l]^0 = {w1_3, w1_4}\n");
    const auto u = cli({"update", "--model", corpus("tiger.json"), "--context", corpus("tiger-ctx.json"), "--instant", "0", "X l"});
    CHECK(u.out.find("AT = {w1_3}") != std::string::npos);
}

TEST_CASE("proof check") {
    CHECK(cli({"proof", "check", corpus("proofs/axiom5.json")}).code == 0);
    CHECK(cli({"proof", "check", corpus("proofs/onebox.json"), "--embed"}).code == 0);
}

TEST_CASE("exit codes") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"parse", "p &"}).code == 2);
    CHECK(cli({"eval", "--model", corpus("tiger.json"), "--leaf", "w1_1", "X X p"}).code == 3);
    CHECK(cli({"eval", "--model", corpus("missing.json"), "--leaf", "w1_1", "p"}).code == 3);
    CHECK(cli({"reduce", "--stage", "mu", "X [p] q"}).code == 3);
}

TEST_CASE("demos") {
    const Report tiger = demo("tiger", HISTNEC_CORPUS_DIR);
    CHECK(tiger.all_agree());
    CHECK(tiger.entries.size() >= 6);
    CHECK(demo("figures", HISTNEC_CORPUS_DIR).all_agree());
    const Report lav = demo("lavenham", HISTNEC_CORPUS_DIR);
    CHECK(lav.all_agree());
    CHECK_FALSE(lav.notes.empty());
    CHECK_THROWS_AS(demo("nope", HISTNEC_CORPUS_DIR), std::invalid_argument);
}

TEST_CASE("deterministic runs are byte-identical") {
    const std::string a = shell("--deterministic demo lavenham --format json");
    const std::string b = shell("--deterministic demo lavenham --format json");
    CHECK_FALSE(a.empty());
    CHECK(a == b);
}
