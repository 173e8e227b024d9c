#include "histnec/proofkit.hpp"

#include <fstream>
#include <functional>
#include <set>

namespace histnec {

const char* to_string(ProofSystem s) {
    switch (s) {
        case ProofSystem::ConSHN_BT: return "ConSHN-BT";
        case ProofSystem::OneBox_XY: return "OneBox-XY";
    }
    return "?";
}

const char* to_string(ProofErrorKind kind) {
    switch (kind) {
        case ProofErrorKind::BadSchema: return "BadSchema";
        case ProofErrorKind::BadSideCondition: return "BadSideCondition";
        case ProofErrorKind::BadReference: return "BadReference";
        case ProofErrorKind::ShapeMismatch: return "ShapeMismatch";
    }
    return "?";
}

namespace {

enum class Cond { XY, PL, NXY, Closed };

struct Schema {
    std::string id;
    std::string text;
    std::vector<std::pair<std::string, Cond>> conditions;
    Formula pattern;
};

std::vector<Schema> make(std::vector<Schema> list) {
    for (auto& s : list) s.pattern = parse(s.text);
    return list;
}

const std::vector<Schema>& schemas(ProofSystem system) {
    static const std::vector<Schema> big = make({
        {"2a", "X ~phi <-> ~X phi", {}, {}},
        {"2b", "X (phi & psi) <-> X phi & X psi", {}, {}},
        {"2c", "X Y phi <-> phi", {}, {}},
        {"2d", "X [alpha] phi <-> [X alpha] X phi", {{"alpha", Cond::XY}}, {}},
        {"2e", "~X ~#t", {}, {}},
        {"3a", "Y ~phi <-> Y #f | ~Y phi", {}, {}},
        {"3b", "Y (phi & psi) <-> Y phi & Y psi", {}, {}},
        {"3c", "Y X phi <-> Y #f | phi", {}, {}},
        {"3d", "Y [alpha] phi <-> [Y alpha] Y phi", {{"alpha", Cond::XY}}, {}},
        {"3e", "dia Y #f -> (dia alpha -> alpha)", {{"alpha", Cond::PL}}, {}},
        {"4a", "[alpha] (phi & psi) <-> [alpha] phi & [alpha] psi", {{"alpha", Cond::XY}}, {}},
        {"4b", "[alpha] (phi | chi) <-> [alpha] phi | [alpha] chi", {{"alpha", Cond::XY}, {"chi", Cond::Closed}}, {}},
        {"4c", "[alpha] [beta] gamma <-> [alpha & beta] gamma", {{"alpha", Cond::XY}, {"beta", Cond::XY}, {"gamma", Cond::XY}}, {}},
        {"4d", "[alpha] <beta> gamma <-> [alpha] #f | <alpha & beta> gamma", {{"alpha", Cond::XY}, {"beta", Cond::XY}, {"gamma", Cond::XY}}, {}},
        {"4e", "[alpha] beta <-> box (alpha -> beta)", {{"alpha", Cond::XY}, {"beta", Cond::XY}}, {}},
        {"5", "box alpha -> alpha", {{"alpha", Cond::XY}}, {}},
        {"K", "box (alpha -> beta) -> (box alpha -> box beta)", {{"alpha", Cond::XY}, {"beta", Cond::XY}}, {}},
    });
    static const std::vector<Schema> small = make({
        {"2", "~X ~#t", {}, {}},
        {"3", "dia Y #f -> (dia alpha -> alpha)", {{"alpha", Cond::PL}}, {}},
        {"4a", "box (alpha -> beta) -> (box alpha -> box beta)", {{"alpha", Cond::NXY}, {"beta", Cond::NXY}}, {}},
        {"4b", "box alpha -> alpha", {{"alpha", Cond::NXY}}, {}},
    });
    return system == ProofSystem::ConSHN_BT ? big : small;
}

// 4d as printed, without the [alpha]#f disjunct.
const Formula& printed_4d() {
    static const Formula f = parse("[alpha] <beta> gamma <-> <alpha & beta> gamma");
    return f;
}

const Schema* find_schema(ProofSystem system, const std::string& id) {
    for (const auto& s : schemas(system))
        if (s.id == id) return &s;
    return nullptr;
}

bool unify(const Formula& pattern, const Formula& f, Bindings& b) {
    if (pattern.is(Kind::Atom)) {
        auto [it, fresh] = b.emplace(pattern.name(), f);
        return fresh || it->second == f;
    }
    if (pattern.kind() != f.kind()) return false;
    for (std::size_t k = 0; k < pattern.arity(); ++k)
        if (!unify(pattern.child(k), f.child(k), b)) return false;
    return true;
}

Formula substitute(const Formula& pattern, const Bindings& b) {
    switch (pattern.kind()) {
        case Kind::Atom: {
            auto it = b.find(pattern.name());
            if (it == b.end()) throw std::invalid_argument("unbound metavariable " + pattern.name());
            return it->second;
        }
        case Kind::Bottom: return pattern;
        case Kind::Not: return Formula::negation(substitute(pattern.lhs(), b));
        case Kind::And: return Formula::conjunction(substitute(pattern.lhs(), b), substitute(pattern.rhs(), b));
        case Kind::Next: return Formula::next(substitute(pattern.lhs(), b));
        case Kind::Yesterday: return Formula::yesterday(substitute(pattern.lhs(), b));
        case Kind::Con: return Formula::con(substitute(pattern.lhs(), b), substitute(pattern.rhs(), b));
    }
    return pattern;
}

std::string violation(const Schema& s, const Bindings& b) {
    for (const auto& [var, cond] : s.conditions) {
        auto it = b.find(var);
        if (it == b.end()) return var + " is unbound";
        const Formula& f = it->second;
        switch (cond) {
            case Cond::XY:
                if (!in_xy(f)) return var + " := " + print(f, {true}) + " contains a conditional";
                break;
            case Cond::PL:
                if (!in_pl(f)) return var + " := " + print(f, {true}) + " is not propositional";
                break;
            case Cond::NXY:
                if (!in_nxy(f)) return var + " := " + print(f, {true}) + " is not in N_XY";
                break;
            case Cond::Closed:
                if (!is_closed(f)) return var + " := " + print(f, {true}) + " is not closed";
                break;
        }
    }
    return {};
}

void abstract(const Formula& f, std::vector<Formula>& vars) {
    switch (f.kind()) {
        case Kind::Bottom: return;
        case Kind::Not: abstract(f.lhs(), vars); return;
        case Kind::And:
            abstract(f.lhs(), vars);
            abstract(f.rhs(), vars);
            return;
        default:
            if (std::find(vars.begin(), vars.end(), f) == vars.end()) vars.push_back(f);
    }
}

bool truth(const Formula& f, const std::vector<Formula>& vars, std::uint64_t row) {
    switch (f.kind()) {
        case Kind::Bottom: return false;
        case Kind::Not: return !truth(f.lhs(), vars, row);
        case Kind::And: return truth(f.lhs(), vars, row) && truth(f.rhs(), vars, row);
        default: {
            const auto k = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), f) - vars.begin());
            return row >> k & 1U;
        }
    }
}

ProofCheck fail(std::size_t line, ProofErrorKind kind, std::string msg) { return ProofCheck{false, line, kind, std::move(msg)}; }

}  // namespace

std::vector<std::string> schema_ids(ProofSystem system) {
    std::vector<std::string> out{"PL"};
    for (const auto& s : schemas(system)) out.push_back(s.id);
    return out;
}

std::string schema_text(ProofSystem system, const std::string& id) {
    const Schema* s = find_schema(system, id);
    if (!s) throw std::invalid_argument("no schema '" + id + "' in " + to_string(system));
    return s->text;
}

bool is_tautology(const Formula& f) {
    std::vector<Formula> vars;
    abstract(f, vars);
    if (vars.size() > 20) throw std::invalid_argument("too many propositional variables for a truth table");
    for (std::uint64_t row = 0; row < (std::uint64_t{1} << vars.size()); ++row)
        if (!truth(f, vars, row)) return false;
    return true;
}

std::vector<AxiomMatch> match_axiom(const Formula& f, ProofSystem system) {
    std::vector<AxiomMatch> out;
    if (is_tautology(f)) out.push_back({"PL", {}});
    for (const auto& s : schemas(system)) {
        Bindings b;
        if (unify(s.pattern, f, b) && violation(s, b).empty()) out.push_back({s.id, std::move(b)});
    }
    return out;
}

Formula instantiate(ProofSystem system, const std::string& schema, const Bindings& bindings) {
    const Schema* s = find_schema(system, schema);
    if (!s) throw std::invalid_argument("no schema '" + schema + "' in " + to_string(system));
    return substitute(s->pattern, bindings);
}

std::string side_condition_violation(ProofSystem system, const std::string& schema, const Bindings& bindings) {
    const Schema* s = find_schema(system, schema);
    if (!s) throw std::invalid_argument("no schema '" + schema + "' in " + to_string(system));
    return violation(*s, bindings);
}

ProofCheck check_proof(const Proof& pr) {
    const auto& lines = pr.lines;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const std::size_t line = n + 1;
        const Formula& f = lines[n].formula;
        auto ref = [&](std::size_t k) -> const Formula* {
            return k >= 1 && k < line ? &lines[k - 1].formula : nullptr;
        };
        auto bad_ref = [&](std::size_t k) {
            return fail(line, ProofErrorKind::BadReference, "line " + std::to_string(k) + " is not an earlier line");
        };
        if (const auto* ax = std::get_if<AxiomInstance>(&lines[n].by)) {
            if (ax->schema == "PL") {
                if (!is_tautology(f)) return fail(line, ProofErrorKind::BadSchema, "not a propositional tautology");
                continue;
            }
            const Schema* s = find_schema(pr.system, ax->schema);
            if (!s) return fail(line, ProofErrorKind::BadSchema, "no schema '" + ax->schema + "' in " + to_string(pr.system));
            Bindings b = ax->bindings;
            if (!unify(s->pattern, f, b)) {
                Bindings pb = ax->bindings;
                if (pr.system == ProofSystem::ConSHN_BT && ax->schema == "4d" && unify(printed_4d(), f, pb))
                    return fail(line, ProofErrorKind::BadSchema,
                                "instance of the printed form of 4d, which lacks the [alpha]#f disjunct and fails when the update "
                                "leaves no acceptable timeline; use [alpha]<beta>gamma <-> [alpha]#f | <alpha & beta>gamma");
                return fail(line, ProofErrorKind::BadSchema, "not an instance of " + ax->schema + ": " + s->text);
            }
            if (auto v = violation(*s, b); !v.empty()) return fail(line, ProofErrorKind::BadSideCondition, ax->schema + ": " + v);
        } else if (const auto* mp = std::get_if<ModusPonens>(&lines[n].by)) {
            const Formula* minor = ref(mp->minor);
            const Formula* major = ref(mp->major);
            if (!minor) return bad_ref(mp->minor);
            if (!major) return bad_ref(mp->major);
            if (*major != implies(*minor, f))
                return fail(line, ProofErrorKind::ShapeMismatch,
                            "line " + std::to_string(mp->major) + " is not line " + std::to_string(mp->minor) + " -> this line");
        } else if (const auto* gx = std::get_if<GenX>(&lines[n].by)) {
            const Formula* p = ref(gx->from);
            if (!p) return bad_ref(gx->from);
            if (f != Formula::next(*p)) return fail(line, ProofErrorKind::ShapeMismatch, "expected X of line " + std::to_string(gx->from));
        } else if (const auto* gy = std::get_if<GenY>(&lines[n].by)) {
            const Formula* p = ref(gy->from);
            if (!p) return bad_ref(gy->from);
            if (f != Formula::yesterday(*p)) return fail(line, ProofErrorKind::ShapeMismatch, "expected Y of line " + std::to_string(gy->from));
        } else if (const auto* gb = std::get_if<GenBox>(&lines[n].by)) {
            const Formula* p = ref(gb->from);
            if (!p) return bad_ref(gb->from);
            if (!in_xy(*p)) return fail(line, ProofErrorKind::BadSideCondition, "premise of box generalization contains a conditional");
            if (f != box(*p)) return fail(line, ProofErrorKind::ShapeMismatch, "expected box of line " + std::to_string(gb->from));
        } else if (const auto* rp = std::get_if<ReplaceEquiv>(&lines[n].by)) {
            if (pr.system != ProofSystem::ConSHN_BT)
                return fail(line, ProofErrorKind::ShapeMismatch, "replacement is not a rule of " + std::string(to_string(pr.system)));
            const Formula* p = ref(rp->from);
            if (!p) return bad_ref(rp->from);
            // premise psi <-> psi', conclusion phi <-> phi'
            auto split = [](const Formula& g) -> std::optional<std::pair<Formula, Formula>> {
                if (!g.is(Kind::And) || !g.lhs().is(Kind::Not) || !g.lhs().lhs().is(Kind::And) ||
                    !g.lhs().lhs().rhs().is(Kind::Not))
                    return std::nullopt;
                Formula a = g.lhs().lhs().lhs();
                Formula b = g.lhs().lhs().rhs().lhs();
                if (g != iff(a, b)) return std::nullopt;
                return std::make_pair(a, b);
            };
            auto premise = split(*p);
            if (!premise) return fail(line, ProofErrorKind::ShapeMismatch, "line " + std::to_string(rp->from) + " is not a biconditional");
            auto concl = split(f);
            if (!concl) return fail(line, ProofErrorKind::ShapeMismatch, "conclusion is not a biconditional");
            try {
                if (subformula_at(concl->first, rp->path) != premise->first)
                    return fail(line, ProofErrorKind::ShapeMismatch, "the subformula at the path is not the left side of the premise");
                if (replace_at(concl->first, rp->path, premise->second) != concl->second)
                    return fail(line, ProofErrorKind::ShapeMismatch, "right side is not the replacement result");
            } catch (const std::out_of_range&) {
                return fail(line, ProofErrorKind::ShapeMismatch, "path leaves the formula");
            }
        }
    }
    return {};
}

Proof embed_onebox_proof(const Proof& pr) {
    static const std::map<std::string, std::string> rename{{"PL", "PL"}, {"2", "2e"}, {"3", "3e"}, {"4a", "K"}, {"4b", "5"}};
    Proof out = pr;
    out.system = ProofSystem::ConSHN_BT;
    if (pr.system == ProofSystem::ConSHN_BT) return out;
    for (auto& l : out.lines) {
        if (auto* ax = std::get_if<AxiomInstance>(&l.by)) {
            auto it = rename.find(ax->schema);
            if (it != rename.end()) ax->schema = it->second;
        }
    }
    return out;
}

namespace {

std::size_t line_ref(const Json& v) {
    if (!v.is_number_integer() || v.get<long long>() < 1) throw ProofFormatError("line references are positive integers");
    return v.get<std::size_t>();
}

Formula formula_field(const Json& v) {
    if (!v.is_string()) throw ProofFormatError("formulas are strings");
    try {
        return parse(v.get<std::string>());
    } catch (const SyntaxError& e) {
        throw ProofFormatError(std::string("formula '") + v.get<std::string>() + "': " + e.what());
    }
}

}  // namespace

Proof load_proof(const Json& doc) {
    if (!doc.is_object() || !doc.contains("system") || !doc.contains("lines")) throw ProofFormatError("expected {system, lines}");
    Proof pr;
    const std::string sys = doc.at("system").is_string() ? doc.at("system").get<std::string>() : "";
    if (sys == "ConSHN-BT") pr.system = ProofSystem::ConSHN_BT;
    else if (sys == "OneBox-XY") pr.system = ProofSystem::OneBox_XY;
    else throw ProofFormatError("unknown system '" + sys + "'");
    for (const auto& l : doc.at("lines")) {
        if (!l.is_object() || !l.contains("formula") || !l.contains("by")) throw ProofFormatError("lines need formula and by");
        const Json& by = l.at("by");
        Justification j;
        if (by.contains("axiom")) {
            AxiomInstance ax{by.at("axiom").get<std::string>(), {}};
            if (by.contains("bindings"))
                for (const auto& [k, v] : by.at("bindings").items()) ax.bindings.emplace(k, formula_field(v));
            j = ax;
        } else if (by.contains("mp")) {
            const Json& mp = by.at("mp");
            if (!mp.is_array() || mp.size() != 2) throw ProofFormatError("mp takes [i, j]");
            j = ModusPonens{line_ref(mp[0]), line_ref(mp[1])};
        } else if (by.contains("genX")) {
            j = GenX{line_ref(by.at("genX"))};
        } else if (by.contains("genY")) {
            j = GenY{line_ref(by.at("genY"))};
        } else if (by.contains("genBox")) {
            j = GenBox{line_ref(by.at("genBox"))};
        } else if (by.contains("replace")) {
            const Json& r = by.at("replace");
            ReplaceEquiv re{line_ref(r.at("from")), {}};
            for (const auto& k : r.at("path")) re.path.push_back(k.get<std::size_t>());
            j = re;
        } else {
            throw ProofFormatError("unknown justification " + by.dump());
        }
        pr.lines.push_back({formula_field(l.at("formula")), std::move(j)});
    }
    return pr;
}

Proof load_proof_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProofFormatError("cannot open '" + path + "'");
    try {
        return load_proof(Json::parse(in));
    } catch (const Json::exception& e) {
        throw ProofFormatError(path + ": " + e.what());
    }
}

Json proof_to_json(const Proof& pr) {
    Json lines = Json::array();
    for (const auto& l : pr.lines) {
        Json line;
        line["formula"] = print(l.formula, {true});
        Json by;
        if (const auto* ax = std::get_if<AxiomInstance>(&l.by)) {
            by["axiom"] = ax->schema;
            if (!ax->bindings.empty()) {
                Json b = Json::object();
                for (const auto& [k, v] : ax->bindings) b[k] = print(v, {true});
                by["bindings"] = b;
            }
        } else if (const auto* mp = std::get_if<ModusPonens>(&l.by)) {
            by["mp"] = {mp->minor, mp->major};
        } else if (const auto* g = std::get_if<GenX>(&l.by)) {
            by["genX"] = g->from;
        } else if (const auto* g2 = std::get_if<GenY>(&l.by)) {
            by["genY"] = g2->from;
        } else if (const auto* g3 = std::get_if<GenBox>(&l.by)) {
            by["genBox"] = g3->from;
        } else if (const auto* r = std::get_if<ReplaceEquiv>(&l.by)) {
            by["replace"]["from"] = r->from;
            by["replace"]["path"] = r->path;
        }
        line["by"] = std::move(by);
        lines.push_back(std::move(line));
    }
    Json doc;
    doc["system"] = to_string(pr.system);
    doc["lines"] = std::move(lines);
    return doc;
}

}  // namespace histnec
