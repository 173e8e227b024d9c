#include "histnec/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "histnec/decide.hpp"
#include "histnec/proofkit.hpp"
#include "histnec/reduce.hpp"
#include "histnec/semantics.hpp"

namespace histnec {

namespace fs = std::filesystem;

bool Report::all_agree() const {
    for (const auto& e : entries)
        if (!e.agree) return false;
    return true;
}

std::string Report::text() const {
    std::ostringstream os;
    os << title << "\n";
    std::size_t agreed = 0;
    for (const auto& e : entries) {
        os << (e.agree ? "  ok   " : "  DIFF ") << e.claim << "\n"
           << "         computed: " << e.computed << "\n"
           << "         expected: " << e.expected << "\n";
        agreed += e.agree ? 1 : 0;
    }
    for (const auto& n : notes) os << "  note: " << n << "\n";
    os << agreed << "/" << entries.size() << " agree\n";
    return os.str();
}

Json Report::json() const {
    Json entries_doc = Json::array();
    for (const auto& e : entries) {
        Json j;
        j["claim"] = e.claim;
        j["computed"] = e.computed;
        j["expected"] = e.expected;
        j["agree"] = e.agree;
        entries_doc.push_back(std::move(j));
    }
    Json doc;
    doc["title"] = title;
    doc["entries"] = std::move(entries_doc);
    doc["notes"] = notes;
    doc["agree"] = all_agree();
    return doc;
}

std::string default_corpus_dir() {
    if (const char* env = std::getenv("HISTNEC_CORPUS")) return env;
#ifdef HISTNEC_CORPUS_DIR
    return HISTNEC_CORPUS_DIR;
#else
    return "corpus";
#endif
}

namespace {

std::string timeline_set(const TimelineSet& s) {
    std::string out = "{";
    bool first = true;
    s.for_each([&](std::size_t t) {
        out += (first ? "pi" : ", pi") + std::to_string(t + 1);
        first = false;
    });
    return out + "}";
}

std::string leaf_set(const Model& m, const TimelineSet& s) {
    std::string out = "{";
    bool first = true;
    s.for_each([&](std::size_t t) {
        out += (first ? "" : ", ") + m.leaf_id(t);
        first = false;
    });
    return out + "}";
}

Json read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ModelError(ModelErrorKind::BadDocument, "cannot open '" + p.string() + "'");
    return Json::parse(in);
}

Json pointed_docs(const SatWitness& w) {
    Json doc;
    doc["model"] = model_to_json(*w.model);
    doc["context"] = context_to_json(*w.model, w.context);
    doc["point"] = point_to_json(w.point());
    return doc;
}

std::string describe(const SatWitness& w) {
    std::string s = "depth " + std::to_string(w.model->depth()) + ", states";
    for (StateIndex st = 0; st < w.model->state_count(); ++st) {
        s += " " + w.model->state_id(st) + "{";
        const auto atoms = w.model->atoms_at(st);
        for (std::size_t k = 0; k < atoms.size(); ++k) s += (k ? "," : "") + atoms[k];
        s += "}";
    }
    s += "; context with " + std::to_string(w.context.rules.size()) + " rule(s); point (" + w.model->leaf_id(w.timeline) +
         ", " + std::to_string(w.instant) + ")";
    return s;
}

void entry_checks(Report& r, const fs::path& dir, const std::string& entry_name) {
    const Json entries = read_json(dir / "entries.json");
    for (const auto& e : entries.at("entries")) {
        if (e.at("name") != entry_name) continue;
        auto m = std::make_shared<const Model>(load_model(read_json(dir / e.at("model").get<std::string>())));
        const Context c = load_context(*m, read_json(dir / e.at("context").get<std::string>()));
        for (const auto& chk : e.at("checks")) {
            const std::string f = chk.at("formula");
            const std::string leaf = chk.at("leaf");
            const std::size_t i = chk.at("instant");
            const bool expected = chk.at("expected");
            const bool got = eval(make_point(m, c, leaf, i), parse(f)).value;
            r.entries.push_back({entry_name + " (" + leaf + ", " + std::to_string(i) + ") " + f + ": " + chk.at("claim").get<std::string>(),
                                 got ? "true" : "false", expected ? "true" : "false", got == expected});
        }
    }
}

Report demo_tiger(const fs::path& dir) {
    Report r;
    r.title = "tiger: rules and conditional necessity";
    const Model m = load_model(read_json(dir / "tiger.json"));
    const Context c = load_context(m, read_json(dir / "tiger-ctx.json"));
    auto set_entry = [&](const std::string& claim, const TimelineSet& got, const std::string& expected) {
        const std::string s = timeline_set(got);
        r.entries.push_back({claim, s, expected, s == expected});
    };
    set_entry("AT(C)", acceptable(m, c), "{pi3, pi5}");
    set_entry("rule generated by X l at 0", generated_rule(m, c, parse("X l"), 0).members, "{pi3, pi4}");
    set_entry("AT(C updated with X l at 0)", acceptable(m, update_context(m, c, parse("X l"), 0)), "{pi3}");
    set_entry("rule generated by l at 1", generated_rule(m, c, parse("l"), 1).members, "{pi3, pi4}");
    set_entry("AT(C updated with l at 1)", acceptable(m, update_context(m, c, parse("l"), 1)), "{pi3}");
    entry_checks(r, dir, "tiger");
    return r;
}

Report demo_figures(const fs::path& dir) {
    Report r;
    r.title = "figures: acceptable timelines and small countermodels";
    const Model branching = load_model(read_json(dir / "branching.json"));
    const Context empty = load_context(branching, read_json(dir / "empty-ctx.json"));
    const std::string all = timeline_set(acceptable(branching, empty));
    r.entries.push_back({"two-level tree: AT(empty context)", all, "{pi1, pi2, pi3, pi4}", all == "{pi1, pi2, pi3, pi4}"});
    const Model ruled = load_model(read_json(dir / "rules.json"));
    const std::string at = timeline_set(acceptable(ruled, load_context(ruled, read_json(dir / "rules-ctx.json"))));
    r.entries.push_back({"four-leaf tree with R1, R2: AT(C)", at, "{pi2, pi3}", at == "{pi2, pi3}"});
    for (const char* name : {"branching", "rules", "material", "cases"}) entry_checks(r, dir, name);
    return r;
}

Report demo_lavenham(const fs::path& dir) {
    Report r;
    r.title = "lavenham: premises and conclusion";
    OracleBounds bounds;
    bounds.max_depth = 3;
    bounds.max_branch = 2;
    bounds.context_mode = ContextMode::SingleRule;
    const Json doc = read_json(dir / "lavenham.json");
    for (const auto& s : doc.at("statements")) {
        const std::string id = s.at("id");
        const Formula f = parse(s.at("formula").get<std::string>());
        const ValidityResult v = valid(f);
        const OracleResult o = brute_force(f, bounds);
        const std::string decided = v.valid ? "VALID" : "INVALID";
        const std::string searched = o.counterexample ? "INVALID" : "VALID";
        std::string computed = "decision " + decided + ", oracle " + searched + " (depth<=3, branching<=2, single-rule contexts)";
        if (v.countermodel) computed += "; countermodel: " + describe(*v.countermodel);
        ReportEntry e;
        e.claim = id + ": " + print(f, {true});
        e.computed = computed;
        if (s.at("expected").is_null()) {
            e.expected = "decision and oracle agree";
            e.agree = decided == searched;
            r.notes.push_back("statement " + id + " is " + decided + " by both engines: box Y X X p holds vacuously at instant 0, "
                              "so the premise fails at the root although the original argument counts it valid (README, Errata)");
        } else {
            e.expected = s.at("expected").get<std::string>();
            e.agree = decided == e.expected && searched == e.expected;
        }
        if (v.countermodel && eval(v.countermodel->point(), f).value) e.agree = false;
        r.entries.push_back(std::move(e));
    }
    return r;
}

struct Options {
    bool deterministic = false;
    bool trace = false;
    std::string format = "text";
};

class Cli {
public:
    Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(const std::vector<std::string>& args) {
        CLI::App app{"conditional strong historical necessity toolkit", "histnec"};
        app.require_subcommand(1);
        app.fallthrough();
        app.add_flag("--deterministic", opt_.deterministic, "sequential search in documented order (always the case here)");
        app.add_flag("--trace", opt_.trace, "print evaluation traces");
        app.add_option("--format", opt_.format, "output format")->check(CLI::IsMember({"text", "json"}));

        std::string formula, model_path, context_path, leaf, stage = "both", out_prefix, atoms, mode = "single", proof_path,
                                                                      demo_name, corpus = default_corpus_dir();
        std::size_t instant = 0, max_depth = 3, max_branch = 2, budget = OracleBounds{}.budget;
        bool embed = false;

        auto* parse_cmd = app.add_subcommand("parse", "parse and classify a formula");
        parse_cmd->add_option("formula", formula)->required();

        auto add_point = [&](CLI::App* c, bool need_leaf) {
            c->add_option("--model", model_path)->required();
            c->add_option("--context", context_path);
            if (need_leaf) c->add_option("--leaf", leaf)->required();
            c->add_option("--instant", instant);
            c->add_option("formula", formula)->required();
        };
        auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula at a point");
        add_point(eval_cmd, true);
        auto* rule_cmd = app.add_subcommand("rule", "rule generated by a conditional-free formula");
        add_point(rule_cmd, false);
        auto* update_cmd = app.add_subcommand("update", "update a context with a conditional-free formula");
        add_point(update_cmd, false);

        auto* reduce_cmd = app.add_subcommand("reduce", "normal-form reductions");
        reduce_cmd->add_option("--stage", stage)->check(CLI::IsMember({"kappa", "mu", "both"}));
        reduce_cmd->add_option("formula", formula)->required();

        auto* valid_cmd = app.add_subcommand("valid", "decide validity");
        valid_cmd->add_option("formula", formula)->required();
        valid_cmd->add_option("--out", out_prefix, "write countermodel documents to PREFIX.{model,context,point}.json");
        auto* sat_cmd = app.add_subcommand("sat", "decide satisfiability");
        sat_cmd->add_option("formula", formula)->required();
        sat_cmd->add_option("--out", out_prefix, "write witness documents to PREFIX.{model,context,point}.json");

        auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive countermodel search over small trees");
        oracle_cmd->add_option("formula", formula)->required();
        oracle_cmd->add_option("--max-depth", max_depth);
        oracle_cmd->add_option("--max-branch", max_branch);
        oracle_cmd->add_option("--atoms", atoms, "comma-separated atoms");
        oracle_cmd->add_option("--budget", budget);
        oracle_cmd->add_option("--context-mode", mode)->check(CLI::IsMember({"empty", "single"}));
        oracle_cmd->add_option("--out", out_prefix);

        auto* proof_cmd = app.add_subcommand("proof", "proof tools");
        proof_cmd->require_subcommand(1);
        auto* check_cmd = proof_cmd->add_subcommand("check", "check a proof document");
        check_cmd->add_option("file", proof_path)->required();
        check_cmd->add_flag("--embed", embed, "check a one-box proof inside the larger system");

        auto* demo_cmd = app.add_subcommand("demo", "replay worked examples");
        demo_cmd->add_option("name", demo_name)->required()->check(CLI::IsMember({"figures", "tiger", "lavenham"}));
        demo_cmd->add_option("--corpus", corpus);

        std::vector<std::string> rev(args.rbegin(), args.rend());
        try {
            app.parse(rev);
        } catch (const CLI::CallForHelp& e) {
            out_ << app.help();
            return 0;
        } catch (const CLI::CallForAllHelp& e) {
            out_ << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::ParseError& e) {
            err_ << e.what() << "\n" << "run with --help for usage\n";
            return 2;
        }

        try {
            if (*parse_cmd) return cmd_parse(formula);
            if (*eval_cmd) return cmd_eval(model_path, context_path, leaf, instant, formula);
            if (*rule_cmd) return cmd_rule(model_path, context_path, instant, formula, false);
            if (*update_cmd) return cmd_rule(model_path, context_path, instant, formula, true);
            if (*reduce_cmd) return cmd_reduce(stage, formula);
            if (*valid_cmd) return cmd_decide(formula, out_prefix, true);
            if (*sat_cmd) return cmd_decide(formula, out_prefix, false);
            if (*oracle_cmd) return cmd_oracle(formula, max_depth, max_branch, atoms, budget, mode, out_prefix);
            if (*check_cmd) return cmd_proof(proof_path, embed);
            if (*demo_cmd) return cmd_demo(demo_name, corpus);
        } catch (const SyntaxError& e) {
            err_ << "syntax error: " << e.what() << "\n";
            return 2;
        } catch (const SemanticError& e) {
            err_ << e.what() << "\n";
            return 3;
        } catch (const ModelError& e) {
            err_ << e.what() << "\n";
            return 3;
        } catch (const ReduceError& e) {
            err_ << e.what() << "\n";
            return 3;
        } catch (const DecideError& e) {
            err_ << e.what() << "\n";
            return 3;
        } catch (const ProofFormatError& e) {
            err_ << "ProofFormatError: " << e.what() << "\n";
            return 3;
        } catch (const Json::exception& e) {
            err_ << "BadDocument: " << e.what() << "\n";
            return 3;
        }
        return 2;
    }

private:
    bool json() const { return opt_.format == "json"; }

    void emit(const Json& doc) { out_ << doc.dump(2) << "\n"; }

    int cmd_parse(const std::string& text) {
        const Formula f = parse(text);
        std::vector<std::string> tags;
        for (auto t : fragment_of(f)) tags.push_back(to_string(t));
        if (json()) {
            Json doc;
            doc["formula"] = print(f);
            doc["sugared"] = print(f, {true});
            doc["fragments"] = tags;
            doc["horizon"] = horizon(f);
            doc["ydepth"] = ydepth(f);
            emit(doc);
        } else {
            out_ << print(f) << "\n";
            out_ << "sugared: " << print(f, {true}) << "\n";
            out_ << "fragments:";
            for (const auto& t : tags) out_ << " " << t;
            out_ << "\nhorizon: " << horizon(f) << "\nydepth: " << ydepth(f) << "\n";
        }
        return 0;
    }

    std::pair<std::shared_ptr<const Model>, Context> load(const std::string& model_path, const std::string& context_path) {
        auto m = std::make_shared<const Model>(load_model_file(model_path));
        Context c = context_path.empty() ? Context{} : load_context_file(*m, context_path);
        return {m, c};
    }

    int cmd_eval(const std::string& mp, const std::string& cp, const std::string& leaf, std::size_t i, const std::string& text) {
        auto [m, c] = load(mp, cp);
        const Formula f = parse(text);
        const Verdict v = eval(make_point(m, c, leaf, i), f, EvalOptions{opt_.trace});
        if (json()) {
            Json doc;
            doc["formula"] = print(f, {true});
            doc["point"] = {{"leaf", leaf}, {"instant", i}};
            doc["value"] = v.value;
            if (v.trace) {
                Json steps = Json::array();
                for (const auto& s : *v.trace)
                    steps.push_back({{"depth", s.depth}, {"instant", s.instant}, {"timeline", m->leaf_id(s.timeline)},
                                     {"subformula", print(s.subformula, {true})}, {"value", s.value}});
                doc["trace"] = std::move(steps);
            }
            emit(doc);
        } else {
            if (v.trace) out_ << format_trace(*m, *v.trace);
            out_ << (v.value ? "true" : "false") << "\n";
        }
        return v.value ? 0 : 1;
    }

    int cmd_rule(const std::string& mp, const std::string& cp, std::size_t i, const std::string& text, bool update) {
        auto [m, c] = load(mp, cp);
        const Formula alpha = parse(text);
        if (!update) {
            const Rule r = generated_rule(*m, c, alpha, i);
            if (json()) {
                Json doc;
                doc["name"] = r.name;
                Json leaves = Json::array();
                r.members.for_each([&](std::size_t t) { leaves.push_back(m->leaf_id(t)); });
                doc["timelines"] = std::move(leaves);
                emit(doc);
            } else {
                out_ << r.name << " = " << leaf_set(*m, r.members) << "\n";
            }
            return 0;
        }
        const Context updated = update_context(*m, c, alpha, i);
        const TimelineSet at = acceptable(*m, updated);
        if (json()) {
            Json doc = context_to_json(*m, updated);
            Json leaves = Json::array();
            at.for_each([&](std::size_t t) { leaves.push_back(m->leaf_id(t)); });
            doc["acceptable"] = std::move(leaves);
            emit(doc);
        } else {
            for (const auto& r : updated.rules) out_ << r.name << " = " << leaf_set(*m, r.members) << "\n";
            out_ << "AT = " << leaf_set(*m, at) << "\n";
        }
        return 0;
    }

    int cmd_reduce(const std::string& stage, const std::string& text) {
        const Formula f = parse(text);
        Formula g = f;
        if (stage == "kappa") g = kappa(f);
        else if (stage == "mu") g = mu(f);
        else g = mu(kappa(f));
        if (json()) {
            Json doc;
            doc["input"] = print(f, {true});
            doc["stage"] = stage;
            doc["output"] = print(g, {true});
            emit(doc);
        } else {
            out_ << print(g, {true}) << "\n";
        }
        return 0;
    }

    void write_docs(const SatWitness& w, const std::string& prefix) {
        if (prefix.empty()) return;
        const Json docs = pointed_docs(w);
        for (const char* part : {"model", "context", "point"}) {
            std::ofstream o(prefix + "." + part + ".json");
            if (!o) throw ModelError(ModelErrorKind::BadDocument, "cannot write " + prefix + "." + part + ".json");
            o << docs.at(part).dump(2) << "\n";
        }
    }

    void show_witness(const char* verdict, const char* label, const std::optional<SatWitness>& w) {
        if (json()) {
            Json doc;
            doc["verdict"] = verdict;
            if (w) doc[label] = pointed_docs(*w);
            emit(doc);
            return;
        }
        out_ << verdict << "\n";
        if (!w) return;
        const Json docs = pointed_docs(*w);
        out_ << label << ":\n";
        out_ << "model: " << docs.at("model").dump() << "\n";
        out_ << "context: " << docs.at("context").dump() << "\n";
        out_ << "point: " << docs.at("point").dump() << "\n";
    }

    int cmd_decide(const std::string& text, const std::string& prefix, bool validity) {
        const Formula f = parse(text);
        if (validity) {
            const ValidityResult r = valid(f);
            show_witness(r.valid ? "VALID" : "INVALID", "countermodel", r.countermodel);
            if (r.countermodel) write_docs(*r.countermodel, prefix);
            return r.valid ? 0 : 1;
        }
        const auto w = satisfiable(f);
        show_witness(w ? "SAT" : "UNSAT", "witness", w);
        if (w) write_docs(*w, prefix);
        return w ? 0 : 1;
    }

    int cmd_oracle(const std::string& text, std::size_t depth, std::size_t branch, const std::string& atoms, std::size_t budget,
                   const std::string& mode, const std::string& prefix) {
        const Formula f = parse(text);
        OracleBounds b;
        b.max_depth = depth;
        b.max_branch = branch;
        b.budget = budget;
        b.context_mode = mode == "empty" ? ContextMode::Empty : ContextMode::SingleRule;
        std::stringstream ss(atoms);
        for (std::string a; std::getline(ss, a, ',');)
            if (!a.empty()) b.atoms.push_back(a);
        const OracleResult r = brute_force(f, b);
        show_witness(r.counterexample ? "COUNTEREXAMPLE" : "NO-COUNTEREXAMPLE", "counterexample", r.counterexample);
        if (!json()) out_ << "trees: " << r.trees << ", contexts: " << r.contexts << "\n";
        if (r.counterexample) write_docs(*r.counterexample, prefix);
        return r.counterexample ? 1 : 0;
    }

    int cmd_proof(const std::string& path, bool embed) {
        Proof pr = load_proof_file(path);
        if (embed) pr = embed_onebox_proof(pr);
        const ProofCheck c = check_proof(pr);
        if (json()) {
            Json doc;
            doc["system"] = to_string(pr.system);
            doc["lines"] = pr.lines.size();
            doc["ok"] = c.ok;
            if (!c.ok) {
                doc["line"] = c.line;
                doc["reason"] = to_string(c.reason);
                doc["message"] = c.message;
            }
            emit(doc);
        } else if (c.ok) {
            out_ << "OK (" << pr.lines.size() << " lines, " << to_string(pr.system) << ")\n";
        } else {
            out_ << "line " << c.line << ": " << to_string(c.reason) << ": " << c.message << "\n";
        }
        return c.ok ? 0 : 1;
    }

    int cmd_demo(const std::string& name, const std::string& corpus) {
        const Report r = demo(name, corpus);
        if (json()) emit(r.json());
        else out_ << r.text();
        return r.all_agree() ? 0 : 1;
    }

    std::ostream& out_;
    std::ostream& err_;
    Options opt_;
};

}  // namespace

Report demo(const std::string& name, const std::string& corpus_dir) {
    const fs::path dir(corpus_dir);
    if (name == "tiger") return demo_tiger(dir);
    if (name == "figures") return demo_figures(dir);
    if (name == "lavenham") return demo_lavenham(dir);
    throw std::invalid_argument("unknown demo '" + name + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) { return Cli(out, err).run(args); }

}  // namespace histnec
