#include "histnec/model.hpp"

#include <fstream>
#include <sstream>

namespace histnec {

TimelineSet::TimelineSet(std::size_t size, bool full) : size_(size), words_((size + 63) / 64, 0) {
    if (full) {
        for (std::size_t i = 0; i < size; ++i) set(i);
    }
}

std::size_t TimelineSet::count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
}

bool TimelineSet::empty() const {
    for (auto w : words_)
        if (w) return false;
    return true;
}

std::size_t TimelineSet::first() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w]) return w * 64 + static_cast<std::size_t>(__builtin_ctzll(words_[w]));
    return size_;
}

std::vector<std::size_t> TimelineSet::members() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
}

std::size_t TimelineSet::hash() const {
    std::size_t h = size_;
    for (auto w : words_) h = h * 1000003U ^ std::hash<std::uint64_t>{}(w);
    return h;
}

TimelineSet& TimelineSet::operator&=(const TimelineSet& other) {
    if (other.size_ != size_) throw std::invalid_argument("timeline sets over different models");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
}

const char* to_string(ModelErrorKind kind) {
    switch (kind) {
        case ModelErrorKind::BadDocument: return "BadDocument";
        case ModelErrorKind::NonTree: return "NonTree";
        case ModelErrorKind::RaggedDepth: return "RaggedDepth";
        case ModelErrorKind::UnknownState: return "UnknownState";
        case ModelErrorKind::TimelineNotAcceptable: return "TimelineNotAcceptable";
        case ModelErrorKind::InstantOutOfRange: return "InstantOutOfRange";
    }
    return "?";
}

Model Model::build(const ModelSpec& spec) {
    if (spec.depth < 1) throw ModelError(ModelErrorKind::BadDocument, "depth must be at least 1");
    Model m;
    m.depth_ = spec.depth;
    const std::size_t n = spec.states.size();
    for (std::size_t s = 0; s < n; ++s) {
        const auto& id = spec.states[s].id;
        if (!m.index_.emplace(id, s).second)
            throw ModelError(ModelErrorKind::NonTree, "duplicate state '" + id + "'");
        m.ids_.push_back(id);
    }
    m.parent_.assign(n, std::nullopt);
    m.children_.assign(n, {});
    m.labels_.assign(n, 0);

    std::optional<StateIndex> root;
    for (std::size_t s = 0; s < n; ++s) {
        const auto& st = spec.states[s];
        if (!st.parent) {
            if (root) throw ModelError(ModelErrorKind::NonTree, "states '" + m.ids_[*root] + "' and '" + st.id + "' both lack a parent");
            root = s;
            continue;
        }
        auto it = m.index_.find(*st.parent);
        if (it == m.index_.end())
            throw ModelError(ModelErrorKind::UnknownState, "parent '" + *st.parent + "' of '" + st.id + "'");
        m.parent_[s] = it->second;
        m.children_[it->second].push_back(s);
    }
    if (!root) throw ModelError(ModelErrorKind::NonTree, "no parentless state");
    if (m.ids_[*root] != spec.root)
        throw ModelError(spec.root.empty() || !m.index_.count(spec.root) ? ModelErrorKind::UnknownState : ModelErrorKind::NonTree,
                         "declared root '" + spec.root + "' is not the parentless state '" + m.ids_[*root] + "'");
    m.root_ = *root;

    // Breadth-first levels; anything left unvisited sits on a parent cycle.
    m.level_.assign(n, 0);
    std::vector<bool> seen(n, false);
    std::vector<StateIndex> queue{m.root_};
    seen[m.root_] = true;
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const StateIndex s = queue[q];
        for (StateIndex c : m.children_[s]) {
            seen[c] = true;
            m.level_[c] = m.level_[s] + 1;
            queue.push_back(c);
        }
    }
    for (std::size_t s = 0; s < n; ++s)
        if (!seen[s]) throw ModelError(ModelErrorKind::NonTree, "state '" + m.ids_[s] + "' is unreachable from the root");

    for (std::size_t s = 0; s < n; ++s) {
        if (m.children_[s].empty() && m.level_[s] != m.depth_)
            throw ModelError(ModelErrorKind::RaggedDepth, "leaf '" + m.ids_[s] + "' at depth " + std::to_string(m.level_[s]) +
                                                              ", expected " + std::to_string(m.depth_));
        if (m.level_[s] > m.depth_)
            throw ModelError(ModelErrorKind::RaggedDepth, "state '" + m.ids_[s] + "' deeper than " + std::to_string(m.depth_));
    }

    for (std::size_t s = 0; s < n; ++s) {
        for (const auto& a : spec.states[s].atoms) {
            auto [it, fresh] = m.atom_index_.emplace(a, m.atoms_.size());
            if (fresh) {
                if (m.atoms_.size() == 64) throw ModelError(ModelErrorKind::BadDocument, "more than 64 distinct atoms");
                m.atoms_.push_back(a);
            }
            m.labels_[s] |= std::uint64_t{1} << it->second;
        }
    }

    for (std::size_t s = 0; s < n; ++s) {
        if (!m.children_[s].empty()) continue;
        Timeline t{s, std::vector<StateIndex>(m.depth_ + 1)};
        StateIndex cur = s;
        for (std::size_t k = m.depth_ + 1; k-- > 0;) {
            t.path[k] = cur;
            if (k) cur = *m.parent_[cur];
        }
        m.timeline_by_leaf_.emplace(m.ids_[s], m.timelines_.size());
        m.timelines_.push_back(std::move(t));
    }
    return m;
}

std::optional<StateIndex> Model::find_state(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Model::atom_index(const std::string& atom) const {
    auto it = atom_index_.find(atom);
    if (it == atom_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> Model::atoms_at(StateIndex s) const {
    std::vector<std::string> out;
    for (std::size_t a = 0; a < atoms_.size(); ++a)
        if (holds(s, a)) out.push_back(atoms_[a]);
    return out;
}

std::optional<std::size_t> Model::timeline_of_leaf(const std::string& leaf) const {
    auto it = timeline_by_leaf_.find(leaf);
    if (it == timeline_by_leaf_.end()) return std::nullopt;
    return it->second;
}

ModelSpec Model::spec() const {
    ModelSpec out;
    out.depth = depth_;
    out.root = ids_[root_];
    for (std::size_t s = 0; s < ids_.size(); ++s) {
        StateSpec st{ids_[s], std::nullopt, atoms_at(s)};
        if (parent_[s]) st.parent = ids_[*parent_[s]];
        out.states.push_back(std::move(st));
    }
    return out;
}

TimelineSet acceptable(const Model& m, const Context& c) {
    TimelineSet at = m.all_timelines();
    for (const auto& r : c.rules) at &= r.members;
    return at;
}

std::vector<Timeline> timelines(const Model& m) { return m.timelines(); }

Point make_point(std::shared_ptr<const Model> m, Context c, const std::string& leaf, std::size_t instant) {
    auto t = m->timeline_of_leaf(leaf);
    if (!t) throw ModelError(ModelErrorKind::UnknownState, "'" + leaf + "' is not a leaf");
    if (instant > m->depth())
        throw ModelError(ModelErrorKind::InstantOutOfRange,
                         "instant " + std::to_string(instant) + " exceeds depth " + std::to_string(m->depth()));
    if (!acceptable(*m, c).test(*t))
        throw ModelError(ModelErrorKind::TimelineNotAcceptable, "timeline of '" + leaf + "' is not acceptable");
    return Point{std::move(m), std::move(c), *t, instant};
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw ModelError(ModelErrorKind::BadDocument, what); }

const Json& field(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) bad(std::string("missing field '") + key + "'");
    return obj.at(key);
}

std::string str(const Json& v, const char* what) {
    if (!v.is_string()) bad(std::string(what) + " must be a string");
    return v.get<std::string>();
}

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        bad(path + ": " + e.what());
    }
}

}  // namespace

Model load_model(const Json& doc) {
    ModelSpec spec;
    const Json& depth = field(doc, "depth");
    if (!depth.is_number_integer() || depth.get<long long>() < 0) bad("depth must be a nonnegative integer");
    spec.depth = depth.get<std::size_t>();
    spec.root = str(field(doc, "root"), "root");
    const Json& states = field(doc, "states");
    if (!states.is_array()) bad("states must be an array");
    for (const auto& s : states) {
        StateSpec st;
        st.id = str(field(s, "id"), "state id");
        if (s.contains("parent") && !s.at("parent").is_null()) st.parent = str(s.at("parent"), "parent");
        if (s.contains("atoms")) {
            if (!s.at("atoms").is_array()) bad("atoms must be an array");
            for (const auto& a : s.at("atoms")) st.atoms.push_back(str(a, "atom"));
        }
        spec.states.push_back(std::move(st));
    }
    return Model::build(spec);
}

Json model_to_json(const Model& m) {
    Json states = Json::array();
    for (const auto& s : m.spec().states) {
        Json st;
        st["id"] = s.id;
        st["parent"] = s.parent ? Json(*s.parent) : Json(nullptr);
        st["atoms"] = s.atoms;
        states.push_back(std::move(st));
    }
    Json doc;
    doc["depth"] = m.depth();
    doc["root"] = m.state_id(m.root());
    doc["states"] = std::move(states);
    return doc;
}

Context load_context(const Model& m, const Json& doc) {
    Context c;
    const Json& rules = field(doc, "rules");
    if (!rules.is_array()) bad("rules must be an array");
    for (const auto& r : rules) {
        Rule rule{str(field(r, "name"), "rule name"), TimelineSet(m.timeline_count())};
        const Json& members = field(r, "timelines");
        if (!members.is_array()) bad("timelines must be an array");
        for (const auto& leaf : members) {
            auto t = m.timeline_of_leaf(str(leaf, "timeline"));
            if (!t) throw ModelError(ModelErrorKind::UnknownState, "rule '" + rule.name + "' names non-leaf '" + leaf.get<std::string>() + "'");
            rule.members.set(*t);
        }
        c.rules.push_back(std::move(rule));
    }
    return c;
}

Json context_to_json(const Model& m, const Context& c) {
    Json rules = Json::array();
    for (const auto& r : c.rules) {
        Json leaves = Json::array();
        r.members.for_each([&](std::size_t t) { leaves.push_back(m.leaf_id(t)); });
        Json rule;
        rule["name"] = r.name;
        rule["timelines"] = std::move(leaves);
        rules.push_back(std::move(rule));
    }
    Json doc;
    doc["rules"] = std::move(rules);
    return doc;
}

Json point_to_json(const Point& p) {
    Json doc;
    doc["leaf"] = p.model->leaf_id(p.timeline);
    doc["instant"] = p.instant;
    return doc;
}

Model load_model_file(const std::string& path) { return load_model(read_file(path)); }

Context load_context_file(const Model& m, const std::string& path) { return load_context(m, read_file(path)); }

}  // namespace histnec
