#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace histnec {

using Json = nlohmann::ordered_json;
using StateIndex = std::size_t;

/// Fixed-size bitset over timeline indices of one model.
class TimelineSet {
public:
    TimelineSet() = default;
    explicit TimelineSet(std::size_t size, bool full = false);

    std::size_t size() const { return size_; }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    std::size_t count() const;
    bool empty() const;
    /// Index of the lowest member, or size() when empty.
    std::size_t first() const;
    std::vector<std::size_t> members() const;
    std::size_t hash() const;

    TimelineSet& operator&=(const TimelineSet& other);
    friend TimelineSet operator&(TimelineSet a, const TimelineSet& b) { return a &= b; }
    friend bool operator==(const TimelineSet& a, const TimelineSet& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }
    friend bool operator!=(const TimelineSet& a, const TimelineSet& b) { return !(a == b); }

    template <class F>
    void for_each(F&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                const int b = __builtin_ctzll(bits);
                fn(w * 64 + static_cast<std::size_t>(b));
                bits &= bits - 1;
            }
        }
    }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

enum class ModelErrorKind {
    BadDocument,
    NonTree,
    RaggedDepth,
    UnknownState,
    TimelineNotAcceptable,
    InstantOutOfRange,
};

const char* to_string(ModelErrorKind kind);

class ModelError : public std::runtime_error {
public:
    ModelError(ModelErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ModelErrorKind kind() const { return kind_; }

private:
    ModelErrorKind kind_;
};

struct StateSpec {
    std::string id;
    std::optional<std::string> parent;
    std::vector<std::string> atoms;
};

/// Unvalidated model description, in document order.
struct ModelSpec {
    std::size_t depth = 1;
    std::string root;
    std::vector<StateSpec> states;
};

struct Timeline {
    StateIndex leaf;
    std::vector<StateIndex> path;  // root first, length depth + 1
};

/// Finite rooted tree of states with uniform leaf depth and a valuation.
/// Timelines are root-to-leaf paths, numbered in document order of the leaves.
class Model {
public:
    /// Validates the tree invariants; throws ModelError.
    static Model build(const ModelSpec& spec);

    std::size_t depth() const { return depth_; }
    StateIndex root() const { return root_; }
    std::size_t state_count() const { return ids_.size(); }
    const std::string& state_id(StateIndex s) const { return ids_[s]; }
    std::optional<StateIndex> find_state(const std::string& id) const;
    std::optional<StateIndex> parent(StateIndex s) const { return parent_[s]; }
    const std::vector<StateIndex>& children(StateIndex s) const { return children_[s]; }
    std::size_t level(StateIndex s) const { return level_[s]; }

    const std::vector<std::string>& atom_names() const { return atoms_; }
    std::optional<std::size_t> atom_index(const std::string& atom) const;
    bool holds(StateIndex s, std::size_t atom) const { return (labels_[s] >> atom) & 1U; }
    std::vector<std::string> atoms_at(StateIndex s) const;

    const std::vector<Timeline>& timelines() const { return timelines_; }
    std::size_t timeline_count() const { return timelines_.size(); }
    std::optional<std::size_t> timeline_of_leaf(const std::string& leaf) const;
    const std::string& leaf_id(std::size_t timeline) const { return ids_[timelines_[timeline].leaf]; }
    StateIndex state_on(std::size_t timeline, std::size_t instant) const {
        return timelines_[timeline].path[instant];
    }
    TimelineSet all_timelines() const { return TimelineSet(timelines_.size(), true); }

    ModelSpec spec() const;

private:
    std::size_t depth_ = 0;
    StateIndex root_ = 0;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, StateIndex> index_;
    std::vector<std::optional<StateIndex>> parent_;
    std::vector<std::vector<StateIndex>> children_;
    std::vector<std::size_t> level_;
    std::vector<std::string> atoms_;
    std::unordered_map<std::string, std::size_t> atom_index_;
    std::vector<std::uint64_t> labels_;
    std::vector<Timeline> timelines_;
    std::unordered_map<std::string, std::size_t> timeline_by_leaf_;
};

struct Rule {
    std::string name;
    TimelineSet members;
};

/// Finite family of rules; order is presentation only.
struct Context {
    std::vector<Rule> rules;
};

/// AT(C): intersection of all rules, every timeline when the context is empty.
TimelineSet acceptable(const Model& m, const Context& c);

std::vector<Timeline> timelines(const Model& m);

struct Point {
    std::shared_ptr<const Model> model;
    Context context;
    std::size_t timeline = 0;
    std::size_t instant = 0;
};

/// Throws ModelError (UnknownState, TimelineNotAcceptable, InstantOutOfRange).
Point make_point(std::shared_ptr<const Model> m, Context c, const std::string& leaf, std::size_t instant);

// Documents. Key order on output follows the documented formats.
Model load_model(const Json& doc);
Json model_to_json(const Model& m);
Context load_context(const Model& m, const Json& doc);
Json context_to_json(const Model& m, const Context& c);
Json point_to_json(const Point& p);

Model load_model_file(const std::string& path);
Context load_context_file(const Model& m, const std::string& path);

}  // namespace histnec
