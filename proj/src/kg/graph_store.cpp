#include "lids/kg/graph_store.hpp"

namespace lids::kg {

void GraphStore::add(const Triple& t, std::optional<double> certainty, const std::string& graph) {
    auto& triples = graphs_[graph];
    auto [it, inserted] = triples.try_emplace(t, certainty);
    if (inserted) {
        ++size_;
    } else if (certainty) {
        it->second = certainty;
    }
}

std::vector<Match> GraphStore::match(const Pattern& pattern) const {
    std::vector<Match> out;
    auto scan = [&](const std::string& name, const TripleMap& triples) {
        // Subject is the leading key, so a bound subject narrows to a range.
        auto first = triples.begin();
        auto last = triples.end();
        if (pattern.subject) {
            first = triples.lower_bound(Triple{*pattern.subject, Uri(), Term{}});
        }
        for (auto it = first; it != last; ++it) {
            const Triple& t = it->first;
            if (pattern.subject && t.subject != *pattern.subject) break;
            if (pattern.predicate && t.predicate != *pattern.predicate) continue;
            if (pattern.object && t.object != *pattern.object) continue;
            out.push_back(Match{name, t, it->second});
        }
    };

    if (pattern.graph) {
        auto it = graphs_.find(*pattern.graph);
        if (it != graphs_.end()) scan(it->first, it->second);
    } else {
        for (const auto& [name, triples] : graphs_) scan(name, triples);
    }
    return out;
}

bool GraphStore::contains(const Triple& t, const std::string& graph) const {
    auto it = graphs_.find(graph);
    return it != graphs_.end() && it->second.contains(t);
}

std::optional<double> GraphStore::certainty(const Triple& t, const std::string& graph) const {
    auto it = graphs_.find(graph);
    if (it == graphs_.end()) return std::nullopt;
    auto jt = it->second.find(t);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

void GraphStore::merge(const GraphStore& other) {
    for (const auto& [name, triples] : other.graphs_) {
        for (const auto& [t, c] : triples) add(t, c, name);
    }
}

std::size_t GraphStore::graph_size(const std::string& graph) const {
    auto it = graphs_.find(graph);
    return it == graphs_.end() ? 0 : it->second.size();
}

std::vector<std::string> GraphStore::named_graphs() const {
    std::vector<std::string> out;
    for (const auto& [name, triples] : graphs_) {
        if (name != kDefaultGraph) out.push_back(name);
    }
    return out;
}

}  // namespace lids::kg
