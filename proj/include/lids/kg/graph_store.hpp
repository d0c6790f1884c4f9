#pragma once

#include "lids/kg/term.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lids::kg {

// Graph name of the default graph inside GraphStore and Match.
inline const std::string kDefaultGraph;

struct Match {
    std::string graph;  // kDefaultGraph or a named-graph IRI
    Triple triple;
    std::optional<double> certainty;
};

// Any unset position is a wildcard.
struct Pattern {
    std::optional<Uri> subject;
    std::optional<Uri> predicate;
    std::optional<Term> object;
    std::optional<std::string> graph;
};

// In-memory quad store with optional per-triple certainty annotations.
// Single writer during construction; const member functions may be called
// concurrently once building is done.
class GraphStore {
public:
    // Set insert. Re-inserting an existing (graph, triple) keeps one copy; a
    // supplied certainty overwrites the stored one.
    void add(const Triple& t, std::optional<double> certainty = std::nullopt,
             const std::string& graph = kDefaultGraph);
    void add(const Uri& s, const Uri& p, const Term& o, const std::string& graph = kDefaultGraph) {
        add(Triple{s, p, o}, std::nullopt, graph);
    }

    // Results ordered by graph IRI (default graph first), then s, p, o.
    std::vector<Match> match(const Pattern& pattern) const;

    bool contains(const Triple& t, const std::string& graph = kDefaultGraph) const;
    std::optional<double> certainty(const Triple& t, const std::string& graph = kDefaultGraph) const;

    void merge(const GraphStore& other);

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    std::size_t graph_size(const std::string& graph) const;
    std::vector<std::string> named_graphs() const;

    using TripleMap = std::map<Triple, std::optional<double>>;
    const std::map<std::string, TripleMap>& graphs() const noexcept { return graphs_; }

    bool operator==(const GraphStore& other) const { return graphs_ == other.graphs_; }

private:
    std::map<std::string, TripleMap> graphs_;
    std::size_t size_ = 0;
};

}  // namespace lids::kg
