#pragma once

#include "lids/kg/graph_store.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lids::docs {

struct ParameterDoc {
    std::string name;
    std::optional<std::string> default_value;  // literal source text, e.g. "100" or "'auto'"
    std::optional<std::string> type_name;

    bool operator==(const ParameterDoc&) const = default;
};

// A documented callable: function, class constructor or method.
struct LibrarySignature {
    std::string qualified_path;  // sklearn.ensemble.RandomForestClassifier
    std::vector<ParameterDoc> parameters;
    std::optional<std::string> return_type;

    bool operator==(const LibrarySignature&) const = default;
};

// Immutable after load; safe to share across threads.
class DocIndex {
public:
    // Adds or replaces the entry; ancestors of the path are registered as
    // hierarchy nodes (without signatures) when missing.
    void add(LibrarySignature signature);

    const LibrarySignature* resolve(const std::string& qualified_path) const;

    // Every path known to the hierarchy: documented entries plus their
    // dotted prefixes.
    const std::map<std::string, std::optional<std::string>>& hierarchy() const noexcept {
        return parent_of_;
    }

    std::size_t size() const noexcept { return signatures_.size(); }
    bool empty() const noexcept { return signatures_.empty(); }

    std::size_t skipped_entries = 0;

private:
    std::map<std::string, LibrarySignature> signatures_;
    std::map<std::string, std::optional<std::string>> parent_of_;  // path -> parent path
};

// One `<library>.json` per top-level library, each a JSON array of
// {path, params:[{name, default?, type?}], returns?}. Malformed entries are
// counted in DocIndex::skipped_entries. Throws IoError when `dir` cannot be
// read.
DocIndex load_library_docs(const std::filesystem::path& dir);

// Exact-path lookup.
std::optional<LibrarySignature> resolve_call(const DocIndex& index, const std::string& qualified_path);

// http://kglids.org/resource/library/<seg>/<seg>/...
kg::Uri library_uri(const std::string& qualified_path);

// One Library node per hierarchy path (rdf:type, rdfs:label = last segment)
// plus a data:isPartOf edge from every non-root node to its parent.
std::vector<kg::Triple> emit_library_graph(const DocIndex& index);

}  // namespace lids::docs
