#pragma once

#include "lids/kg/term.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lids::index {

using Vector = std::vector<double>;

enum class EntryKind { Column, Table, Dataset };

std::string_view kind_name(EntryKind k);
EntryKind parse_kind(std::string_view name);

struct Entry {
    kg::Uri id;
    EntryKind kind = EntryKind::Column;
    std::optional<std::string> fgt;
    Vector vector;

    bool operator==(const Entry&) const = default;
};

struct Hit {
    kg::Uri id;
    double score = 0;

    bool operator==(const Hit&) const = default;
};

// u.v / (|u||v|); 0 when either vector is zero. Throws DimensionError.
double cosine(const Vector& u, const Vector& v);

// Exact (brute-force) nearest-neighbour search. Immutable once built.
class VectorIndex {
public:
    // Throws Error on a duplicate id and DimensionError when the vector does
    // not match the dimension of earlier entries of the same kind.
    void add(Entry entry);

    // Cosine-descending, ties by id. Throws DimensionError when the query
    // dimension differs from the kind's dimension, InvalidQuery when k == 0.
    std::vector<Hit> top_k(const Vector& query, std::size_t k, EntryKind kind,
                           const std::optional<std::string>& fgt_filter = std::nullopt) const;

    const Entry* find(const kg::Uri& id) const;
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<Entry> entries_;
    std::map<kg::Uri, std::size_t> by_id_;
    std::map<EntryKind, std::size_t> dims_;
};

// One JSON object per line: {"id", "kind", "fgt", "vector"}; entries sorted by id.
std::string to_jsonl(const VectorIndex& index);
VectorIndex from_jsonl(std::string_view text);
VectorIndex load_index(const std::filesystem::path& path);  // throws IoError

}  // namespace lids::index
