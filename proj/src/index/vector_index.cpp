#include "lids/index/vector_index.hpp"

#include "lids/error.hpp"
#include "lids/util/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace lids::index {

std::string_view kind_name(EntryKind k) {
    switch (k) {
        case EntryKind::Column: return "column";
        case EntryKind::Table: return "table";
        case EntryKind::Dataset: return "dataset";
    }
    return "column";
}

EntryKind parse_kind(std::string_view name) {
    if (name == "column") return EntryKind::Column;
    if (name == "table") return EntryKind::Table;
    if (name == "dataset") return EntryKind::Dataset;
    throw Error("unknown index entry kind: " + std::string(name));
}

double cosine(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) {
        throw DimensionError("dimension mismatch: " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
    }
    double dot = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0 || nv == 0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

void VectorIndex::add(Entry entry) {
    if (by_id_.contains(entry.id)) throw Error("duplicate index id: " + entry.id.text);
    auto [it, inserted] = dims_.emplace(entry.kind, entry.vector.size());
    if (!inserted && it->second != entry.vector.size()) {
        throw DimensionError("entry " + entry.id.text + " has dimension " + std::to_string(entry.vector.size()) +
                             ", expected " + std::to_string(it->second));
    }
    by_id_.emplace(entry.id, entries_.size());
    entries_.push_back(std::move(entry));
}

std::vector<Hit> VectorIndex::top_k(const Vector& query, std::size_t k, EntryKind kind,
                                    const std::optional<std::string>& fgt_filter) const {
    if (k == 0) throw InvalidQuery("k must be at least 1");
    if (auto d = dims_.find(kind); d != dims_.end() && d->second != query.size()) {
        throw DimensionError("query has dimension " + std::to_string(query.size()) + ", index has " +
                             std::to_string(d->second));
    }
    std::vector<Hit> hits;
    for (const auto& e : entries_) {
        if (e.kind != kind) continue;
        if (fgt_filter && e.fgt != fgt_filter) continue;
        hits.push_back({e.id, cosine(query, e.vector)});
    }
    auto better = [](const Hit& a, const Hit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    };
    if (hits.size() > k) {
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(), better);
        hits.resize(k);
    } else {
        std::sort(hits.begin(), hits.end(), better);
    }
    return hits;
}

const Entry* VectorIndex::find(const kg::Uri& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &entries_[it->second];
}

std::string to_jsonl(const VectorIndex& index) {
    std::string out;
    for (const auto& [id, pos] : [&] {
             std::vector<std::pair<kg::Uri, std::size_t>> order;
             for (std::size_t i = 0; i < index.entries().size(); ++i) order.emplace_back(index.entries()[i].id, i);
             std::sort(order.begin(), order.end());
             return order;
         }()) {
        const Entry& e = index.entries()[pos];
        nlohmann::json j{{"id", e.id.text},
                         {"kind", kind_name(e.kind)},
                         {"fgt", e.fgt ? nlohmann::json(*e.fgt) : nlohmann::json(nullptr)},
                         {"vector", e.vector}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

VectorIndex from_jsonl(std::string_view text) {
    VectorIndex index;
    std::size_t line_no = 0;
    for (const auto& line : util::split(text, '\n')) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            Entry e;
            e.id = kg::Uri(j.at("id").get<std::string>());
            e.kind = parse_kind(j.at("kind").get<std::string>());
            if (j.contains("fgt") && !j["fgt"].is_null()) e.fgt = j["fgt"].get<std::string>();
            e.vector = j.at("vector").get<Vector>();
            index.add(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw Error("index line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
    return index;
}

VectorIndex load_index(const std::filesystem::path& path) { return from_jsonl(util::read_file(path)); }

}  // namespace lids::index
