#include "lids/docs/doc_index.hpp"

#include "lids/error.hpp"
#include "lids/util/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <iostream>
#include <set>

namespace lids::docs {

namespace {

std::optional<std::string> parent_path(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) return std::nullopt;
    return path.substr(0, dot);
}

bool valid_path(const std::string& path) {
    if (path.empty() || path.front() == '.' || path.back() == '.') return false;
    return path.find("..") == std::string::npos;
}

std::optional<LibrarySignature> parse_entry(const nlohmann::json& entry) {
    if (!entry.is_object() || !entry.contains("path") || !entry["path"].is_string()) return std::nullopt;
    LibrarySignature sig;
    sig.qualified_path = entry["path"].get<std::string>();
    if (!valid_path(sig.qualified_path)) return std::nullopt;

    if (entry.contains("params")) {
        const auto& params = entry["params"];
        if (!params.is_array()) return std::nullopt;
        std::set<std::string> seen;
        for (const auto& p : params) {
            if (!p.is_object() || !p.contains("name") || !p["name"].is_string()) return std::nullopt;
            ParameterDoc doc;
            doc.name = p["name"].get<std::string>();
            if (doc.name.empty() || !seen.insert(doc.name).second) return std::nullopt;
            if (p.contains("default") && !p["default"].is_null()) {
                // Defaults are stored as source text; non-string JSON values
                // are rendered the way they would appear in a call.
                const auto& d = p["default"];
                doc.default_value = d.is_string() ? d.get<std::string>() : d.dump();
            }
            if (p.contains("type") && p["type"].is_string()) doc.type_name = p["type"].get<std::string>();
            sig.parameters.push_back(std::move(doc));
        }
    }
    if (entry.contains("returns") && entry["returns"].is_string()) {
        sig.return_type = entry["returns"].get<std::string>();
    }
    return sig;
}

}  // namespace

void DocIndex::add(LibrarySignature signature) {
    std::string path = signature.qualified_path;
    signatures_.insert_or_assign(path, std::move(signature));
    std::optional<std::string> current = path;
    while (current && !parent_of_.contains(*current)) {
        auto parent = parent_path(*current);
        parent_of_.emplace(*current, parent);
        current = parent;
    }
}

const LibrarySignature* DocIndex::resolve(const std::string& qualified_path) const {
    auto it = signatures_.find(qualified_path);
    return it == signatures_.end() ? nullptr : &it->second;
}

DocIndex load_library_docs(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw IoError("docs directory not readable: " + dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());

    DocIndex index;
    for (const auto& file : files) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(util::read_file(file));
        } catch (const nlohmann::json::exception&) {
            std::cerr << "warning: " << file.string() << " is not valid JSON, skipped\n";
            ++index.skipped_entries;
            continue;
        }
        if (!doc.is_array()) {
            ++index.skipped_entries;
            continue;
        }
        for (const auto& entry : doc) {
            if (auto sig = parse_entry(entry)) {
                index.add(std::move(*sig));
            } else {
                ++index.skipped_entries;
            }
        }
    }
    if (index.skipped_entries > 0) {
        std::cerr << "warning: skipped " << index.skipped_entries << " malformed documentation entries\n";
    }
    return index;
}

std::optional<LibrarySignature> resolve_call(const DocIndex& index, const std::string& qualified_path) {
    if (const auto* sig = index.resolve(qualified_path)) return *sig;
    return std::nullopt;
}

kg::Uri library_uri(const std::string& qualified_path) {
    std::vector<std::string> parts{"library"};
    for (auto& seg : util::split(qualified_path, '.')) parts.push_back(std::move(seg));
    return kg::make_resource_uri(parts);
}

std::vector<kg::Triple> emit_library_graph(const DocIndex& index) {
    std::vector<kg::Triple> out;
    for (const auto& [path, parent] : index.hierarchy()) {
        const kg::Uri node = library_uri(path);
        const auto dot = path.rfind('.');
        const std::string label = dot == std::string::npos ? path : path.substr(dot + 1);
        out.push_back({node, kg::vocab::rdf_type, kg::Term::iri(kg::vocab::Library)});
        out.push_back({node, kg::vocab::rdfs_label, kg::Term::string(label)});
        if (parent) out.push_back({node, kg::vocab::is_part_of, kg::Term::iri(library_uri(*parent))});
    }
    return out;
}

}  // namespace lids::docs
