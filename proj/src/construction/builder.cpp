#include "lids/construction/builder.hpp"

#include "lids/error.hpp"
#include "lids/index/vector_index.hpp"
#include "lids/util/parallel.hpp"
#include "lids/util/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace lids::construction {

using profiler::ColumnProfile;
using profiler::FineGrainedType;

namespace {

constexpr std::size_t kPairsPerPartition = 4096;

std::string_view kind_label(SimilarityKind k) {
    switch (k) {
        case SimilarityKind::Label: return "label";
        case SimilarityKind::Content: return "content";
        case SimilarityKind::PkFk: return "pkfk";
    }
    return "label";
}

std::optional<profiler::Vector> mean_token_vector(std::string_view name, const profiler::Lexicon& lexicon) {
    profiler::Vector sum;
    std::size_t n = 0;
    for (const auto& t : profiler::name_tokens(name)) {
        const auto* v = lexicon.find(t);
        if (v == nullptr) continue;
        if (sum.empty()) sum.assign(v->size(), 0.0);
        if (v->size() != sum.size()) continue;
        for (std::size_t i = 0; i < v->size(); ++i) sum[i] += (*v)[i];
        ++n;
    }
    if (n == 0) return std::nullopt;
    for (auto& x : sum) x /= static_cast<double>(n);
    return sum;
}

// Nodes carrying rdf:type `cls` in the default graph.
std::set<std::string> typed_nodes(const kg::GraphStore& store, const kg::Uri& cls) {
    std::set<std::string> out;
    for (const auto& m : store.match({std::nullopt, kg::vocab::rdf_type, kg::Term::iri(cls), kg::kDefaultGraph})) {
        out.insert(m.triple.subject.text);
    }
    return out;
}

std::optional<std::string> label_of(const kg::GraphStore& store, const std::string& node) {
    auto ms = store.match({kg::Uri(node), kg::vocab::rdfs_label, std::nullopt, kg::kDefaultGraph});
    if (ms.empty()) return std::nullopt;
    return ms.front().triple.object.value;
}

// label -> node for children of `parent` typed `cls`.
std::map<std::string, std::string> children_by_label(const kg::GraphStore& store, const std::string& parent,
                                                     const std::set<std::string>& typed) {
    std::map<std::string, std::string> out;
    for (const auto& m :
         store.match({std::nullopt, kg::vocab::is_part_of, kg::Term::iri(kg::Uri(parent)), kg::kDefaultGraph})) {
        const std::string& child = m.triple.subject.text;
        if (!typed.contains(child)) continue;
        if (auto label = label_of(store, child)) out.emplace(*label, child);
    }
    return out;
}

}  // namespace

void ThresholdConfig::validate() const {
    for (auto [name, v] : {std::pair{"alpha", alpha}, {"beta", beta}, {"theta", theta}, {"gamma", gamma}}) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error(std::string(name) + " must be within [0, 1]");
    }
}

const kg::Uri& predicate_of(SimilarityKind kind) {
    switch (kind) {
        case SimilarityKind::Label: return kg::vocab::has_label_similarity;
        case SimilarityKind::Content: return kg::vocab::has_content_similarity;
        case SimilarityKind::PkFk: return kg::vocab::has_pkfk_similarity;
    }
    return kg::vocab::has_label_similarity;
}

std::vector<kg::Triple> build_metadata_subgraph(const ColumnProfile& p) {
    using kg::Term;
    namespace v = kg::vocab;
    const auto& md = p.metadata;
    const kg::Uri col = md.column_uri(), table = md.table_uri(), dataset = md.dataset_uri(), source = md.source_uri();
    std::vector<kg::Triple> out{
        {source, v::rdf_type, Term::iri(v::Source)},
        {source, v::rdfs_label, Term::string(md.source)},
        {dataset, v::rdf_type, Term::iri(v::Dataset)},
        {dataset, v::rdfs_label, Term::string(md.dataset)},
        {dataset, v::is_part_of, Term::iri(source)},
        {table, v::rdf_type, Term::iri(v::Table)},
        {table, v::rdfs_label, Term::string(md.table)},
        {table, v::is_part_of, Term::iri(dataset)},
        {col, v::rdf_type, Term::iri(v::Column)},
        {col, v::rdfs_label, Term::string(md.column)},
        {col, v::is_part_of, Term::iri(table)},
        {col, v::has_data_type, Term::string(std::string(profiler::type_name(p.fgt)))},
        {col, v::has_total_value_count, Term::integer(static_cast<std::int64_t>(p.stats.total_count))},
        {col, v::has_distinct_value_count, Term::integer(static_cast<std::int64_t>(p.stats.distinct_count))},
        {col, v::has_missing_value_count, Term::integer(static_cast<std::int64_t>(p.stats.missing_count))},
    };
    if (p.stats.numeric) {
        out.push_back({col, v::has_min_value, Term::real(p.stats.numeric->min)});
        out.push_back({col, v::has_max_value, Term::real(p.stats.numeric->max)});
        out.push_back({col, v::has_mean_value, Term::real(p.stats.numeric->mean)});
    }
    if (p.stats.true_ratio) out.push_back({col, v::has_true_ratio, Term::real(*p.stats.true_ratio)});
    if (p.stats.text) {
        out.push_back({col, v::has_min_length, Term::real(p.stats.text->min_len)});
        out.push_back({col, v::has_max_length, Term::real(p.stats.text->max_len)});
        out.push_back({col, v::has_mean_length, Term::real(p.stats.text->mean_len)});
    }
    return out;
}

double edit_similarity(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return 1.0 - static_cast<double>(prev[b.size()]) / static_cast<double>(std::max(a.size(), b.size()));
}

double label_similarity(std::string_view a, std::string_view b, const profiler::Lexicon& lexicon) {
    const auto va = mean_token_vector(a, lexicon);
    const auto vb = mean_token_vector(b, lexicon);
    if (!va || !vb || va->size() != vb->size()) return edit_similarity(a, b);
    return std::clamp(index::cosine(*va, *vb), -1.0, 1.0);
}

std::vector<SimilarityEdge> column_similarity_worker(const ColumnProfile& a, const ColumnProfile& b,
                                                     const ThresholdConfig& t, const profiler::Lexicon& lexicon) {
    std::vector<SimilarityEdge> out;
    if (a.fgt != b.fgt || a.metadata.table_uri() == b.metadata.table_uri()) return out;
    const kg::Uri ua = a.metadata.column_uri(), ub = b.metadata.column_uri();
    if (ua == ub) return out;
    auto emit = [&](SimilarityKind kind, double score) {
        out.push_back({ua, ub, kind, score});
        out.push_back({ub, ua, kind, score});
    };

    const double label = label_similarity(a.metadata.column, b.metadata.column, lexicon);
    if (label >= t.alpha) emit(SimilarityKind::Label, label);

    double content = 0;
    bool content_edge = false;
    if (a.fgt == FineGrainedType::Boolean) {
        if (a.stats.true_ratio && b.stats.true_ratio) {
            content = 1.0 - std::abs(*a.stats.true_ratio - *b.stats.true_ratio);
            content_edge = content >= t.beta;
        }
    } else {
        content = index::cosine(a.embedding, b.embedding);
        content_edge = content >= t.theta;
    }
    if (content_edge) {
        emit(SimilarityKind::Content, content);
        if (std::max(a.stats.distinct_ratio(), b.stats.distinct_ratio()) >= t.gamma) emit(SimilarityKind::PkFk, content);
    }
    return out;
}

std::vector<SimilarityEdge> compute_similarity_edges(const std::vector<ColumnProfile>& profiles,
                                                     const ThresholdConfig& thresholds,
                                                     const profiler::Lexicon& lexicon, std::size_t workers,
                                                     const std::optional<std::filesystem::path>& edges_dir) {
    std::vector<kg::Uri> tables;
    tables.reserve(profiles.size());
    for (const auto& p : profiles) tables.push_back(p.metadata.table_uri());

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (std::size_t j = i + 1; j < profiles.size(); ++j) {
            if (profiles[i].fgt == profiles[j].fgt && tables[i] != tables[j]) pairs.emplace_back(i, j);
        }
    }

    const std::size_t partitions = (pairs.size() + kPairsPerPartition - 1) / kPairsPerPartition;
    std::vector<std::vector<SimilarityEdge>> parts(partitions);
    util::parallel_for(partitions, workers, [&](std::size_t p) {
        const std::size_t begin = p * kPairsPerPartition;
        const std::size_t end = std::min(pairs.size(), begin + kPairsPerPartition);
        for (std::size_t k = begin; k < end; ++k) {
            auto edges = column_similarity_worker(profiles[pairs[k].first], profiles[pairs[k].second], thresholds, lexicon);
            parts[p].insert(parts[p].end(), edges.begin(), edges.end());
        }
        if (edges_dir) {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& e : parts[p]) {
                j.push_back({{"from", e.from.text}, {"to", e.to.text}, {"kind", kind_label(e.kind)}, {"score", e.score}});
            }
            char name[32];
            std::snprintf(name, sizeof name, "part-%05zu.json", p);
            util::write_file(*edges_dir / name, j.dump() + "\n");
        }
    });

    std::vector<SimilarityEdge> out;
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ColumnMatch> greedy_match(std::vector<ColumnMatch> candidates) {
    std::sort(candidates.begin(), candidates.end(), [](const ColumnMatch& x, const ColumnMatch& y) {
        if (x.score != y.score) return x.score > y.score;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    std::set<kg::Uri> used_a, used_b;
    std::vector<ColumnMatch> out;
    for (auto& c : candidates) {
        if (used_a.contains(c.a) || used_b.contains(c.b)) continue;
        used_a.insert(c.a);
        used_b.insert(c.b);
        out.push_back(std::move(c));
    }
    return out;
}

Relatedness table_relatedness(const std::vector<SimilarityEdge>& edges, const std::vector<ColumnProfile>& profiles) {
    std::map<kg::Uri, kg::Uri> table_of;
    std::map<kg::Uri, std::size_t> width;
    for (const auto& p : profiles) {
        if (table_of.emplace(p.metadata.column_uri(), p.metadata.table_uri()).second) ++width[p.metadata.table_uri()];
    }

    // (table a, table b) with a < b -> best score per (column a, column b).
    using PairKey = std::pair<kg::Uri, kg::Uri>;
    std::map<PairKey, std::map<PairKey, double>> union_candidates, join_candidates;
    for (const auto& e : edges) {
        auto ta = table_of.find(e.from), tb = table_of.find(e.to);
        if (ta == table_of.end() || tb == table_of.end() || !(ta->second < tb->second)) continue;
        auto& bucket = e.kind == SimilarityKind::PkFk ? join_candidates : union_candidates;
        double& best = bucket[{ta->second, tb->second}][{e.from, e.to}];
        best = std::max(best, e.score);
    }

    auto score_pairs = [&](const auto& candidates) {
        std::vector<TablePair> out;
        for (const auto& [tables, cols] : candidates) {
            std::vector<ColumnMatch> list;
            for (const auto& [c, s] : cols) list.push_back({c.first, c.second, s});
            TablePair tp{tables.first, tables.second, 0.0, greedy_match(std::move(list))};
            for (const auto& m : tp.matches) tp.score += m.score;
            tp.score /= static_cast<double>(std::min(width[tables.first], width[tables.second]));
            if (tp.score > 0) out.push_back(std::move(tp));
        }
        return out;
    };
    return {score_pairs(union_candidates), score_pairs(join_candidates)};
}

std::vector<std::pair<std::string, kg::Triple>> link_pipelines(const std::vector<pipeline::PipelineGraphIR>& irs,
                                                               const kg::GraphStore& schema) {
    const auto table_nodes = typed_nodes(schema, kg::vocab::Table);
    const auto column_nodes = typed_nodes(schema, kg::vocab::Column);
    std::vector<std::pair<std::string, kg::Triple>> out;
    for (const auto& ir : irs) {
        const auto& md = ir.metadata;
        const std::string graph = pipeline::pipeline_uri(md).text;
        const std::string dataset = kg::make_resource_uri({md.source, md.dataset_name}).text;
        const auto tables = children_by_label(schema, dataset, table_nodes);

        std::set<std::string> read_tables;
        for (const auto& s : ir.statements) {
            for (const auto& name : s.detected_table_reads) {
                auto t = tables.find(name);
                if (t == tables.end()) continue;
                read_tables.insert(t->second);
                out.push_back({graph, {pipeline::statement_uri(md, s.index), kg::vocab::reads,
                                       kg::Term::iri(kg::Uri(t->second))}});
            }
        }
        std::vector<std::string> scope(read_tables.begin(), read_tables.end());
        if (scope.empty())
            for (const auto& [label, uri] : tables) scope.push_back(uri);
        std::vector<std::map<std::string, std::string>> columns;
        for (const auto& t : scope) columns.push_back(children_by_label(schema, t, column_nodes));

        for (const auto& s : ir.statements) {
            for (const auto& name : s.detected_column_reads) {
                for (const auto& cols : columns) {
                    if (auto c = cols.find(name); c != cols.end()) {
                        out.push_back({graph, {pipeline::statement_uri(md, s.index), kg::vocab::reads,
                                               kg::Term::iri(kg::Uri(c->second))}});
                    }
                }
            }
        }
    }
    return out;
}

kg::GraphStore assemble_graph(std::vector<ColumnProfile> profiles, const std::vector<pipeline::PipelineGraphIR>& irs,
                              const docs::DocIndex& docs, const ThresholdConfig& thresholds,
                              const profiler::Lexicon& lexicon, std::size_t workers,
                              const std::optional<std::filesystem::path>& edges_dir) {
    thresholds.validate();
    std::stable_sort(profiles.begin(), profiles.end(), [](const ColumnProfile& a, const ColumnProfile& b) {
        return a.metadata.column_uri() < b.metadata.column_uri();
    });
    profiles.erase(std::unique(profiles.begin(), profiles.end(),
                               [](const ColumnProfile& a, const ColumnProfile& b) {
                                   return a.metadata.column_uri() == b.metadata.column_uri();
                               }),
                   profiles.end());

    kg::GraphStore store;
    for (const auto& p : profiles)
        for (const auto& t : build_metadata_subgraph(p)) store.add(t);

    const auto edges = compute_similarity_edges(profiles, thresholds, lexicon, workers, edges_dir);
    for (const auto& e : edges) store.add({e.from, predicate_of(e.kind), kg::Term::iri(e.to)}, e.score);

    const Relatedness rel = table_relatedness(edges, profiles);
    auto add_related = [&](const std::vector<TablePair>& pairs, const kg::Uri& predicate) {
        for (const auto& tp : pairs) {
            store.add({tp.a, predicate, kg::Term::iri(tp.b)}, tp.score);
            store.add({tp.b, predicate, kg::Term::iri(tp.a)}, tp.score);
        }
    };
    add_related(rel.unionable, kg::vocab::is_unionable_with);
    add_related(rel.joinable, kg::vocab::is_joinable_with);

    for (const auto& t : docs::emit_library_graph(docs)) store.add(t);

    for (const auto& ir : irs) {
        const std::string graph = pipeline::pipeline_uri(ir.metadata).text;
        for (const auto& t : pipeline::emit_pipeline_graph(ir)) store.add(t, std::nullopt, graph);
    }
    for (const auto& [graph, t] : link_pipelines(irs, store)) store.add(t, std::nullopt, graph);
    return store;
}

kg::GraphStore build_lids_graph(const BuildInputs& in, const profiler::Lexicon& lexicon) {
    in.thresholds.validate();
    auto profiles = profiler::load_profiles(in.profiles_dir);
    const auto irs = pipeline::load_irs(in.irs_dir);
    const auto docs = docs::load_library_docs(in.docs_dir);
    return assemble_graph(std::move(profiles), irs, docs, in.thresholds, lexicon, in.workers, in.edges_dir);
}

std::vector<std::pair<std::string, std::size_t>> aspect_counts(const kg::GraphStore& store) {
    namespace v = kg::vocab;
    const auto columns = typed_nodes(store, v::Column);
    const auto tables = typed_nodes(store, v::Table);
    const auto libraries = typed_nodes(store, v::Library);
    std::size_t library_call = 0, code_flow = 0, data_flow = 0, node_types = 0, control_flow = 0, column_reads = 0,
                dataset_reads = 0, parameters = 0, hierarchy = 0, text = 0;
    for (const auto& [graph, triples] : store.graphs()) {
        for (const auto& [t, certainty] : triples) {
            const auto& p = t.predicate;
            if (p == v::calls_library) ++library_call;
            else if (p == v::has_next_statement) ++code_flow;
            else if (p == v::has_data_flow_to) ++data_flow;
            else if (p == v::rdf_type) ++node_types;
            else if (p == v::in_control_flow) ++control_flow;
            else if (p == v::has_parameter) ++parameters;
            else if (p == v::has_text) ++text;
            else if (p == v::reads && columns.contains(t.object.value)) ++column_reads;
            else if (p == v::reads && tables.contains(t.object.value)) ++dataset_reads;
            else if (p == v::is_part_of && libraries.contains(t.subject.text)) ++hierarchy;
        }
    }
    return {{"Library call", library_call},   {"Code flow", code_flow},
            {"Data flow", data_flow},         {"RDF node types", node_types},
            {"Control flow type", control_flow}, {"Column reads", column_reads},
            {"Dataset reads", dataset_reads}, {"Function parameters", parameters},
            {"Library hierarchy", hierarchy}, {"Statement text", text}};
}

}  // namespace lids::construction
