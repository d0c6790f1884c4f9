#pragma once

#include "lids/docs/doc_index.hpp"
#include "lids/kg/graph_store.hpp"
#include "lids/pipeline/ir.hpp"
#include "lids/profiler/profiler.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lids::construction {

struct ThresholdConfig {
    double alpha = 0.75;  // label
    double beta = 0.95;   // boolean content
    double theta = 0.90;  // content
    double gamma = 0.60;  // pkfk uniqueness

    // Throws Error unless every threshold lies in [0, 1].
    void validate() const;
};

enum class SimilarityKind { Label, Content, PkFk };

const kg::Uri& predicate_of(SimilarityKind kind);

struct SimilarityEdge {
    kg::Uri from;
    kg::Uri to;
    SimilarityKind kind = SimilarityKind::Label;
    double score = 0;

    auto operator<=>(const SimilarityEdge&) const = default;
};

// Column, table, dataset and source nodes with their hierarchy and stats.
std::vector<kg::Triple> build_metadata_subgraph(const profiler::ColumnProfile& profile);

// Cosine of mean token vectors; edit similarity of the raw names when
// either side has no token in the lexicon.
double label_similarity(std::string_view a, std::string_view b, const profiler::Lexicon& lexicon);

// 1 - levenshtein / max length; 1 for two empty strings.
double edit_similarity(std::string_view a, std::string_view b);

// Edges for one column pair, in both directions. Pairs of different types
// or within one table produce nothing.
std::vector<SimilarityEdge> column_similarity_worker(const profiler::ColumnProfile& a,
                                                     const profiler::ColumnProfile& b,
                                                     const ThresholdConfig& thresholds,
                                                     const profiler::Lexicon& lexicon);

// All eligible pairs (i < j, same type, different tables), split into
// fixed-size partitions processed by `workers` threads. When `edges_dir`
// is set, each partition's edges are written to edges_dir/part-NNNNN.json.
std::vector<SimilarityEdge> compute_similarity_edges(const std::vector<profiler::ColumnProfile>& profiles,
                                                     const ThresholdConfig& thresholds,
                                                     const profiler::Lexicon& lexicon, std::size_t workers,
                                                     const std::optional<std::filesystem::path>& edges_dir = {});

struct ColumnMatch {
    kg::Uri a;
    kg::Uri b;
    double score = 0;

    bool operator==(const ColumnMatch&) const = default;
};

// Greedy one-to-one assignment: candidates by descending score (ties by
// column URIs), skipping columns already matched.
std::vector<ColumnMatch> greedy_match(std::vector<ColumnMatch> candidates);

struct TablePair {
    kg::Uri a;
    kg::Uri b;
    double score = 0;
    std::vector<ColumnMatch> matches;
};

struct Relatedness {
    std::vector<TablePair> unionable;  // Label or Content edges
    std::vector<TablePair> joinable;   // PkFk edges
};

// score(T1, T2) = sum of greedily matched column scores / min(|T1|, |T2|);
// pairs with score 0 are omitted. Each unordered pair appears once (a < b).
Relatedness table_relatedness(const std::vector<SimilarityEdge>& edges,
                              const std::vector<profiler::ColumnProfile>& profiles);

// pipeline:reads triples keyed by the pipeline's named graph.
std::vector<std::pair<std::string, kg::Triple>> link_pipelines(const std::vector<pipeline::PipelineGraphIR>& irs,
                                                               const kg::GraphStore& schema);

struct BuildInputs {
    std::filesystem::path profiles_dir;
    std::filesystem::path irs_dir;
    std::filesystem::path docs_dir;
    ThresholdConfig thresholds;
    std::size_t workers = 1;
    std::optional<std::filesystem::path> edges_dir;
};

// Full build: metadata, similarity, relatedness and library triples
// in the default graph; one named graph per pipeline with linker reads.
kg::GraphStore build_lids_graph(const BuildInputs& inputs, const profiler::Lexicon& lexicon);

// In-memory variant used by build_lids_graph.
kg::GraphStore assemble_graph(std::vector<profiler::ColumnProfile> profiles,
                              const std::vector<pipeline::PipelineGraphIR>& irs, const docs::DocIndex& docs,
                              const ThresholdConfig& thresholds, const profiler::Lexicon& lexicon,
                              std::size_t workers, const std::optional<std::filesystem::path>& edges_dir = {});

// Triple counts per modelled aspect (library call, code flow, data flow,
// node types, control flow, column reads, dataset reads, parameters,
// library hierarchy, statement text), in that order.
std::vector<std::pair<std::string, std::size_t>> aspect_counts(const kg::GraphStore& store);

}  // namespace lids::construction
