#pragma once

#include "lids/index/vector_index.hpp"
#include "lids/kg/graph_store.hpp"
#include "lids/profiler/profiler.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lids::query {

// Rectangular result set of literal / IRI cells rendered as text.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    // Throws Error when the row width differs from the column count.
    void add_row(std::vector<std::string> row);
    std::size_t size() const noexcept { return rows.size(); }

    // RFC-4180 CSV with a header line.
    std::string to_csv() const;
    // One JSON object per row, keys in column order.
    std::string to_jsonl() const;

    bool operator==(const ResultTable&) const = default;
};

// Outer list = OR, inner list = AND.
using Conditions = std::vector<std::vector<std::string>>;

// Accepts `[["heart","disease"],"patients"]`: each outer element is a term
// or a list of terms. Throws InvalidQuery.
Conditions parse_conditions(std::string_view json);

// Tables whose dataset, table or column labels contain the terms
// (case-insensitive substring). Columns: source, dataset, table, table_uri;
// sorted by table_uri. Throws InvalidQuery on an empty condition.
ResultTable search_keywords(const kg::GraphStore& store, const Conditions& conditions);

// Table IRI for an IRI or a unique table label. Throws NotFound /
// InvalidQuery (ambiguous label).
kg::Uri resolve_table(const kg::GraphStore& store, const std::string& name);

// Greedy one-to-one matching of label/content-similar columns of two
// tables. Columns: column_a, column_b, score, column_a_uri, column_b_uri;
// sorted by score desc. Throws NotFound for an unknown table.
ResultTable find_unionable_columns(const kg::GraphStore& store, const kg::Uri& table_a, const kg::Uri& table_b);

// Simple paths over joinable edges of 1..hops steps starting at `start`
// (and ending at `target` when given). Columns: hops, path, join_columns;
// sorted by hops, then path. The path lists table URIs separated by " -> ";
// join_columns lists "col_a=col_b" pkfk pairs, ";" within a step and " | "
// between steps. Throws InvalidQuery when hops < 1, NotFound for unknown tables.
ResultTable get_path_to_table(const kg::GraphStore& store, const kg::Uri& start, const std::optional<kg::Uri>& target,
                              std::size_t hops);

// Distinct pipelines calling each top-level library (or any descendant).
// Columns: library, pipeline_count; sorted by count desc, library asc.
// Throws InvalidQuery when k == 0.
ResultTable get_top_k_library_used(const kg::GraphStore& store, std::size_t k);
// Same, restricted to pipelines with a tag containing `task` (case-insensitive).
ResultTable get_top_used_libraries(const kg::GraphStore& store, std::size_t k, const std::string& task);

// Pipelines whose graph calls every given library path (or a descendant of
// it). Columns: pipeline, author, score, tags, pipeline_uri; sorted by score
// desc, then pipeline_uri. Throws InvalidQuery on an empty list.
ResultTable get_pipelines_calling_libraries(const kg::GraphStore& store, const std::vector<std::string>& libraries);

// Resolution of the dataset argument of the recommendation operations.
struct DatasetRef {
    std::string name;  // dataset IRI or label
    // Embedding of a dataset missing from the graph; routes to the most
    // similar indexed dataset.
    std::optional<index::Vector> embedding;
};

struct RecommendOptions {
    // A call is a transformation when its path contains one of these
    // fragments or its last segment is one of `cleaning_ops`.
    std::vector<std::string> transformation_fragments{".preprocessing."};
    std::set<std::string> cleaning_ops{"fillna", "dropna", "interpolate"};
    // task -> model path pattern
    std::map<std::string, std::string> task_patterns{
        {"classification", "Classifier|SVC|LogisticRegression"},
        {"regression", "Regressor|LinearRegression|SVR|Ridge|Lasso"},
    };
    double min_similarity = -1.0;
};

// Dataset IRI of `ref`: a dataset known to the graph, else the top-1 dataset
// of the index by cosine. Throws NotFound.
kg::Uri resolve_dataset(const kg::GraphStore& store, const index::VectorIndex* index, const DatasetRef& ref,
                        double min_similarity = -1.0);

// Profiles every CSV file in `dir` on the fly and returns the dataset vector.
index::Vector embed_dataset_dir(const std::filesystem::path& dir, const profiler::Lexicon& lexicon,
                                const profiler::Gazetteer& gazetteer, const profiler::Embedder& embedder);

// Columns: transformation, usage_count, example_column; usage counts are
// distinct pipelines; sorted by count desc, then transformation.
ResultTable recommend_transformations(const kg::GraphStore& store, const index::VectorIndex* index,
                                      const DatasetRef& dataset, const RecommendOptions& options = {});

// Columns: model, best_pipeline_score; sorted by score desc, then model.
// Throws InvalidQuery for a task without a pattern.
ResultTable recommend_ml_models(const kg::GraphStore& store, const index::VectorIndex* index, const DatasetRef& dataset,
                                const std::string& task, const RecommendOptions& options = {});

// Columns: param, value, frequency; sorted by frequency desc, then param, value.
ResultTable recommend_hyperparameters(const kg::GraphStore& store, const index::VectorIndex* index,
                                      const DatasetRef& dataset, const std::string& model,
                                      const RecommendOptions& options = {});

// Query table -> related tables, by table IRI.
using GroundTruth = std::map<std::string, std::set<std::string>>;
using Ranking = std::map<std::string, std::vector<std::string>>;

// `query_table,related_table` CSV (header optional). Throws IoError.
GroundTruth load_ground_truth(const std::filesystem::path& path);

// Ground-truth names resolved to table IRIs: an IRI is kept, a table label
// must be unique in the graph. Throws InvalidQuery / NotFound.
GroundTruth resolve_ground_truth(const kg::GraphStore& store, const GroundTruth& names);

// Tables ranked by unionability certainty desc (ties by IRI) for each query.
Ranking unionable_ranking(const kg::GraphStore& store, const std::vector<std::string>& queries);

// Samples num_queries ground-truth queries without replacement (seeded
// Fisher-Yates over the sorted keys); queries with an empty related set are
// skipped. Columns: k, precision, recall, queries.
ResultTable precision_recall_at_k(const Ranking& ranking, const GroundTruth& ground_truth,
                                  const std::vector<std::size_t>& k_values, std::size_t num_queries,
                                  std::uint64_t seed);

}  // namespace lids::query
