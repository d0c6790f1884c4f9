#pragma once

#include "lids/docs/doc_index.hpp"
#include "lids/pipeline/ir.hpp"

#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lids::pipeline {

struct AbstractionOptions {
    // Calls whose last path segment is listed here carry no pipeline semantics.
    std::set<std::string> insignificant{"print", "head", "tail", "info", "describe", "summary", "display", "show"};
    // Reader functions detected as table reads when called on a path ending in "pandas".
    std::set<std::string> read_family{"read_csv", "read_json", "read_parquet"};
};

// Static abstraction of one script. Throws ParseError on syntax errors.
PipelineGraphIR abstract_pipeline(const std::string& script, const PipelineMetadata& metadata,
                                  const docs::DocIndex& docs, const AbstractionOptions& options = {});

// Recomputes parameters (documented names, defaults) and the return type
// from the written arguments. Unresolvable calls are returned unchanged.
StatementNode enrich_statement(StatementNode stmt, const docs::DocIndex& docs);

struct DatasetUsage {
    std::vector<std::string> table_reads;
    std::vector<std::string> column_reads;
};

DatasetUsage detect_dataset_usage(const StatementNode& stmt, const AbstractionOptions& options = {});

struct CorpusReport {
    std::size_t abstracted = 0;
    std::vector<std::string> skipped;  // "<script path>: <reason>"
};

// <pipelines>/<source>/<dataset>/<pipeline_id>/pipeline.py + metadata.json.
// Scripts that fail to parse or lack metadata are skipped and reported.
CorpusReport abstract_corpus(const std::filesystem::path& pipelines_dir, const docs::DocIndex& docs,
                             const std::filesystem::path& out_dir, std::size_t workers,
                             const AbstractionOptions& options = {});

}  // namespace lids::pipeline
