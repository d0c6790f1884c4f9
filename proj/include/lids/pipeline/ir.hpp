#pragma once

#include "lids/kg/graph_store.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lids::pipeline {

struct PipelineMetadata {
    std::string pipeline_id;
    std::string source;
    std::string dataset_name;
    std::string author;
    double score = 0.0;
    std::vector<std::string> tags;
    std::optional<std::string> url;

    bool operator==(const PipelineMetadata&) const = default;
};

// One argument as written at the call site.
struct CallArgument {
    std::optional<std::string> keyword;
    int star = 0;                      // 1 for *x, 2 for **x
    std::string text;                  // source text of the value
    std::vector<std::string> literals; // string literal value(s): 'a' or ['a', 'b']
    bool is_string = false;            // value is a single string literal

    bool operator==(const CallArgument&) const = default;
};

// `receiver[key]` where the key is a string literal or a list of them.
struct SubscriptAccess {
    std::optional<std::string> receiver_type;
    std::vector<std::string> keys;

    bool operator==(const SubscriptAccess&) const = default;
};

struct StatementNode {
    std::size_t index = 0;
    std::size_t line = 0;
    std::string text;
    std::set<std::string> control_flow;  // loop, conditional, import, user_function
    std::optional<std::string> call;
    std::vector<CallArgument> arguments;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::optional<std::string> return_type;
    std::vector<std::string> detected_table_reads;
    std::vector<std::string> detected_column_reads;
    std::vector<SubscriptAccess> subscripts;
    std::set<std::string> defines;
    std::set<std::string> uses;

    bool operator==(const StatementNode&) const = default;
};

struct PipelineGraphIR {
    PipelineMetadata metadata;
    std::vector<StatementNode> statements;
    std::set<std::pair<std::size_t, std::size_t>> data_flow_edges;

    bool operator==(const PipelineGraphIR&) const = default;
};

std::string ir_to_json(const PipelineGraphIR& ir);
PipelineGraphIR ir_from_json(std::string_view text);

// <out>/<source>/<dataset>/<pipeline_id>.ir.json
std::filesystem::path ir_path(const std::filesystem::path& out_dir, const PipelineMetadata& md);

// Every *.ir.json below `dir`, sorted by path. Throws IoError.
std::vector<PipelineGraphIR> load_irs(const std::filesystem::path& dir);

kg::Uri pipeline_uri(const PipelineMetadata& md);
kg::Uri statement_uri(const PipelineMetadata& md, std::size_t index);

// Triples of the pipeline's named graph (the graph name is pipeline_uri).
std::vector<kg::Triple> emit_pipeline_graph(const PipelineGraphIR& ir);

}  // namespace lids::pipeline
