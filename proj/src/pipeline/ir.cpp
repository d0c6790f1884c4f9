#include "lids/pipeline/ir.hpp"

#include "lids/docs/doc_index.hpp"
#include "lids/error.hpp"
#include "lids/util/text.hpp"

#include <json.hpp>

#include <algorithm>

namespace lids::pipeline {

using nlohmann::json;

namespace {

json optional_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::string> optional_string(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<std::string>();
}

}  // namespace

std::string ir_to_json(const PipelineGraphIR& ir) {
    const auto& md = ir.metadata;
    json out;
    out["metadata"] = {{"pipeline_id", md.pipeline_id}, {"source", md.source},   {"dataset_name", md.dataset_name},
                       {"author", md.author},           {"score", md.score},     {"tags", md.tags},
                       {"url", optional_json(md.url)}};
    json statements = json::array();
    for (const auto& s : ir.statements) {
        json args = json::array();
        for (const auto& a : s.arguments) {
            args.push_back({{"keyword", optional_json(a.keyword)},
                            {"star", a.star},
                            {"text", a.text},
                            {"literals", a.literals},
                            {"is_string", a.is_string}});
        }
        json params = json::array();
        for (const auto& [name, value] : s.parameters) params.push_back({name, value});
        json subs = json::array();
        for (const auto& sub : s.subscripts) {
            subs.push_back({{"receiver_type", optional_json(sub.receiver_type)}, {"keys", sub.keys}});
        }
        statements.push_back({{"index", s.index},
                              {"line", s.line},
                              {"text", s.text},
                              {"control_flow", s.control_flow},
                              {"call", optional_json(s.call)},
                              {"arguments", std::move(args)},
                              {"parameters", std::move(params)},
                              {"return_type", optional_json(s.return_type)},
                              {"table_reads", s.detected_table_reads},
                              {"column_reads", s.detected_column_reads},
                              {"subscripts", std::move(subs)},
                              {"defines", s.defines},
                              {"uses", s.uses}});
    }
    out["statements"] = std::move(statements);
    json edges = json::array();
    for (const auto& [from, to] : ir.data_flow_edges) edges.push_back({from, to});
    out["data_flow"] = std::move(edges);
    return out.dump(2) + "\n";
}

PipelineGraphIR ir_from_json(std::string_view text) {
    PipelineGraphIR ir;
    try {
        const json j = json::parse(text);
        const json& md = j.at("metadata");
        ir.metadata.pipeline_id = md.at("pipeline_id").get<std::string>();
        ir.metadata.source = md.at("source").get<std::string>();
        ir.metadata.dataset_name = md.at("dataset_name").get<std::string>();
        ir.metadata.author = md.value("author", "");
        ir.metadata.score = md.value("score", 0.0);
        ir.metadata.tags = md.value("tags", std::vector<std::string>{});
        ir.metadata.url = optional_string(md, "url");
        for (const json& s : j.at("statements")) {
            StatementNode n;
            n.index = s.at("index").get<std::size_t>();
            n.line = s.at("line").get<std::size_t>();
            n.text = s.at("text").get<std::string>();
            n.control_flow = s.at("control_flow").get<std::set<std::string>>();
            n.call = optional_string(s, "call");
            for (const json& a : s.at("arguments")) {
                CallArgument arg;
                arg.keyword = optional_string(a, "keyword");
                arg.star = a.at("star").get<int>();
                arg.text = a.at("text").get<std::string>();
                arg.literals = a.at("literals").get<std::vector<std::string>>();
                arg.is_string = a.at("is_string").get<bool>();
                n.arguments.push_back(std::move(arg));
            }
            for (const json& p : s.at("parameters")) n.parameters.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
            n.return_type = optional_string(s, "return_type");
            n.detected_table_reads = s.at("table_reads").get<std::vector<std::string>>();
            n.detected_column_reads = s.at("column_reads").get<std::vector<std::string>>();
            for (const json& sub : s.at("subscripts")) {
                n.subscripts.push_back({optional_string(sub, "receiver_type"), sub.at("keys").get<std::vector<std::string>>()});
            }
            n.defines = s.at("defines").get<std::set<std::string>>();
            n.uses = s.at("uses").get<std::set<std::string>>();
            ir.statements.push_back(std::move(n));
        }
        for (const json& e : j.at("data_flow")) ir.data_flow_edges.emplace(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    } catch (const json::exception& e) {
        throw Error(std::string("malformed pipeline IR: ") + e.what());
    }
    return ir;
}

std::filesystem::path ir_path(const std::filesystem::path& out_dir, const PipelineMetadata& md) {
    return out_dir / md.source / md.dataset_name / (md.pipeline_id + ".ir.json");
}

std::vector<PipelineGraphIR> load_irs(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("IR directory not readable: " + dir.string());
    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(dir, ec); !ec && it != fs::recursive_directory_iterator();
         it.increment(ec)) {
        const std::string name = it->path().filename().string();
        if (it->is_regular_file() && name.ends_with(".ir.json")) files.push_back(it->path());
    }
    if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());
    std::vector<PipelineGraphIR> out;
    for (const auto& f : files) out.push_back(ir_from_json(util::read_file(f)));
    return out;
}

kg::Uri pipeline_uri(const PipelineMetadata& md) {
    return kg::make_resource_uri({md.source, md.dataset_name, "pipeline", md.pipeline_id});
}

kg::Uri statement_uri(const PipelineMetadata& md, std::size_t index) {
    return kg::make_resource_uri({md.source, md.dataset_name, "pipeline", md.pipeline_id,
                                  "statement-" + std::to_string(index)});
}

std::vector<kg::Triple> emit_pipeline_graph(const PipelineGraphIR& ir) {
    using namespace kg;
    const auto& md = ir.metadata;
    std::vector<Triple> out;
    const Uri p = pipeline_uri(md);
    out.push_back({p, vocab::rdf_type, Term::iri(vocab::Pipeline)});
    out.push_back({p, vocab::rdfs_label, Term::string(md.pipeline_id)});
    out.push_back({p, vocab::has_author, Term::string(md.author)});
    out.push_back({p, vocab::has_score, Term::real(md.score)});
    for (const auto& t : md.tags) out.push_back({p, vocab::has_tag, Term::string(t)});
    if (md.url) out.push_back({p, vocab::has_source_url, Term::string(*md.url)});
    out.push_back({p, vocab::has_dataset, Term::iri(make_resource_uri({md.source, md.dataset_name}))});

    for (const auto& s : ir.statements) {
        const Uri su = statement_uri(md, s.index);
        out.push_back({su, vocab::rdf_type, Term::iri(vocab::Statement)});
        out.push_back({su, vocab::rdfs_label, Term::string("statement-" + std::to_string(s.index))});
        out.push_back({su, vocab::has_text, Term::string(s.text)});
        if (s.index + 1 < ir.statements.size()) {
            out.push_back({su, vocab::has_next_statement, Term::iri(statement_uri(md, s.index + 1))});
        }
        if (s.call) out.push_back({su, vocab::calls_library, Term::iri(docs::library_uri(*s.call))});
        for (const auto& [name, value] : s.parameters) {
            out.push_back({su, vocab::has_parameter, Term::string(name + "=" + value)});
        }
        for (const auto& tag : s.control_flow) out.push_back({su, vocab::in_control_flow, Term::string(tag)});
    }
    for (const auto& [from, to] : ir.data_flow_edges) {
        out.push_back({statement_uri(md, from), vocab::has_data_flow_to, Term::iri(statement_uri(md, to))});
    }
    return out;
}

}  // namespace lids::pipeline
