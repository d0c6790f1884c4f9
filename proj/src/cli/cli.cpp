#include "lids/cli/cli.hpp"

#include "lids/docs/doc_index.hpp"
#include "lids/error.hpp"
#include "lids/index/vector_index.hpp"
#include "lids/kg/trig.hpp"
#include "lids/pipeline/abstraction.hpp"
#include "lids/profiler/profiler.hpp"
#include "lids/query/query.hpp"
#include "lids/util/text.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <optional>

namespace lids::cli {

namespace {

const std::filesystem::path kDataDir = LIDS_DATA_DIR;

std::string seconds_since(std::chrono::steady_clock::time_point start) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    return buf;
}

void require(const std::filesystem::path& p, const std::string& flag) {
    if (p.empty()) throw InvalidQuery(flag + " is required");
}

std::size_t parse_count(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != text.size()) throw InvalidQuery(what + " must be a non-negative integer: " + text);
    return static_cast<std::size_t>(v);
}

std::vector<std::size_t> parse_k_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& part : util::split(text, ',')) out.push_back(parse_count(std::string(util::trim(part)), "k"));
    if (out.empty()) throw InvalidQuery("--k needs at least one value");
    return out;
}

struct QueryArgs {
    std::string op;
    std::vector<std::string> args;
    std::filesystem::path graph;
    std::filesystem::path index;
    std::string format = "csv";
    std::filesystem::path dataset_dir;
    double min_similarity = -1.0;
    std::size_t hops = 2;
};

struct EvalArgs {
    std::filesystem::path graph;
    std::filesystem::path ground_truth;
    std::string k = "5,10";
    std::size_t queries = 10;
    std::string format = "csv";
};

void write_table(const query::ResultTable& table, const std::string& format, std::ostream& out) {
    out << (format == "json" ? table.to_jsonl() : table.to_csv());
}

kg::GraphStore load_graph(const std::filesystem::path& path) {
    require(path, "--graph");
    return kg::parse_trig_star(util::read_file(path));
}

void run_profile(const Config& cfg, std::ostream& out, std::ostream& err) {
    require(cfg.data_dir, "--data-dir");
    require(cfg.out_dir, "--out");
    const auto start = std::chrono::steady_clock::now();
    const auto lexicon = profiler::Lexicon::load(cfg.lexicon_path);
    const auto gazetteer = profiler::Gazetteer::load(cfg.gazetteer_path);
    const profiler::DefaultEmbedder embedder(cfg.seed);
    const auto report = profiler::profile_corpus(cfg.data_dir, cfg.out_dir, lexicon, gazetteer, embedder, cfg.workers);
    for (const auto& s : report.skipped) err << "skipped: " << s << "\n";
    out << "columns: " << report.columns << "\n";
    out << "tables: " << report.tables << "\n";
    out << "wall time: " << seconds_since(start) << " s\n";
}

int run_abstract(const Config& cfg, std::ostream& out, std::ostream& err) {
    require(cfg.pipelines_dir, "--pipelines-dir");
    require(cfg.out_dir, "--out");
    const auto start = std::chrono::steady_clock::now();
    const auto docs = docs::load_library_docs(cfg.docs_dir);
    const auto report = pipeline::abstract_corpus(cfg.pipelines_dir, docs, cfg.out_dir, cfg.workers);
    for (const auto& s : report.skipped) err << "skipped: " << s << "\n";
    if (report.abstracted == 0 && report.skipped.empty()) err << "warning: no pipeline scripts found\n";
    out << "pipelines: " << report.abstracted << "\n";
    out << "skipped: " << report.skipped.size() << "\n";
    out << "wall time: " << seconds_since(start) << " s\n";
    return report.abstracted == 0 && !report.skipped.empty() ? kExitIo : kExitOk;
}

void run_build(const Config& cfg, const std::filesystem::path& profiles, const std::filesystem::path& irs,
               const std::optional<std::filesystem::path>& edges_dir, std::ostream& out) {
    require(profiles, "--profiles");
    require(irs, "--irs");
    require(cfg.out_dir, "--out");
    const auto& t = cfg.thresholds;
    out << "thresholds: alpha=" << util::format_double(t.alpha) << " beta=" << util::format_double(t.beta)
        << " theta=" << util::format_double(t.theta) << " gamma=" << util::format_double(t.gamma) << "\n";
    const auto lexicon = profiler::Lexicon::load(cfg.lexicon_path);
    construction::BuildInputs inputs{profiles, irs, cfg.docs_dir, t, cfg.workers, edges_dir};
    const auto store = construction::build_lids_graph(inputs, lexicon);
    util::write_file(cfg.out_dir, kg::serialize_trig_star(store));
    out << "triples: " << store.size() << "\n";
    out << "named graphs: " << store.named_graphs().size() << "\n";
    for (const auto& [aspect, count] : construction::aspect_counts(store)) out << aspect << ": " << count << "\n";
}

void run_query(const Config& cfg, const QueryArgs& q, std::ostream& out) {
    const auto& a = q.args;
    auto want = [&](std::size_t min, std::size_t max, const char* usage) {
        if (a.size() < min || a.size() > max) throw InvalidQuery(std::string("usage: query ") + q.op + " " + usage);
    };
    static const std::set<std::string> known{
        "search-keywords",          "find-unionable-columns",    "get-path-to-table",
        "get-top-k-library-used",   "get-top-used-libraries",    "get-pipelines-calling-libraries",
        "recommend-transformations", "recommend-ml-models",       "recommend-hyperparameters"};
    if (!known.contains(q.op)) throw InvalidQuery("unknown query operation: " + q.op);

    const auto store = load_graph(q.graph);
    std::optional<index::VectorIndex> vectors;
    if (!q.index.empty()) vectors = index::load_index(q.index);
    const index::VectorIndex* index_ptr = vectors ? &*vectors : nullptr;

    auto dataset_ref = [&](const std::string& name) {
        query::DatasetRef ref{name, std::nullopt};
        if (!q.dataset_dir.empty()) {
            const auto lexicon = profiler::Lexicon::load(cfg.lexicon_path);
            const auto gazetteer = profiler::Gazetteer::load(cfg.gazetteer_path);
            ref.embedding = query::embed_dataset_dir(q.dataset_dir, lexicon, gazetteer, profiler::DefaultEmbedder(cfg.seed));
        }
        return ref;
    };
    query::RecommendOptions options;
    options.min_similarity = q.min_similarity;

    query::ResultTable result;
    if (q.op == "search-keywords") {
        want(1, 1, "<conditions-json>");
        result = query::search_keywords(store, query::parse_conditions(a[0]));
    } else if (q.op == "find-unionable-columns") {
        want(2, 2, "<table-a> <table-b>");
        result = query::find_unionable_columns(store, query::resolve_table(store, a[0]),
                                               query::resolve_table(store, a[1]));
    } else if (q.op == "get-path-to-table") {
        want(1, 2, "<start-table> [target-table] [--hops N]");
        std::optional<kg::Uri> target;
        if (a.size() == 2) target = query::resolve_table(store, a[1]);
        result = query::get_path_to_table(store, query::resolve_table(store, a[0]), target, q.hops);
    } else if (q.op == "get-top-k-library-used") {
        want(1, 1, "<k>");
        result = query::get_top_k_library_used(store, parse_count(a[0], "k"));
    } else if (q.op == "get-top-used-libraries") {
        want(2, 2, "<k> <task>");
        result = query::get_top_used_libraries(store, parse_count(a[0], "k"), a[1]);
    } else if (q.op == "get-pipelines-calling-libraries") {
        want(1, SIZE_MAX, "<library> [library...]");
        result = query::get_pipelines_calling_libraries(store, a);
    } else if (q.op == "recommend-transformations") {
        want(1, 1, "<dataset> [--dataset-dir DIR]");
        result = query::recommend_transformations(store, index_ptr, dataset_ref(a[0]), options);
    } else if (q.op == "recommend-ml-models") {
        want(2, 2, "<dataset> <task> [--dataset-dir DIR]");
        result = query::recommend_ml_models(store, index_ptr, dataset_ref(a[0]), a[1], options);
    } else {
        want(2, 2, "<dataset> <model> [--dataset-dir DIR]");
        result = query::recommend_hyperparameters(store, index_ptr, dataset_ref(a[0]), a[1], options);
    }
    write_table(result, q.format, out);
}

void run_eval(const Config& cfg, const EvalArgs& e, std::ostream& out) {
    const auto k_values = parse_k_list(e.k);
    const auto store = load_graph(e.graph);
    require(e.ground_truth, "--ground-truth");
    const auto truth = query::resolve_ground_truth(store, query::load_ground_truth(e.ground_truth));
    std::vector<std::string> queries;
    for (const auto& [q, related] : truth) queries.push_back(q);
    const auto ranking = query::unionable_ranking(store, queries);
    write_table(query::precision_recall_at_k(ranking, truth, k_values, e.queries, cfg.seed), e.format, out);
}

}  // namespace

void Config::validate() const {
    try {
        thresholds.validate();
    } catch (const InvalidQuery&) {
        throw;
    } catch (const Error& e) {
        throw InvalidQuery(e.what());
    }
    if (workers == 0) throw InvalidQuery("workers must be at least 1");
}

Config default_config() {
    Config cfg;
    cfg.docs_dir = kDataDir / "docs";
    cfg.lexicon_path = kDataDir / "lexicon.txt";
    cfg.gazetteer_path = kDataDir / "gazetteer.txt";
    return cfg;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Config cfg = default_config();
    std::filesystem::path profiles, irs, edges_dir;
    QueryArgs q;
    EvalArgs e;

    CLI::App app{"Builds and queries a linked knowledge graph of datasets, pipelines and libraries"};
    app.name("lids-forge");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML file with option defaults (top-level keys named after the long flags)");

    const auto unit = CLI::Range(0.0, 1.0);
    app.add_option("--data-dir", cfg.data_dir, "Directory of <source>/<dataset>/<table>.csv files");
    app.add_option("--pipelines-dir", cfg.pipelines_dir, "Directory of <source>/<dataset>/<id>/pipeline.py scripts");
    app.add_option("--docs", cfg.docs_dir, "Library documentation directory")->capture_default_str();
    app.add_option("--out", cfg.out_dir, "Output directory (profile, abstract) or .trig file (build-kg)");
    app.add_option("--alpha", cfg.thresholds.alpha, "Label similarity threshold")->check(unit)->capture_default_str();
    app.add_option("--beta", cfg.thresholds.beta, "Boolean content similarity threshold")->check(unit)->capture_default_str();
    app.add_option("--theta", cfg.thresholds.theta, "Content similarity threshold")->check(unit)->capture_default_str();
    app.add_option("--gamma", cfg.thresholds.gamma, "Primary-key uniqueness threshold")->check(unit)->capture_default_str();
    app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--lexicon", cfg.lexicon_path, "Word vector file")->capture_default_str();
    app.add_option("--gazetteer", cfg.gazetteer_path, "Named entity list")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for embeddings and query sampling")->capture_default_str();

    auto* profile = app.add_subcommand("profile", "Profile every column of a data lake");
    auto* abstract = app.add_subcommand("abstract", "Abstract every pipeline script into a graph IR");
    auto* build = app.add_subcommand("build-kg", "Build the linked graph and write it as TriG-star");
    build->add_option("--profiles", profiles, "Profile directory written by `profile`");
    build->add_option("--irs", irs, "IR directory written by `abstract`");
    build->add_option("--edges-dir", edges_dir, "Also write similarity edge partitions here");

    auto* query_cmd = app.add_subcommand("query", "Run a predefined query operation");
    query_cmd->add_option("op", q.op, "Operation name")->required();
    // Operands are collected verbatim from the leftovers: a positional vector
    // would split JSON such as [["a","b"],"c"] as a bracketed list. Without
    // fallthrough the options shared with the main command are repeated here.
    query_cmd->allow_extras();
    query_cmd->fallthrough(false);
    query_cmd->add_option("--seed", cfg.seed, "Seed of the on-the-fly embedder");
    query_cmd->add_option("--lexicon", cfg.lexicon_path, "Word vector file");
    query_cmd->add_option("--gazetteer", cfg.gazetteer_path, "Named entity list");
    query_cmd->add_option("--graph", q.graph, "Graph file (.trig)")->required();
    query_cmd->add_option("--index", q.index, "Vector index (index.jsonl)");
    query_cmd->add_option("--format", q.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    query_cmd->add_option("--dataset-dir", q.dataset_dir, "CSV directory of a dataset missing from the graph");
    query_cmd->add_option("--min-similarity", q.min_similarity, "Minimum cosine for similar-dataset routing");
    query_cmd->add_option("--hops", q.hops, "Maximum join path length")->check(CLI::PositiveNumber);

    auto* eval = app.add_subcommand("eval", "Evaluation harnesses");
    eval->require_subcommand(1);
    auto* discovery = eval->add_subcommand("discovery", "Precision/recall at k of table unionability");
    discovery->add_option("--graph", e.graph, "Graph file (.trig)")->required();
    discovery->add_option("--ground-truth", e.ground_truth, "query_table,related_table CSV")->required();
    discovery->add_option("--k", e.k, "Comma-separated k values")->capture_default_str();
    discovery->add_option("--queries", e.queries, "Number of sampled query tables")->capture_default_str();
    discovery->add_option("--format", e.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        cfg.validate();
        if (*query_cmd) {
            q.args = query_cmd->remaining();
            for (const auto& a : q.args) {
                if (a.starts_with("--")) throw InvalidQuery("unknown option for query: " + a);
            }
        }
        if (*profile) run_profile(cfg, out, err);
        else if (*abstract) return run_abstract(cfg, out, err);
        else if (*build) run_build(cfg, profiles, irs, edges_dir.empty() ? std::nullopt : std::optional(edges_dir), out);
        else if (*query_cmd) run_query(cfg, q, out);
        else if (*discovery) run_eval(cfg, e, out);
        return kExitOk;
    } catch (const InvalidQuery& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitIo;
    }
}

}  // namespace lids::cli
