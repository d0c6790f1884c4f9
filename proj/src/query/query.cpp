#include "lids/query/query.hpp"

#include "lids/construction/builder.hpp"
#include "lids/error.hpp"
#include "lids/util/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <deque>
#include <regex>

namespace lids::query {

namespace v = kg::vocab;

namespace {

struct TableInfo {
    std::string uri;
    std::string label;
    std::string dataset_uri;
    std::string dataset_label;
    std::string source_label;
    std::vector<std::pair<std::string, std::string>> columns;  // label, uri
};

struct StatementInfo {
    std::vector<std::string> calls;  // library paths
    std::vector<std::string> parameters;
    std::vector<std::string> reads;
    std::vector<std::string> flows_from;
};

struct PipelineInfo {
    std::string uri;
    std::string id;
    std::string author;
    double score = 0;
    std::vector<std::string> tags;
    std::string dataset;
    std::map<std::string, StatementInfo> statements;
};

std::optional<std::string> label_of(const kg::GraphStore& store, const std::string& node) {
    auto ms = store.match({kg::Uri(node), v::rdfs_label, std::nullopt, kg::kDefaultGraph});
    if (ms.empty()) return std::nullopt;
    return ms.front().triple.object.value;
}

std::optional<std::string> parent_of(const kg::GraphStore& store, const std::string& node) {
    auto ms = store.match({kg::Uri(node), v::is_part_of, std::nullopt, kg::kDefaultGraph});
    if (ms.empty()) return std::nullopt;
    return ms.front().triple.object.value;
}

std::set<std::string> typed(const kg::GraphStore& store, const kg::Uri& cls) {
    std::set<std::string> out;
    for (const auto& m : store.match({std::nullopt, v::rdf_type, kg::Term::iri(cls), kg::kDefaultGraph})) {
        out.insert(m.triple.subject.text);
    }
    return out;
}

std::map<std::string, TableInfo> load_tables(const kg::GraphStore& store) {
    std::map<std::string, TableInfo> tables;
    for (const auto& t : typed(store, v::Table)) {
        TableInfo info;
        info.uri = t;
        info.label = label_of(store, t).value_or("");
        info.dataset_uri = parent_of(store, t).value_or("");
        info.dataset_label = label_of(store, info.dataset_uri).value_or("");
        if (auto src = parent_of(store, info.dataset_uri)) info.source_label = label_of(store, *src).value_or("");
        tables.emplace(t, std::move(info));
    }
    for (const auto& c : typed(store, v::Column)) {
        auto parent = parent_of(store, c);
        if (!parent) continue;
        if (auto it = tables.find(*parent); it != tables.end()) {
            it->second.columns.emplace_back(label_of(store, c).value_or(""), c);
        }
    }
    for (auto& [uri, info] : tables) std::sort(info.columns.begin(), info.columns.end());
    return tables;
}

const TableInfo& require_table(const std::map<std::string, TableInfo>& tables, const kg::Uri& uri) {
    auto it = tables.find(uri.text);
    if (it == tables.end()) throw NotFound("unknown table: " + uri.text);
    return it->second;
}

std::optional<std::string> library_path(const std::string& uri) {
    auto segs = kg::resource_segments(kg::Uri(uri));
    if (segs.size() < 2 || segs.front() != "library") return std::nullopt;
    std::string path = segs[1];
    for (std::size_t i = 2; i < segs.size(); ++i) path += "." + segs[i];
    return path;
}

bool is_under(const std::string& path, const std::string& ancestor) {
    return path == ancestor || (path.size() > ancestor.size() && path.starts_with(ancestor) && path[ancestor.size()] == '.');
}

std::vector<PipelineInfo> load_pipelines(const kg::GraphStore& store) {
    std::vector<PipelineInfo> out;
    for (const auto& [graph, triples] : store.graphs()) {
        if (graph == kg::kDefaultGraph) continue;
        PipelineInfo p;
        p.uri = graph;
        for (const auto& [t, certainty] : triples) {
            const auto& s = t.subject.text;
            const auto& pred = t.predicate;
            const auto& o = t.object.value;
            if (s == graph) {
                if (pred == v::rdfs_label) p.id = o;
                else if (pred == v::has_author) p.author = o;
                else if (pred == v::has_score) p.score = t.object.as_number().value_or(0.0);
                else if (pred == v::has_tag) p.tags.push_back(o);
                else if (pred == v::has_dataset) p.dataset = o;
                continue;
            }
            if (pred == v::calls_library) {
                if (auto path = library_path(o)) p.statements[s].calls.push_back(*path);
            } else if (pred == v::has_parameter) {
                p.statements[s].parameters.push_back(o);
            } else if (pred == v::reads) {
                p.statements[s].reads.push_back(o);
            } else if (pred == v::has_data_flow_to) {
                p.statements[o].flows_from.push_back(s);
            } else if (pred == v::rdf_type) {
                p.statements[s];
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::set<std::string> called_paths(const PipelineInfo& p) {
    std::set<std::string> out;
    for (const auto& [uri, s] : p.statements) out.insert(s.calls.begin(), s.calls.end());
    return out;
}

// Path up to and including its first capitalised segment (the class).
std::string class_path(const std::string& path) {
    std::string out;
    for (const auto& seg : util::split(path, '.')) {
        if (!out.empty()) out += '.';
        out += seg;
        if (!seg.empty() && std::isupper(static_cast<unsigned char>(seg[0]))) break;
    }
    return out;
}

std::string last_segment(const std::string& path) {
    const auto dot = path.rfind('.');
    return dot == std::string::npos ? path : path.substr(dot + 1);
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

ResultTable top_libraries(const std::vector<PipelineInfo>& pipelines, std::size_t k) {
    if (k == 0) throw InvalidQuery("k must be at least 1");
    std::map<std::string, std::size_t> counts;
    for (const auto& p : pipelines) {
        std::set<std::string> tops;
        for (const auto& path : called_paths(p)) tops.insert(util::split(path, '.').front());
        for (const auto& t : tops) ++counts[t];
    }
    std::vector<std::pair<std::string, std::size_t>> rows(counts.begin(), counts.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    ResultTable out{{"library", "pipeline_count"}, {}};
    for (std::size_t i = 0; i < rows.size() && i < k; ++i) out.add_row({rows[i].first, std::to_string(rows[i].second)});
    return out;
}

// Pipelines declaring the dataset or reading one of its tables or columns.
std::vector<PipelineInfo> pipelines_of_dataset(const kg::GraphStore& store, const std::string& dataset) {
    std::set<std::string> nodes{dataset};
    for (const auto& [uri, t] : load_tables(store)) {
        if (t.dataset_uri != dataset) continue;
        nodes.insert(uri);
        for (const auto& c : t.columns) nodes.insert(c.second);
    }
    std::vector<PipelineInfo> out;
    for (auto& p : load_pipelines(store)) {
        bool hit = p.dataset == dataset;
        for (const auto& [uri, s] : p.statements) {
            for (const auto& r : s.reads) hit = hit || nodes.contains(r);
        }
        if (hit) out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

void ResultTable::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) {
        throw Error("row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_cell(cells[i]);
        }
        out += '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return out;
}

std::string ResultTable::to_jsonl() const {
    std::string out;
    for (const auto& r : rows) {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) j[columns[i]] = r[i];
        out += j.dump() + "\n";
    }
    return out;
}

Conditions parse_conditions(std::string_view json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidQuery(std::string("conditions are not valid JSON: ") + e.what());
    }
    if (j.is_string()) j = nlohmann::json::array({j});
    if (!j.is_array()) throw InvalidQuery("conditions must be a list");
    Conditions out;
    for (const auto& term : j) {
        if (term.is_string()) {
            out.push_back({term.get<std::string>()});
        } else if (term.is_array()) {
            std::vector<std::string> all;
            for (const auto& t : term) {
                if (!t.is_string()) throw InvalidQuery("condition terms must be strings");
                all.push_back(t.get<std::string>());
            }
            out.push_back(std::move(all));
        } else {
            throw InvalidQuery("condition terms must be strings or lists of strings");
        }
    }
    return out;
}

ResultTable search_keywords(const kg::GraphStore& store, const Conditions& conditions) {
    if (conditions.empty()) throw InvalidQuery("empty search condition");
    for (const auto& all : conditions) {
        if (all.empty()) throw InvalidQuery("empty conjunction in search condition");
        for (const auto& t : all) {
            if (util::trim(t).empty()) throw InvalidQuery("empty search term");
        }
    }
    ResultTable out{{"source", "dataset", "table", "table_uri"}, {}};
    for (const auto& [uri, t] : load_tables(store)) {
        auto matches = [&](const std::string& term) {
            if (util::contains_icase(t.dataset_label, term) || util::contains_icase(t.label, term)) return true;
            return std::any_of(t.columns.begin(), t.columns.end(),
                               [&](const auto& c) { return util::contains_icase(c.first, term); });
        };
        const bool hit = std::any_of(conditions.begin(), conditions.end(), [&](const auto& all) {
            return std::all_of(all.begin(), all.end(), matches);
        });
        if (hit) out.add_row({t.source_label, t.dataset_label, t.label, uri});
    }
    return out;
}

ResultTable find_unionable_columns(const kg::GraphStore& store, const kg::Uri& table_a, const kg::Uri& table_b) {
    const auto tables = load_tables(store);
    const auto& a = require_table(tables, table_a);
    const auto& b = require_table(tables, table_b);
    std::map<std::string, std::string> b_cols, labels;
    for (const auto& [label, uri] : b.columns) b_cols.emplace(uri, label);
    for (const auto& [label, uri] : a.columns) labels.emplace(uri, label);
    for (const auto& [label, uri] : b.columns) labels.emplace(uri, label);

    std::map<std::pair<std::string, std::string>, double> best;
    for (const auto& [label, col] : a.columns) {
        for (const auto* pred : {&v::has_label_similarity, &v::has_content_similarity}) {
            for (const auto& m : store.match({kg::Uri(col), *pred, std::nullopt, kg::kDefaultGraph})) {
                if (!b_cols.contains(m.triple.object.value)) continue;
                double& s = best[{col, m.triple.object.value}];
                s = std::max(s, m.certainty.value_or(1.0));
            }
        }
    }
    std::vector<construction::ColumnMatch> candidates;
    for (const auto& [pair, score] : best) candidates.push_back({kg::Uri(pair.first), kg::Uri(pair.second), score});
    ResultTable out{{"column_a", "column_b", "score", "column_a_uri", "column_b_uri"}, {}};
    for (const auto& m : construction::greedy_match(std::move(candidates))) {
        out.add_row({labels[m.a.text], labels[m.b.text], util::format_double(m.score), m.a.text, m.b.text});
    }
    return out;
}

ResultTable get_path_to_table(const kg::GraphStore& store, const kg::Uri& start, const std::optional<kg::Uri>& target,
                              std::size_t hops) {
    if (hops < 1) throw InvalidQuery("hops must be at least 1");
    const auto tables = load_tables(store);
    require_table(tables, start);
    if (target) require_table(tables, *target);

    std::map<std::string, std::set<std::string>> adjacent;
    for (const auto& m : store.match({std::nullopt, v::is_joinable_with, std::nullopt, kg::kDefaultGraph})) {
        adjacent[m.triple.subject.text].insert(m.triple.object.value);
    }
    auto join_columns = [&](const std::string& from, const std::string& to) {
        std::set<std::string> to_cols;
        for (const auto& c : tables.at(to).columns) to_cols.insert(c.second);
        std::vector<std::string> pairs;
        for (const auto& [label, col] : tables.at(from).columns) {
            for (const auto& m : store.match({kg::Uri(col), v::has_pkfk_similarity, std::nullopt, kg::kDefaultGraph})) {
                if (to_cols.contains(m.triple.object.value)) {
                    pairs.push_back(label + "=" + label_of(store, m.triple.object.value).value_or(""));
                }
            }
        }
        std::sort(pairs.begin(), pairs.end());
        std::string out;
        for (const auto& p : pairs) out += (out.empty() ? "" : ";") + p;
        return out;
    };

    std::vector<std::vector<std::string>> found;
    std::deque<std::vector<std::string>> frontier{{start.text}};
    while (!frontier.empty()) {
        auto path = std::move(frontier.front());
        frontier.pop_front();
        if (path.size() - 1 >= hops) continue;
        auto adj = adjacent.find(path.back());
        if (adj == adjacent.end()) continue;
        for (const auto& next : adj->second) {
            if (std::find(path.begin(), path.end(), next) != path.end() || !tables.contains(next)) continue;
            auto extended = path;
            extended.push_back(next);
            if (!target || next == target->text) found.push_back(extended);
            frontier.push_back(std::move(extended));
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });

    ResultTable out{{"hops", "path", "join_columns"}, {}};
    for (const auto& path : found) {
        std::string text = path.front(), joins;
        for (std::size_t i = 1; i < path.size(); ++i) {
            text += " -> " + path[i];
            if (i > 1) joins += " | ";
            joins += join_columns(path[i - 1], path[i]);
        }
        out.add_row({std::to_string(path.size() - 1), text, joins});
    }
    return out;
}

ResultTable get_top_k_library_used(const kg::GraphStore& store, std::size_t k) {
    return top_libraries(load_pipelines(store), k);
}

ResultTable get_top_used_libraries(const kg::GraphStore& store, std::size_t k, const std::string& task) {
    auto pipelines = load_pipelines(store);
    std::erase_if(pipelines, [&](const PipelineInfo& p) {
        return std::none_of(p.tags.begin(), p.tags.end(), [&](const auto& t) { return util::contains_icase(t, task); });
    });
    return top_libraries(pipelines, k);
}

ResultTable get_pipelines_calling_libraries(const kg::GraphStore& store, const std::vector<std::string>& libraries) {
    if (libraries.empty()) throw InvalidQuery("at least one library path is required");
    auto pipelines = load_pipelines(store);
    std::erase_if(pipelines, [&](const PipelineInfo& p) {
        const auto paths = called_paths(p);
        return !std::all_of(libraries.begin(), libraries.end(), [&](const std::string& lib) {
            return std::any_of(paths.begin(), paths.end(), [&](const auto& path) { return is_under(path, lib); });
        });
    });
    std::sort(pipelines.begin(), pipelines.end(), [](const PipelineInfo& a, const PipelineInfo& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.uri < b.uri;
    });
    ResultTable out{{"pipeline", "author", "score", "tags", "pipeline_uri"}, {}};
    for (auto& p : pipelines) {
        std::sort(p.tags.begin(), p.tags.end());
        std::string tags;
        for (const auto& t : p.tags) tags += (tags.empty() ? "" : ";") + t;
        out.add_row({p.id, p.author, util::format_double(p.score), tags, p.uri});
    }
    return out;
}

kg::Uri resolve_dataset(const kg::GraphStore& store, const index::VectorIndex* index, const DatasetRef& ref,
                        double min_similarity) {
    const auto datasets = typed(store, v::Dataset);
    if (datasets.contains(ref.name)) return kg::Uri(ref.name);
    std::vector<std::string> labelled;
    for (const auto& d : datasets) {
        if (label_of(store, d) == ref.name) labelled.push_back(d);
    }
    if (labelled.size() == 1) return kg::Uri(labelled.front());
    if (labelled.size() > 1) throw InvalidQuery("dataset label is ambiguous: " + ref.name);
    if (ref.embedding && index != nullptr) {
        auto hits = index->top_k(*ref.embedding, 1, index::EntryKind::Dataset);
        if (!hits.empty() && hits.front().score >= min_similarity) return hits.front().id;
    }
    throw NotFound("unknown dataset: " + ref.name);
}

index::Vector embed_dataset_dir(const std::filesystem::path& dir, const profiler::Lexicon& lexicon,
                                const profiler::Gazetteer& gazetteer, const profiler::Embedder& embedder) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir, ec)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
    if (ec) throw IoError("cannot read " + dir.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());
    std::vector<index::Vector> table_vectors;
    for (const auto& f : files) {
        const auto csv = profiler::parse_csv(util::read_file(f));
        std::vector<profiler::ColumnProfile> profiles;
        std::set<std::string> seen;
        for (std::size_t c = 0; c < csv.header.size(); ++c) {
            const std::string name(util::trim(csv.header[c]));
            if (name.empty() || !seen.insert(name).second) continue;
            std::vector<std::string> values;
            for (const auto& row : csv.rows) values.push_back(c < row.size() ? row[c] : "");
            profiles.push_back(profiler::profile_column({"unseen", dir.filename().string(), f.filename().string(), name},
                                                        values, lexicon, gazetteer, embedder));
        }
        std::vector<const profiler::ColumnProfile*> ptrs;
        for (const auto& p : profiles) ptrs.push_back(&p);
        table_vectors.push_back(profiler::embed_table(ptrs));
    }
    if (table_vectors.empty()) throw NotFound("no CSV tables in " + dir.string());
    return profiler::embed_dataset(table_vectors);
}

ResultTable recommend_transformations(const kg::GraphStore& store, const index::VectorIndex* index,
                                      const DatasetRef& dataset, const RecommendOptions& options) {
    const std::string ds = resolve_dataset(store, index, dataset, options.min_similarity).text;
    std::map<std::string, std::string> dataset_columns;  // uri -> label
    for (const auto& [uri, t] : load_tables(store)) {
        if (t.dataset_uri != ds) continue;
        for (const auto& [label, col] : t.columns) dataset_columns.emplace(col, label);
    }
    auto is_transformation = [&](const std::string& path) {
        if (options.cleaning_ops.contains(last_segment(path))) return true;
        return std::any_of(options.transformation_fragments.begin(), options.transformation_fragments.end(),
                           [&](const auto& f) { return path.find(f) != std::string::npos; });
    };

    std::map<std::string, std::size_t> usage;
    std::map<std::string, std::map<std::string, std::size_t>> column_votes;
    for (const auto& p : pipelines_of_dataset(store, ds)) {
        // Column labels read by a statement or, failing that, by its nearest
        // data-flow predecessors.
        auto columns_for = [&](const std::string& stmt) {
            std::set<std::string> seen{stmt};
            std::vector<std::string> level{stmt};
            while (!level.empty()) {
                std::set<std::string> found;
                std::vector<std::string> next;
                for (const auto& s : level) {
                    auto it = p.statements.find(s);
                    if (it == p.statements.end()) continue;
                    for (const auto& r : it->second.reads) {
                        if (auto c = dataset_columns.find(r); c != dataset_columns.end()) found.insert(c->second);
                    }
                    for (const auto& pred : it->second.flows_from) {
                        if (seen.insert(pred).second) next.push_back(pred);
                    }
                }
                if (!found.empty()) return found;
                level = std::move(next);
            }
            return std::set<std::string>{};
        };
        std::map<std::string, std::set<std::string>> used;  // transformation -> columns
        for (const auto& [uri, s] : p.statements) {
            for (const auto& path : s.calls) {
                if (!is_transformation(path)) continue;
                const std::string name = options.cleaning_ops.contains(last_segment(path)) ? path : class_path(path);
                auto& cols = used[name];
                for (const auto& c : columns_for(uri)) cols.insert(c);
            }
        }
        for (const auto& [name, cols] : used) {
            ++usage[name];
            for (const auto& c : cols) ++column_votes[name][c];
        }
    }

    std::vector<std::pair<std::string, std::size_t>> rows(usage.begin(), usage.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    ResultTable out{{"transformation", "usage_count", "example_column"}, {}};
    for (const auto& [name, count] : rows) {
        std::string example;
        std::size_t votes = 0;
        for (const auto& [col, n] : column_votes[name]) {
            if (n > votes) example = col, votes = n;
        }
        out.add_row({name, std::to_string(count), example});
    }
    return out;
}

ResultTable recommend_ml_models(const kg::GraphStore& store, const index::VectorIndex* index, const DatasetRef& dataset,
                                const std::string& task, const RecommendOptions& options) {
    auto pattern = options.task_patterns.find(util::to_lower(task));
    if (pattern == options.task_patterns.end()) throw InvalidQuery("no model pattern for task: " + task);
    const std::regex re(pattern->second);
    const std::string ds = resolve_dataset(store, index, dataset, options.min_similarity).text;

    std::map<std::string, double> best;
    for (const auto& p : pipelines_of_dataset(store, ds)) {
        if (std::none_of(p.tags.begin(), p.tags.end(), [&](const auto& t) { return util::contains_icase(t, task); })) {
            continue;
        }
        for (const auto& path : called_paths(p)) {
            const std::string model = class_path(path);
            if (!std::regex_search(last_segment(model), re)) continue;
            auto [it, inserted] = best.emplace(model, p.score);
            if (!inserted) it->second = std::max(it->second, p.score);
        }
    }
    std::vector<std::pair<std::string, double>> rows(best.begin(), best.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    ResultTable out{{"model", "best_pipeline_score"}, {}};
    for (const auto& [model, score] : rows) out.add_row({model, util::format_double(score)});
    return out;
}

ResultTable recommend_hyperparameters(const kg::GraphStore& store, const index::VectorIndex* index,
                                      const DatasetRef& dataset, const std::string& model,
                                      const RecommendOptions& options) {
    const std::string ds = resolve_dataset(store, index, dataset, options.min_similarity).text;
    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    for (const auto& p : pipelines_of_dataset(store, ds)) {
        for (const auto& [uri, s] : p.statements) {
            if (std::find(s.calls.begin(), s.calls.end(), model) == s.calls.end()) continue;
            for (const auto& param : s.parameters) {
                const auto eq = param.find('=');
                if (eq == std::string::npos) continue;
                ++counts[{param.substr(0, eq), param.substr(eq + 1)}];
            }
        }
    }
    std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>> rows(counts.begin(), counts.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    ResultTable out{{"param", "value", "frequency"}, {}};
    for (const auto& [pv, n] : rows) out.add_row({pv.first, pv.second, std::to_string(n)});
    return out;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
    const auto csv = profiler::parse_csv(util::read_file(path));
    GroundTruth out;
    auto add = [&](const std::vector<std::string>& row) {
        if (row.size() < 2) return;
        const std::string q(util::trim(row[0])), r(util::trim(row[1]));
        if (q.empty()) return;
        auto& related = out[q];
        if (!r.empty()) related.insert(r);
    };
    if (!csv.header.empty() && !(csv.header.size() >= 2 && util::trim(csv.header[0]) == "query_table")) add(csv.header);
    for (const auto& row : csv.rows) add(row);
    return out;
}

kg::Uri resolve_table(const kg::GraphStore& store, const std::string& name) {
    std::vector<std::string> labelled;
    for (const auto& t : typed(store, v::Table)) {
        if (t == name) return kg::Uri(t);
        if (label_of(store, t) == name) labelled.push_back(t);
    }
    if (labelled.empty()) throw NotFound("unknown table: " + name);
    if (labelled.size() > 1) throw InvalidQuery("table label is ambiguous: " + name);
    return kg::Uri(labelled.front());
}

GroundTruth resolve_ground_truth(const kg::GraphStore& store, const GroundTruth& names) {
    GroundTruth out;
    for (const auto& [q, related] : names) {
        auto& set = out[resolve_table(store, q).text];
        for (const auto& r : related) set.insert(resolve_table(store, r).text);
    }
    return out;
}

Ranking unionable_ranking(const kg::GraphStore& store, const std::vector<std::string>& queries) {
    Ranking out;
    for (const auto& q : queries) {
        std::vector<std::pair<double, std::string>> hits;
        for (const auto& m : store.match({kg::Uri(q), v::is_unionable_with, std::nullopt, kg::kDefaultGraph})) {
            hits.emplace_back(m.certainty.value_or(0.0), m.triple.object.value);
        }
        std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        auto& ranked = out[q];
        for (auto& h : hits) ranked.push_back(std::move(h.second));
    }
    return out;
}

ResultTable precision_recall_at_k(const Ranking& ranking, const GroundTruth& ground_truth,
                                  const std::vector<std::size_t>& k_values, std::size_t num_queries,
                                  std::uint64_t seed) {
    for (auto k : k_values) {
        if (k == 0) throw InvalidQuery("k must be at least 1");
    }
    std::vector<std::string> keys;
    for (const auto& [q, related] : ground_truth) keys.push_back(q);
    util::SeededRng rng(seed);
    for (std::size_t i = keys.size(); i > 1; --i) std::swap(keys[i - 1], keys[rng.below(i)]);
    keys.resize(std::min(keys.size(), num_queries));
    std::erase_if(keys, [&](const std::string& q) { return ground_truth.at(q).empty(); });

    ResultTable out{{"k", "precision", "recall", "queries"}, {}};
    for (auto k : k_values) {
        double p_sum = 0, r_sum = 0;
        for (const auto& q : keys) {
            const auto& related = ground_truth.at(q);
            std::size_t hits = 0;
            if (auto it = ranking.find(q); it != ranking.end()) {
                for (std::size_t i = 0; i < it->second.size() && i < k; ++i) hits += related.contains(it->second[i]);
            }
            p_sum += static_cast<double>(hits) / static_cast<double>(k);
            r_sum += static_cast<double>(hits) / static_cast<double>(related.size());
        }
        const double n = keys.empty() ? 1.0 : static_cast<double>(keys.size());
        out.add_row({std::to_string(k), util::format_double(p_sum / n), util::format_double(r_sum / n),
                     std::to_string(keys.size())});
    }
    return out;
}

}  // namespace lids::query
