#include "lids/pipeline/abstraction.hpp"

#include "lids/error.hpp"
#include "lids/pipeline/python_ast.hpp"
#include "lids/util/parallel.hpp"
#include "lids/util/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>

namespace lids::pipeline {

namespace {

using py::Expr;
using py::ExprKind;
using py::Stmt;
using py::StmtKind;

constexpr std::string_view kDataFrame = "pandas.DataFrame";
constexpr std::string_view kSeries = "pandas.Series";

// What the abstraction knows about an expression's value: a library path
// (modules, classes, functions) and/or the type of the value it produces.
struct ValueInfo {
    std::optional<std::string> path;
    std::optional<std::string> type;
};

// Uses, subscripts and kept calls collected below one kept call (or below
// the statement itself for the root frame).
struct Frame {
    std::set<std::string> uses;
    std::vector<SubscriptAccess> subs;
    std::vector<std::size_t> calls;

    void absorb(Frame&& other) {
        uses.merge(other.uses);
        for (auto& s : other.subs) subs.push_back(std::move(s));
        calls.insert(calls.end(), other.calls.begin(), other.calls.end());
    }
};

// One unit of evaluation: a simple statement or a compound-statement header.
struct Unit {
    std::string text;
    std::size_t line = 0;
    std::vector<const Expr*> values;
    std::vector<const Expr*> targets;
    bool augmented = false;
    bool keep_without_calls = false;  // assignments and binding headers
};

std::string last_segment(std::string_view path) {
    const auto dot = path.rfind('.');
    return std::string(dot == std::string_view::npos ? path : path.substr(dot + 1));
}

std::vector<std::string> literal_keys(const Expr& key) {
    if (key.kind == ExprKind::String) return {key.text};
    if (key.kind == ExprKind::Collection && key.bracket == '[' && !key.children.empty()) {
        std::vector<std::string> out;
        for (const auto& c : key.children) {
            if (c->kind != ExprKind::String) return {};
            out.push_back(c->text);
        }
        return out;
    }
    return {};
}

std::optional<std::string> base_name(const Expr& e) {
    const Expr* cur = &e;
    while (cur->kind == ExprKind::Attribute || cur->kind == ExprKind::Subscript) cur = cur->children[0].get();
    if (cur->kind == ExprKind::Name) return cur->text;
    return std::nullopt;
}

class Abstractor {
public:
    Abstractor(const py::Module& module, const PipelineMetadata& md, const docs::DocIndex& docs,
               const AbstractionOptions& options)
        : module_(module), docs_(docs), options_(options) {
        ir_.metadata = md;
    }

    PipelineGraphIR run() {
        walk(module_.body);
        for (auto& s : ir_.statements) {
            if (s.call && !s.control_flow.contains("import")) {
                s.parameters = raw_parameters(s.arguments);
                s = enrich_statement(std::move(s), docs_);
            }
            auto usage = detect_dataset_usage(s, options_);
            s.detected_table_reads = std::move(usage.table_reads);
            s.detected_column_reads = std::move(usage.column_reads);
        }
        return std::move(ir_);
    }

private:
    static std::vector<std::pair<std::string, std::string>> raw_parameters(const std::vector<CallArgument>& args) {
        std::vector<std::pair<std::string, std::string>> out;
        std::size_t pos = 0;
        for (const auto& a : args) {
            if (a.keyword) {
                out.emplace_back(*a.keyword, a.text);
            } else {
                out.emplace_back((a.star ? "vararg_" : "arg_") + std::to_string(pos), a.text);
                ++pos;
            }
        }
        return out;
    }

    std::set<std::string> current_tags() const { return {tags_.begin(), tags_.end()}; }

    bool is_bound(const std::string& name) const {
        for (const auto& scope : bound_)
            if (std::find(scope.begin(), scope.end(), name) != scope.end()) return true;
        return false;
    }

    // --- expressions ---

    ValueInfo visit(const Expr& e, Frame& f) {
        switch (e.kind) {
            case ExprKind::Name: {
                if (is_bound(e.text)) return {};
                if (!values_.contains(e.text)) {
                    if (auto a = aliases_.find(e.text); a != aliases_.end()) return {a->second, std::nullopt};
                }
                f.uses.insert(e.text);
                if (auto v = values_.find(e.text); v != values_.end()) return v->second;
                return {};
            }
            case ExprKind::Attribute: {
                const ValueInfo base = visit(*e.children[0], f);
                if (base.path) return {*base.path + "." + e.text, std::nullopt};
                if (base.type) return {*base.type + "." + e.text, std::nullopt};
                return {};
            }
            case ExprKind::Call:
                return visit_call(e, f);
            case ExprKind::Subscript: {
                const ValueInfo base = visit(*e.children[0], f);
                visit(*e.children[1], f);
                auto keys = literal_keys(*e.children[1]);
                if (!keys.empty()) f.subs.push_back(SubscriptAccess{base.type, std::move(keys)});
                if (base.type && *base.type == kDataFrame) {
                    // Lists, slices and boolean masks select frames; a scalar key selects a column.
                    const auto k = e.children[1]->kind;
                    const bool frame = k == ExprKind::Collection || k == ExprKind::Slice || k == ExprKind::Operation;
                    return {std::nullopt, std::string(frame ? kDataFrame : kSeries)};
                }
                return {};
            }
            case ExprKind::String:
            case ExprKind::Constant:
                return {};
            case ExprKind::Operation: {
                ValueInfo result;
                for (const auto& c : e.children) {
                    ValueInfo v = visit(*c, f);
                    if (!result.type && v.type && v.type->starts_with("pandas.")) result.type = v.type;
                }
                return result;
            }
            case ExprKind::Lambda:
            case ExprKind::Comprehension: {
                bound_.push_back(e.bound);
                for (const auto& c : e.children) visit(*c, f);
                bound_.pop_back();
                return {};
            }
            case ExprKind::NamedExpr: {
                ValueInfo v = visit(*e.children[0], f);
                walrus_defs_.insert(e.text);
                return v;
            }
            case ExprKind::Collection:
            case ExprKind::Starred:
            case ExprKind::Slice:
                for (const auto& c : e.children) visit(*c, f);
                return {};
        }
        return {};
    }

    ValueInfo visit_call(const Expr& e, Frame& f) {
        Frame inner;
        const Expr& callee = *e.children[0];
        const ValueInfo fv = visit(callee, inner);
        for (const auto& a : e.args) visit(*a.value, inner);

        std::string last;
        if (fv.path) {
            last = last_segment(*fv.path);
        } else if (callee.kind == ExprKind::Name || callee.kind == ExprKind::Attribute) {
            last = callee.text;
        }
        if (!last.empty() && options_.insignificant.contains(last)) {
            if (callee.kind == ExprKind::Name) inner.uses.erase(callee.text);
            f.absorb(std::move(inner));
            return {};
        }

        StatementNode s;
        s.index = ir_.statements.size();
        s.line = e.span.line;
        s.text = std::string(module_.text(e.span));
        s.control_flow = current_tags();
        s.call = fv.path;
        for (const auto& a : e.args) {
            CallArgument arg;
            arg.keyword = a.keyword;
            arg.star = a.star;
            arg.text = std::string(module_.text(a.value->span));
            arg.is_string = a.value->kind == ExprKind::String;
            arg.literals = literal_keys(*a.value);
            s.arguments.push_back(std::move(arg));
        }
        s.uses = std::move(inner.uses);
        s.subscripts = std::move(inner.subs);
        for (std::size_t child : inner.calls) ir_.data_flow_edges.emplace(child, s.index);
        f.calls.push_back(s.index);
        ir_.statements.push_back(std::move(s));

        ValueInfo result;
        if (fv.path) {
            const auto* sig = docs_.resolve(*fv.path);
            if (sig && sig->return_type) {
                result.type = sig->return_type;
            } else if (std::isupper(static_cast<unsigned char>(last.front()))) {
                result.type = fv.path;
            }
        }
        return result;
    }

    void visit_target(const Expr& t, Frame& f, std::set<std::string>& defs, bool augmented) {
        switch (t.kind) {
            case ExprKind::Name:
                defs.insert(t.text);
                if (augmented) f.uses.insert(t.text);
                return;
            case ExprKind::Attribute:
            case ExprKind::Subscript:
                visit(t, f);
                if (auto b = base_name(t)) defs.insert(*b);
                return;
            case ExprKind::Collection:
            case ExprKind::Starred:
                for (const auto& c : t.children) visit_target(*c, f, defs, augmented);
                return;
            default:
                visit(t, f);
        }
    }

    // --- statements ---

    void process(const Unit& u) {
        const std::size_t first = ir_.statements.size();
        Frame root;
        walrus_defs_.clear();
        std::vector<ValueInfo> infos;
        for (const Expr* v : u.values) infos.push_back(visit(*v, root));
        std::set<std::string> defs;
        for (const Expr* t : u.targets) visit_target(*t, root, defs, u.augmented);
        defs.merge(walrus_defs_);

        const bool has_calls = ir_.statements.size() > first;
        if (!has_calls) {
            if (!u.keep_without_calls || defs.empty()) return;
            StatementNode s;
            s.index = first;
            s.control_flow = current_tags();
            ir_.statements.push_back(std::move(s));
        }
        const std::size_t last = ir_.statements.size() - 1;
        StatementNode& ls = ir_.statements[last];
        ls.text = u.text;
        ls.line = u.line;
        ls.uses.merge(root.uses);
        for (auto& s : root.subs) ls.subscripts.push_back(std::move(s));
        ls.defines = defs;
        for (std::size_t c : root.calls)
            if (c != last) ir_.data_flow_edges.emplace(c, last);

        for (std::size_t i = first; i <= last; ++i) {
            for (const auto& name : ir_.statements[i].uses) {
                if (auto d = last_def_.find(name); d != last_def_.end()) ir_.data_flow_edges.emplace(d->second, i);
            }
        }
        for (const auto& name : defs) {
            last_def_[name] = last;
            aliases_.erase(name);
        }

        // Forward type tracking through plain assignments.
        if (u.augmented) return;
        for (const Expr* t : u.targets) {
            if (t->kind == ExprKind::Name) {
                values_[t->text] = infos.size() == 1 ? infos[0] : ValueInfo{};
            } else if (t->kind == ExprKind::Collection || t->kind == ExprKind::Starred) {
                forget_names(*t);
            }
        }
    }

    void forget_names(const Expr& t) {
        if (t.kind == ExprKind::Name) {
            values_[t.text] = {};
            return;
        }
        if (t.kind == ExprKind::Collection || t.kind == ExprKind::Starred)
            for (const auto& c : t.children) forget_names(*c);
    }

    std::string stmt_text(const Stmt& s) const { return std::string(module_.text(s.span)); }

    static std::vector<const Expr*> raw(const std::vector<py::ExprPtr>& v) {
        std::vector<const Expr*> out;
        for (const auto& e : v) out.push_back(e.get());
        return out;
    }

    void walk(const std::vector<Stmt>& body) {
        for (const auto& s : body) walk_stmt(s);
    }

    void handle_import(const Stmt& s) {
        tags_.push_back("import");
        for (const auto& n : s.imports) {
            StatementNode node;
            node.index = ir_.statements.size();
            node.line = s.span.line;
            node.text = stmt_text(s);
            node.control_flow = current_tags();
            if (s.kind == StmtKind::Import) {
                node.call = n.name;
                if (n.alias) {
                    aliases_[*n.alias] = n.name;
                    values_.erase(*n.alias);
                } else {
                    const std::string top = n.name.substr(0, n.name.find('.'));
                    aliases_[top] = top;
                    values_.erase(top);
                }
            } else if (s.level == 0) {
                node.call = n.name == "*" ? s.module : s.module + "." + n.name;
                if (n.name != "*") {
                    const std::string local = n.alias.value_or(n.name);
                    aliases_[local] = *node.call;
                    values_.erase(local);
                }
            }
            ir_.statements.push_back(std::move(node));
        }
        tags_.pop_back();
    }

    void walk_stmt(const Stmt& s) {
        switch (s.kind) {
            case StmtKind::Expr:
                process(Unit{stmt_text(s), s.span.line, {s.value.get()}, {}, false, false});
                return;
            case StmtKind::Assign:
                process(Unit{stmt_text(s), s.span.line, {s.value.get()}, raw(s.targets), false, true});
                return;
            case StmtKind::AugAssign:
                process(Unit{stmt_text(s), s.span.line, {s.value.get()}, raw(s.targets), true, true});
                return;
            case StmtKind::AnnAssign:
                if (s.value) process(Unit{stmt_text(s), s.span.line, {s.value.get()}, raw(s.targets), false, true});
                return;
            case StmtKind::Return:
            case StmtKind::Delete:
            case StmtKind::Raise:
            case StmtKind::Assert: {
                Unit u{stmt_text(s), s.span.line, raw(s.exprs), {}, false, false};
                if (s.value) u.values.insert(u.values.begin(), s.value.get());
                process(u);
                return;
            }
            case StmtKind::Import:
            case StmtKind::ImportFrom:
                handle_import(s);
                return;
            case StmtKind::Global:
            case StmtKind::Pass:
            case StmtKind::Break:
            case StmtKind::Continue:
                return;
            case StmtKind::If:
                tags_.push_back("conditional");
                for (const auto& c : s.clauses) clause(c, false);
                tags_.pop_back();
                return;
            case StmtKind::While:
            case StmtKind::For:
                tags_.push_back("loop");
                for (const auto& c : s.clauses) clause(c, true);
                tags_.pop_back();
                return;
            case StmtKind::With:
            case StmtKind::Try:
                for (const auto& c : s.clauses) clause(c, true);
                return;
            case StmtKind::FunctionDef:
            case StmtKind::ClassDef:
                definition(s);
                return;
        }
    }

    void clause(const py::Clause& c, bool binds) {
        if (!c.exprs.empty() || !c.targets.empty()) {
            process(Unit{std::string(module_.text(c.header)), c.header.line, raw(c.exprs), raw(c.targets), false,
                         binds});
        }
        walk(c.body);
    }

    void definition(const Stmt& s) {
        tags_.push_back("user_function");
        const py::Clause& c = s.clauses.front();
        Unit header{std::string(module_.text(c.header)), c.header.line, raw(s.decorators), {}, false, false};
        for (const auto& e : c.exprs) header.values.push_back(e.get());
        process(header);

        // Parameters shadow outer variables inside the body.
        std::map<std::string, std::optional<std::size_t>> saved_defs;
        std::map<std::string, std::optional<ValueInfo>> saved_values;
        for (const auto& p : s.params) {
            auto d = last_def_.find(p);
            saved_defs[p] = d == last_def_.end() ? std::nullopt : std::optional(d->second);
            auto v = values_.find(p);
            saved_values[p] = v == values_.end() ? std::nullopt : std::optional(v->second);
            last_def_.erase(p);
            values_[p] = {};
        }
        walk(c.body);
        for (const auto& [p, d] : saved_defs) {
            if (d) {
                last_def_[p] = *d;
            } else {
                last_def_.erase(p);
            }
        }
        for (const auto& [p, v] : saved_values) {
            if (v) {
                values_[p] = *v;
            } else {
                values_.erase(p);
            }
        }
        tags_.pop_back();
    }

    const py::Module& module_;
    const docs::DocIndex& docs_;
    const AbstractionOptions& options_;
    PipelineGraphIR ir_;
    std::vector<std::string> tags_;
    std::vector<std::vector<std::string>> bound_;
    std::map<std::string, std::string> aliases_;
    std::map<std::string, ValueInfo> values_;
    std::map<std::string, std::size_t> last_def_;
    std::set<std::string> walrus_defs_;
};

void push_unique(std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

std::string basename_of(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

PipelineMetadata read_metadata(const std::filesystem::path& file, const std::string& source,
                               const std::string& dataset, const std::string& id) {
    const auto j = nlohmann::json::parse(util::read_file(file));
    PipelineMetadata md;
    md.pipeline_id = id;
    md.source = source;
    md.dataset_name = j.value("dataset_name", dataset);
    md.author = j.value("author", "");
    md.score = j.value("score", 0.0);
    if (j.contains("tags")) md.tags = j["tags"].get<std::vector<std::string>>();
    if (j.contains("url") && j["url"].is_string()) md.url = j["url"].get<std::string>();
    return md;
}

}  // namespace

PipelineGraphIR abstract_pipeline(const std::string& script, const PipelineMetadata& metadata,
                                  const docs::DocIndex& docs, const AbstractionOptions& options) {
    py::Module module;
    try {
        module = py::parse_module(script);
    } catch (const py::SyntaxIssue& e) {
        throw ParseError(metadata.pipeline_id, e.line(), e.what());
    }
    return Abstractor(module, metadata, docs, options).run();
}

StatementNode enrich_statement(StatementNode stmt, const docs::DocIndex& docs) {
    if (!stmt.call) return stmt;
    const auto* sig = docs.resolve(*stmt.call);
    if (sig == nullptr) return stmt;

    stmt.parameters.clear();
    std::set<std::string> named;
    std::size_t pos = 0;
    bool variadic = false;
    for (const auto& a : stmt.arguments) {
        if (a.keyword) {
            stmt.parameters.emplace_back(*a.keyword, a.text);
            named.insert(*a.keyword);
            continue;
        }
        // A documented "*name" parameter absorbs every remaining positional.
        if (pos < sig->parameters.size() && sig->parameters[pos].name.starts_with('*')) variadic = true;
        if (a.star == 0 && !variadic && pos < sig->parameters.size()) {
            const std::string& name = sig->parameters[pos].name;
            stmt.parameters.emplace_back(name, a.text);
            named.insert(name);
        } else {
            stmt.parameters.emplace_back("vararg_" + std::to_string(pos), a.text);
        }
        ++pos;
    }
    for (const auto& p : sig->parameters) {
        if (!named.contains(p.name) && p.default_value) stmt.parameters.emplace_back(p.name, *p.default_value);
    }
    stmt.return_type = sig->return_type;
    return stmt;
}

DatasetUsage detect_dataset_usage(const StatementNode& stmt, const AbstractionOptions& options) {
    DatasetUsage usage;
    if (stmt.call) {
        const std::string& path = *stmt.call;
        const auto dot = path.rfind('.');
        if (dot != std::string::npos && options.read_family.contains(path.substr(dot + 1)) &&
            std::string_view(path).substr(0, dot).ends_with("pandas")) {
            const CallArgument* target = nullptr;
            for (const auto& a : stmt.arguments) {
                if (a.star) continue;
                if (!a.keyword && target == nullptr) target = &a;
                if (a.keyword && (*a.keyword == "filepath_or_buffer" || *a.keyword == "path" ||
                                  *a.keyword == "path_or_buf")) {
                    target = &a;
                    break;
                }
            }
            if (target && target->is_string) push_unique(usage.table_reads, basename_of(target->literals.front()));
        }
    }
    for (const auto& sub : stmt.subscripts) {
        if (sub.receiver_type && *sub.receiver_type == kDataFrame)
            for (const auto& k : sub.keys) push_unique(usage.column_reads, k);
    }
    return usage;
}

CorpusReport abstract_corpus(const std::filesystem::path& pipelines_dir, const docs::DocIndex& docs,
                             const std::filesystem::path& out_dir, std::size_t workers,
                             const AbstractionOptions& options) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(pipelines_dir, ec)) throw IoError("pipelines directory not readable: " + pipelines_dir.string());

    std::vector<fs::path> scripts;
    for (auto it = fs::recursive_directory_iterator(pipelines_dir, ec); !ec && it != fs::recursive_directory_iterator();
         it.increment(ec)) {
        if (it->is_regular_file() && it->path().filename() == "pipeline.py") scripts.push_back(it->path());
    }
    if (ec) throw IoError("cannot list " + pipelines_dir.string() + ": " + ec.message());
    std::sort(scripts.begin(), scripts.end());

    std::vector<std::optional<std::string>> failures(scripts.size());
    util::parallel_for(scripts.size(), workers, [&](std::size_t i) {
        const fs::path& script = scripts[i];
        try {
            const fs::path rel = fs::relative(script.parent_path(), pipelines_dir);
            std::vector<std::string> parts;
            for (const auto& p : rel) parts.push_back(p.string());
            if (parts.size() != 3) throw IoError("expected <source>/<dataset>/<pipeline_id>/pipeline.py");
            const fs::path meta = script.parent_path() / "metadata.json";
            if (!fs::exists(meta)) throw IoError("missing metadata.json");
            const PipelineMetadata md = read_metadata(meta, parts[0], parts[1], parts[2]);
            const PipelineGraphIR ir = abstract_pipeline(util::read_file(script), md, docs, options);
            util::write_file(ir_path(out_dir, md), ir_to_json(ir));
        } catch (const std::exception& e) {
            failures[i] = script.string() + ": " + e.what();
        }
    });

    CorpusReport report;
    for (std::size_t i = 0; i < scripts.size(); ++i) {
        if (failures[i]) {
            report.skipped.push_back(*failures[i]);
        } else {
            ++report.abstracted;
        }
    }
    return report;
}

}  // namespace lids::pipeline
