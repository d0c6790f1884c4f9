// Acceptance checks: one PASS/FAIL line per criterion. Exits nonzero when a
// hard criterion fails; the parallel speedup target is report-only.

#include "oracles.hpp"
#include "support.hpp"

#include "lids/cli/cli.hpp"
#include "lids/kg/trig.hpp"
#include "lids/query/query.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

using namespace lids;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
    bool pass = true;
    std::string detail;
};

// Collects failed expectations with a short reason.
struct Checker {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    Verdict verdict(std::string detail) const {
        if (failures.empty()) return {true, std::move(detail)};
        std::string why;
        for (std::size_t i = 0; i < failures.size() && i < 3; ++i) why += (i ? "; " : "") + failures[i];
        if (failures.size() > 3) why += "; +" + std::to_string(failures.size() - 3) + " more";
        return {false, why};
    }
};

struct CliOutcome {
    int code;
    std::string out;
    std::string err;
};

CliOutcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "lids-forge");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s.precision(digits);
    s << std::fixed << v;
    return s.str();
}

// 1. Running example: calls, inferred parameter, reads and linking.
Verdict running_example() {
    Checker c;
    const auto& graph = testing::fixture_graph();  // schema for linking, built before timing
    const auto start = Clock::now();
    const auto ir = testing::running_example_ir();
    const auto reads = construction::link_pipelines({ir}, graph.store);
    const double elapsed = seconds_since(start);

    std::vector<std::string> calls;
    for (const auto& s : ir.statements) calls.push_back(s.call.value_or("-"));
    const std::vector<std::string> expected_calls{"pandas",
                                                  "sklearn.model_selection.train_test_split",
                                                  "sklearn.ensemble.RandomForestClassifier",
                                                  "sklearn.metrics.accuracy_score",
                                                  "pandas.read_csv",
                                                  "pandas.Series.max",
                                                  "-",
                                                  "-",
                                                  "sklearn.model_selection.train_test_split",
                                                  "sklearn.ensemble.RandomForestClassifier",
                                                  "sklearn.ensemble.RandomForestClassifier.fit",
                                                  "sklearn.ensemble.RandomForestClassifier.predict",
                                                  "sklearn.metrics.accuracy_score"};
    c.expect(calls == expected_calls, "statement calls differ");
    if (calls.size() == expected_calls.size()) {
        const auto& rf = ir.statements[9].parameters;
        c.expect(!rf.empty() && rf[0] == std::pair<std::string, std::string>{"n_estimators", "100"},
                 "RandomForestClassifier lacks (n_estimators, 100)");
        c.expect(ir.statements[4].detected_table_reads == std::vector<std::string>{"train.csv"},
                 "table read train.csv not detected");
        c.expect(ir.statements[5].detected_column_reads == std::vector<std::string>{"Age", "NormalizedAge"},
                 "column reads of statement 5 differ");
        c.expect(ir.statements[6].detected_column_reads == std::vector<std::string>{"Pclass", "NormalizedAge"},
                 "column reads of statement 6 differ");
    }
    const std::set<std::pair<std::size_t, std::size_t>> flows{{4, 5}, {5, 6}, {5, 7}, {6, 8},  {7, 8},  {8, 10},
                                                              {8, 11}, {8, 12}, {9, 10}, {9, 11}, {11, 12}};
    c.expect(ir.data_flow_edges == flows, "data flow edges differ");

    const auto stmt = [&](std::size_t i) { return pipeline::statement_uri(ir.metadata, i).text; };
    const auto col = [](const std::string& name) {
        return kg::make_resource_uri({"kaggle", "titanic", "train.csv", name}).text;
    };
    const std::set<std::pair<std::string, std::string>> expected_reads{
        {stmt(4), kg::make_resource_uri({"kaggle", "titanic", "train.csv"}).text},
        {stmt(5), col("Age")},
        {stmt(6), col("Pclass")},
        {stmt(7), col("Survived")}};
    std::set<std::pair<std::string, std::string>> got_reads;
    for (const auto& [g, t] : reads) {
        c.expect(t.object.value.find("NormalizedAge") == std::string::npos, "NormalizedAge produced a reads edge");
        got_reads.emplace(t.subject.text, t.object.value);
    }
    c.expect(got_reads == expected_reads, "linked reads differ");
    c.expect(elapsed < 1.0, "took " + fixed(elapsed, 3) + " s");
    return c.verdict(std::to_string(ir.statements.size()) + " statements, " + std::to_string(reads.size()) +
                     " reads edges, " + fixed(elapsed * 1000, 1) + " ms");
}

// 2. parse(serialize(store)) == store for 1,000 random stores.
Verdict round_trip() {
    Checker c;
    std::size_t triples = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto store = testing::random_store(seed);
        triples += store.size();
        try {
            c.expect(kg::parse_trig_star(kg::serialize_trig_star(store)) == store, "seed " + std::to_string(seed));
        } catch (const std::exception& e) {
            c.expect(false, "seed " + std::to_string(seed) + ": " + e.what());
        }
    }
    return c.verdict("1000 stores, " + std::to_string(triples) + " triples");
}

// 3. Similarity workers equal the nested-loop reference.
Verdict similarity_oracle() {
    Checker c;
    util::SeededRng rng(42);
    std::map<construction::SimilarityKind, std::size_t> per_kind;
    std::size_t runs = 0;
    for (std::uint64_t corpus = 1; corpus <= 4; ++corpus) {
        const auto profiles = testing::random_profiles(10 + 10 * corpus, 100 + corpus);
        for (int s = 0; s < 5; ++s) {
            construction::ThresholdConfig th;
            th.alpha = 0.3 + 0.7 * rng.uniform();
            th.beta = 0.8 + 0.2 * rng.uniform();
            th.theta = 0.3 + 0.7 * rng.uniform();
            th.gamma = rng.uniform();
            const auto edges = construction::compute_similarity_edges(profiles, th, testing::shipped_lexicon(), 2);
            std::set<std::tuple<std::string, std::string, construction::SimilarityKind>> got;
            for (const auto& e : edges) {
                got.emplace(e.from.text, e.to.text, e.kind);
                ++per_kind[e.kind];
            }
            c.expect(got == oracle::similarity_edges(profiles, th, testing::shipped_lexicon()),
                     "corpus " + std::to_string(corpus) + " setting " + std::to_string(s));
            ++runs;
        }
    }
    // Boolean rule by hand: true ratios 0.60 and 0.58 give 1 - 0.02 = 0.98 >= 0.95.
    const profiler::DefaultEmbedder embedder(42);
    auto bools = [](std::size_t trues) {
        std::vector<std::string> v;
        for (std::size_t i = 0; i < 50; ++i) v.push_back(i < trues ? "True" : "False");
        return v;
    };
    const auto a = profiler::profile_column({"s", "d", "a.csv", "is_active"}, bools(30), testing::shipped_lexicon(),
                                            testing::shipped_gazetteer(), embedder);
    const auto b = profiler::profile_column({"s", "d", "b.csv", "flag"}, bools(29), testing::shipped_lexicon(),
                                            testing::shipped_gazetteer(), embedder);
    std::size_t boolean_edges = 0;
    for (const auto& e : construction::column_similarity_worker(a, b, {}, testing::shipped_lexicon())) {
        if (e.kind != construction::SimilarityKind::Content) continue;
        ++boolean_edges;
        c.expect(std::abs(e.score - 0.98) < 1e-12, "boolean score " + fixed(e.score, 6));
    }
    c.expect(boolean_edges == 2, "expected a boolean content edge in both directions");
    return c.verdict(std::to_string(runs) + " corpus/threshold runs; label " +
                     std::to_string(per_kind[construction::SimilarityKind::Label]) + ", content " +
                     std::to_string(per_kind[construction::SimilarityKind::Content]) + ", pkfk " +
                     std::to_string(per_kind[construction::SimilarityKind::PkFk]) + " edges; boolean 0.60/0.58 -> 0.98");
}

// 4. Table embedding blocks: absent types zero, single column copied exactly.
Verdict table_embedding_structure() {
    Checker c;
    std::size_t tables = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto profiles = testing::random_profiles(30, seed);
        std::map<std::string, std::vector<const profiler::ColumnProfile*>> by_table;
        for (const auto& p : profiles) by_table[p.metadata.table_uri().text].push_back(&p);
        for (const auto& [uri, cols] : by_table) {
            ++tables;
            const auto v = profiler::embed_table(cols);
            for (std::size_t blk = 0; blk < profiler::kTypeCount; ++blk) {
                std::vector<const profiler::ColumnProfile*> of_type;
                for (const auto* p : cols)
                    if (p->fgt == profiler::kAllTypes[blk]) of_type.push_back(p);
                for (std::size_t i = 0; i < profiler::kEmbeddingDim; ++i) {
                    const double x = v[blk * profiler::kEmbeddingDim + i];
                    if (of_type.empty()) c.expect(x == 0.0, uri + ": absent block not zero");
                    if (of_type.size() == 1)
                        c.expect(std::abs(x - of_type[0]->embedding[i]) <= 1e-12, uri + ": block differs");
                }
            }
            // A table of exactly one column.
            const auto single = profiler::embed_table({cols[0]});
            for (std::size_t blk = 0; blk < profiler::kTypeCount; ++blk) {
                for (std::size_t i = 0; i < profiler::kEmbeddingDim; ++i) {
                    const double x = single[blk * profiler::kEmbeddingDim + i];
                    const double want = profiler::kAllTypes[blk] == cols[0]->fgt ? cols[0]->embedding[i] : 0.0;
                    c.expect(std::abs(x - want) <= 1e-12, uri + ": single-column table differs");
                }
            }
        }
    }
    return c.verdict(std::to_string(tables) + " generated tables checked at tolerance 1e-12");
}

// 5. Union benchmark through the eval harness.
Verdict union_benchmark() {
    Checker c;
    const auto start = Clock::now();
    const testing::TempDir dir("lids-union");
    auto bench = testing::make_union_benchmark(20, 42);
    const auto store = construction::assemble_graph(std::move(bench.profiles), {}, testing::shipped_docs(), {},
                                                    testing::shipped_lexicon(), 1);
    util::write_file(dir / "union.trig", kg::serialize_trig_star(store));
    std::string gt = "query_table,related_table\n";
    for (const auto& [a, b] : bench.pairs) gt += a + "," + b + "\n" + b + "," + a + "\n";
    util::write_file(dir / "gt.csv", gt);
    const auto r = run_cli({"--seed", "42", "eval", "discovery", "--graph", (dir / "union.trig").string(),
                            "--ground-truth", (dir / "gt.csv").string(), "--k", "1,5", "--queries", "40"});
    const double elapsed = seconds_since(start);
    c.expect(r.code == 0, "eval exited " + std::to_string(r.code) + ": " + r.err);
    double p1 = -1, r5 = -1;
    std::string queries;
    for (const auto& line : lines_of(r.out)) {
        std::vector<std::string> cells;
        std::istringstream in(line);
        for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
        if (cells.size() != 4 || cells[0] == "k") continue;
        if (cells[0] == "1") p1 = std::stod(cells[1]);
        if (cells[0] == "5") r5 = std::stod(cells[2]);
        queries = cells[3];
    }
    c.expect(p1 == 1.0, "P@1 = " + fixed(p1, 3));
    c.expect(r5 >= 0.9, "R@5 = " + fixed(r5, 3));
    c.expect(elapsed < 30.0, "took " + fixed(elapsed, 1) + " s");
    return c.verdict("P@1 " + fixed(p1, 3) + ", R@5 " + fixed(r5, 3) + " over " + queries + " queries, " +
                     fixed(elapsed, 2) + " s");
}

// 6. Query operations equal their full-scan oracles on the fixture.
Verdict query_oracles() {
    Checker c;
    const auto& store = testing::fixture_graph().store;
    std::size_t comparisons = 0;

    const std::vector<query::Conditions> conditions{
        {{"heart", "disease"}, {"patients"}}, {{"age"}}, {{"AGE", "fare"}}, {{"retail"}, {"diabetes"}},
        {{"absent-term"}}, {{"price"}}, {{"customer", "order"}}, {{"titanic"}, {"house"}}, {{"id"}}};
    for (const auto& cond : conditions) {
        c.expect(query::search_keywords(store, cond) == oracle::search_keywords(store, cond), "search_keywords");
        ++comparisons;
    }

    std::vector<std::string> tables;
    for (const auto& m : store.match({std::nullopt, kg::vocab::rdf_type, kg::Term::iri(kg::vocab::Table), std::nullopt}))
        tables.push_back(m.triple.subject.text);
    c.expect(tables.size() == 10, "fixture has " + std::to_string(tables.size()) + " tables");
    auto path_column = [](const query::ResultTable& t) {
        std::vector<std::string> out;
        for (const auto& r : t.rows) out.push_back(r[1]);
        return out;
    };
    auto join = [](const std::vector<std::vector<std::string>>& paths) {
        std::vector<std::string> out;
        for (const auto& p : paths) {
            std::string text = p[0];
            for (std::size_t i = 1; i < p.size(); ++i) text += " -> " + p[i];
            out.push_back(text);
        }
        return out;
    };
    for (const auto& start : tables) {
        for (std::size_t hops = 1; hops <= 3; ++hops) {
            const auto got = query::get_path_to_table(store, kg::Uri(start), std::nullopt, hops);
            c.expect(path_column(got) == join(oracle::join_paths(store, start, "", hops)), "get_path_to_table");
            ++comparisons;
        }
        for (const auto& target : tables) {
            if (target == start) continue;
            const auto got = query::get_path_to_table(store, kg::Uri(start), kg::Uri(target), 2);
            c.expect(path_column(got) == join(oracle::join_paths(store, start, target, 2)), "get_path_to_table");
            ++comparisons;
        }
    }

    for (std::size_t k = 1; k <= 6; ++k) {
        c.expect(query::get_top_k_library_used(store, k) == oracle::top_k_library_used(store, k),
                 "get_top_k_library_used");
        ++comparisons;
    }

    const std::vector<std::vector<std::string>> libs{
        {"sklearn"}, {"pandas"}, {"numpy"}, {"pandas", "sklearn.ensemble"},
        {"xgboost.XGBClassifier", "sklearn.metrics.f1_score", "pandas.read_csv"},
        {"sklearn.ensemble.RandomForestClassifier"}, {"sklearn.ensemble.RandomForest"},
        {"sklearn.preprocessing"}, {"absent"}};
    for (const auto& l : libs) {
        c.expect(query::get_pipelines_calling_libraries(store, l) == oracle::pipelines_calling(store, l),
                 "get_pipelines_calling_libraries");
        ++comparisons;
    }
    return c.verdict(std::to_string(comparisons) + " exact comparisons on 10 tables / " +
                     std::to_string(store.named_graphs().size()) + " pipelines");
}

// 7. profile with 1 and 8 workers: identical output; speedup reported.
Verdict parallel_profiling(bool& soft_met, std::string& soft_note) {
    Checker c;
    const testing::TempDir dir("lids-parallel");
    util::SeededRng rng(7);
    constexpr std::size_t kTables = 50, kColumns = 20, kRows = 200;
    for (std::size_t t = 0; t < kTables; ++t) {
        std::string csv;
        for (std::size_t col = 0; col < kColumns; ++col) csv += (col ? ",c" : "c") + std::to_string(col);
        csv += "\n";
        for (std::size_t r = 0; r < kRows; ++r) {
            for (std::size_t col = 0; col < kColumns; ++col) {
                if (col) csv += ",";
                switch (col % 4) {
                    case 0: csv += std::to_string(rng.below(100000)); break;
                    case 1: csv += fixed(rng.uniform() * 1000, 3); break;
                    case 2: csv += rng.below(2) ? "true" : "false"; break;
                    default: csv += "w" + std::to_string(rng.below(500)); break;
                }
            }
            csv += "\n";
        }
        util::write_file(dir / ("data/synthetic/ds" + std::to_string(t % 5) + "/t" + std::to_string(t) + ".csv"), csv);
    }
    const auto data = (dir / "data").string();
    auto timed = [&](const std::string& workers, const std::string& out) {
        const auto start = Clock::now();
        const auto r = run_cli({"--data-dir", data, "--out", out, "--workers", workers, "profile"});
        c.expect(r.code == 0, "profile --workers " + workers + " exited " + std::to_string(r.code));
        return seconds_since(start);
    };
    const double t1 = timed("1", (dir / "w1").string());
    const double t8 = timed("8", (dir / "w8").string());
    const auto p1 = profiler::load_profiles(dir / "w1");
    c.expect(p1.size() == kTables * kColumns, std::to_string(p1.size()) + " profiles");
    c.expect(p1 == profiler::load_profiles(dir / "w8"), "profile sets differ");
    c.expect(util::read_file(dir / "w1/index.jsonl") == util::read_file(dir / "w8/index.jsonl"), "indexes differ");

    const double speedup = t1 / t8;
    const unsigned cores = std::thread::hardware_concurrency();
    if (cores >= 8) {
        soft_met = speedup >= 3.0;
        soft_note = "speedup " + fixed(speedup, 2) + "x on " + std::to_string(cores) + " cores (target >= 3x)";
    } else {
        soft_met = true;
        soft_note = "speedup " + fixed(speedup, 2) + "x on " + std::to_string(cores) +
                    " core(s); 3x target report-only below 8 cores";
    }
    return c.verdict(std::to_string(p1.size()) + " columns identical; 1 worker " + fixed(t1, 2) + " s, 8 workers " +
                     fixed(t8, 2) + " s");
}

// 8. build-kg aspect lines equal the audited golden file.
Verdict aspect_accounting() {
    Checker c;
    const testing::TempDir dir("lids-aspects");
    const std::string corpus = testing::kCorpus.string();
    const auto profiles = (dir / "profiles").string(), irs = (dir / "irs").string();
    c.expect(run_cli({"--data-dir", corpus + "/data", "--out", profiles, "profile"}).code == 0, "profile failed");
    c.expect(run_cli({"--pipelines-dir", corpus + "/pipelines", "--out", irs, "abstract"}).code == 0, "abstract failed");
    const auto r = run_cli({"--out", (dir / "g.trig").string(), "build-kg", "--profiles", profiles, "--irs", irs});
    c.expect(r.code == 0, "build-kg exited " + std::to_string(r.code));
    const auto golden = lines_of(util::read_file(testing::kFixtures / "golden" / "aspect_counts.txt"));
    std::set<std::string> names;
    for (const auto& l : golden) names.insert(l.substr(0, l.find(':')));
    std::vector<std::string> printed;
    for (const auto& l : lines_of(r.out))
        if (names.contains(l.substr(0, l.find(':')))) printed.push_back(l);
    c.expect(golden.size() == 10, "golden file has " + std::to_string(golden.size()) + " aspects");
    c.expect(printed == golden, "aspect lines differ from golden");
    return c.verdict(std::to_string(printed.size()) + " aspect lines match the golden file");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        std::function<Verdict()> check;
    };
    bool soft_met = true;
    std::string soft_note;
    const std::vector<Criterion> criteria{
        {1, "running example abstraction and linking", running_example},
        {2, "TriG-star round trip on random stores", round_trip},
        {3, "similarity edges equal nested-loop reference", similarity_oracle},
        {4, "table embedding block structure", table_embedding_structure},
        {5, "synthetic union benchmark P@1 and R@5", union_benchmark},
        {6, "query operations equal full-scan oracles", query_oracles},
        {7, "parallel profiling determinism", [&] { return parallel_profiling(soft_met, soft_note); }},
        {8, "aspect accounting matches golden counts", aspect_accounting},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Verdict v;
        try {
            v = cr.check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::cout << (v.pass ? "PASS" : "FAIL") << " [" << cr.id << "] " << cr.name << " - " << v.detail;
        if (cr.id == 7) std::cout << "; " << soft_note << (soft_met ? "" : " (soft target missed)");
        std::cout << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
