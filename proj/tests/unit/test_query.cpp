#include "oracles.hpp"
#include "support.hpp"

#include "lids/error.hpp"
#include "lids/query/query.hpp"

#include <doctest.h>

using namespace lids;

namespace {

const kg::GraphStore& store() { return testing::fixture_graph().store; }

kg::Uri table(const std::string& dataset, const std::string& name) {
    return kg::make_resource_uri({"kaggle", dataset, name});
}

std::vector<std::string> column(const query::ResultTable& t, std::size_t i) {
    std::vector<std::string> out;
    for (const auto& r : t.rows) out.push_back(r[i]);
    return out;
}

std::vector<kg::Uri> all_tables() {
    std::vector<kg::Uri> out;
    for (const auto& m : store().match({std::nullopt, kg::vocab::rdf_type, kg::Term::iri(kg::vocab::Table), std::nullopt}))
        out.push_back(m.triple.subject);
    return out;
}

}  // namespace

TEST_CASE("keyword conditions parse as OR of ANDs") {
    CHECK(query::parse_conditions(R"([["heart","disease"],"patients"])") ==
          query::Conditions{{"heart", "disease"}, {"patients"}});
    CHECK_THROWS_AS(query::search_keywords(store(), query::parse_conditions("[]")), InvalidQuery);
    CHECK_THROWS_AS(query::search_keywords(store(), query::parse_conditions("[[]]")), InvalidQuery);
    CHECK_THROWS_AS(query::parse_conditions("[1]"), InvalidQuery);
    CHECK_THROWS_AS(query::parse_conditions("not json"), InvalidQuery);
}

TEST_CASE("search keywords agrees with a full scan") {
    const std::vector<query::Conditions> cases{
        {{"heart", "disease"}, {"patients"}}, {{"age"}}, {{"AGE", "fare"}}, {{"retail"}, {"diabetes"}},
        {{"nothing-matches-this"}}, {{"price"}}, {{"customer", "order"}}};
    for (const auto& c : cases) CHECK(query::search_keywords(store(), c) == oracle::search_keywords(store(), c));
    const auto heart = query::search_keywords(store(), cases[0]);
    CHECK(column(heart, 2) == std::vector<std::string>{"heart.csv", "patients.csv"});
}

TEST_CASE("table names resolve by label or IRI") {
    CHECK(query::resolve_table(store(), "heart.csv") == table("heart-disease", "heart.csv"));
    CHECK(query::resolve_table(store(), table("retail", "orders.csv").text) == table("retail", "orders.csv"));
    CHECK_THROWS_AS(query::resolve_table(store(), "missing.csv"), NotFound);
}

TEST_CASE("unionable columns of the titanic halves") {
    const auto r = query::find_unionable_columns(store(), table("titanic", "train.csv"), table("titanic", "test.csv"));
    CHECK(column(r, 0) == std::vector<std::string>{"Age", "Embarked", "Fare", "Name", "PassengerId", "Pclass", "Sex"});
    for (const auto& row : r.rows) {
        CHECK(row[0] == row[1]);
        CHECK(row[2] == "1.00");
    }
    CHECK_THROWS_AS(query::find_unionable_columns(store(), table("titanic", "train.csv"), kg::Uri("http://x/none")),
                    NotFound);
}

TEST_CASE("join paths agree with exhaustive depth-first search") {
    const auto tables = all_tables();
    REQUIRE(tables.size() == 10);
    for (const auto& start : tables) {
        for (std::size_t hops = 1; hops <= 3; ++hops) {
            const auto r = query::get_path_to_table(store(), start, std::nullopt, hops);
            std::vector<std::string> expected;
            for (const auto& p : oracle::join_paths(store(), start.text, "", hops)) {
                std::string text = p[0];
                for (std::size_t i = 1; i < p.size(); ++i) text += " -> " + p[i];
                expected.push_back(text);
            }
            CHECK(column(r, 1) == expected);
        }
        for (const auto& target : tables) {
            if (target == start) continue;
            const auto r = query::get_path_to_table(store(), start, target, 2);
            CHECK(r.size() == oracle::join_paths(store(), start.text, target.text, 2).size());
        }
    }
    CHECK_THROWS_AS(query::get_path_to_table(store(), tables[0], std::nullopt, 0), InvalidQuery);
}

TEST_CASE("library usage counts agree with a full scan") {
    for (std::size_t k = 1; k <= 6; ++k)
        CHECK(query::get_top_k_library_used(store(), k) == oracle::top_k_library_used(store(), k));
    const auto top = query::get_top_k_library_used(store(), 10);
    CHECK(top.rows == std::vector<std::vector<std::string>>{{"pandas", "8"}, {"sklearn", "7"}, {"numpy", "1"},
                                                             {"xgboost", "1"}});
    CHECK_THROWS_AS(query::get_top_k_library_used(store(), 0), InvalidQuery);
    const auto regression = query::get_top_used_libraries(store(), 10, "Regression");
    CHECK(regression.rows == std::vector<std::vector<std::string>>{{"pandas", "2"}, {"sklearn", "2"}, {"numpy", "1"}});
}

TEST_CASE("pipelines calling libraries agree with a full scan") {
    const std::vector<std::vector<std::string>> cases{
        {"sklearn"},
        {"pandas", "sklearn.ensemble"},
        {"xgboost.XGBClassifier", "sklearn.metrics.f1_score", "pandas.read_csv"},
        {"sklearn.ensemble.RandomForestClassifier"},
        {"sklearn.ensemble.RandomForest"},
        {"nothing"}};
    for (const auto& libs : cases)
        CHECK(query::get_pipelines_calling_libraries(store(), libs) == oracle::pipelines_calling(store(), libs));
    const auto xgb = query::get_pipelines_calling_libraries(store(), cases[2]);
    CHECK(column(xgb, 0) == std::vector<std::string>{"xgb-f1"});
    CHECK(query::get_pipelines_calling_libraries(store(), cases[4]).size() == 0);
    CHECK_THROWS_AS(query::get_pipelines_calling_libraries(store(), {}), InvalidQuery);
}

TEST_CASE("recommendations for a known dataset") {
    const auto& index = testing::fixture_graph().index;
    const query::DatasetRef titanic{"titanic", std::nullopt};
    CHECK(query::recommend_transformations(store(), &index, titanic).rows ==
          std::vector<std::vector<std::string>>{{"pandas.Series.fillna", "1", "Age"},
                                                {"sklearn.preprocessing.StandardScaler", "1", "Age"}});
    CHECK(query::recommend_ml_models(store(), &index, titanic, "classification").rows ==
          std::vector<std::vector<std::string>>{{"sklearn.ensemble.RandomForestClassifier", "0.90"},
                                                {"xgboost.XGBClassifier", "0.85"},
                                                {"sklearn.svm.SVC", "0.80"}});
    CHECK(query::recommend_ml_models(store(), &index, {"house-prices", std::nullopt}, "regression").rows ==
          std::vector<std::vector<std::string>>{{"sklearn.ensemble.RandomForestRegressor", "0.75"},
                                                {"sklearn.linear_model.LinearRegression", "0.60"}});
    CHECK_THROWS_AS(query::recommend_ml_models(store(), &index, titanic, "clustering"), InvalidQuery);
    const auto hp =
        query::recommend_hyperparameters(store(), &index, titanic, "sklearn.ensemble.RandomForestClassifier");
    CHECK(hp.rows.front() == std::vector<std::string>{"criterion", "'gini'", "1"});
    CHECK(std::find(hp.rows.begin(), hp.rows.end(), std::vector<std::string>{"n_estimators", "100", "1"}) !=
          hp.rows.end());
}

TEST_CASE("an unseen dataset routes to its nearest indexed dataset") {
    const auto& index = testing::fixture_graph().index;
    const profiler::DefaultEmbedder embedder(42);
    const auto vec = query::embed_dataset_dir(testing::kCorpus / "unseen" / "titanic-mirror",
                                              testing::shipped_lexicon(), testing::shipped_gazetteer(), embedder);
    const query::DatasetRef ref{"titanic-mirror", vec};
    CHECK(query::resolve_dataset(store(), &index, ref) == kg::make_resource_uri({"kaggle", "titanic"}));
    CHECK(query::recommend_ml_models(store(), &index, ref, "classification").size() == 3);
    CHECK_THROWS_AS(query::resolve_dataset(store(), &index, {"titanic-mirror", std::nullopt}), NotFound);
    CHECK_THROWS_AS(query::resolve_dataset(store(), &index, ref, 0.9999), NotFound);
}

TEST_CASE("precision and recall at k follow their definitions") {
    const query::Ranking ranking{{"q1", {"a", "x", "b", "y"}}, {"q2", {"c", "z"}}, {"q3", {"w"}}};
    const query::GroundTruth gt{{"q1", {"a", "b"}}, {"q2", {"c", "d", "e", "f"}}, {"q3", {}}};
    const auto r = query::precision_recall_at_k(ranking, gt, {1, 2, 4}, 10, 42);
    REQUIRE(r.size() == 3);
    // k=1: P = (1 + 1)/2, R = (1/2 + 1/4)/2
    CHECK(r.rows[0] == std::vector<std::string>{"1", "1.00", "0.375", "2"});
    // k=2: P = (1/2 + 1/2)/2, R = (1/2 + 1/4)/2
    CHECK(r.rows[1] == std::vector<std::string>{"2", "0.50", "0.375", "2"});
    // k=4: P = (2/4 + 1/4)/2, R = (1 + 1/4)/2
    CHECK(r.rows[2] == std::vector<std::string>{"4", "0.375", "0.625", "2"});
    CHECK(query::precision_recall_at_k(ranking, gt, {1}, 1, 7).rows ==
          query::precision_recall_at_k(ranking, gt, {1}, 1, 7).rows);
}

TEST_CASE("result tables render as csv and json lines") {
    query::ResultTable t{{"a", "b"}, {}};
    t.add_row({"x,y", "say \"hi\""});
    CHECK(t.to_csv() == "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
    CHECK(t.to_jsonl() == "{\"a\":\"x,y\",\"b\":\"say \\\"hi\\\"\"}\n");
    CHECK_THROWS_AS(t.add_row({"only one"}), Error);
}
