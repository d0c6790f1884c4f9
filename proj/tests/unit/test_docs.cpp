#include "support.hpp"

#include "lids/error.hpp"

#include <doctest.h>

using namespace lids;

TEST_CASE("shipped library docs resolve signatures and hierarchy") {
    const auto& docs = testing::shipped_docs();
    CHECK(docs.skipped_entries == 0);
    const auto* rf = docs.resolve("sklearn.ensemble.RandomForestClassifier");
    REQUIRE(rf != nullptr);
    REQUIRE_FALSE(rf->parameters.empty());
    CHECK(rf->parameters.front().name == "n_estimators");
    CHECK(rf->parameters.front().default_value == "100");
    CHECK(docs.resolve("pandas.read_csv")->return_type == "pandas.DataFrame");
    CHECK(docs.hierarchy().at("sklearn.ensemble") == "sklearn");
    CHECK_FALSE(docs.hierarchy().at("sklearn").has_value());
    CHECK(docs.resolve("xgboost.XGBClassifier") == nullptr);
}

TEST_CASE("library graph links every documented path to its parent") {
    docs::DocIndex index;
    index.add({"a.b.f", {{"x", "1", std::nullopt}}, std::nullopt});
    const auto triples = docs::emit_library_graph(index);
    std::size_t part_of = 0;
    for (const auto& t : triples) part_of += t.predicate == kg::vocab::is_part_of;
    CHECK(part_of == 2);
    CHECK(docs::library_uri("a.b.f").text == "http://kglids.org/resource/library/a/b/f");
}

TEST_CASE("malformed doc entries are counted, unreadable directories throw") {
    testing::TempDir dir;
    util::write_file(dir / "lib.json", R"([{"path": "lib.f", "params": []}, {"params": []}, 3])");
    const auto index = docs::load_library_docs(dir.path());
    CHECK(index.size() == 1);
    CHECK(index.skipped_entries == 2);
    CHECK_THROWS_AS(docs::load_library_docs(dir / "missing"), IoError);
}
