#pragma once

#include "lids/construction/builder.hpp"
#include "lids/docs/doc_index.hpp"
#include "lids/index/vector_index.hpp"
#include "lids/kg/graph_store.hpp"
#include "lids/pipeline/abstraction.hpp"
#include "lids/profiler/profiler.hpp"
#include "lids/util/text.hpp"

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace lids::testing {

inline const std::filesystem::path kFixtures = LIDS_FIXTURES;
inline const std::filesystem::path kShipped = LIDS_DATA_DIR;
inline const std::filesystem::path kCorpus = kFixtures / "corpus";

// Removed with its contents on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "lids") {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

inline const profiler::Lexicon& shipped_lexicon() {
    static const auto lexicon = profiler::Lexicon::load(kShipped / "lexicon.txt");
    return lexicon;
}
inline const profiler::Gazetteer& shipped_gazetteer() {
    static const auto gazetteer = profiler::Gazetteer::load(kShipped / "gazetteer.txt");
    return gazetteer;
}
inline const docs::DocIndex& shipped_docs() {
    static const auto docs = docs::load_library_docs(kShipped / "docs");
    return docs;
}

inline pipeline::PipelineMetadata running_example_metadata() {
    pipeline::PipelineMetadata md;
    md.pipeline_id = "running-example";
    md.source = "kaggle";
    md.dataset_name = "titanic";
    md.author = "example";
    md.score = 0.77;
    md.tags = {"classification"};
    return md;
}

inline pipeline::PipelineGraphIR running_example_ir() {
    return pipeline::abstract_pipeline(util::read_file(kFixtures / "running_example.py"), running_example_metadata(),
                                       shipped_docs());
}

// Profiles, IRs and graph of the fixture corpus, built once per process.
struct FixtureGraph {
    std::vector<profiler::ColumnProfile> profiles;
    std::vector<pipeline::PipelineGraphIR> irs;
    kg::GraphStore store;
    index::VectorIndex index;
};

FixtureGraph build_fixture_graph(const std::filesystem::path& work_dir);
const FixtureGraph& fixture_graph();

// Synthetic union benchmark: seed tables split row-wise into two halves
// whose headers are replaced by lexicon synonyms.
struct UnionBenchmark {
    std::vector<profiler::ColumnProfile> profiles;
    std::vector<std::pair<std::string, std::string>> pairs;  // table IRIs of the two halves
};
UnionBenchmark make_union_benchmark(std::size_t seed_tables, std::uint64_t seed);

// Random profiles over a few shared headers, types and value pools.
std::vector<profiler::ColumnProfile> random_profiles(std::size_t columns, std::uint64_t seed);

// Random store with named graphs, literals of every datatype and certainties.
kg::GraphStore random_store(std::uint64_t seed);

}  // namespace lids::testing
