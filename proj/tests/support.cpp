#include "support.hpp"

#include "lids/error.hpp"
#include "lids/kg/term.hpp"

#include <unistd.h>

#include <cmath>
#include <map>
#include <set>

namespace lids::testing {

FixtureGraph build_fixture_graph(const std::filesystem::path& work_dir) {
    const profiler::DefaultEmbedder embedder(42);
    profiler::profile_corpus(kCorpus / "data", work_dir / "profiles", shipped_lexicon(), shipped_gazetteer(), embedder, 1);
    pipeline::abstract_corpus(kCorpus / "pipelines", shipped_docs(), work_dir / "irs", 1);
    FixtureGraph out;
    out.profiles = profiler::load_profiles(work_dir / "profiles");
    out.irs = pipeline::load_irs(work_dir / "irs");
    out.index = index::load_index(work_dir / "profiles" / "index.jsonl");
    out.store = construction::assemble_graph(out.profiles, out.irs, shipped_docs(), {}, shipped_lexicon(), 1);
    return out;
}

const FixtureGraph& fixture_graph() {
    static const TempDir dir("lids-fixture");
    static const FixtureGraph graph = build_fixture_graph(dir.path());
    return graph;
}

namespace {

// Synonym pairs from the shipped lexicon; half A takes the first word,
// half B the second.
const std::vector<std::pair<std::string, std::string>> kSynonyms{
    {"price", "cost"},         {"weight", "mass"},         {"height", "stature"},     {"city", "town"},
    {"country", "nation"},     {"salary", "wage"},         {"quantity", "amount"},    {"rating", "score"},
    {"review", "comment"},     {"category", "genre"},      {"colour", "hue"},         {"speed", "velocity"},
    {"distance", "length"},    {"temperature", "heat"},    {"team", "squad"},         {"player", "athlete"},
    {"company", "firm"},       {"product", "item"},        {"customer", "client"},    {"email", "mail"},
    {"phone", "telephone"},    {"address", "residence"},   {"gender", "sex"},         {"total", "sum"},
    {"population", "residents"}, {"region", "district"},   {"street", "road"},        {"title", "heading"},
    {"author", "writer"},      {"duration", "period"},     {"patient", "subject"},    {"disease", "illness"},
    {"doctor", "physician"},   {"hospital", "clinic"},     {"student", "pupil"},      {"teacher", "tutor"},
    {"school", "academy"},     {"movie", "film"},          {"song", "tune"},          {"artist", "performer"},
    {"album", "record"},       {"book", "volume"},         {"vehicle", "automobile"}, {"engine", "motor"},
    {"fuel", "petrol"},        {"flight", "journey"},      {"airline", "carrier"},    {"origin", "departure"},
    {"destination", "arrival"}, {"store", "shop"},         {"sales", "revenue"},      {"discount", "rebate"},
    {"tax", "levy"},           {"employee", "worker"},     {"department", "division"}, {"manager", "supervisor"},
    {"house", "dwelling"},     {"size", "magnitude"},      {"description", "overview"}, {"status", "state"},
    {"language", "tongue"},    {"species", "breed"},       {"animal", "creature"},    {"crop", "harvest"},
    {"rainfall", "precipitation"}, {"wind", "breeze"},     {"humidity", "moisture"},  {"budget", "allocation"},
    {"profit", "gain"},        {"loss", "deficit"},        {"order", "purchase"},     {"shipping", "delivery"},
    {"stock", "inventory"},    {"brand", "marque"},        {"model", "variant"},      {"width", "breadth"},
    {"depth", "thickness"},    {"energy", "power"},        {"sample", "specimen"},    {"reading", "measurement"},
};

std::string syllable_word(util::SeededRng& rng, const std::vector<std::string>& syllables) {
    std::string w;
    const std::size_t n = 2 + rng.below(3);
    for (std::size_t i = 0; i < n; ++i) w += syllables[rng.below(syllables.size())];
    return w;
}

std::vector<std::string> random_syllables(util::SeededRng& rng) {
    static const std::string consonants = "bcdfghjklmnpqrstvwxz";
    static const std::string vowels = "aeiouy";
    std::vector<std::string> out;
    for (int i = 0; i < 5; ++i) {
        std::string s;
        s += consonants[rng.below(consonants.size())];
        s += vowels[rng.below(vowels.size())];
        s += consonants[rng.below(consonants.size())];
        out.push_back(s);
    }
    return out;
}

}  // namespace

UnionBenchmark make_union_benchmark(std::size_t seed_tables, std::uint64_t seed) {
    constexpr std::size_t kRows = 60;
    constexpr std::size_t kColumns = 4;
    if (seed_tables * kColumns > kSynonyms.size()) throw Error("not enough synonym pairs");
    util::SeededRng rng(seed);
    const profiler::DefaultEmbedder embedder(seed);
    UnionBenchmark out;
    for (std::size_t t = 0; t < seed_tables; ++t) {
        std::vector<std::vector<std::string>> columns(kColumns);
        const auto text_a = random_syllables(rng);
        const auto text_b = random_syllables(rng);
        // Disjoint magnitudes per table: log-spaced bases.
        const double int_base = std::pow(10.0, 0.35 * static_cast<double>(t));
        const double float_base = std::pow(10.0, 0.35 * static_cast<double>((t * 7) % seed_tables)) + 0.5;
        for (std::size_t r = 0; r < kRows; ++r) {
            columns[0].push_back(syllable_word(rng, text_a));
            columns[1].push_back(syllable_word(rng, text_b));
            columns[2].push_back(std::to_string(static_cast<long long>(int_base * (1.0 + 2.0 * rng.uniform()))));
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3f", float_base * (1.0 + 2.0 * rng.uniform()));
            columns[3].push_back(buf);
        }
        char name[32];
        std::snprintf(name, sizeof name, "t%02zu", t);
        for (int half = 0; half < 2; ++half) {
            const std::string table = std::string(name) + (half == 0 ? "_a.csv" : "_b.csv");
            for (std::size_t c = 0; c < kColumns; ++c) {
                const auto& pair = kSynonyms[t * kColumns + c];
                const std::string header = half == 0 ? pair.first : pair.second;
                std::vector<std::string> values(columns[c].begin() + half * (kRows / 2),
                                                columns[c].begin() + (half + 1) * (kRows / 2));
                out.profiles.push_back(profiler::profile_column({"bench", "union", table, header}, values,
                                                                shipped_lexicon(), shipped_gazetteer(), embedder));
            }
        }
        out.pairs.emplace_back(kg::make_resource_uri({"bench", "union", std::string(name) + "_a.csv"}).text,
                               kg::make_resource_uri({"bench", "union", std::string(name) + "_b.csv"}).text);
    }
    return out;
}

std::vector<profiler::ColumnProfile> random_profiles(std::size_t columns, std::uint64_t seed) {
    static const std::vector<std::string> headers{"price", "cost", "fare",     "age",       "years", "city",
                                                  "town",  "zip",  "zipcode", "is_active", "flag",  "id",
                                                  "key",   "xq",   "customer_id"};
    static const std::vector<double> ratios{0.5, 0.52, 0.6, 0.58, 0.9, 0.97};
    util::SeededRng rng(seed);
    const profiler::DefaultEmbedder embedder(seed);
    std::vector<std::vector<std::string>> pools(3);
    for (auto& pool : pools) {
        const auto syllables = random_syllables(rng);
        for (int i = 0; i < 12; ++i) pool.push_back(syllable_word(rng, syllables));
    }
    std::vector<profiler::ColumnProfile> out;
    std::set<std::pair<std::string, std::string>> used;
    while (out.size() < columns) {
        const std::string table = "table" + std::to_string(rng.below(6)) + ".csv";
        const std::string header = headers[rng.below(headers.size())];
        if (!used.emplace(table, header).second) continue;
        std::vector<std::string> values;
        const std::size_t rows = 20 + rng.below(20);
        switch (rng.below(4)) {
            case 0: {  // int, one of three magnitudes, sometimes unique
                const double base = std::pow(10.0, static_cast<double>(rng.below(3)));
                const bool unique = rng.below(2) == 0;
                for (std::size_t r = 0; r < rows; ++r) {
                    const auto v = unique ? static_cast<long long>(base * 10 + r)
                                          : static_cast<long long>(base * (1 + rng.below(5)));
                    values.push_back(std::to_string(v));
                }
                break;
            }
            case 1: {  // float
                const double base = std::pow(10.0, static_cast<double>(rng.below(3)));
                for (std::size_t r = 0; r < rows; ++r) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.2f", base * (1.0 + rng.uniform()));
                    values.push_back(buf);
                }
                break;
            }
            case 2: {  // boolean with a chosen true ratio
                const double ratio = ratios[rng.below(ratios.size())];
                const auto trues = static_cast<std::size_t>(std::lround(ratio * 50));
                for (std::size_t r = 0; r < 50; ++r) values.push_back(r < trues ? "true" : "false");
                break;
            }
            default: {  // string from one of the pools
                const auto& pool = pools[rng.below(pools.size())];
                for (std::size_t r = 0; r < rows; ++r) values.push_back(pool[rng.below(pool.size())]);
                break;
            }
        }
        out.push_back(profiler::profile_column({"rand", "ds", table, header}, values, shipped_lexicon(),
                                               shipped_gazetteer(), embedder));
    }
    return out;
}

kg::GraphStore random_store(std::uint64_t seed) {
    util::SeededRng rng(seed);
    static const std::vector<std::string> strings{
        "plain", "", "with \"quotes\"", "back\\slash", "line\nbreak", "tab\there", "caf\xc3\xa9 \xe2\x9c\x93",
        "<< not a triple >>", "@prefix", "semi; colon, comma.", "# hash"};
    auto random_uri = [&] {
        switch (rng.below(3)) {
            case 0: return kg::make_resource_uri({"src", "ds" + std::to_string(rng.below(3)),
                                                  "t" + std::to_string(rng.below(4)) + ".csv"});
            case 1: return kg::make_resource_uri({"src", "ds", "t.csv", "col " + std::to_string(rng.below(5))});
            default: return kg::Uri("http://example.org/x#n" + std::to_string(rng.below(6)));
        }
    };
    static const std::vector<kg::Uri> predicates{kg::vocab::rdf_type,     kg::vocab::rdfs_label,
                                                 kg::vocab::is_part_of,   kg::vocab::has_content_similarity,
                                                 kg::vocab::has_parameter, kg::vocab::has_score};
    auto random_term = [&]() -> kg::Term {
        switch (rng.below(6)) {
            case 0: return kg::Term::iri(random_uri());
            case 1: return kg::Term::string(strings[rng.below(strings.size())]);
            case 2: return kg::Term::integer(static_cast<std::int64_t>(rng.next() >> 1) * (rng.below(2) ? 1 : -1));
            case 3: {
                const double mags[] = {1e-300, 1e-5, 1.0, 1e5, 1e300};
                return kg::Term::real((rng.uniform() - 0.5) * mags[rng.below(5)]);
            }
            case 4: return kg::Term::real(static_cast<double>(rng.below(100)));
            default: return kg::Term::boolean(rng.below(2) == 0);
        }
    };
    kg::GraphStore store;
    const std::size_t triples = rng.below(40);
    for (std::size_t i = 0; i < triples; ++i) {
        std::string graph = kg::kDefaultGraph;
        if (rng.below(3) == 0) graph = "http://kglids.org/resource/src/ds/pipeline/p" + std::to_string(rng.below(3));
        std::optional<double> certainty;
        if (rng.below(3) == 0) certainty = rng.uniform();
        store.add({random_uri(), predicates[rng.below(predicates.size())], random_term()}, certainty, graph);
    }
    return store;
}

}  // namespace lids::testing
