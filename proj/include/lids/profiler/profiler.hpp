#pragma once

#include "lids/kg/term.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lids::profiler {

using Vector = std::vector<double>;

inline constexpr std::size_t kEmbeddingDim = 300;
inline constexpr std::size_t kTypeCount = 7;
inline constexpr std::size_t kTableDim = kEmbeddingDim * kTypeCount;

// Declaration order is the block order of table/dataset embeddings.
enum class FineGrainedType : std::uint8_t { Int, Float, Boolean, Date, NamedEntity, NaturalLanguageText, String };

inline constexpr std::array<FineGrainedType, kTypeCount> kAllTypes{
    FineGrainedType::Int,         FineGrainedType::Float,
    FineGrainedType::Boolean,     FineGrainedType::Date,
    FineGrainedType::NamedEntity, FineGrainedType::NaturalLanguageText,
    FineGrainedType::String};

std::string_view type_name(FineGrainedType t);
// Throws Error for unknown names.
FineGrainedType parse_type(std::string_view name);

// GloVe-style word vectors: "<token> <v1> ... <vn>" per line.
class Lexicon {
public:
    static Lexicon load(const std::filesystem::path& path);  // throws IoError

    void add(std::string token, Vector v);
    bool contains(std::string_view token) const { return words_.contains(std::string(token)); }
    const Vector* find(std::string_view token) const;
    std::size_t size() const noexcept { return words_.size(); }

private:
    std::unordered_map<std::string, Vector> words_;
};

// Known entity names ("<category>\t<name>" per line), matched case-insensitively.
class Gazetteer {
public:
    static Gazetteer load(const std::filesystem::path& path);  // throws IoError

    void add(std::string_view name);
    bool contains(std::string_view name) const;
    std::size_t size() const noexcept { return names_.size(); }

private:
    std::unordered_set<std::string> names_;
};

// Lowercased word tokens of free text (letters/digits runs).
std::vector<std::string> word_tokens(std::string_view text);

// Column-name tokens: split on separators, camelCase and letter/digit
// boundaries, lowercased. "homeTeam_2" -> {home, team, 2}.
std::vector<std::string> name_tokens(std::string_view name);

bool is_missing(std::string_view cell);
bool is_int_literal(std::string_view v);
bool is_float_literal(std::string_view v);
// Days since 1970-01-01 for the accepted date formats.
std::optional<std::int64_t> parse_date(std::string_view v);

// Typing/embedding sample: up to `limit` non-missing values chosen by a
// content hash, so the result does not depend on row order.
std::vector<std::string> sample_values(const std::vector<std::string>& column, std::size_t limit = 1000);

// Fraction of the sample a type needs to win.
inline constexpr double kTypeShare = 0.6;

FineGrainedType infer_fine_grained_type(const std::vector<std::string>& values, const Lexicon& lexicon,
                                        const Gazetteer& gazetteer);

struct NumericStats {
    double min = 0, max = 0, mean = 0;
    bool operator==(const NumericStats&) const = default;
};
struct TextStats {
    double min_len = 0, max_len = 0, mean_len = 0;
    bool operator==(const TextStats&) const = default;
};

struct ColumnStats {
    std::size_t total_count = 0;
    std::size_t distinct_count = 0;
    std::size_t missing_count = 0;
    std::optional<NumericStats> numeric;
    std::optional<double> true_ratio;
    std::optional<TextStats> text;

    // distinct / non-missing; 0 for an empty column.
    double distinct_ratio() const;
    bool operator==(const ColumnStats&) const = default;
};

// `column` is the full column, missing cells included.
ColumnStats collect_stats(const std::vector<std::string>& column, FineGrainedType fgt);

class Embedder {
public:
    virtual ~Embedder() = default;
    // One kEmbeddingDim vector per value. Numeric types may normalise
    // against the distribution of `values` itself.
    virtual std::vector<Vector> embed_values(const std::vector<std::string>& values, FineGrainedType fgt) const = 0;
};

// Hashed character trigrams + random sign projection for text; random
// Fourier features of the signed log value for numbers and dates (days).
class DefaultEmbedder final : public Embedder {
public:
    explicit DefaultEmbedder(std::uint64_t seed = 42);
    std::vector<Vector> embed_values(const std::vector<std::string>& values, FineGrainedType fgt) const override;

    static constexpr std::size_t kBuckets = 1u << 15;

private:
    Vector embed_text(std::string_view value) const;

    std::vector<std::uint64_t> signs_;  // kBuckets x 5 words of sign bits
    Vector freq_;                       // random Fourier frequencies
    Vector phase_;
};

// Mean of the value embeddings; the zero vector when `values` is empty.
Vector embed_column(const std::vector<std::string>& values, FineGrainedType fgt, const Embedder& embedder);

struct ColumnMetadata {
    std::string source;
    std::string dataset;
    std::string table;
    std::string column;

    kg::Uri column_uri() const;
    kg::Uri table_uri() const;
    kg::Uri dataset_uri() const;
    kg::Uri source_uri() const;
    bool operator==(const ColumnMetadata&) const = default;
};

struct ColumnProfile {
    ColumnMetadata metadata;
    FineGrainedType fgt = FineGrainedType::String;
    ColumnStats stats;
    Vector embedding;

    bool operator==(const ColumnProfile&) const = default;
};

ColumnProfile profile_column(const ColumnMetadata& metadata, const std::vector<std::string>& column,
                             const Lexicon& lexicon, const Gazetteer& gazetteer, const Embedder& embedder);

std::string profile_to_json(const ColumnProfile& profile);
ColumnProfile profile_from_json(std::string_view text);

// <out>/<source>/<dataset>/<table>/<column>.profile.json (segments percent-encoded)
std::filesystem::path profile_path(const std::filesystem::path& out_dir, const ColumnMetadata& md);

// Every *.profile.json below `dir`, sorted by path. Throws IoError.
std::vector<ColumnProfile> load_profiles(const std::filesystem::path& dir);

// Per type block: mean of that type's column embeddings (zero when absent).
Vector embed_table(const std::vector<const ColumnProfile*>& columns);
// Mean of the table vectors.
Vector embed_dataset(const std::vector<Vector>& tables);

// RFC-4180 CSV: header row plus data rows; short rows are padded with
// missing cells. Throws IoError on unbalanced quotes.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvTable parse_csv(std::string_view text);

struct ProfileReport {
    std::size_t tables = 0;
    std::size_t columns = 0;
    std::vector<std::string> skipped;
};

// Profiles <data>/<source>/<dataset>/<table>.csv in parallel by column and
// writes the profile files plus <out>/index.jsonl.
ProfileReport profile_corpus(const std::filesystem::path& data_dir, const std::filesystem::path& out_dir,
                             const Lexicon& lexicon, const Gazetteer& gazetteer, const Embedder& embedder,
                             std::size_t workers);

}  // namespace lids::profiler
