#include "lids/profiler/profiler.hpp"

#include "lids/error.hpp"
#include "lids/index/vector_index.hpp"
#include "lids/util/parallel.hpp"
#include "lids/util/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace lids::profiler {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }

std::optional<double> parse_number(std::string_view v) {
    if (!is_float_literal(v)) return std::nullopt;
    if (v.front() == '+') v.remove_prefix(1);
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) return std::nullopt;
    return out;
}

std::optional<int> parse_small_int(std::string_view v) {
    if (v.empty() || v.size() > 4) return std::nullopt;
    int out = 0;
    for (char c : v) {
        if (!is_digit(c)) return std::nullopt;
        out = out * 10 + (c - '0');
    }
    return out;
}

std::optional<std::int64_t> days_from(int y, int m, int d) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days(ymd).time_since_epoch().count();
}

std::optional<int> month_from_name(std::string_view name) {
    static constexpr std::array<std::string_view, 12> kMonths{"january", "february", "march",     "april",
                                                              "may",     "june",     "july",      "august",
                                                              "september", "october", "november", "december"};
    const std::string lower = util::to_lower(name);
    if (lower.size() < 3) return std::nullopt;
    for (std::size_t i = 0; i < kMonths.size(); ++i) {
        if (lower == kMonths[i] || (lower.size() == 3 && kMonths[i].starts_with(lower))) return static_cast<int>(i) + 1;
    }
    return std::nullopt;
}

const std::set<std::string>& boolean_words() {
    static const std::set<std::string> words{"true", "false", "t", "f", "yes", "no"};
    return words;
}

bool is_true_value(std::string_view v) {
    const std::string lower = util::to_lower(v);
    return lower == "true" || lower == "t" || lower == "yes" || lower == "1";
}

std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

Vector mean_of(const std::vector<Vector>& vs, std::size_t dim) {
    Vector out(dim, 0.0);
    if (vs.empty()) return out;
    for (const auto& v : vs)
        for (std::size_t i = 0; i < dim; ++i) out[i] += v[i];
    for (auto& x : out) x /= static_cast<double>(vs.size());
    return out;
}

}  // namespace

// --- types ---------------------------------------------------------------

std::string_view type_name(FineGrainedType t) {
    switch (t) {
        case FineGrainedType::Int: return "int";
        case FineGrainedType::Float: return "float";
        case FineGrainedType::Boolean: return "boolean";
        case FineGrainedType::Date: return "date";
        case FineGrainedType::NamedEntity: return "named_entity";
        case FineGrainedType::NaturalLanguageText: return "natural_language_text";
        case FineGrainedType::String: return "string";
    }
    return "string";
}

FineGrainedType parse_type(std::string_view name) {
    for (auto t : kAllTypes)
        if (type_name(t) == name) return t;
    throw Error("unknown fine-grained type: " + std::string(name));
}

// --- lexicon / gazetteer -------------------------------------------------

Lexicon Lexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read lexicon " + path.string());
    Lexicon lex;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string token;
        if (!(fields >> token)) continue;
        Vector v;
        std::string num;
        while (fields >> num) {
            double x = 0;
            auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), x);
            if (ec != std::errc() || ptr != num.data() + num.size()) break;
            v.push_back(x);
        }
        if (!v.empty()) lex.add(util::to_lower(token), std::move(v));
    }
    return lex;
}

void Lexicon::add(std::string token, Vector v) { words_.insert_or_assign(std::move(token), std::move(v)); }

const Vector* Lexicon::find(std::string_view token) const {
    auto it = words_.find(std::string(token));
    return it == words_.end() ? nullptr : &it->second;
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read gazetteer " + path.string());
    Gazetteer g;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        g.add(tab == std::string::npos ? line : line.substr(tab + 1));
    }
    return g;
}

void Gazetteer::add(std::string_view name) {
    const auto trimmed = util::trim(name);
    if (!trimmed.empty()) names_.insert(util::to_lower(trimmed));
}

bool Gazetteer::contains(std::string_view name) const { return names_.contains(util::to_lower(util::trim(name))); }

// --- token / literal rules -----------------------------------------------

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'') {
            if (c != '\'') cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::vector<std::string> name_tokens(std::string_view name) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(util::to_lower(cur));
        cur.clear();
    };
    for (std::size_t i = 0; i < name.size(); ++i) {
        const char c = name[i];
        if (!std::isalnum(static_cast<unsigned char>(c))) {
            flush();
            continue;
        }
        if (!cur.empty()) {
            const char prev = cur.back();
            const bool digit_edge = is_digit(prev) != is_digit(c);
            const bool camel = is_lower(prev) && is_upper(c);
            // "HTTPServer" -> HTTP | Server
            const bool acronym_end = is_upper(prev) && is_upper(c) && i + 1 < name.size() && is_lower(name[i + 1]);
            if (digit_edge || camel || acronym_end) flush();
        }
        cur += c;
    }
    flush();
    return out;
}

bool is_missing(std::string_view cell) { return util::trim(cell).empty(); }

bool is_int_literal(std::string_view v) {
    if (!v.empty() && (v.front() == '+' || v.front() == '-')) v.remove_prefix(1);
    return !v.empty() && std::all_of(v.begin(), v.end(), is_digit);
}

bool is_float_literal(std::string_view v) {
    std::size_t i = 0;
    if (i < v.size() && (v[i] == '+' || v[i] == '-')) ++i;
    std::size_t digits = 0;
    while (i < v.size() && is_digit(v[i])) ++i, ++digits;
    if (i < v.size() && v[i] == '.') {
        ++i;
        while (i < v.size() && is_digit(v[i])) ++i, ++digits;
    }
    if (digits == 0) return false;
    if (i < v.size() && (v[i] == 'e' || v[i] == 'E')) {
        ++i;
        if (i < v.size() && (v[i] == '+' || v[i] == '-')) ++i;
        std::size_t exp = 0;
        while (i < v.size() && is_digit(v[i])) ++i, ++exp;
        if (exp == 0) return false;
    }
    return i == v.size();
}

std::optional<std::int64_t> parse_date(std::string_view v) {
    v = util::trim(v);
    // ISO-8601: YYYY-MM-DD with an optional time part.
    if (v.size() >= 10 && v[4] == '-' && v[7] == '-' && (v.size() == 10 || v[10] == 'T' || v[10] == ' ')) {
        auto y = parse_small_int(v.substr(0, 4));
        auto m = parse_small_int(v.substr(5, 2));
        auto d = parse_small_int(v.substr(8, 2));
        if (y && m && d && v.substr(0, 4).size() == 4) return days_from(*y, *m, *d);
        return std::nullopt;
    }
    // a/b/YYYY: month-first, then day-first.
    if (auto parts = util::split(v, '/'); parts.size() == 3 && parts[2].size() == 4) {
        auto a = parse_small_int(parts[0]);
        auto b = parse_small_int(parts[1]);
        auto y = parse_small_int(parts[2]);
        if (!a || !b || !y || parts[0].size() > 2 || parts[1].size() > 2) return std::nullopt;
        if (auto days = days_from(*y, *a, *b)) return days;
        return days_from(*y, *b, *a);
    }
    // "Mon DD, YYYY"
    const auto space = v.find(' ');
    const auto comma = v.find(',');
    if (space != std::string_view::npos && comma != std::string_view::npos && space < comma) {
        auto m = month_from_name(v.substr(0, space));
        auto d = parse_small_int(util::trim(v.substr(space + 1, comma - space - 1)));
        const auto year_text = util::trim(v.substr(comma + 1));
        auto y = parse_small_int(year_text);
        if (m && d && y && year_text.size() == 4) return days_from(*y, *m, *d);
    }
    return std::nullopt;
}

std::vector<std::string> sample_values(const std::vector<std::string>& column, std::size_t limit) {
    std::vector<std::pair<std::uint64_t, std::string>> keyed;
    for (const auto& cell : column) {
        if (is_missing(cell)) continue;
        std::string v(util::trim(cell));
        keyed.emplace_back(util::stable_hash(v), std::move(v));
    }
    std::sort(keyed.begin(), keyed.end());
    if (keyed.size() > limit) keyed.resize(limit);
    std::vector<std::string> out;
    out.reserve(keyed.size());
    for (auto& [h, v] : keyed) out.push_back(std::move(v));
    return out;
}

FineGrainedType infer_fine_grained_type(const std::vector<std::string>& values, const Lexicon& lexicon,
                                        const Gazetteer& gazetteer) {
    if (values.empty()) return FineGrainedType::String;
    const double n = static_cast<double>(values.size());
    auto wins = [&](auto&& pred) {
        const auto hits = std::count_if(values.begin(), values.end(), pred);
        return static_cast<double>(hits) / n >= kTypeShare;
    };

    const bool zero_one = std::all_of(values.begin(), values.end(), [](const std::string& v) {
        return v == "0" || v == "1" || boolean_words().contains(util::to_lower(v));
    });
    if (wins([&](const std::string& v) {
            return boolean_words().contains(util::to_lower(v)) || (zero_one && (v == "0" || v == "1"));
        })) {
        return FineGrainedType::Boolean;
    }
    if (wins([](const std::string& v) { return is_int_literal(v); })) return FineGrainedType::Int;
    if (wins([](const std::string& v) { return parse_number(v).has_value(); })) return FineGrainedType::Float;
    if (wins([](const std::string& v) { return parse_date(v).has_value(); })) return FineGrainedType::Date;
    if (wins([&](const std::string& v) {
            if (gazetteer.contains(v)) return true;
            const auto tokens = util::split(v, ' ');
            std::size_t words = 0;
            for (const auto& t : tokens) {
                if (t.empty()) continue;
                if (!gazetteer.contains(t)) return false;
                ++words;
            }
            return words > 0;
        })) {
        return FineGrainedType::NamedEntity;
    }
    if (wins([&](const std::string& v) {
            const auto tokens = word_tokens(v);
            if (tokens.size() < 3) return false;
            const auto known = std::count_if(tokens.begin(), tokens.end(),
                                             [&](const std::string& t) { return lexicon.contains(t); });
            return static_cast<double>(known) / static_cast<double>(tokens.size()) >= 0.7;
        })) {
        return FineGrainedType::NaturalLanguageText;
    }
    return FineGrainedType::String;
}

// --- statistics ----------------------------------------------------------

double ColumnStats::distinct_ratio() const {
    const std::size_t present = total_count - missing_count;
    return present == 0 ? 0.0 : static_cast<double>(distinct_count) / static_cast<double>(present);
}

ColumnStats collect_stats(const std::vector<std::string>& column, FineGrainedType fgt) {
    ColumnStats s;
    s.total_count = column.size();
    std::set<std::string_view> distinct;
    std::vector<std::string_view> present;
    for (const auto& cell : column) {
        if (is_missing(cell)) {
            ++s.missing_count;
            continue;
        }
        present.push_back(util::trim(cell));
        distinct.insert(present.back());
    }
    s.distinct_count = distinct.size();
    if (present.empty()) return s;

    if (fgt == FineGrainedType::Int || fgt == FineGrainedType::Float) {
        std::vector<double> nums;
        for (auto v : present)
            if (auto x = parse_number(v)) nums.push_back(*x);
        if (!nums.empty()) {
            NumericStats n;
            n.min = *std::min_element(nums.begin(), nums.end());
            n.max = *std::max_element(nums.begin(), nums.end());
            double sum = 0;
            for (double x : nums) sum += x;
            n.mean = sum / static_cast<double>(nums.size());
            s.numeric = n;
        }
    } else if (fgt == FineGrainedType::Boolean) {
        const auto trues = std::count_if(present.begin(), present.end(), is_true_value);
        s.true_ratio = static_cast<double>(trues) / static_cast<double>(present.size());
    } else if (fgt != FineGrainedType::Date) {
        TextStats t;
        t.min_len = t.max_len = static_cast<double>(utf8_length(present.front()));
        double sum = 0;
        for (auto v : present) {
            const double len = static_cast<double>(utf8_length(v));
            t.min_len = std::min(t.min_len, len);
            t.max_len = std::max(t.max_len, len);
            sum += len;
        }
        t.mean_len = sum / static_cast<double>(present.size());
        s.text = t;
    }
    return s;
}

// --- embedding -----------------------------------------------------------

DefaultEmbedder::DefaultEmbedder(std::uint64_t seed) {
    util::SeededRng rng(util::splitmix64(seed ^ 0x636f6c756d6e73ULL));
    constexpr std::size_t words = (kEmbeddingDim + 63) / 64;
    signs_.resize(kBuckets * words);
    for (auto& w : signs_) w = rng.next();
    freq_.resize(kEmbeddingDim);
    phase_.resize(kEmbeddingDim);
    for (std::size_t d = 0; d < kEmbeddingDim; ++d) {
        freq_[d] = rng.normal();
        phase_[d] = rng.uniform() * 2.0 * std::numbers::pi;
    }
}

Vector DefaultEmbedder::embed_text(std::string_view value) const {
    constexpr std::size_t words = (kEmbeddingDim + 63) / 64;
    std::string padded = "\x02" + util::to_lower(value) + "\x03";
    std::map<std::size_t, int> counts;
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        ++counts[util::stable_hash(std::string_view(padded).substr(i, 3)) & (kBuckets - 1)];
    }
    Vector out(kEmbeddingDim, 0.0);
    for (const auto& [bucket, count] : counts) {
        const std::uint64_t* bits = &signs_[bucket * words];
        for (std::size_t d = 0; d < kEmbeddingDim; ++d) {
            const bool positive = (bits[d / 64] >> (d % 64)) & 1u;
            out[d] += positive ? count : -count;
        }
    }
    double norm = 0;
    for (double x : out) norm += x * x;
    if (norm > 0) {
        norm = std::sqrt(norm);
        for (auto& x : out) x /= norm;
    }
    return out;
}

std::vector<Vector> DefaultEmbedder::embed_values(const std::vector<std::string>& values, FineGrainedType fgt) const {
    std::vector<Vector> out;
    out.reserve(values.size());
    if (fgt == FineGrainedType::Int || fgt == FineGrainedType::Float || fgt == FineGrainedType::Date) {
        std::vector<std::optional<double>> nums;
        for (const auto& v : values) {
            if (fgt == FineGrainedType::Date) {
                auto days = parse_date(v);
                nums.push_back(days ? std::optional<double>(static_cast<double>(*days)) : std::nullopt);
            } else {
                nums.push_back(parse_number(v));
            }
        }
        // Signed log scale keeps magnitudes apart (ages vs prices) while the
        // kernel bandwidth of 0.5 tolerates small shifts between samples.
        constexpr double inv_bandwidth = 2.0;
        const double scale = std::sqrt(2.0 / static_cast<double>(kEmbeddingDim));
        for (const auto& x : nums) {
            Vector v(kEmbeddingDim, 0.0);
            if (x) {
                const double z = std::copysign(std::log1p(std::abs(*x)), *x) * inv_bandwidth;
                for (std::size_t d = 0; d < kEmbeddingDim; ++d) v[d] = scale * std::cos(freq_[d] * z + phase_[d]);
            }
            out.push_back(std::move(v));
        }
        return out;
    }
    for (const auto& v : values) out.push_back(embed_text(v));
    return out;
}

Vector embed_column(const std::vector<std::string>& values, FineGrainedType fgt, const Embedder& embedder) {
    if (values.empty()) return Vector(kEmbeddingDim, 0.0);
    return mean_of(embedder.embed_values(values, fgt), kEmbeddingDim);
}

// --- profiles ------------------------------------------------------------

kg::Uri ColumnMetadata::column_uri() const { return kg::make_resource_uri({source, dataset, table, column}); }
kg::Uri ColumnMetadata::table_uri() const { return kg::make_resource_uri({source, dataset, table}); }
kg::Uri ColumnMetadata::dataset_uri() const { return kg::make_resource_uri({source, dataset}); }
kg::Uri ColumnMetadata::source_uri() const { return kg::make_resource_uri({source}); }

ColumnProfile profile_column(const ColumnMetadata& metadata, const std::vector<std::string>& column,
                             const Lexicon& lexicon, const Gazetteer& gazetteer, const Embedder& embedder) {
    ColumnProfile p;
    p.metadata = metadata;
    const auto sample = sample_values(column);
    p.fgt = infer_fine_grained_type(sample, lexicon, gazetteer);
    p.stats = collect_stats(column, p.fgt);
    p.embedding = embed_column(sample, p.fgt, embedder);
    return p;
}

std::string profile_to_json(const ColumnProfile& p) {
    using nlohmann::json;
    const auto& md = p.metadata;
    const auto& s = p.stats;
    json stats{{"total_count", s.total_count},
               {"distinct_count", s.distinct_count},
               {"missing_count", s.missing_count},
               {"numeric", s.numeric ? json{{"min", s.numeric->min}, {"max", s.numeric->max}, {"mean", s.numeric->mean}}
                                     : json(nullptr)},
               {"true_ratio", s.true_ratio ? json(*s.true_ratio) : json(nullptr)},
               {"text", s.text ? json{{"min_len", s.text->min_len},
                                      {"max_len", s.text->max_len},
                                      {"mean_len", s.text->mean_len}}
                               : json(nullptr)}};
    json j{{"metadata",
            {{"source", md.source},
             {"dataset", md.dataset},
             {"table", md.table},
             {"column", md.column},
             {"column_uri", md.column_uri().text}}},
           {"fgt", type_name(p.fgt)},
           {"stats", std::move(stats)},
           {"embedding", p.embedding}};
    return j.dump() + "\n";
}

ColumnProfile profile_from_json(std::string_view text) {
    using nlohmann::json;
    ColumnProfile p;
    try {
        const json j = json::parse(text);
        const json& md = j.at("metadata");
        p.metadata = {md.at("source").get<std::string>(), md.at("dataset").get<std::string>(),
                      md.at("table").get<std::string>(), md.at("column").get<std::string>()};
        p.fgt = parse_type(j.at("fgt").get<std::string>());
        const json& s = j.at("stats");
        p.stats.total_count = s.at("total_count").get<std::size_t>();
        p.stats.distinct_count = s.at("distinct_count").get<std::size_t>();
        p.stats.missing_count = s.at("missing_count").get<std::size_t>();
        if (!s.at("numeric").is_null()) {
            const json& n = s["numeric"];
            p.stats.numeric = NumericStats{n.at("min").get<double>(), n.at("max").get<double>(), n.at("mean").get<double>()};
        }
        if (!s.at("true_ratio").is_null()) p.stats.true_ratio = s["true_ratio"].get<double>();
        if (!s.at("text").is_null()) {
            const json& t = s["text"];
            p.stats.text = TextStats{t.at("min_len").get<double>(), t.at("max_len").get<double>(),
                                     t.at("mean_len").get<double>()};
        }
        p.embedding = j.at("embedding").get<Vector>();
    } catch (const json::exception& e) {
        throw Error(std::string("malformed column profile: ") + e.what());
    }
    if (p.embedding.size() != kEmbeddingDim) throw DimensionError("profile embedding must have 300 dimensions");
    return p;
}

std::filesystem::path profile_path(const std::filesystem::path& out_dir, const ColumnMetadata& md) {
    return out_dir / kg::encode_segment(md.source) / kg::encode_segment(md.dataset) / kg::encode_segment(md.table) /
           (kg::encode_segment(md.column) + ".profile.json");
}

std::vector<ColumnProfile> load_profiles(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("profiles directory not readable: " + dir.string());
    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(dir, ec); !ec && it != fs::recursive_directory_iterator();
         it.increment(ec)) {
        if (it->is_regular_file() && it->path().filename().string().ends_with(".profile.json")) {
            files.push_back(it->path());
        }
    }
    if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());
    std::vector<ColumnProfile> out;
    out.reserve(files.size());
    for (const auto& f : files) out.push_back(profile_from_json(util::read_file(f)));
    return out;
}

Vector embed_table(const std::vector<const ColumnProfile*>& columns) {
    Vector out(kTableDim, 0.0);
    for (std::size_t b = 0; b < kTypeCount; ++b) {
        std::vector<Vector> block;
        for (const auto* c : columns)
            if (c->fgt == kAllTypes[b]) block.push_back(c->embedding);
        if (block.empty()) continue;
        const Vector mean = mean_of(block, kEmbeddingDim);
        std::copy(mean.begin(), mean.end(), out.begin() + static_cast<std::ptrdiff_t>(b * kEmbeddingDim));
    }
    return out;
}

Vector embed_dataset(const std::vector<Vector>& tables) { return mean_of(tables, kTableDim); }

// --- CSV -----------------------------------------------------------------

CsvTable parse_csv(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = record.size() == 1 && record.front().empty();
        if (!blank) records.push_back(std::move(record));
        record.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_record();
        } else {
            field += c;
            field_started = true;
        }
    }
    if (in_quotes) throw IoError("unterminated quoted field in CSV");
    if (field_started || !field.empty() || !record.empty()) end_record();

    CsvTable table;
    if (records.empty()) return table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        auto& row = records[r];
        row.resize(table.header.size());
        table.rows.push_back(std::move(row));
    }
    return table;
}

// --- corpus driver -------------------------------------------------------

ProfileReport profile_corpus(const std::filesystem::path& data_dir, const std::filesystem::path& out_dir,
                             const Lexicon& lexicon, const Gazetteer& gazetteer, const Embedder& embedder,
                             std::size_t workers) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(data_dir, ec)) throw IoError("data directory not readable: " + data_dir.string());

    ProfileReport report;
    std::vector<std::pair<fs::path, ColumnMetadata>> table_files;
    for (auto it = fs::recursive_directory_iterator(data_dir, ec); !ec && it != fs::recursive_directory_iterator();
         it.increment(ec)) {
        if (!it->is_regular_file() || it->path().extension() != ".csv") continue;
        const fs::path rel = fs::relative(it->path(), data_dir);
        std::vector<std::string> parts;
        for (const auto& p : rel) parts.push_back(p.string());
        if (parts.size() != 3) {
            report.skipped.push_back(it->path().string() + ": expected <source>/<dataset>/<table>.csv");
            continue;
        }
        table_files.push_back({it->path(), ColumnMetadata{parts[0], parts[1], parts[2], ""}});
    }
    if (ec) throw IoError("cannot list " + data_dir.string() + ": " + ec.message());
    std::sort(table_files.begin(), table_files.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<std::optional<CsvTable>> tables(table_files.size());
    std::vector<std::string> read_errors(table_files.size());
    util::parallel_for(table_files.size(), workers, [&](std::size_t i) {
        try {
            tables[i] = parse_csv(util::read_file(table_files[i].first));
        } catch (const std::exception& e) {
            read_errors[i] = table_files[i].first.string() + ": " + e.what();
        }
    });

    struct Job {
        std::size_t table;
        std::size_t column;
    };
    std::vector<Job> jobs;
    for (std::size_t t = 0; t < tables.size(); ++t) {
        if (!tables[t]) {
            report.skipped.push_back(read_errors[t]);
            continue;
        }
        ++report.tables;
        std::set<std::string> seen;
        for (std::size_t c = 0; c < tables[t]->header.size(); ++c) {
            const std::string name(util::trim(tables[t]->header[c]));
            if (name.empty() || !seen.insert(name).second) {
                report.skipped.push_back(table_files[t].first.string() + ": column " + std::to_string(c + 1) +
                                         " has an empty or duplicate header");
                continue;
            }
            jobs.push_back({t, c});
        }
    }

    std::vector<ColumnProfile> profiles(jobs.size());
    util::parallel_for(jobs.size(), workers, [&](std::size_t j) {
        const auto& table = *tables[jobs[j].table];
        ColumnMetadata md = table_files[jobs[j].table].second;
        md.column = std::string(util::trim(table.header[jobs[j].column]));
        std::vector<std::string> column;
        column.reserve(table.rows.size());
        for (const auto& row : table.rows) column.push_back(row[jobs[j].column]);
        profiles[j] = profile_column(md, column, lexicon, gazetteer, embedder);
        util::write_file(profile_path(out_dir, md), profile_to_json(profiles[j]));
    });
    report.columns = profiles.size();

    // Embedding index: columns, then table and dataset vectors.
    index::VectorIndex idx;
    std::map<std::string, std::vector<const ColumnProfile*>> by_table;
    std::map<std::string, std::vector<std::string>> tables_of_dataset;
    for (const auto& p : profiles) {
        idx.add({p.metadata.column_uri(), index::EntryKind::Column, std::string(type_name(p.fgt)), p.embedding});
        by_table[p.metadata.table_uri().text].push_back(&p);
    }
    std::map<std::string, std::vector<Vector>> dataset_vectors;
    for (const auto& [table_uri, cols] : by_table) {
        Vector tv = embed_table(cols);
        dataset_vectors[cols.front()->metadata.dataset_uri().text].push_back(tv);
        idx.add({kg::Uri(table_uri), index::EntryKind::Table, std::nullopt, std::move(tv)});
    }
    for (const auto& [dataset_uri, vs] : dataset_vectors) {
        idx.add({kg::Uri(dataset_uri), index::EntryKind::Dataset, std::nullopt, embed_dataset(vs)});
    }
    util::write_file(out_dir / "index.jsonl", index::to_jsonl(idx));
    return report;
}

}  // namespace lids::profiler
