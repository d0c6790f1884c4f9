#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lids::kg {

inline constexpr std::string_view kOntologyPrefix = "http://kglids.org/ontology/";
inline constexpr std::string_view kResourcePrefix = "http://kglids.org/resource/";
inline constexpr std::string_view kRdfPrefix = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfsPrefix = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsdPrefix = "http://www.w3.org/2001/XMLSchema#";

// Absolute IRI. Construction does not validate; use make_resource_uri for
// instance IRIs and the vocab:: constants for ontology terms.
struct Uri {
    std::string text;

    Uri() = default;
    explicit Uri(std::string t) : text(std::move(t)) {}
    explicit Uri(std::string_view t) : text(t) {}
    explicit Uri(const char* t) : text(t) {}

    bool empty() const noexcept { return text.empty(); }
    auto operator<=>(const Uri&) const = default;
};

// Percent-encodes every byte outside [A-Za-z0-9._~-].
std::string encode_segment(std::string_view segment);
std::string decode_segment(std::string_view segment);

// http://kglids.org/resource/<seg>/<seg>/... ; throws InvalidName on an
// empty list or an empty segment.
Uri make_resource_uri(const std::vector<std::string>& parts);

// Resource path segments of an instance IRI (decoded); empty when `uri`
// is not under the resource prefix.
std::vector<std::string> resource_segments(const Uri& uri);

bool is_known_uri(const Uri& uri);

enum class Datatype : std::uint8_t { None, String, Integer, Double, Boolean };

std::string_view datatype_iri(Datatype dt);

// RDF term in object position. Subjects and predicates are always IRIs, and
// blank nodes do not exist in this model.
struct Term {
    enum class Kind : std::uint8_t { Iri, Literal };

    Kind kind = Kind::Iri;
    std::string value;
    Datatype datatype = Datatype::None;

    static Term iri(Uri u) { return {Kind::Iri, std::move(u.text), Datatype::None}; }
    static Term string(std::string s) { return {Kind::Literal, std::move(s), Datatype::String}; }
    static Term integer(std::int64_t v);
    static Term real(double v);
    static Term boolean(bool v);

    bool is_iri() const noexcept { return kind == Kind::Iri; }
    bool is_literal() const noexcept { return kind == Kind::Literal; }
    Uri as_uri() const { return Uri(value); }
    std::optional<double> as_number() const;

    auto operator<=>(const Term&) const = default;
};

struct Triple {
    Uri subject;
    Uri predicate;
    Term object;

    auto operator<=>(const Triple&) const = default;
};

namespace vocab {

inline const Uri rdf_type{std::string(kRdfPrefix) + "type"};
inline const Uri rdfs_label{std::string(kRdfsPrefix) + "label"};

inline const Uri certainty{"http://kglids.org/ontology/certainty"};

inline const Uri Source{"http://kglids.org/ontology/Source"};
inline const Uri Dataset{"http://kglids.org/ontology/Dataset"};
inline const Uri Table{"http://kglids.org/ontology/Table"};
inline const Uri Column{"http://kglids.org/ontology/Column"};
inline const Uri Pipeline{"http://kglids.org/ontology/Pipeline"};
inline const Uri Statement{"http://kglids.org/ontology/Statement"};
inline const Uri Library{"http://kglids.org/ontology/Library"};

inline const Uri is_part_of{"http://kglids.org/ontology/data/isPartOf"};
inline const Uri has_label_similarity{"http://kglids.org/ontology/data/hasLabelSimilarity"};
inline const Uri has_content_similarity{"http://kglids.org/ontology/data/hasContentSimilarity"};
inline const Uri has_pkfk_similarity{"http://kglids.org/ontology/data/hasPrimaryKeyForeignKeySimilarity"};
inline const Uri is_unionable_with{"http://kglids.org/ontology/data/isUnionableWith"};
inline const Uri is_joinable_with{"http://kglids.org/ontology/data/isJoinableWith"};
inline const Uri has_total_value_count{"http://kglids.org/ontology/data/hasTotalValueCount"};
inline const Uri has_distinct_value_count{"http://kglids.org/ontology/data/hasDistinctValueCount"};
inline const Uri has_missing_value_count{"http://kglids.org/ontology/data/hasMissingValueCount"};
inline const Uri has_data_type{"http://kglids.org/ontology/data/hasDataType"};
inline const Uri has_min_value{"http://kglids.org/ontology/data/hasMinValue"};
inline const Uri has_max_value{"http://kglids.org/ontology/data/hasMaxValue"};
inline const Uri has_mean_value{"http://kglids.org/ontology/data/hasMeanValue"};
inline const Uri has_true_ratio{"http://kglids.org/ontology/data/hasTrueRatio"};
inline const Uri has_min_length{"http://kglids.org/ontology/data/hasMinLength"};
inline const Uri has_max_length{"http://kglids.org/ontology/data/hasMaxLength"};
inline const Uri has_mean_length{"http://kglids.org/ontology/data/hasMeanLength"};

inline const Uri has_data_flow_to{"http://kglids.org/ontology/pipeline/hasDataFlowTo"};
inline const Uri has_next_statement{"http://kglids.org/ontology/pipeline/hasNextStatement"};
inline const Uri calls_library{"http://kglids.org/ontology/pipeline/callsLibrary"};
inline const Uri reads{"http://kglids.org/ontology/pipeline/reads"};
inline const Uri in_control_flow{"http://kglids.org/ontology/pipeline/inControlFlow"};
inline const Uri has_parameter{"http://kglids.org/ontology/pipeline/hasParameter"};
inline const Uri has_text{"http://kglids.org/ontology/pipeline/hasText"};
inline const Uri has_author{"http://kglids.org/ontology/pipeline/hasAuthor"};
inline const Uri has_score{"http://kglids.org/ontology/pipeline/hasScore"};
inline const Uri has_tag{"http://kglids.org/ontology/pipeline/hasTag"};
inline const Uri has_source_url{"http://kglids.org/ontology/pipeline/hasSourceURL"};
inline const Uri has_dataset{"http://kglids.org/ontology/pipeline/hasDataset"};

}  // namespace vocab

}  // namespace lids::kg
