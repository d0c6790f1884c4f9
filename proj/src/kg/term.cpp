#include "lids/kg/term.hpp"

#include "lids/error.hpp"
#include "lids/util/text.hpp"

#include <charconv>

namespace lids::kg {

namespace {

bool is_unreserved(unsigned char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '~' || c == '-';
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

}  // namespace

std::string encode_segment(std::string_view segment) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(segment.size());
    for (unsigned char c : segment) {
        if (is_unreserved(c)) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    return out;
}

std::string decode_segment(std::string_view segment) {
    std::string out;
    out.reserve(segment.size());
    for (std::size_t i = 0; i < segment.size(); ++i) {
        if (segment[i] == '%' && i + 2 < segment.size()) {
            const int hi = hex_value(segment[i + 1]);
            const int lo = hex_value(segment[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(segment[i]);
    }
    return out;
}

Uri make_resource_uri(const std::vector<std::string>& parts) {
    if (parts.empty()) throw InvalidName("resource URI needs at least one path segment");
    std::string text(kResourcePrefix);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].empty()) {
            throw InvalidName("empty path segment at position " + std::to_string(i));
        }
        if (i > 0) text.push_back('/');
        text += encode_segment(parts[i]);
    }
    return Uri(std::move(text));
}

std::vector<std::string> resource_segments(const Uri& uri) {
    if (!uri.text.starts_with(kResourcePrefix)) return {};
    std::vector<std::string> out;
    for (const auto& raw : util::split(std::string_view(uri.text).substr(kResourcePrefix.size()), '/')) {
        out.push_back(decode_segment(raw));
    }
    return out;
}

bool is_known_uri(const Uri& uri) {
    return uri.text.starts_with(kOntologyPrefix) || uri.text.starts_with(kResourcePrefix) ||
           uri.text.starts_with(kRdfPrefix) || uri.text.starts_with(kRdfsPrefix) ||
           uri.text.starts_with(kXsdPrefix);
}

std::string_view datatype_iri(Datatype dt) {
    switch (dt) {
        case Datatype::String: return "http://www.w3.org/2001/XMLSchema#string";
        case Datatype::Integer: return "http://www.w3.org/2001/XMLSchema#integer";
        case Datatype::Double: return "http://www.w3.org/2001/XMLSchema#double";
        case Datatype::Boolean: return "http://www.w3.org/2001/XMLSchema#boolean";
        case Datatype::None: break;
    }
    return {};
}

Term Term::integer(std::int64_t v) {
    return {Kind::Literal, std::to_string(v), Datatype::Integer};
}

Term Term::real(double v) {
    return {Kind::Literal, util::format_double(v), Datatype::Double};
}

Term Term::boolean(bool v) {
    return {Kind::Literal, v ? "true" : "false", Datatype::Boolean};
}

std::optional<double> Term::as_number() const {
    if (kind != Kind::Literal) return std::nullopt;
    if (datatype != Datatype::Integer && datatype != Datatype::Double) return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) return std::nullopt;
    return v;
}

}  // namespace lids::kg
