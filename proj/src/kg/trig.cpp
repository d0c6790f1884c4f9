#include "lids/kg/trig.hpp"

#include "lids/error.hpp"

#include <array>
#include <cctype>
#include <map>
#include <utility>

namespace lids::kg {

namespace {

struct PrefixDecl {
    std::string_view name;
    std::string_view ns;
};

// Declaration order is part of the output format.
constexpr std::array<PrefixDecl, 6> kPrefixes{{
    {"kglids", "http://kglids.org/ontology/"},
    {"data", "http://kglids.org/ontology/data/"},
    {"pipeline", "http://kglids.org/ontology/pipeline/"},
    {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
    {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
    {"xsd", "http://www.w3.org/2001/XMLSchema#"},
}};

bool is_simple_local(std::string_view local) {
    if (local.empty()) return false;
    const unsigned char first = static_cast<unsigned char>(local.front());
    if (!std::isalpha(first) && first != '_') return false;
    for (unsigned char c : local) {
        if (!std::isalnum(c) && c != '_' && c != '-') return false;
    }
    return true;
}

void write_iri(std::string& out, std::string_view iri) {
    const PrefixDecl* best = nullptr;
    for (const auto& p : kPrefixes) {
        if (iri.starts_with(p.ns) && is_simple_local(iri.substr(p.ns.size())) &&
            (best == nullptr || p.ns.size() > best->ns.size())) {
            best = &p;
        }
    }
    if (best != nullptr) {
        out += best->name;
        out += ':';
        out += iri.substr(best->ns.size());
        return;
    }
    out += '<';
    out += iri;
    out += '>';
}

void write_string_literal(std::string& out, std::string_view value) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    out += '"';
    for (unsigned char c : value) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20 || c == 0x7F) {
                    out += "\\u00";
                    out += kHex[c >> 4];
                    out += kHex[c & 0xF];
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

void write_term(std::string& out, const Term& t, bool prefixed) {
    if (t.is_iri()) {
        if (prefixed) {
            write_iri(out, t.value);
        } else {
            out += '<' + t.value + '>';
        }
        return;
    }
    write_string_literal(out, t.value);
    if (t.datatype == Datatype::String) return;
    out += "^^";
    if (prefixed) {
        write_iri(out, datatype_iri(t.datatype));
    } else {
        out += '<';
        out += datatype_iri(t.datatype);
        out += '>';
    }
}

void write_triple(std::string& out, const Triple& t) {
    write_iri(out, t.subject.text);
    out += ' ';
    write_iri(out, t.predicate.text);
    out += ' ';
    write_term(out, t.object, true);
}

void write_graph_body(std::string& out, const GraphStore::TripleMap& triples) {
    for (const auto& [t, certainty] : triples) {
        out += "    ";
        write_triple(out, t);
        out += " .\n";
        if (certainty) {
            out += "    << ";
            write_triple(out, t);
            out += " >> ";
            write_iri(out, vocab::certainty.text);
            out += ' ';
            write_term(out, Term::real(*certainty), true);
            out += " .\n";
        }
    }
}

// --- parser -------------------------------------------------------------

class TrigParser {
public:
    explicit TrigParser(std::string_view text) : text_(text) {}

    GraphStore parse() {
        for (;;) {
            skip_ws();
            if (at_end()) break;
            if (peek() == '@') {
                parse_at_directive();
            } else if (keyword_ahead("PREFIX")) {
                pos_ += 6;
                parse_prefix_body(false);
            } else if (keyword_ahead("BASE") || keyword_ahead("@base")) {
                fail("base IRIs are not supported");
            } else if (keyword_ahead("GRAPH")) {
                pos_ += 5;
                skip_ws();
                parse_block(parse_iri().text);
            } else if (peek() == '{') {
                parse_block(kDefaultGraph);
            } else {
                // Either `<g> { ... }` or a bare triple statement in the default graph.
                const std::size_t save = pos_;
                const std::size_t save_line = line_;
                if (peek() != '<' || peek(1) != '<') {
                    std::string iri = parse_iri().text;
                    skip_ws();
                    if (!at_end() && peek() == '{') {
                        parse_block(iri);
                        continue;
                    }
                }
                pos_ = save;
                line_ = save_line;
                parse_statement(kDefaultGraph);
                skip_ws();
                expect('.');
            }
        }
        return std::move(store_);
    }

private:
    struct Subject {
        Uri iri;
        std::optional<Triple> quoted;
    };

    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(line_, what); }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    char get() {
        const char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    void skip_ws() {
        while (!at_end()) {
            const char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                get();
            } else {
                return;
            }
        }
    }

    bool keyword_ahead(std::string_view kw) const {
        if (text_.substr(pos_, kw.size()) != kw) return false;
        const char after = pos_ + kw.size() < text_.size() ? text_[pos_ + kw.size()] : ' ';
        return std::isspace(static_cast<unsigned char>(after)) != 0;
    }

    void expect(char c) {
        skip_ws();
        if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
        get();
    }

    void parse_at_directive() {
        if (text_.substr(pos_, 7) == "@prefix") {
            pos_ += 7;
            parse_prefix_body(true);
        } else {
            fail("unsupported directive");
        }
    }

    void parse_prefix_body(bool needs_dot) {
        skip_ws();
        std::string name;
        while (!at_end() && peek() != ':') {
            const char c = peek();
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') {
                fail("bad prefix name");
            }
            name += get();
        }
        if (at_end()) fail("unterminated prefix declaration");
        get();
        skip_ws();
        prefixes_[name] = parse_iri_token();
        if (needs_dot) expect('.');
    }

    std::string parse_iri_token() {
        if (peek() != '<') fail("expected IRI");
        get();
        std::string iri;
        while (!at_end() && peek() != '>') {
            const char c = peek();
            if (c == ' ' || c == '\n' || c == '"' || c == '{' || c == '}' || c == '<') {
                fail("invalid character in IRI");
            }
            iri += get();
        }
        if (at_end()) fail("unterminated IRI");
        get();
        if (iri.empty()) fail("empty IRI");
        return iri;
    }

    std::string parse_prefixed_name() {
        std::string prefix;
        while (!at_end() && peek() != ':') {
            const char c = peek();
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') {
                fail(std::string("unexpected character '") + c + "'");
            }
            prefix += get();
        }
        if (at_end()) fail("unterminated prefixed name");
        get();
        std::string local;
        while (!at_end()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
                c == '%' || c == '.') {
                local += get();
            } else if (c == '\\' && pos_ + 1 < text_.size()) {
                get();
                local += get();
            } else {
                break;
            }
        }
        // A trailing '.' terminates the statement rather than the name.
        while (!local.empty() && local.back() == '.') {
            local.pop_back();
            --pos_;
        }
        auto it = prefixes_.find(prefix);
        if (it == prefixes_.end()) fail("undeclared prefix '" + prefix + "'");
        return it->second + local;
    }

    Uri parse_iri() {
        skip_ws();
        if (at_end()) fail("unexpected end of input");
        if (peek() == '<') return Uri(parse_iri_token());
        if (peek() == '_' && peek(1) == ':') fail("blank nodes are not supported");
        if (peek() == '[') fail("blank nodes are not supported");
        return Uri(parse_prefixed_name());
    }

    Uri parse_predicate() {
        skip_ws();
        if (peek() == 'a' && (std::isspace(static_cast<unsigned char>(peek(1))) != 0)) {
            get();
            return vocab::rdf_type;
        }
        return parse_iri();
    }

    std::string parse_string_body() {
        const char quote = get();
        const bool long_form = peek() == quote && peek(1) == quote;
        if (long_form) {
            get();
            get();
        }
        std::string value;
        for (;;) {
            if (at_end()) fail("unterminated string literal");
            const char c = peek();
            if (c == quote) {
                if (!long_form) {
                    get();
                    return value;
                }
                if (peek(1) == quote && peek(2) == quote) {
                    get();
                    get();
                    get();
                    return value;
                }
            }
            if (c == '\n' && !long_form) fail("newline in string literal");
            if (c == '\\') {
                get();
                if (at_end()) fail("dangling escape");
                const char e = get();
                switch (e) {
                    case 't': value += '\t'; break;
                    case 'n': value += '\n'; break;
                    case 'r': value += '\r'; break;
                    case 'b': value += '\b'; break;
                    case 'f': value += '\f'; break;
                    case '"': value += '"'; break;
                    case '\'': value += '\''; break;
                    case '\\': value += '\\'; break;
                    case 'u': append_utf8(value, parse_hex(4)); break;
                    case 'U': append_utf8(value, parse_hex(8)); break;
                    default: fail(std::string("unknown escape \\") + e);
                }
                continue;
            }
            value += get();
        }
    }

    std::uint32_t parse_hex(int digits) {
        std::uint32_t cp = 0;
        for (int i = 0; i < digits; ++i) {
            if (at_end()) fail("truncated unicode escape");
            const char c = get();
            cp <<= 4;
            if (c >= '0' && c <= '9') cp |= static_cast<std::uint32_t>(c - '0');
            else if (c >= 'a' && c <= 'f') cp |= static_cast<std::uint32_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') cp |= static_cast<std::uint32_t>(c - 'A' + 10);
            else fail("bad hex digit in unicode escape");
        }
        return cp;
    }

    static void append_utf8(std::string& out, std::uint32_t cp) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    Datatype datatype_from_iri(const std::string& iri) {
        for (Datatype dt : {Datatype::String, Datatype::Integer, Datatype::Double, Datatype::Boolean}) {
            if (iri == datatype_iri(dt)) return dt;
        }
        fail("unsupported datatype <" + iri + ">");
    }

    Term parse_object() {
        skip_ws();
        if (at_end()) fail("unexpected end of input");
        const char c = peek();
        if (c == '<' && peek(1) == '<') fail("quoted triples are only supported as annotation subjects");
        if (c == '"' || c == '\'') {
            std::string value = parse_string_body();
            if (peek() == '^' && peek(1) == '^') {
                pos_ += 2;
                return Term{Term::Kind::Literal, std::move(value), datatype_from_iri(parse_iri().text)};
            }
            if (peek() == '@') fail("language-tagged literals are not supported");
            return Term::string(std::move(value));
        }
        if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            return parse_number();
        }
        if (text_.substr(pos_, 4) == "true" && !is_name_char(peek(4))) {
            pos_ += 4;
            return Term::boolean(true);
        }
        if (text_.substr(pos_, 5) == "false" && !is_name_char(peek(5))) {
            pos_ += 5;
            return Term::boolean(false);
        }
        return Term::iri(parse_iri());
    }

    static bool is_name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-';
    }

    Term parse_number() {
        std::string text;
        bool is_double = false;
        if (peek() == '+' || peek() == '-') text += get();
        while (!at_end()) {
            const char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                text += get();
            } else if (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                is_double = true;
                text += get();
            } else if (c == 'e' || c == 'E') {
                is_double = true;
                text += get();
                if (peek() == '+' || peek() == '-') text += get();
            } else {
                break;
            }
        }
        if (text.empty() || text == "+" || text == "-") fail("malformed number");
        return Term{Term::Kind::Literal, text, is_double ? Datatype::Double : Datatype::Integer};
    }

    Triple parse_quoted_triple() {
        // Caller has consumed "<<".
        Uri s = parse_iri();
        Uri p = parse_predicate();
        Term o = parse_object();
        skip_ws();
        if (!(peek() == '>' && peek(1) == '>')) fail("expected '>>'");
        pos_ += 2;
        return Triple{std::move(s), std::move(p), std::move(o)};
    }

    // subject predicateObjectList, without the terminating '.'.
    void parse_statement(const std::string& graph) {
        skip_ws();
        Subject subject;
        if (peek() == '<' && peek(1) == '<') {
            pos_ += 2;
            subject.quoted = parse_quoted_triple();
        } else {
            subject.iri = parse_iri();
        }
        for (;;) {
            Uri predicate = parse_predicate();
            for (;;) {
                Term object = parse_object();
                emit(graph, subject, predicate, std::move(object));
                skip_ws();
                if (peek() == ',') {
                    get();
                    continue;
                }
                break;
            }
            skip_ws();
            if (peek() == '{' && peek(1) == '|') fail("annotation blocks are not supported");
            if (peek() != ';') return;
            while (peek() == ';') {
                get();
                skip_ws();
            }
            if (peek() == '.' || peek() == '}') return;
        }
    }

    void emit(const std::string& graph, const Subject& subject, const Uri& predicate, Term object) {
        if (!subject.quoted) {
            store_.add(Triple{subject.iri, predicate, std::move(object)}, std::nullopt, graph);
            return;
        }
        if (predicate != vocab::certainty) fail("quoted triples may only carry kglids:certainty");
        auto value = object.as_number();
        if (!value) fail("certainty must be a numeric literal");
        store_.add(*subject.quoted, *value, graph);
    }

    void parse_block(const std::string& graph) {
        expect('{');
        for (;;) {
            skip_ws();
            if (at_end()) fail("unterminated graph block");
            if (peek() == '}') {
                get();
                return;
            }
            parse_statement(graph);
            skip_ws();
            if (peek() == '.') {
                get();
            } else if (peek() != '}') {
                fail("expected '.' or '}'");
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::map<std::string, std::string> prefixes_;
    GraphStore store_;
};

}  // namespace

std::string serialize_trig_star(const GraphStore& store) {
    std::string out;
    for (const auto& p : kPrefixes) {
        out += "@prefix ";
        out += p.name;
        out += ": <";
        out += p.ns;
        out += "> .\n";
    }
    for (const auto& [name, triples] : store.graphs()) {
        if (triples.empty()) continue;
        out += '\n';
        if (name == kDefaultGraph) {
            out += "{\n";
        } else {
            write_iri(out, name);
            out += " {\n";
        }
        write_graph_body(out, triples);
        out += "}\n";
    }
    return out;
}

GraphStore parse_trig_star(std::string_view text) {
    return TrigParser(text).parse();
}

std::string serialize_ntriples(const GraphStore& store) {
    std::string out;
    auto it = store.graphs().find(kDefaultGraph);
    if (it == store.graphs().end()) return out;
    for (const auto& [t, certainty] : it->second) {
        out += '<' + t.subject.text + "> <" + t.predicate.text + "> ";
        write_term(out, t.object, false);
        out += " .\n";
    }
    return out;
}

}  // namespace lids::kg
