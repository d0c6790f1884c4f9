#include "lids/pipeline/python_ast.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <unordered_set>

namespace lids::pipeline::py {

namespace {

enum class Tok { Name, Number, String, Op, Newline, Indent, Dedent, End };

struct Token {
    Tok kind;
    std::string text;   // Name/Op/Number: source text; String: decoded value
    std::size_t begin;  // byte offsets into the source
    std::size_t end;
    std::size_t line;
};

const std::unordered_set<std::string_view>& keywords() {
    static const std::unordered_set<std::string_view> kw{
        "False", "None", "True", "and", "as", "assert", "async", "await", "break",
        "class", "continue", "def", "del", "elif", "else", "except", "finally",
        "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal",
        "not", "or", "pass", "raise", "return", "try", "while", "with", "yield"};
    return kw;
}

// --- lexer --------------------------------------------------------------

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        indents_.push_back(0);
        at_line_start_ = true;
        while (pos_ < src_.size()) {
            if (at_line_start_ && depth_ == 0) {
                if (!handle_indentation()) continue;
            }
            const char c = src_[pos_];
            if (c == '\n') {
                if (depth_ == 0) push(Tok::Newline, "\n", pos_, pos_ + 1);
                ++pos_;
                ++line_;
                at_line_start_ = true;
            } else if (c == '\r' || c == ' ' || c == '\t' || c == '\f') {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (c == '\\') {
                ++pos_;
                if (pos_ < src_.size() && src_[pos_] == '\r') ++pos_;
                if (pos_ >= src_.size() || src_[pos_] != '\n') fail("unexpected character after line continuation");
                ++pos_;
                ++line_;
            } else if (starts_string()) {
                lex_string();
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
                       static_cast<unsigned char>(c) >= 0x80) {
                lex_name();
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '.' && pos_ + 1 < src_.size() &&
                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                lex_number();
            } else {
                lex_operator();
            }
        }
        if (depth_ > 0) fail("unexpected end of file inside brackets");
        if (!tokens_.empty() && tokens_.back().kind != Tok::Newline &&
            tokens_.back().kind != Tok::Dedent) {
            push(Tok::Newline, "\n", pos_, pos_);
        }
        while (indents_.size() > 1) {
            indents_.pop_back();
            push(Tok::Dedent, "", pos_, pos_);
        }
        push(Tok::End, "", pos_, pos_);
        return std::move(tokens_);
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxIssue(line_, msg); }

    void push(Tok kind, std::string text, std::size_t begin, std::size_t end) {
        tokens_.push_back(Token{kind, std::move(text), begin, end, line_});
    }

    // Returns false when the line was blank or comment-only and consumed.
    bool handle_indentation() {
        std::size_t col = 0;
        std::size_t p = pos_;
        while (p < src_.size()) {
            if (src_[p] == ' ') {
                ++col;
            } else if (src_[p] == '\t') {
                col = (col / 8 + 1) * 8;
            } else if (src_[p] == '\f' || src_[p] == '\r') {
                // ignored
            } else {
                break;
            }
            ++p;
        }
        if (p >= src_.size() || src_[p] == '\n' || src_[p] == '#') {
            while (p < src_.size() && src_[p] != '\n') ++p;
            if (p < src_.size()) {
                ++p;
                ++line_;
            }
            pos_ = p;
            return false;
        }
        if (src_[p] == '\\' && p + 1 < src_.size() && src_[p + 1] == '\n') {
            // A continuation at the start of a logical line does not indent.
            pos_ = p;
            at_line_start_ = false;
            return true;
        }
        pos_ = p;
        at_line_start_ = false;
        if (col > indents_.back()) {
            indents_.push_back(col);
            push(Tok::Indent, "", p, p);
        } else {
            while (col < indents_.back()) {
                indents_.pop_back();
                push(Tok::Dedent, "", p, p);
            }
            if (col != indents_.back()) fail("unindent does not match any outer indentation level");
        }
        return true;
    }

    bool starts_string() const {
        std::size_t p = pos_;
        std::size_t prefix = 0;
        while (p < src_.size() && prefix < 2 && std::strchr("rRbBuUfF", src_[p]) != nullptr && src_[p] != '\0') {
            ++p;
            ++prefix;
        }
        return p < src_.size() && (src_[p] == '\'' || src_[p] == '"');
    }

    void lex_string() {
        const std::size_t begin = pos_;
        const std::size_t start_line = line_;
        bool raw = false;
        while (src_[pos_] != '\'' && src_[pos_] != '"') {
            if (src_[pos_] == 'r' || src_[pos_] == 'R') raw = true;
            ++pos_;
        }
        const char quote = src_[pos_];
        const bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote;
        pos_ += triple ? 3 : 1;
        std::string value;
        for (;;) {
            if (pos_ >= src_.size()) throw SyntaxIssue(start_line, "unterminated string literal");
            const char c = src_[pos_];
            if (c == quote) {
                if (!triple) {
                    ++pos_;
                    break;
                }
                if (pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote) {
                    pos_ += 3;
                    break;
                }
            }
            if (c == '\n') {
                if (!triple) throw SyntaxIssue(start_line, "unterminated string literal");
                ++line_;
            }
            if (c == '\\' && pos_ + 1 < src_.size()) {
                const char e = src_[pos_ + 1];
                if (raw) {
                    value += c;
                    value += e;
                } else {
                    switch (e) {
                        case 'n': value += '\n'; break;
                        case 't': value += '\t'; break;
                        case 'r': value += '\r'; break;
                        case '\\': value += '\\'; break;
                        case '\'': value += '\''; break;
                        case '"': value += '"'; break;
                        case '\n': break;
                        default:
                            value += c;
                            value += e;
                    }
                }
                if (e == '\n') ++line_;
                pos_ += 2;
                continue;
            }
            value += c;
            ++pos_;
        }
        tokens_.push_back(Token{Tok::String, std::move(value), begin, pos_, start_line});
    }

    void lex_name() {
        const std::size_t begin = pos_;
        while (pos_ < src_.size()) {
            const unsigned char c = static_cast<unsigned char>(src_[pos_]);
            if (std::isalnum(c) || c == '_' || c >= 0x80) {
                ++pos_;
            } else {
                break;
            }
        }
        push(Tok::Name, std::string(src_.substr(begin, pos_ - begin)), begin, pos_);
    }

    void lex_number() {
        const std::size_t begin = pos_;
        auto digit_like = [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
        };
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if ((c == '+' || c == '-') && pos_ > begin &&
                (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E') &&
                !(src_[begin] == '0' && begin + 1 < src_.size() &&
                  (src_[begin + 1] == 'x' || src_[begin + 1] == 'X'))) {
                ++pos_;
            } else if (digit_like(c)) {
                ++pos_;
            } else {
                break;
            }
        }
        push(Tok::Number, std::string(src_.substr(begin, pos_ - begin)), begin, pos_);
    }

    void lex_operator() {
        static constexpr std::array<std::string_view, 23> kLong{
            "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>", "<=",
            ">=", "==", "!=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^="};
        for (auto op : kLong) {
            if (src_.substr(pos_, op.size()) == op) {
                push(Tok::Op, std::string(op), pos_, pos_ + op.size());
                pos_ += op.size();
                return;
            }
        }
        if (src_.substr(pos_, 2) == "@=") {
            push(Tok::Op, "@=", pos_, pos_ + 2);
            pos_ += 2;
            return;
        }
        const char c = src_[pos_];
        if (std::strchr("()[]{},:;.+-*/%<>=&|^~@", c) == nullptr || c == '\0') {
            fail(std::string("invalid character '") + c + "'");
        }
        if (c == '(' || c == '[' || c == '{') ++depth_;
        if (c == ')' || c == ']' || c == '}') {
            if (depth_ == 0) fail(std::string("unmatched '") + c + "'");
            --depth_;
        }
        push(Tok::Op, std::string(1, c), pos_, pos_ + 1);
        ++pos_;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    int depth_ = 0;
    bool at_line_start_ = true;
    std::vector<std::size_t> indents_;
    std::vector<Token> tokens_;
};

// --- parser -------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    std::vector<Stmt> parse_file() {
        std::vector<Stmt> body;
        while (!at(Tok::End)) {
            if (at(Tok::Newline)) {
                advance();
                continue;
            }
            parse_statement(body);
        }
        return body;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxIssue(cur().line, msg); }

    const Token& cur() const { return toks_[pos_]; }
    const Token& ahead(std::size_t n) const { return toks_[std::min(pos_ + n, toks_.size() - 1)]; }
    bool at(Tok kind) const { return cur().kind == kind; }
    bool at_op(std::string_view op) const { return cur().kind == Tok::Op && cur().text == op; }
    bool at_kw(std::string_view kw) const { return cur().kind == Tok::Name && cur().text == kw; }
    bool at_name() const { return cur().kind == Tok::Name && !keywords().contains(cur().text); }

    const Token& advance() {
        last_end_ = toks_[pos_].end;
        return toks_[pos_++];
    }

    void expect_op(std::string_view op) {
        if (!at_op(op)) fail("expected '" + std::string(op) + "' but found '" + describe() + "'");
        advance();
    }
    void expect_kw(std::string_view kw) {
        if (!at_kw(kw)) fail("expected '" + std::string(kw) + "'");
        advance();
    }
    std::string expect_name() {
        if (!at_name()) fail("expected a name but found '" + describe() + "'");
        return advance().text;
    }

    std::string describe() const {
        switch (cur().kind) {
            case Tok::Newline: return "newline";
            case Tok::Indent: return "indent";
            case Tok::Dedent: return "dedent";
            case Tok::End: return "end of file";
            default: return cur().text;
        }
    }

    ExprPtr make(ExprKind kind, std::size_t begin, std::size_t line) {
        auto e = std::make_unique<Expr>();
        e->kind = kind;
        e->span = Span{begin, last_end_, line};
        return e;
    }
    void close(Expr& e) { e.span.end = last_end_; }

    // --- statements ---

    void parse_statement(std::vector<Stmt>& out) {
        if (at_kw("if") || at_kw("while") || at_kw("for") || at_kw("try") || at_kw("with") ||
            at_kw("def") || at_kw("class") || at_op("@") || at_kw("async")) {
            out.push_back(parse_compound());
            return;
        }
        parse_simple_line(out);
    }

    void parse_simple_line(std::vector<Stmt>& out) {
        for (;;) {
            out.push_back(parse_small_statement());
            if (at_op(";")) {
                advance();
                if (at(Tok::Newline)) break;
                continue;
            }
            break;
        }
        if (!at(Tok::Newline)) fail("invalid syntax near '" + describe() + "'");
        advance();
    }

    Stmt parse_small_statement() {
        Stmt s;
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        auto finish = [&](Stmt& st) { st.span = Span{begin, last_end_, line}; };

        if (at_kw("pass") || at_kw("break") || at_kw("continue")) {
            const std::string kw = advance().text;
            s.kind = kw == "pass" ? StmtKind::Pass : kw == "break" ? StmtKind::Break : StmtKind::Continue;
        } else if (at_kw("del")) {
            advance();
            s.kind = StmtKind::Delete;
            s.exprs.push_back(parse_testlist_star());
        } else if (at_kw("return")) {
            advance();
            s.kind = StmtKind::Return;
            if (!at_statement_end()) s.value = parse_testlist_star();
        } else if (at_kw("raise")) {
            advance();
            s.kind = StmtKind::Raise;
            if (!at_statement_end()) {
                s.exprs.push_back(parse_test());
                if (at_kw("from")) {
                    advance();
                    s.exprs.push_back(parse_test());
                }
            }
        } else if (at_kw("global") || at_kw("nonlocal")) {
            advance();
            s.kind = StmtKind::Global;
            expect_name();
            while (at_op(",")) {
                advance();
                expect_name();
            }
        } else if (at_kw("assert")) {
            advance();
            s.kind = StmtKind::Assert;
            s.exprs.push_back(parse_test());
            if (at_op(",")) {
                advance();
                s.exprs.push_back(parse_test());
            }
        } else if (at_kw("import")) {
            advance();
            s.kind = StmtKind::Import;
            for (;;) {
                ImportedName n;
                n.name = parse_dotted_name();
                if (at_kw("as")) {
                    advance();
                    n.alias = expect_name();
                }
                s.imports.push_back(std::move(n));
                if (!at_op(",")) break;
                advance();
            }
        } else if (at_kw("from")) {
            advance();
            s.kind = StmtKind::ImportFrom;
            while (at_op(".") || at_op("...")) s.level += static_cast<int>(advance().text.size());
            if (!at_kw("import")) s.module = parse_dotted_name();
            if (s.module.empty() && s.level == 0) fail("expected module name");
            expect_kw("import");
            if (at_op("*")) {
                advance();
                s.imports.push_back(ImportedName{"*", std::nullopt});
            } else {
                const bool paren = at_op("(");
                if (paren) advance();
                for (;;) {
                    ImportedName n;
                    n.name = expect_name();
                    if (at_kw("as")) {
                        advance();
                        n.alias = expect_name();
                    }
                    s.imports.push_back(std::move(n));
                    if (!at_op(",")) break;
                    advance();
                    if (paren && at_op(")")) break;
                }
                if (paren) expect_op(")");
            }
        } else {
            parse_expression_statement(s);
        }
        finish(s);
        return s;
    }

    bool at_statement_end() const { return at(Tok::Newline) || at_op(";") || at(Tok::End); }

    std::string parse_dotted_name() {
        std::string name = expect_name();
        while (at_op(".")) {
            advance();
            name += '.';
            name += expect_name();
        }
        return name;
    }

    static bool is_augassign(std::string_view op) {
        static const std::unordered_set<std::string_view> ops{
            "+=", "-=", "*=", "/=", "//=", "%=", "**=", ">>=", "<<=", "&=", "|=", "^=", "@="};
        return ops.contains(op);
    }

    void parse_expression_statement(Stmt& s) {
        ExprPtr first = parse_testlist_star();
        if (at_op(":")) {
            advance();
            s.kind = StmtKind::AnnAssign;
            s.targets.push_back(std::move(first));
            s.exprs.push_back(parse_test());  // annotation
            if (at_op("=")) {
                advance();
                s.value = at_kw("yield") ? parse_yield() : parse_testlist_star();
            }
            return;
        }
        if (cur().kind == Tok::Op && is_augassign(cur().text)) {
            advance();
            s.kind = StmtKind::AugAssign;
            s.targets.push_back(std::move(first));
            s.value = at_kw("yield") ? parse_yield() : parse_testlist_star();
            return;
        }
        if (at_op("=")) {
            s.kind = StmtKind::Assign;
            std::vector<ExprPtr> chain;
            chain.push_back(std::move(first));
            while (at_op("=")) {
                advance();
                chain.push_back(at_kw("yield") ? parse_yield() : parse_testlist_star());
            }
            s.value = std::move(chain.back());
            chain.pop_back();
            for (auto& t : chain) check_target(*t);
            s.targets = std::move(chain);
            return;
        }
        s.kind = StmtKind::Expr;
        s.value = std::move(first);
    }

    void check_target(const Expr& e) const {
        switch (e.kind) {
            case ExprKind::Name:
            case ExprKind::Attribute:
            case ExprKind::Subscript:
                return;
            case ExprKind::Starred:
                check_target(*e.children[0]);
                return;
            case ExprKind::Collection:
                if (e.bracket != '{') {
                    for (const auto& c : e.children) check_target(*c);
                    return;
                }
                break;
            default:
                break;
        }
        throw SyntaxIssue(e.span.line, "cannot assign to expression");
    }

    std::vector<Stmt> parse_suite() {
        std::vector<Stmt> body;
        if (!at(Tok::Newline)) {
            parse_simple_line(body);
            return body;
        }
        advance();
        if (!at(Tok::Indent)) fail("expected an indented block");
        advance();
        while (!at(Tok::Dedent) && !at(Tok::End)) {
            if (at(Tok::Newline)) {
                advance();
                continue;
            }
            parse_statement(body);
        }
        if (at(Tok::Dedent)) advance();
        return body;
    }

    Span header_span(std::size_t begin, std::size_t line) const { return Span{begin, last_end_, line}; }

    Stmt parse_compound() {
        Stmt s;
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;

        while (at_op("@")) {
            advance();
            s.decorators.push_back(parse_namedexpr_test());
            if (!at(Tok::Newline)) fail("expected newline after decorator");
            advance();
        }
        if (!s.decorators.empty() && !(at_kw("def") || at_kw("class") || at_kw("async"))) {
            fail("decorator must precede a function or class");
        }
        if (at_kw("async")) {
            advance();
            if (!(at_kw("def") || at_kw("for") || at_kw("with"))) fail("expected def, for or with after async");
        }

        const std::size_t hbegin = cur().begin;
        const std::size_t hline = cur().line;
        const std::string kw = cur().text;

        if (kw == "if") {
            s.kind = StmtKind::If;
            for (;;) {
                Clause c;
                const std::size_t cb = cur().begin;
                const std::size_t cl = cur().line;
                c.keyword = advance().text;
                if (c.keyword != "else") c.exprs.push_back(parse_namedexpr_test());
                c.header = header_span(cb, cl);
                expect_op(":");
                c.body = parse_suite();
                s.clauses.push_back(std::move(c));
                if (at_kw("elif") && s.clauses.back().keyword != "else") continue;
                if (at_kw("else") && s.clauses.back().keyword != "else") continue;
                break;
            }
        } else if (kw == "while") {
            s.kind = StmtKind::While;
            Clause c;
            c.keyword = advance().text;
            c.exprs.push_back(parse_namedexpr_test());
            c.header = header_span(hbegin, hline);
            expect_op(":");
            c.body = parse_suite();
            s.clauses.push_back(std::move(c));
            parse_else(s);
        } else if (kw == "for") {
            s.kind = StmtKind::For;
            Clause c;
            c.keyword = advance().text;
            auto target = parse_exprlist();
            check_target(*target);
            c.targets.push_back(std::move(target));
            expect_kw("in");
            c.exprs.push_back(parse_testlist());
            c.header = header_span(hbegin, hline);
            expect_op(":");
            c.body = parse_suite();
            s.clauses.push_back(std::move(c));
            parse_else(s);
        } else if (kw == "try") {
            s.kind = StmtKind::Try;
            Clause c;
            c.keyword = advance().text;
            c.header = header_span(hbegin, hline);
            expect_op(":");
            c.body = parse_suite();
            s.clauses.push_back(std::move(c));
            bool handlers = false;
            while (at_kw("except")) {
                handlers = true;
                Clause h;
                const std::size_t cb = cur().begin;
                const std::size_t cl = cur().line;
                h.keyword = advance().text;
                if (at_op("*")) advance();
                if (!at_op(":")) {
                    h.exprs.push_back(parse_test());
                    if (at_kw("as")) {
                        advance();
                        auto name = make(ExprKind::Name, cur().begin, cur().line);
                        name->text = expect_name();
                        close(*name);
                        h.targets.push_back(std::move(name));
                    } else if (at_op(",")) {
                        advance();
                        h.exprs.push_back(parse_test());
                    }
                }
                h.header = header_span(cb, cl);
                expect_op(":");
                h.body = parse_suite();
                s.clauses.push_back(std::move(h));
            }
            if (handlers) parse_else(s);
            if (at_kw("finally")) {
                Clause f;
                const std::size_t cb = cur().begin;
                const std::size_t cl = cur().line;
                f.keyword = advance().text;
                f.header = header_span(cb, cl);
                expect_op(":");
                f.body = parse_suite();
                s.clauses.push_back(std::move(f));
            } else if (!handlers) {
                fail("expected 'except' or 'finally' block");
            }
        } else if (kw == "with") {
            s.kind = StmtKind::With;
            Clause c;
            c.keyword = advance().text;
            for (;;) {
                c.exprs.push_back(parse_test());
                if (at_kw("as")) {
                    advance();
                    auto target = parse_expr();
                    check_target(*target);
                    c.targets.push_back(std::move(target));
                }
                if (!at_op(",")) break;
                advance();
            }
            c.header = header_span(hbegin, hline);
            expect_op(":");
            c.body = parse_suite();
            s.clauses.push_back(std::move(c));
        } else if (kw == "def") {
            s.kind = StmtKind::FunctionDef;
            Clause c;
            c.keyword = advance().text;
            s.name = expect_name();
            expect_op("(");
            parse_parameters(s, c, ")");
            expect_op(")");
            if (at_op("->")) {
                advance();
                parse_test();
            }
            c.header = header_span(hbegin, hline);
            expect_op(":");
            c.body = parse_suite();
            s.clauses.push_back(std::move(c));
        } else if (kw == "class") {
            s.kind = StmtKind::ClassDef;
            Clause c;
            c.keyword = advance().text;
            s.name = expect_name();
            if (at_op("(")) {
                advance();
                while (!at_op(")")) {
                    if (at_op("*") || at_op("**")) advance();
                    if (at_name() && ahead(1).kind == Tok::Op && ahead(1).text == "=") {
                        advance();
                        advance();
                    }
                    c.exprs.push_back(parse_test());
                    if (!at_op(",")) break;
                    advance();
                }
                expect_op(")");
            }
            c.header = header_span(hbegin, hline);
            expect_op(":");
            c.body = parse_suite();
            s.clauses.push_back(std::move(c));
        } else {
            fail("invalid syntax");
        }
        s.span = s.clauses.empty() ? Span{begin, last_end_, line} : s.clauses.front().header;
        return s;
    }

    void parse_else(Stmt& s) {
        if (!at_kw("else")) return;
        Clause c;
        const std::size_t cb = cur().begin;
        const std::size_t cl = cur().line;
        c.keyword = advance().text;
        c.header = header_span(cb, cl);
        expect_op(":");
        c.body = parse_suite();
        s.clauses.push_back(std::move(c));
    }

    // Parameter list for def (closing ")") or lambda (closing ":").
    void parse_parameters(Stmt& s, Clause& c, std::string_view closer) {
        while (!at_op(closer)) {
            if (at_op("/")) {
                advance();
            } else if (at_op("*") || at_op("**")) {
                advance();
                if (at_name()) s.params.push_back(expect_name());
                if (closer == ")" && at_op(":")) {
                    advance();
                    parse_test();
                }
            } else {
                s.params.push_back(expect_name());
                if (closer == ")" && at_op(":")) {
                    advance();
                    parse_test();
                }
                if (at_op("=")) {
                    advance();
                    c.exprs.push_back(parse_test());
                }
            }
            if (!at_op(",")) break;
            advance();
        }
    }

    // --- expressions ---

    ExprPtr parse_yield() {
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        expect_kw("yield");
        auto e = make(ExprKind::Operation, begin, line);
        e->text = "yield";
        if (at_kw("from")) {
            advance();
            e->children.push_back(parse_test());
        } else if (!at_statement_end() && !at_op(")") && !at_op("=")) {
            e->children.push_back(parse_testlist_star());
        }
        close(*e);
        return e;
    }

    // Comma-separated list that becomes a tuple when a comma is present.
    template <typename ItemFn>
    ExprPtr parse_tuple_of(ItemFn item, bool allow_trailing = true, bool slices = false) {
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        ExprPtr first = item();
        if (!at_op(",")) return first;
        auto tuple = make(ExprKind::Collection, begin, line);
        tuple->bracket = '(';
        tuple->children.push_back(std::move(first));
        while (at_op(",")) {
            advance();
            if (!allow_trailing || !(starts_expression() || (slices && at_op(":")))) break;
            tuple->children.push_back(item());
        }
        close(*tuple);
        return tuple;
    }

    bool starts_expression() const {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::Name:
                return !keywords().contains(t.text) || t.text == "not" || t.text == "lambda" ||
                       t.text == "None" || t.text == "True" || t.text == "False" || t.text == "await" ||
                       t.text == "yield";
            case Tok::Number:
            case Tok::String:
                return true;
            case Tok::Op:
                return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" || t.text == "+" ||
                       t.text == "~" || t.text == "*" || t.text == "**" || t.text == "...";
            default:
                return false;
        }
    }

    ExprPtr parse_testlist_star() {
        return parse_tuple_of([this] { return at_op("*") ? parse_star_expr() : parse_namedexpr_test(); });
    }
    ExprPtr parse_testlist() {
        return parse_tuple_of([this] { return parse_test(); });
    }
    ExprPtr parse_exprlist() {
        return parse_tuple_of([this] { return at_op("*") ? parse_star_expr() : parse_expr(); });
    }

    ExprPtr parse_star_expr() {
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        const int star = cur().text == "**" ? 2 : 1;
        advance();
        auto e = make(ExprKind::Starred, begin, line);
        e->text = star == 2 ? "**" : "*";
        e->children.push_back(parse_expr());
        close(*e);
        return e;
    }

    ExprPtr parse_namedexpr_test() {
        if (at_name() && ahead(1).kind == Tok::Op && ahead(1).text == ":=") {
            const std::size_t begin = cur().begin;
            const std::size_t line = cur().line;
            auto e = make(ExprKind::NamedExpr, begin, line);
            e->text = advance().text;
            advance();
            e->children.push_back(parse_test());
            close(*e);
            return e;
        }
        return parse_test();
    }

    ExprPtr parse_test() {
        if (at_kw("lambda")) return parse_lambda();
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        ExprPtr cond_true = parse_or();
        if (at_kw("if")) {
            advance();
            auto e = make(ExprKind::Operation, begin, line);
            e->text = "ifexp";
            e->children.push_back(std::move(cond_true));
            e->children.push_back(parse_or());
            expect_kw("else");
            e->children.push_back(parse_test());
            close(*e);
            return e;
        }
        return cond_true;
    }

    ExprPtr parse_test_nocond() {
        if (at_kw("lambda")) return parse_lambda();
        return parse_or();
    }

    ExprPtr parse_lambda() {
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        expect_kw("lambda");
        Stmt scratch;
        Clause defaults;
        parse_parameters(scratch, defaults, ":");
        expect_op(":");
        auto e = make(ExprKind::Lambda, begin, line);
        e->bound = std::move(scratch.params);
        for (auto& d : defaults.exprs) e->children.push_back(std::move(d));
        e->children.push_back(parse_test());
        close(*e);
        return e;
    }

    ExprPtr binary(ExprPtr lhs, std::string op, ExprPtr rhs, std::size_t begin, std::size_t line) {
        auto e = make(ExprKind::Operation, begin, line);
        e->text = std::move(op);
        e->children.push_back(std::move(lhs));
        e->children.push_back(std::move(rhs));
        close(*e);
        return e;
    }

    ExprPtr parse_or() {
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        ExprPtr lhs = parse_and();
        while (at_kw("or")) {
            advance();
            lhs = binary(std::move(lhs), "or", parse_and(), begin, line);
        }
        return lhs;
    }

    ExprPtr parse_and() {
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        ExprPtr lhs = parse_not();
        while (at_kw("and")) {
            advance();
            lhs = binary(std::move(lhs), "and", parse_not(), begin, line);
        }
        return lhs;
    }

    ExprPtr parse_not() {
        if (at_kw("not")) {
            const std::size_t begin = cur().begin;
            const std::size_t line = cur().line;
            advance();
            auto e = make(ExprKind::Operation, begin, line);
            e->text = "not";
            e->children.push_back(parse_not());
            close(*e);
            return e;
        }
        return parse_comparison();
    }

    ExprPtr parse_comparison() {
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        ExprPtr lhs = parse_expr();
        for (;;) {
            std::string op;
            if (cur().kind == Tok::Op &&
                (cur().text == "<" || cur().text == ">" || cur().text == "==" || cur().text == ">=" ||
                 cur().text == "<=" || cur().text == "!=")) {
                op = advance().text;
            } else if (at_kw("in")) {
                op = advance().text;
            } else if (at_kw("not") && ahead(1).kind == Tok::Name && ahead(1).text == "in") {
                advance();
                advance();
                op = "not in";
            } else if (at_kw("is")) {
                advance();
                op = "is";
                if (at_kw("not")) {
                    advance();
                    op = "is not";
                }
            } else {
                return lhs;
            }
            lhs = binary(std::move(lhs), op, parse_expr(), begin, line);
        }
    }

    template <typename Next>
    ExprPtr parse_left_assoc(std::initializer_list<std::string_view> ops, Next next) {
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        ExprPtr lhs = next();
        for (;;) {
            bool matched = false;
            for (auto op : ops) {
                if (at_op(op)) {
                    std::string text = advance().text;
                    lhs = binary(std::move(lhs), std::move(text), next(), begin, line);
                    matched = true;
                    break;
                }
            }
            if (!matched) return lhs;
        }
    }

    ExprPtr parse_expr() {
        return parse_left_assoc({"|"}, [this] {
            return parse_left_assoc({"^"}, [this] {
                return parse_left_assoc({"&"}, [this] {
                    return parse_left_assoc({"<<", ">>"}, [this] {
                        return parse_left_assoc({"+", "-"}, [this] {
                            return parse_left_assoc({"*", "/", "//", "%", "@"}, [this] { return parse_factor(); });
                        });
                    });
                });
            });
        });
    }

    ExprPtr parse_factor() {
        if (at_op("+") || at_op("-") || at_op("~")) {
            const std::size_t begin = cur().begin;
            const std::size_t line = cur().line;
            auto e = make(ExprKind::Operation, begin, line);
            e->text = advance().text;
            e->children.push_back(parse_factor());
            close(*e);
            return e;
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        ExprPtr base;
        if (at_kw("await")) {
            advance();
            base = make(ExprKind::Operation, begin, line);
            base->text = "await";
            base->children.push_back(parse_primary());
            close(*base);
        } else {
            base = parse_primary();
        }
        if (at_op("**")) {
            advance();
            return binary(std::move(base), "**", parse_factor(), begin, line);
        }
        return base;
    }

    ExprPtr parse_primary() {
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        ExprPtr e = parse_atom();
        for (;;) {
            if (at_op("(")) {
                advance();
                auto call = make(ExprKind::Call, begin, line);
                call->children.push_back(std::move(e));
                parse_arguments(*call);
                expect_op(")");
                close(*call);
                e = std::move(call);
            } else if (at_op("[")) {
                advance();
                auto sub = make(ExprKind::Subscript, begin, line);
                sub->children.push_back(std::move(e));
                sub->children.push_back(parse_subscript_list());
                expect_op("]");
                close(*sub);
                e = std::move(sub);
            } else if (at_op(".")) {
                advance();
                auto attr = make(ExprKind::Attribute, begin, line);
                attr->children.push_back(std::move(e));
                if (cur().kind != Tok::Name) fail("expected attribute name");
                attr->text = advance().text;
                close(*attr);
                e = std::move(attr);
            } else {
                return e;
            }
        }
    }

    void parse_arguments(Expr& call) {
        while (!at_op(")")) {
            Argument arg;
            if (at_op("*") || at_op("**")) {
                arg.star = cur().text == "**" ? 2 : 1;
                advance();
                arg.value = parse_test();
            } else if (at_name() && ahead(1).kind == Tok::Op && ahead(1).text == "=") {
                arg.keyword = advance().text;
                advance();
                arg.value = parse_test();
            } else {
                const std::size_t begin = cur().begin;
                const std::size_t line = cur().line;
                arg.value = parse_namedexpr_test();
                if (at_kw("for") || at_kw("async")) {
                    arg.value = parse_comprehension(std::move(arg.value), nullptr, '(', begin, line);
                }
            }
            call.args.push_back(std::move(arg));
            if (!at_op(",")) break;
            advance();
        }
    }

    ExprPtr parse_subscript_list() {
        return parse_tuple_of([this] { return parse_subscript(); }, true, true);
    }

    ExprPtr parse_subscript() {
        const std::size_t begin = cur().begin;
        const std::size_t line = cur().line;
        ExprPtr lower;
        if (!at_op(":")) {
            lower = at_op("*") ? parse_star_expr() : parse_namedexpr_test();
            if (!at_op(":")) return lower;
        }
        auto slice = make(ExprKind::Slice, begin, line);
        if (lower) slice->children.push_back(std::move(lower));
        expect_op(":");
        if (!at_op(":") && !at_op("]") && !at_op(",")) slice->children.push_back(parse_test());
        if (at_op(":")) {
            advance();
            if (!at_op("]") && !at_op(",")) slice->children.push_back(parse_test());
        }
        close(*slice);
        return slice;
    }

    // element [value] followed by one or more `for ... in ... [if ...]`.
    ExprPtr parse_comprehension(ExprPtr element, ExprPtr value, char bracket, std::size_t begin,
                                std::size_t line) {
        auto comp = make(ExprKind::Comprehension, begin, line);
        comp->bracket = bracket;
        comp->children.push_back(std::move(element));
        if (value) {
            comp->is_dict = true;
            comp->children.push_back(std::move(value));
        }
        while (at_kw("for") || at_kw("async")) {
            if (at_kw("async")) advance();
            expect_kw("for");
            auto target = parse_exprlist();
            collect_bound(*target, comp->bound);
            comp->children.push_back(std::move(target));
            expect_kw("in");
            comp->children.push_back(parse_or());
            while (at_kw("if")) {
                advance();
                comp->children.push_back(parse_test_nocond());
            }
        }
        close(*comp);
        return comp;
    }

    static void collect_bound(const Expr& target, std::vector<std::string>& out) {
        if (target.kind == ExprKind::Name) {
            out.push_back(target.text);
            return;
        }
        for (const auto& c : target.children) collect_bound(*c, out);
    }

    ExprPtr parse_atom() {
        const Token& t = cur();
        const std::size_t begin = t.begin;
        const std::size_t line = t.line;
        switch (t.kind) {
            case Tok::Name: {
                if (t.text == "None" || t.text == "True" || t.text == "False") {
                    advance();
                    auto e = make(ExprKind::Constant, begin, line);
                    e->text = toks_[pos_ - 1].text;
                    return e;
                }
                if (keywords().contains(t.text)) fail("invalid syntax near '" + t.text + "'");
                advance();
                auto e = make(ExprKind::Name, begin, line);
                e->text = toks_[pos_ - 1].text;
                return e;
            }
            case Tok::Number: {
                advance();
                auto e = make(ExprKind::Constant, begin, line);
                e->text = toks_[pos_ - 1].text;
                return e;
            }
            case Tok::String: {
                std::string value;
                while (at(Tok::String)) value += advance().text;
                auto e = make(ExprKind::String, begin, line);
                e->text = std::move(value);
                return e;
            }
            case Tok::Op:
                if (t.text == "(") return parse_paren(begin, line);
                if (t.text == "[") return parse_list(begin, line);
                if (t.text == "{") return parse_brace(begin, line);
                if (t.text == "...") {
                    advance();
                    auto e = make(ExprKind::Constant, begin, line);
                    e->text = "...";
                    return e;
                }
                break;
            default:
                break;
        }
        fail("invalid syntax near '" + describe() + "'");
    }

    ExprPtr parse_paren(std::size_t begin, std::size_t line) {
        advance();
        if (at_op(")")) {
            advance();
            auto e = make(ExprKind::Collection, begin, line);
            e->bracket = '(';
            return e;
        }
        if (at_kw("yield")) {
            auto y = parse_yield();
            expect_op(")");
            return y;
        }
        ExprPtr first = at_op("*") ? parse_star_expr() : parse_namedexpr_test();
        if (at_kw("for") || at_kw("async")) {
            auto comp = parse_comprehension(std::move(first), nullptr, '(', begin, line);
            expect_op(")");
            close(*comp);
            return comp;
        }
        if (at_op(")")) {
            advance();
            // Parenthesized expression keeps its inner node but widens the span.
            first->span.begin = begin;
            first->span.end = last_end_;
            return first;
        }
        auto tuple = make(ExprKind::Collection, begin, line);
        tuple->bracket = '(';
        tuple->children.push_back(std::move(first));
        while (at_op(",")) {
            advance();
            if (at_op(")")) break;
            tuple->children.push_back(at_op("*") ? parse_star_expr() : parse_namedexpr_test());
        }
        expect_op(")");
        close(*tuple);
        return tuple;
    }

    ExprPtr parse_list(std::size_t begin, std::size_t line) {
        advance();
        auto list = make(ExprKind::Collection, begin, line);
        list->bracket = '[';
        if (at_op("]")) {
            advance();
            close(*list);
            return list;
        }
        ExprPtr first = at_op("*") ? parse_star_expr() : parse_namedexpr_test();
        if (at_kw("for") || at_kw("async")) {
            auto comp = parse_comprehension(std::move(first), nullptr, '[', begin, line);
            expect_op("]");
            close(*comp);
            return comp;
        }
        list->children.push_back(std::move(first));
        while (at_op(",")) {
            advance();
            if (at_op("]")) break;
            list->children.push_back(at_op("*") ? parse_star_expr() : parse_namedexpr_test());
        }
        expect_op("]");
        close(*list);
        return list;
    }

    ExprPtr parse_brace(std::size_t begin, std::size_t line) {
        advance();
        auto coll = make(ExprKind::Collection, begin, line);
        coll->bracket = '{';
        if (at_op("}")) {
            advance();
            coll->is_dict = true;
            close(*coll);
            return coll;
        }
        auto parse_item = [this](bool& is_dict_item, ExprPtr& value) -> ExprPtr {
            if (at_op("**")) {
                is_dict_item = true;
                return parse_star_expr();
            }
            if (at_op("*")) return parse_star_expr();
            ExprPtr key = parse_test();
            if (at_op(":")) {
                advance();
                is_dict_item = true;
                value = parse_test();
            }
            return key;
        };
        bool is_dict = false;
        ExprPtr value;
        ExprPtr first = parse_item(is_dict, value);
        if (at_kw("for") || at_kw("async")) {
            auto comp = parse_comprehension(std::move(first), std::move(value), '{', begin, line);
            expect_op("}");
            close(*comp);
            return comp;
        }
        coll->is_dict = is_dict;
        coll->children.push_back(std::move(first));
        if (value) coll->children.push_back(std::move(value));
        while (at_op(",")) {
            advance();
            if (at_op("}")) break;
            ExprPtr v;
            bool d = false;
            coll->children.push_back(parse_item(d, v));
            if (v) coll->children.push_back(std::move(v));
        }
        expect_op("}");
        close(*coll);
        return coll;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::size_t last_end_ = 0;
};

}  // namespace

Module parse_module(std::string source) {
    Module m;
    m.source = std::move(source);
    auto tokens = Lexer(m.source).run();
    m.body = Parser(std::move(tokens)).parse_file();
    return m;
}

}  // namespace lids::pipeline::py
