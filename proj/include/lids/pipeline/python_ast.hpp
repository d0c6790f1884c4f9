#pragma once

// Syntax tree for the subset of Python 3 that data-science scripts use.
// Nodes keep byte spans into the original source so statement text can be
// reproduced verbatim; nothing is evaluated.

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lids::pipeline::py {

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t line = 1;
};

enum class ExprKind {
    Name,
    Attribute,   // children[0].text
    Call,        // children[0](args)
    Subscript,   // children[0][children[1]]
    String,      // text = decoded value
    Constant,    // numbers, True/False/None, Ellipsis; text = source token
    Collection,  // list/tuple/set/dict displays; bracket tells which
    Operation,   // unary/binary/boolean/comparison/conditional/await/yield
    Lambda,      // bound = parameters, children = defaults + body
    Comprehension,  // bound = loop targets, children = element(s), iterables, conditions
    Starred,     // *x or **x inside displays
    Slice,       // a:b:c (missing parts omitted)
    NamedExpr,   // text := children[0]
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Argument {
    std::optional<std::string> keyword;
    int star = 0;  // 1 for *x, 2 for **x
    ExprPtr value;
};

struct Expr {
    ExprKind kind = ExprKind::Constant;
    std::string text;
    std::vector<ExprPtr> children;
    std::vector<Argument> args;       // Call only
    std::vector<std::string> bound;   // Lambda / Comprehension
    char bracket = 0;                 // Collection: '(' '[' '{'
    bool is_dict = false;             // Collection: {k: v}
    Span span;
};

enum class StmtKind {
    Expr,
    Assign,      // targets = chained targets, value
    AugAssign,   // targets[0] op= value
    AnnAssign,   // targets[0]: annotation [= value]
    Import,      // imports
    ImportFrom,  // module, level, imports
    Return,
    Delete,
    Raise,
    Assert,
    Global,
    Pass,
    Break,
    Continue,
    If,
    While,
    For,
    With,
    Try,
    FunctionDef,
    ClassDef,
};

struct ImportedName {
    std::string name;  // dotted module for Import, member for ImportFrom ("*" allowed)
    std::optional<std::string> alias;
};

struct Stmt;

// One header/body pair of a compound statement: `if x:` / `elif y:` /
// `else:`, `for t in it:`, `except E as e:`, `def f(a=1):`...
struct Clause {
    std::string keyword;
    std::vector<ExprPtr> exprs;    // evaluated header expressions
    std::vector<ExprPtr> targets;  // names bound by the header (for/with/except)
    std::vector<Stmt> body;
    Span header;
};

struct Stmt {
    StmtKind kind = StmtKind::Pass;
    Span span;  // simple statements: the statement text; compound: first header
    std::vector<ExprPtr> targets;
    ExprPtr value;
    std::vector<ExprPtr> exprs;  // Delete/Raise/Assert/Return extras
    std::vector<ImportedName> imports;
    std::string module;  // ImportFrom
    int level = 0;       // ImportFrom leading dots
    std::string name;    // FunctionDef / ClassDef
    std::vector<std::string> params;  // FunctionDef parameter names
    std::vector<ExprPtr> decorators;
    std::vector<Clause> clauses;  // compound statements
};

struct Module {
    std::string source;
    std::vector<Stmt> body;

    std::string_view text(const Span& s) const {
        return std::string_view(source).substr(s.begin, s.end - s.begin);
    }
};

// Thrown for any lexical or grammatical error.
class SyntaxIssue : public std::runtime_error {
public:
    SyntaxIssue(std::size_t line, const std::string& message)
        : std::runtime_error(message), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Parses `source` (the module keeps its own copy). Throws SyntaxIssue.
Module parse_module(std::string source);

}  // namespace lids::pipeline::py
