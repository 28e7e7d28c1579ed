#pragma once

#include "patchq/error.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace patchq {

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

enum class TokenKind {
    Identifier,
    Keyword,
    IntegerLiteral,
    BasedLiteral,
    Operator,
    Punctuation,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    SourcePos pos;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
};

// ---------------------------------------------------------------------------
// Expressions
//
// Nodes are immutable and shared; rewriting builds new nodes around the
// unchanged subtrees.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Width-less literals are 32 bits wide.
inline constexpr std::uint32_t kUnsizedWidth = 32;

struct Const {
    std::uint64_t value = 0;
    std::uint32_t width = kUnsizedWidth;
    bool sized = false;
    char base = 'd'; ///< 'b', 'o', 'd', 'h'; plain decimal literals are unsized 'd'
    bool based = false;
};

/// A named signal. `index` selects an unpacked array element; the parser
/// only sets it when the name was declared as an array.
struct SignalRef {
    std::string name;
    ExprPtr index;
};

struct BitSelect {
    ExprPtr base;
    ExprPtr index;
};

struct PartSelect {
    ExprPtr base;
    std::int64_t msb = 0;
    std::int64_t lsb = 0;
};

enum class UnaryOp { LogicalNot, BitNot };

struct Unary {
    UnaryOp op;
    ExprPtr operand;
};

enum class BinaryOp {
    LogicalAnd,
    LogicalOr,
    BitAnd,
    BitOr,
    BitXor,
    BitXnor,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    Shl,
    Shr,
    Add,
    Sub,
};

struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct Ternary {
    ExprPtr select;
    ExprPtr then_expr;
    ExprPtr else_expr;
};

struct Concat {
    std::vector<ExprPtr> parts;
};

struct Expr {
    using Node = std::variant<Const, SignalRef, BitSelect, PartSelect, Unary, Binary, Ternary, Concat>;
    Node node;
    SourcePos pos;

    template <class T>
    const T* as() const { return std::get_if<T>(&node); }
    template <class T>
    bool is() const { return std::holds_alternative<T>(node); }
};

const char* to_string(UnaryOp op);
const char* to_string(BinaryOp op);
bool is_comparison(BinaryOp op);
bool is_logical(BinaryOp op);
bool is_shift(BinaryOp op);
bool is_arithmetic(BinaryOp op);

ExprPtr make_const(std::uint64_t value, std::uint32_t width = kUnsizedWidth, bool sized = false,
                   SourcePos pos = {});
ExprPtr make_ref(std::string name, ExprPtr index = nullptr, SourcePos pos = {});
ExprPtr make_bit(ExprPtr base, ExprPtr index, SourcePos pos = {});
ExprPtr make_part(ExprPtr base, std::int64_t msb, std::int64_t lsb, SourcePos pos = {});
ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourcePos pos = {});
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
ExprPtr make_ternary(ExprPtr select, ExprPtr then_expr, ExprPtr else_expr, SourcePos pos = {});
ExprPtr make_concat(std::vector<ExprPtr> parts, SourcePos pos = {});

/// Structural equality; positions and literal spelling (base) are ignored.
bool equal(const Expr& a, const Expr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);

/// Folds integer constant expressions (literals, + - << >> & | ^).
std::optional<std::uint64_t> const_value(const Expr& e);

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct Stmt;
using StmtList = std::vector<Stmt>;

struct LValue {
    std::string name;
    ExprPtr index; ///< array element index, may be null
    SourcePos pos;
};

struct Assign {
    LValue target;
    ExprPtr value;
    bool blocking = false;
};

struct IfArm {
    ExprPtr cond;
    StmtList body;
};

/// if / else if ... / else, kept as one chain.
struct IfChain {
    std::vector<IfArm> arms;
    std::optional<StmtList> else_body;
};

struct CaseItem {
    std::vector<ExprPtr> labels; ///< empty for `default`
    StmtList body;
    bool is_default = false;
};

struct CaseStmt {
    ExprPtr select;
    std::vector<CaseItem> items;
};

/// for (var = init; var < bound; var = var + step)
struct ForLoop {
    std::string var;
    ExprPtr init;
    ExprPtr bound;
    ExprPtr step;
    StmtList body;
};

struct Stmt {
    using Node = std::variant<Assign, IfChain, CaseStmt, ForLoop>;
    Node node;
    SourcePos pos;

    template <class T>
    const T* as() const { return std::get_if<T>(&node); }
};

bool equal(const StmtList& a, const StmtList& b);

// ---------------------------------------------------------------------------
// Module
// ---------------------------------------------------------------------------

enum class Direction { Input, Output };
enum class NetKind { Wire, Reg, Logic, Integer };

const char* to_string(NetKind kind);

struct PortDecl {
    std::string name;
    Direction direction = Direction::Input;
    NetKind kind = NetKind::Wire;
    std::uint32_t width = 1;
    std::int64_t msb = 0;
    std::int64_t lsb = 0;
    bool packed = false; ///< a [msb:lsb] range was written
    bool is_clock = false;
    SourcePos pos;
};

struct NetDecl {
    std::string name;
    NetKind kind = NetKind::Wire;
    std::uint32_t width = 1;
    std::int64_t msb = 0;
    std::int64_t lsb = 0;
    bool packed = false;
    std::uint32_t array_length = 1; ///< 1 means scalar
    std::int64_t array_first = 0;   ///< first declared index ([0:5] -> 0, [6] -> 0)
    std::int64_t array_last = 0;
    bool array = false;
    bool array_sized = false; ///< written as [N] rather than [a:b]
    SourcePos pos;
};

struct ContinuousAssign {
    LValue target;
    ExprPtr value;
    SourcePos pos;
};

enum class Edge { Pos, Neg };

struct SensitivityItem {
    Edge edge = Edge::Pos;
    std::string signal;
};

enum class BlockKind { Sequential, Combinational };

struct AlwaysBlock {
    BlockKind kind = BlockKind::Combinational;
    std::optional<std::string> clock;
    std::vector<SensitivityItem> edges; ///< empty for @(*)
    std::string keyword = "always";     ///< always, always_ff or always_comb
    StmtList body;
    SourcePos pos;
};

struct Item {
    std::variant<ContinuousAssign, AlwaysBlock> node;
};

struct SourceModule {
    std::string name;
    std::vector<PortDecl> ports;
    std::vector<NetDecl> nets;
    std::vector<Item> items;
    SourcePos pos;

    const PortDecl* find_port(std::string_view n) const;
    const NetDecl* find_net(std::string_view n) const;
};

/// Structural equality ignoring positions.
bool equal(const SourceModule& a, const SourceModule& b);

} // namespace patchq
