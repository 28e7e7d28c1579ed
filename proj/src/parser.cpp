#include "patchq/frontend.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace patchq {

namespace {

// Keywords that start constructs outside the supported subset.
const std::unordered_map<std::string_view, std::string_view> kUnsupportedItems = {
    {"function", "functions"},
    {"task", "tasks"},
    {"generate", "generate blocks"},
    {"genvar", "generate variables"},
    {"interface", "interfaces"},
    {"parameter", "parameters"},
    {"localparam", "parameters"},
    {"initial", "initial blocks"},
    {"always_latch", "latches"},
    {"typedef", "type definitions"},
    {"package", "packages"},
    {"import", "package imports"},
    {"int", "int variables"},
    {"bit", "bit variables"},
    {"byte", "byte variables"},
    {"inout", "inout ports"},
    {"input", "non-ANSI port declarations"},
    {"output", "non-ANSI port declarations"},
};

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {
        if (toks_.empty() || toks_.back().kind != TokenKind::End)
            throw ParseError("token stream is not terminated", {});
    }

    std::vector<SourceModule> design() {
        std::vector<SourceModule> out;
        while (!at_end())
            out.push_back(module());
        if (out.empty())
            throw ParseError("no module declaration found", peek().pos, {"'module'"});
        return out;
    }

    SourceModule single_module() {
        SourceModule m = module();
        if (!at_end())
            throw ParseError("unexpected tokens after endmodule", peek().pos, {"end of input"});
        return m;
    }

private:
    const std::vector<Token>& toks_;
    std::size_t i_ = 0;

    // -- token helpers -----------------------------------------------------

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == TokenKind::End; }
    const Token& take() {
        const Token& t = peek();
        if (!at_end())
            ++i_;
        return t;
    }

    bool is_kw(std::string_view w, std::size_t k = 0) const { return peek(k).is(TokenKind::Keyword, w); }
    bool is_op(std::string_view w, std::size_t k = 0) const { return peek(k).is(TokenKind::Operator, w); }
    bool is_punct(std::string_view w, std::size_t k = 0) const {
        return peek(k).is(TokenKind::Punctuation, w);
    }

    bool accept_kw(std::string_view w) {
        if (!is_kw(w))
            return false;
        take();
        return true;
    }
    bool accept_op(std::string_view w) {
        if (!is_op(w))
            return false;
        take();
        return true;
    }
    bool accept_punct(std::string_view w) {
        if (!is_punct(w))
            return false;
        take();
        return true;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = peek();
        std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
        throw ParseError("unexpected " + found, t.pos, std::move(expected));
    }

    const Token& expect_kw(std::string_view w) {
        if (!is_kw(w))
            fail({"'" + std::string(w) + "'"});
        return take();
    }
    const Token& expect_op(std::string_view w) {
        if (!is_op(w))
            fail({"'" + std::string(w) + "'"});
        return take();
    }
    const Token& expect_punct(std::string_view w) {
        if (!is_punct(w))
            fail({"'" + std::string(w) + "'"});
        return take();
    }
    const Token& expect_ident() {
        if (peek().kind != TokenKind::Identifier) {
            if (peek().kind == TokenKind::Keyword)
                reject_if_unsupported_keyword();
            fail({"identifier"});
        }
        return take();
    }

    void reject_if_unsupported_keyword() const {
        const Token& t = peek();
        if (t.kind != TokenKind::Keyword)
            return;
        if (auto it = kUnsupportedItems.find(t.text); it != kUnsupportedItems.end())
            throw UnsupportedConstruct(std::string(it->second) + " are not supported", t.pos);
        if (t.text == "signed" || t.text == "unsigned")
            throw UnsupportedConstruct("signedness qualifiers are not supported", t.pos);
    }

    std::int64_t constant(const char* what) {
        const SourcePos pos = peek().pos;
        ExprPtr e = expr();
        auto v = const_value(*e);
        if (!v)
            throw UnsupportedConstruct(std::string("non-constant ") + what, pos);
        return static_cast<std::int64_t>(*v);
    }

    // -- module level ------------------------------------------------------

    SourceModule module() {
        SourceModule m;
        m.pos = peek().pos;
        expect_kw("module");
        m.name = expect_ident().text;
        if (is_punct("#"))
            throw UnsupportedConstruct("module parameters are not supported", peek().pos);
        if (accept_punct("(")) {
            if (!accept_punct(")")) {
                port_list(m);
                expect_punct(")");
            }
        }
        expect_punct(";");
        while (!is_kw("endmodule")) {
            if (at_end())
                fail({"'endmodule'"});
            module_item(m);
        }
        expect_kw("endmodule");
        resolve(m);
        return m;
    }

    std::optional<std::pair<std::int64_t, std::int64_t>> packed_range() {
        if (!accept_punct("["))
            return std::nullopt;
        std::int64_t msb = constant("range bound");
        expect_op(":");
        std::int64_t lsb = constant("range bound");
        expect_punct("]");
        return std::make_pair(msb, lsb);
    }

    static std::uint32_t range_width(std::int64_t msb, std::int64_t lsb) {
        return static_cast<std::uint32_t>((msb > lsb ? msb - lsb : lsb - msb) + 1);
    }

    void port_list(SourceModule& m) {
        std::optional<Direction> dir;
        NetKind kind = NetKind::Wire;
        std::optional<std::pair<std::int64_t, std::int64_t>> range;
        do {
            const Token& start = peek();
            if (is_kw("inout"))
                throw UnsupportedConstruct("inout ports are not supported", start.pos);
            if (accept_kw("input")) {
                dir = Direction::Input;
                kind = NetKind::Wire;
                range.reset();
                net_type(kind);
                range = packed_range();
            } else if (accept_kw("output")) {
                dir = Direction::Output;
                kind = NetKind::Wire;
                range.reset();
                net_type(kind);
                range = packed_range();
            } else if (!dir) {
                if (peek().kind == TokenKind::Identifier)
                    throw UnsupportedConstruct("non-ANSI port lists are not supported", start.pos);
                fail({"'input'", "'output'"});
            }
            const Token& name = expect_ident();
            if (is_punct("["))
                throw UnsupportedConstruct("unpacked array ports are not supported", peek().pos);
            PortDecl p;
            p.name = name.text;
            p.direction = *dir;
            p.kind = kind;
            p.pos = name.pos;
            if (range) {
                p.packed = true;
                p.msb = range->first;
                p.lsb = range->second;
                p.width = range_width(p.msb, p.lsb);
            }
            m.ports.push_back(std::move(p));
        } while (accept_punct(","));
    }

    void net_type(NetKind& kind) {
        reject_if_unsupported_keyword();
        if (accept_kw("wire"))
            kind = NetKind::Wire;
        else if (accept_kw("reg"))
            kind = NetKind::Reg;
        else if (accept_kw("logic"))
            kind = NetKind::Logic;
        reject_if_unsupported_keyword();
    }

    void module_item(SourceModule& m) {
        const Token& t = peek();
        if (t.kind == TokenKind::Keyword) {
            if (t.text == "wire" || t.text == "reg" || t.text == "logic")
                return net_decl(m);
            if (t.text == "integer")
                return integer_decl(m);
            if (t.text == "assign")
                return continuous_assign(m);
            if (t.text == "always" || t.text == "always_ff" || t.text == "always_comb")
                return always_block(m);
            reject_if_unsupported_keyword();
        }
        if (t.kind == TokenKind::Identifier && peek(1).kind == TokenKind::Identifier)
            throw UnsupportedConstruct("module instantiations are not supported", t.pos);
        if (t.kind == TokenKind::Identifier && is_punct("#", 1))
            throw UnsupportedConstruct("module instantiations are not supported", t.pos);
        fail({"declaration", "'assign'", "'always'", "'endmodule'"});
    }

    void net_decl(SourceModule& m) {
        NetKind kind = NetKind::Wire;
        net_type(kind);
        auto range = packed_range();
        do {
            const Token& name = expect_ident();
            NetDecl d;
            d.name = name.text;
            d.kind = kind;
            d.pos = name.pos;
            if (range) {
                d.packed = true;
                d.msb = range->first;
                d.lsb = range->second;
                d.width = range_width(d.msb, d.lsb);
            }
            if (accept_punct("[")) {
                d.array = true;
                std::int64_t first = constant("array dimension");
                if (accept_op(":")) {
                    std::int64_t last = constant("array dimension");
                    d.array_first = first;
                    d.array_last = last;
                } else {
                    if (first <= 0)
                        throw ParseError("array size must be positive", name.pos);
                    d.array_sized = true;
                    d.array_first = 0;
                    d.array_last = first - 1;
                }
                d.array_length = range_width(d.array_first, d.array_last);
                expect_punct("]");
                if (is_punct("["))
                    throw UnsupportedConstruct("multi-dimensional arrays are not supported", peek().pos);
            }
            m.nets.push_back(d);
            if (is_op("=")) {
                const SourcePos pos = take().pos;
                if (d.array)
                    throw UnsupportedConstruct("array initializers are not supported", pos);
                ContinuousAssign a;
                a.target = LValue{d.name, nullptr, name.pos};
                a.value = expr();
                a.pos = pos;
                m.items.push_back(Item{std::move(a)});
            }
        } while (accept_punct(","));
        expect_punct(";");
    }

    void integer_decl(SourceModule& m) {
        expect_kw("integer");
        do {
            const Token& name = expect_ident();
            NetDecl d;
            d.name = name.text;
            d.kind = NetKind::Integer;
            d.width = 32;
            d.msb = 31;
            d.lsb = 0;
            d.pos = name.pos;
            m.nets.push_back(d);
        } while (accept_punct(","));
        expect_punct(";");
    }

    void continuous_assign(SourceModule& m) {
        const SourcePos pos = expect_kw("assign").pos;
        do {
            ContinuousAssign a;
            a.pos = pos;
            a.target = lvalue();
            expect_op("=");
            a.value = expr();
            m.items.push_back(Item{std::move(a)});
        } while (accept_punct(","));
        expect_punct(";");
    }

    void always_block(SourceModule& m) {
        AlwaysBlock b;
        b.pos = peek().pos;
        b.keyword = take().text;
        if (b.keyword == "always_comb") {
            b.kind = BlockKind::Combinational;
        } else {
            expect_punct("@");
            sensitivity(b);
            if (b.keyword == "always_ff" && b.kind != BlockKind::Sequential)
                throw ParseError("always_ff requires an edge sensitivity list", b.pos);
        }
        b.body = statement();
        m.items.push_back(Item{std::move(b)});
    }

    void sensitivity(AlwaysBlock& b) {
        if (accept_op("*")) {
            b.kind = BlockKind::Combinational;
            return;
        }
        expect_punct("(");
        if (accept_op("*")) {
            expect_punct(")");
            b.kind = BlockKind::Combinational;
            return;
        }
        bool any_edge = false, any_level = false;
        do {
            if (is_kw("posedge") || is_kw("negedge")) {
                Edge e = take().text == "posedge" ? Edge::Pos : Edge::Neg;
                b.edges.push_back({e, expect_ident().text});
                any_edge = true;
            } else {
                expect_ident();
                any_level = true;
            }
        } while (accept_kw("or") || accept_punct(","));
        expect_punct(")");
        if (any_edge && any_level)
            throw UnsupportedConstruct("mixed edge and level sensitivity lists are not supported", b.pos);
        if (any_edge) {
            b.kind = BlockKind::Sequential;
            b.clock = b.edges.front().signal;
        } else {
            b.kind = BlockKind::Combinational;
        }
    }

    // -- statements --------------------------------------------------------

    LValue lvalue() {
        const Token& name = expect_ident();
        LValue lv{name.text, nullptr, name.pos};
        if (accept_punct("[")) {
            lv.index = expr();
            if (is_op(":"))
                throw UnsupportedConstruct("part-select assignment targets are not supported", peek().pos);
            expect_punct("]");
            if (is_punct("["))
                throw UnsupportedConstruct("bit-select assignment targets are not supported", peek().pos);
        }
        return lv;
    }

    StmtList statement() {
        const Token& t = peek();
        if (accept_kw("begin")) {
            if (accept_op(":"))
                expect_ident();
            StmtList body;
            while (!is_kw("end")) {
                if (at_end())
                    fail({"'end'"});
                StmtList s = statement();
                std::move(s.begin(), s.end(), std::back_inserter(body));
            }
            expect_kw("end");
            if (accept_op(":"))
                expect_ident();
            return body;
        }
        if (is_kw("if"))
            return {if_chain()};
        if (is_kw("case"))
            return {case_stmt()};
        if (is_kw("casez") || is_kw("casex"))
            throw UnsupportedConstruct(t.text + " statements are not supported", t.pos);
        if (is_kw("unique") || is_kw("priority"))
            throw UnsupportedConstruct("unique/priority qualifiers are not supported", t.pos);
        if (is_kw("for"))
            return {for_loop()};
        if (is_kw("while") || is_kw("repeat") || is_kw("forever"))
            throw UnsupportedConstruct(t.text + " loops are not supported", t.pos);
        if (accept_punct(";"))
            return {};
        if (t.kind == TokenKind::Identifier) {
            Stmt s;
            s.pos = t.pos;
            Assign a;
            a.target = lvalue();
            if (accept_op("="))
                a.blocking = true;
            else if (accept_op("<="))
                a.blocking = false;
            else
                fail({"'='", "'<='"});
            a.value = expr();
            expect_punct(";");
            s.node = std::move(a);
            return {std::move(s)};
        }
        if (t.kind == TokenKind::Keyword)
            reject_if_unsupported_keyword();
        fail({"statement"});
    }

    Stmt if_chain() {
        Stmt s;
        s.pos = peek().pos;
        IfChain chain;
        expect_kw("if");
        for (;;) {
            expect_punct("(");
            ExprPtr cond = expr();
            expect_punct(")");
            chain.arms.push_back(IfArm{std::move(cond), statement()});
            if (!accept_kw("else"))
                break;
            if (accept_kw("if"))
                continue;
            chain.else_body = statement();
            break;
        }
        s.node = std::move(chain);
        return s;
    }

    Stmt case_stmt() {
        Stmt s;
        s.pos = peek().pos;
        CaseStmt c;
        expect_kw("case");
        expect_punct("(");
        c.select = expr();
        expect_punct(")");
        bool seen_default = false;
        while (!accept_kw("endcase")) {
            if (at_end())
                fail({"'endcase'"});
            CaseItem item;
            if (is_kw("default")) {
                const SourcePos pos = take().pos;
                if (seen_default)
                    throw ParseError("duplicate default branch", pos);
                seen_default = true;
                item.is_default = true;
                accept_op(":");
            } else {
                do {
                    item.labels.push_back(expr());
                } while (accept_punct(","));
                expect_op(":");
            }
            item.body = statement();
            c.items.push_back(std::move(item));
        }
        if (c.items.empty())
            throw ParseError("case statement without items", s.pos);
        s.node = std::move(c);
        return s;
    }

    Stmt for_loop() {
        Stmt s;
        s.pos = peek().pos;
        ForLoop f;
        expect_kw("for");
        expect_punct("(");
        const SourcePos shape_pos = peek().pos;
        if (is_kw("int") || is_kw("integer") || is_kw("genvar"))
            throw UnsupportedConstruct("loop variable declarations inside for are not supported", shape_pos);
        f.var = expect_ident().text;
        expect_op("=");
        f.init = expr();
        expect_punct(";");
        auto expect_var = [&] {
            const Token& v = expect_ident();
            if (v.text != f.var)
                throw UnsupportedConstruct("for loop must have the shape for (i=INIT; i<BOUND; i=i+STEP)", v.pos);
        };
        expect_var();
        if (!is_op("<"))
            throw UnsupportedConstruct("for loop must have the shape for (i=INIT; i<BOUND; i=i+STEP)", peek().pos);
        take();
        f.bound = shift_expr();
        expect_punct(";");
        expect_var();
        if (!is_op("="))
            throw UnsupportedConstruct("for loop must have the shape for (i=INIT; i<BOUND; i=i+STEP)", peek().pos);
        take();
        expect_var();
        if (!is_op("+"))
            throw UnsupportedConstruct("for loop must have the shape for (i=INIT; i<BOUND; i=i+STEP)", peek().pos);
        take();
        f.step = unary_expr();
        expect_punct(")");
        f.body = statement();
        s.node = std::move(f);
        return s;
    }

    // -- expressions -------------------------------------------------------

    ExprPtr expr() { return ternary_expr(); }

    ExprPtr ternary_expr() {
        ExprPtr cond = binary_expr(0);
        if (is_op("?")) {
            const SourcePos pos = take().pos;
            ExprPtr a = ternary_expr();
            expect_op(":");
            ExprPtr b = ternary_expr();
            return make_ternary(std::move(cond), std::move(a), std::move(b), pos);
        }
        return cond;
    }

    // Binary precedence levels, loosest first.
    struct Level {
        std::vector<std::pair<std::string_view, BinaryOp>> ops;
    };

    static const std::vector<Level>& levels() {
        static const std::vector<Level> table = {
            {{{"||", BinaryOp::LogicalOr}}},
            {{{"&&", BinaryOp::LogicalAnd}}},
            {{{"|", BinaryOp::BitOr}}},
            {{{"^", BinaryOp::BitXor}, {"~^", BinaryOp::BitXnor}, {"^~", BinaryOp::BitXnor}}},
            {{{"&", BinaryOp::BitAnd}}},
            {{{"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}}},
            {{{"<", BinaryOp::Lt}, {"<=", BinaryOp::Le}, {">", BinaryOp::Gt}, {">=", BinaryOp::Ge}}},
            {{{"<<", BinaryOp::Shl}, {">>", BinaryOp::Shr}}},
            {{{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}}},
        };
        return table;
    }

    static constexpr std::size_t kShiftLevel = 7;

    ExprPtr shift_expr() { return binary_expr(kShiftLevel); }

    ExprPtr binary_expr(std::size_t level) {
        if (level == levels().size())
            return unary_expr();
        ExprPtr lhs = binary_expr(level + 1);
        for (;;) {
            const Token& t = peek();
            if (t.kind == TokenKind::Operator) {
                if (t.text == "===" || t.text == "!==")
                    throw UnsupportedConstruct("case equality operators are not supported", t.pos);
                if (t.text == "<<<" || t.text == ">>>")
                    throw UnsupportedConstruct("arithmetic shifts are not supported", t.pos);
                if (t.text == "*" || t.text == "/" || t.text == "%")
                    throw UnsupportedConstruct("operator '" + t.text + "' is not supported", t.pos);
            }
            const auto& ops = levels()[level].ops;
            auto it = std::find_if(ops.begin(), ops.end(), [&](const auto& p) {
                return t.kind == TokenKind::Operator && t.text == p.first;
            });
            if (it == ops.end())
                return lhs;
            take();
            ExprPtr rhs = binary_expr(level + 1);
            lhs = make_binary(it->second, std::move(lhs), std::move(rhs), t.pos);
        }
    }

    ExprPtr unary_expr() {
        const Token& t = peek();
        if (accept_op("!"))
            return make_unary(UnaryOp::LogicalNot, unary_expr(), t.pos);
        if (accept_op("~"))
            return make_unary(UnaryOp::BitNot, unary_expr(), t.pos);
        if (t.kind == TokenKind::Operator &&
            (t.text == "&" || t.text == "|" || t.text == "^" || t.text == "~&" || t.text == "~|" ||
             t.text == "~^" || t.text == "^~"))
            throw UnsupportedConstruct("reduction operators are not supported", t.pos);
        if (t.kind == TokenKind::Operator && (t.text == "-" || t.text == "+"))
            throw UnsupportedConstruct("unary '" + t.text + "' is not supported", t.pos);
        return postfix_expr();
    }

    ExprPtr postfix_expr() {
        ExprPtr e = primary_expr();
        while (is_punct("[")) {
            const SourcePos pos = take().pos;
            ExprPtr first = expr();
            if (accept_op(":")) {
                auto msb = const_value(*first);
                const SourcePos lsb_pos = peek().pos;
                ExprPtr second = expr();
                auto lsb = const_value(*second);
                if (!msb || !lsb)
                    throw UnsupportedConstruct("part-select bounds must be constant", msb ? lsb_pos : pos);
                expect_punct("]");
                e = make_part(std::move(e), static_cast<std::int64_t>(*msb), static_cast<std::int64_t>(*lsb), pos);
            } else {
                expect_punct("]");
                e = make_bit(std::move(e), std::move(first), pos);
            }
        }
        return e;
    }

    ExprPtr primary_expr() {
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::IntegerLiteral:
        case TokenKind::BasedLiteral: {
            take();
            Const c = decode_literal(t);
            return std::make_shared<const Expr>(Expr{c, t.pos});
        }
        case TokenKind::Identifier:
            take();
            if (is_punct("("))
                throw UnsupportedConstruct("function calls are not supported", t.pos);
            return make_ref(t.text, nullptr, t.pos);
        case TokenKind::Punctuation:
            if (t.text == "(") {
                take();
                ExprPtr e = expr();
                expect_punct(")");
                return e;
            }
            if (t.text == "{") {
                take();
                std::vector<ExprPtr> parts;
                parts.push_back(expr());
                if (is_punct("{"))
                    throw UnsupportedConstruct("replication is not supported", peek().pos);
                while (accept_punct(","))
                    parts.push_back(expr());
                expect_punct("}");
                return make_concat(std::move(parts), t.pos);
            }
            break;
        case TokenKind::Keyword:
            reject_if_unsupported_keyword();
            break;
        default: break;
        }
        fail({"expression"});
    }

    // -- post-pass ---------------------------------------------------------

    // Rewrites name[i] on declared arrays into an indexed SignalRef, and
    // marks clock ports.
    static void resolve(SourceModule& m) {
        std::unordered_set<std::string> declared;
        std::unordered_set<std::string> arrays;
        auto declare = [&](const std::string& name, SourcePos pos) {
            if (!declared.insert(name).second)
                throw ParseError("duplicate declaration of '" + name + "'", pos);
        };
        for (const auto& p : m.ports)
            declare(p.name, p.pos);
        for (const auto& n : m.nets) {
            declare(n.name, n.pos);
            if (n.array)
                arrays.insert(n.name);
        }

        std::set<std::string> referenced;
        std::function<ExprPtr(const ExprPtr&)> fix = [&](const ExprPtr& e) -> ExprPtr {
            return std::visit(
                [&](const auto& x) -> ExprPtr {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, Const>) {
                        return e;
                    } else if constexpr (std::is_same_v<T, SignalRef>) {
                        referenced.insert(x.name);
                        if (x.index)
                            return make_ref(x.name, fix(x.index), e->pos);
                        return e;
                    } else if constexpr (std::is_same_v<T, BitSelect>) {
                        auto ref = x.base->template as<SignalRef>();
                        if (ref && !ref->index && arrays.count(ref->name)) {
                            referenced.insert(ref->name);
                            return make_ref(ref->name, fix(x.index), x.base->pos);
                        }
                        return make_bit(fix(x.base), fix(x.index), e->pos);
                    } else if constexpr (std::is_same_v<T, PartSelect>) {
                        return make_part(fix(x.base), x.msb, x.lsb, e->pos);
                    } else if constexpr (std::is_same_v<T, Unary>) {
                        return make_unary(x.op, fix(x.operand), e->pos);
                    } else if constexpr (std::is_same_v<T, Binary>) {
                        return make_binary(x.op, fix(x.lhs), fix(x.rhs), e->pos);
                    } else if constexpr (std::is_same_v<T, Ternary>) {
                        return make_ternary(fix(x.select), fix(x.then_expr), fix(x.else_expr), e->pos);
                    } else {
                        std::vector<ExprPtr> parts;
                        for (const auto& p : x.parts)
                            parts.push_back(fix(p));
                        return make_concat(std::move(parts), e->pos);
                    }
                },
                e->node);
        };
        auto fix_lvalue = [&](LValue& lv) {
            referenced.insert(lv.name);
            if (lv.index) {
                if (declared.count(lv.name) && !arrays.count(lv.name))
                    throw UnsupportedConstruct("bit-select assignment targets are not supported", lv.pos);
                lv.index = fix(lv.index);
            }
        };
        std::function<void(StmtList&)> fix_stmts = [&](StmtList& list) {
            for (auto& s : list) {
                std::visit(
                    [&](auto& x) {
                        using T = std::decay_t<decltype(x)>;
                        if constexpr (std::is_same_v<T, Assign>) {
                            fix_lvalue(x.target);
                            x.value = fix(x.value);
                        } else if constexpr (std::is_same_v<T, IfChain>) {
                            for (auto& arm : x.arms) {
                                arm.cond = fix(arm.cond);
                                fix_stmts(arm.body);
                            }
                            if (x.else_body)
                                fix_stmts(*x.else_body);
                        } else if constexpr (std::is_same_v<T, CaseStmt>) {
                            x.select = fix(x.select);
                            for (auto& item : x.items) {
                                for (auto& l : item.labels)
                                    l = fix(l);
                                fix_stmts(item.body);
                            }
                        } else {
                            referenced.insert(x.var);
                            x.init = fix(x.init);
                            x.bound = fix(x.bound);
                            x.step = fix(x.step);
                            fix_stmts(x.body);
                        }
                    },
                    s.node);
            }
        };

        std::set<std::string> edge_signals;
        for (auto& item : m.items) {
            if (auto* a = std::get_if<ContinuousAssign>(&item.node)) {
                fix_lvalue(a->target);
                a->value = fix(a->value);
            } else {
                auto& b = std::get<AlwaysBlock>(item.node);
                for (const auto& e : b.edges)
                    edge_signals.insert(e.signal);
                fix_stmts(b.body);
            }
        }

        // A clock appears only in edge sensitivity lists.
        for (auto& item : m.items) {
            if (auto* b = std::get_if<AlwaysBlock>(&item.node)) {
                for (const auto& e : b->edges) {
                    if (!referenced.count(e.signal)) {
                        b->clock = e.signal;
                        break;
                    }
                }
            }
        }
        for (auto& p : m.ports)
            p.is_clock = edge_signals.count(p.name) && !referenced.count(p.name);
    }
};

} // namespace

SourceModule parse_module(const std::vector<Token>& tokens) {
    return Parser(tokens).single_module();
}

std::vector<SourceModule> parse_design(const std::vector<Token>& tokens) {
    return Parser(tokens).design();
}

SourceModule parse_source(std::string_view source, std::string_view top) {
    auto modules = parse_design(tokenize(source));
    if (top.empty()) {
        if (modules.size() != 1)
            throw ParseError("source holds " + std::to_string(modules.size()) +
                                 " modules; select one with a top module name",
                             {});
        return std::move(modules.front());
    }
    for (auto& m : modules)
        if (m.name == top)
            return std::move(m);
    throw ParseError("module '" + std::string(top) + "' not found", {});
}

} // namespace patchq
