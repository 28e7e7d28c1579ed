#include "doctest.h"

#include "fixture.hpp"

#include "patchq/frontend.hpp"

using namespace patchq;

namespace {

ExprPtr parse_expr(const std::string& text) {
    const SourceModule m = parse_source("module t(input logic [7:0] a, input logic [7:0] b, input logic c,"
                                        " output logic [7:0] y);\n  assign y = " +
                                        text + ";\nendmodule\n");
    return std::get<ContinuousAssign>(m.items.at(0).node).value;
}

template <class E>
SourcePos error_pos(const std::string& source) {
    try {
        parse_source(source);
    } catch (const E& e) {
        return e.pos();
    }
    FAIL("no error raised");
    return {};
}

} // namespace

TEST_CASE("tokens") {
    const auto toks = tokenize("assign x = 64'b0 | 'h1f; // tail\n/* block */ y");
    REQUIRE(toks.size() == 9);
    CHECK(toks[0].is(TokenKind::Keyword, "assign"));
    CHECK(toks[1].is(TokenKind::Identifier, "x"));
    CHECK(toks[3].kind == TokenKind::BasedLiteral);
    CHECK(toks[5].kind == TokenKind::BasedLiteral);
    CHECK(toks[7].is(TokenKind::Identifier, "y"));
    CHECK(toks[7].pos == SourcePos{2, 13});
    CHECK(toks.back().kind == TokenKind::End);
}

TEST_CASE("literal decoding") {
    const auto toks = tokenize("5'd3 'h1f 64'b0 17 8'hFF 4'b1_0_1_0");
    const Const a = decode_literal(toks[0]);
    CHECK(a.value == 3);
    CHECK(a.width == 5);
    CHECK(a.sized);
    const Const b = decode_literal(toks[1]);
    CHECK(b.value == 31);
    CHECK(b.width == kUnsizedWidth);
    CHECK_FALSE(b.sized);
    CHECK(decode_literal(toks[2]).width == 64);
    CHECK(decode_literal(toks[3]).value == 17);
    CHECK(decode_literal(toks[4]).value == 255);
    CHECK(decode_literal(toks[5]).value == 10);
}

TEST_CASE("lexer errors") {
    CHECK_THROWS_AS(tokenize("a /* never closed"), LexError);
    CHECK_THROWS_AS(tokenize("a $ b"), LexError);
    CHECK_THROWS_AS(tokenize("4'b10x1"), LexError);
    CHECK_THROWS_AS(tokenize("2'd7"), LexError);
    CHECK_THROWS_AS(tokenize("8'q1"), LexError);
    CHECK_THROWS_AS(tokenize("`define X 1"), UnsupportedConstruct);
    try {
        tokenize("ok\n  a $");
        FAIL("expected an error");
    } catch (const LexError& e) {
        CHECK(e.pos() == SourcePos{2, 5});
    }
}

TEST_CASE("operator precedence") {
    const auto e = parse_expr("a | b & c");
    const auto* top = e->as<Binary>();
    REQUIRE(top);
    CHECK(top->op == BinaryOp::BitOr);
    CHECK(top->rhs->as<Binary>()->op == BinaryOp::BitAnd);

    const auto l = parse_expr("c || a == b && c");
    REQUIRE(l->as<Binary>());
    CHECK(l->as<Binary>()->op == BinaryOp::LogicalOr);
    const auto* rhs = l->as<Binary>()->rhs->as<Binary>();
    REQUIRE(rhs);
    CHECK(rhs->op == BinaryOp::LogicalAnd);
    CHECK(rhs->lhs->as<Binary>()->op == BinaryOp::Eq);

    const auto t = parse_expr("c ? a : c ? b : 0");
    REQUIRE(t->as<Ternary>());
    CHECK(t->as<Ternary>()->else_expr->is<Ternary>());

    const auto s = parse_expr("a << 1 + b");
    CHECK(s->as<Binary>()->op == BinaryOp::Shl);

    const auto left = parse_expr("a - b - c");
    CHECK(left->as<Binary>()->lhs->is<Binary>());
}

TEST_CASE("selects and concatenation") {
    const auto p = parse_expr("{a[7:3], b[2], ~c}");
    const auto* cat = p->as<Concat>();
    REQUIRE(cat);
    REQUIRE(cat->parts.size() == 3);
    CHECK(cat->parts[0]->as<PartSelect>()->msb == 7);
    CHECK(cat->parts[0]->as<PartSelect>()->lsb == 3);
    CHECK(cat->parts[1]->is<BitSelect>());
    CHECK(cat->parts[2]->as<Unary>()->op == UnaryOp::BitNot);
}

TEST_CASE("expression printing round-trips") {
    for (const char* text : {"a | b & c", "(a | b) & c", "c ? a : (c ? b : 0)", "{a[7:3], b[2], ~c}",
                             "!(a == b) || c", "a ~^ b", "a >> 2", "8'hff ^ a", "(a + b) - 1"}) {
        CAPTURE(text);
        const auto e = parse_expr(text);
        CHECK(equal(e, parse_expr(to_source(*e))));
    }
}

TEST_CASE("fixture module") {
    const SourceModule m = parse_source(fx::read("reglk_wrapper.sv"), "reglk_wrapper");
    CHECK(m.name == "reglk_wrapper");
    CHECK(m.ports.size() == 12);
    const PortDecl* clk = m.find_port("clk_i");
    REQUIRE(clk);
    CHECK(clk->is_clock);
    CHECK_FALSE(m.find_port("rst_ni")->is_clock);
    CHECK(m.find_port("address")->width == 64);
    CHECK(m.find_port("reglk_ctrl_o")->width == 112);
    const NetDecl* mem = m.find_net("reglk_mem");
    REQUIRE(mem);
    CHECK(mem->array);
    CHECK(mem->array_length == 6);
    CHECK(mem->width == 32);
    CHECK(m.find_net("j")->kind == NetKind::Integer);
    CHECK(m.items.size() == 5);
}

TEST_CASE("module printing round-trips") {
    const SourceModule m = parse_source(fx::read("reglk_wrapper.sv"), "reglk_wrapper");
    const std::string printed = to_source(m);
    const SourceModule back = parse_module(tokenize(printed));
    CHECK(equal(m, back));
    CHECK(to_source(back) == printed);
}

TEST_CASE("module selection") {
    const std::string two = "module a(input logic x, output logic y); assign y = x; endmodule\n"
                            "module b(input logic x, output logic y); assign y = ~x; endmodule\n";
    CHECK(parse_design(tokenize(two)).size() == 2);
    CHECK(parse_source(two, "b").name == "b");
    CHECK_THROWS_AS(parse_source(two), ParseError);
    CHECK_THROWS_AS(parse_source(two, "c"), ParseError);
}

TEST_CASE("statements") {
    const SourceModule m = parse_source(R"(
module s(input logic clk, input logic [1:0] sel, input logic d, output logic q, output logic r);
  always_ff @(posedge clk) begin
    if (d) q <= 1'b1;
    else if (sel == 2'd1) q <= 1'b0;
    else q <= d;
  end
  always_comb begin
    r = 0;
    case (sel)
      0, 1: r = d;
      default: r = ~d;
    endcase
  end
endmodule
)");
    REQUIRE(m.items.size() == 2);
    const auto& ff = std::get<AlwaysBlock>(m.items[0].node);
    CHECK(ff.kind == BlockKind::Sequential);
    CHECK(ff.clock == "clk");
    const auto* chain = ff.body.at(0).as<IfChain>();
    REQUIRE(chain);
    CHECK(chain->arms.size() == 2);
    CHECK(chain->else_body.has_value());
    const auto& comb = std::get<AlwaysBlock>(m.items[1].node);
    CHECK(comb.kind == BlockKind::Combinational);
    const auto* cs = comb.body.at(1).as<CaseStmt>();
    REQUIRE(cs);
    CHECK(cs->items.size() == 2);
    CHECK(cs->items[0].labels.size() == 2);
    CHECK(cs->items[1].is_default);
}

TEST_CASE("parse errors carry positions") {
    CHECK(error_pos<ParseError>("module m(input logic a, output logic b);\n  assign b = a +;\nendmodule\n") ==
          SourcePos{2, 17});
    CHECK(error_pos<ParseError>("module m(input logic a output logic b);\nendmodule\n").line == 1);
    CHECK_THROWS_AS(parse_source("module m(input logic a); assign"), ParseError);
    CHECK_THROWS_AS(parse_source(""), ParseError);
    CHECK_THROWS_AS(parse_source("module m(); endmodule junk"), ParseError);
    CHECK_THROWS_AS(parse_source("module m(input logic a, input logic a); endmodule"), ParseError);
}

TEST_CASE("unsupported constructs") {
    const char* cases[] = {
        "module m #(parameter W = 1)(input logic a); endmodule",
        "module m(inout logic a); endmodule",
        "module m(input logic a, output logic b); sub u(.x(a)); endmodule",
        "module m(input logic a, output logic b); assign b = &a; endmodule",
        "module m(input logic a, output logic b); assign b = {2{a}}; endmodule",
        "module m(input logic a, output logic b); assign b = a === 1; endmodule",
        "module m(input logic a, output logic b); assign b = a >>> 1; endmodule",
        "module m(input logic [3:0] a, output logic [3:0] b); assign b[0] = a[0]; endmodule",
        "module m(input logic a, output logic b); always @(*) while (a) b = a; endmodule",
        "module m(input logic a, output logic b); assign b = f(a); endmodule",
        "module m(input logic signed a, output logic b); assign b = a; endmodule",
        "module m(input logic a, output logic b); always @(posedge a or b) b <= a; endmodule",
    };
    for (const char* src : cases) {
        CAPTURE(src);
        CHECK_THROWS_AS(parse_source(src), UnsupportedConstruct);
    }
}
