#pragma once

#include "patchq/ast.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace patchq {

/// Splits RTL source into tokens. Comments are dropped; based literals such
/// as 'h0, 64'b0 and 5'd3 come out as single BasedLiteral tokens. The last
/// token is always an End token positioned after the input.
/// Throws LexError, or UnsupportedConstruct for preprocessor directives and
/// escaped identifiers.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

/// Value of an IntegerLiteral or BasedLiteral token.
Const decode_literal(const Token& tok);

/// Parses exactly one module declaration.
SourceModule parse_module(const std::vector<Token>& tokens);

/// Parses every module in a token stream.
std::vector<SourceModule> parse_design(const std::vector<Token>& tokens);

/// tokenize + parse_design, then picks `top` (or the only module when `top`
/// is empty). Throws ParseError when the module cannot be found.
SourceModule parse_source(std::string_view source, std::string_view top = {});

/// Renders an expression in the subset syntax, parenthesizing every
/// compound operand so that re-parsing yields the same tree.
std::string to_source(const Expr& e);

/// Renders a module so that parse_module(tokenize(to_source(m))) is
/// structurally equal to m.
std::string to_source(const SourceModule& m);

} // namespace patchq
